#include "smalltri/reduction.hpp"

namespace smalltri {

namespace {

struct Sweep {
    const LogicalPolytope& lp;
    std::vector<bool> open;
    Triangulation T;

    int c(int j) const { return lp.spine[j]; }

    void tet(int a, int b, int d, int e) { T.tets.push_back(make_tetra(a, b, d, e)); }

    // Interface triangles towards the spine: one per covered clause, two per open one.
    std::vector<std::pair<int, int>> pieces() const {
        std::vector<std::pair<int, int>> out;
        for (size_t l = 1; l < open.size(); ++l) {
            int j = 2 * static_cast<int>(l);
            if (open[l]) {
                out.push_back({c(j - 2), c(j - 1)});
                out.push_back({c(j - 1), c(j)});
            } else {
                out.push_back({c(j - 2), c(j)});
            }
        }
        return out;
    }

    // p takes over the interface seen from w; back is the far corner on the back face.
    void advance(int p, int w, int back) {
        for (auto [a, b] : pieces()) tet(p, w, a, b);
        tet(p, w, c(2 * (static_cast<int>(open.size()) - 1)), back);
    }

    void cover(int p, int l) {
        if (!open[l]) return;
        auto tc = triangulate_cupola(lp.polytope, lp.clause_cupolas[l - 1], p);
        T.tets.insert(T.tets.end(), tc.begin(), tc.end());
        open[l] = false;
    }

    void append(const std::vector<Tetra>& ts) { T.tets.insert(T.tets.end(), ts.begin(), ts.end()); }
};

}  // namespace

Triangulation sweep_triangulate(const LogicalPolytope& lp, const Assignment& a) {
    if (!satisfies(lp.formula, a)) throw Error("UnsatisfiedAssignment");
    const int C = static_cast<int>(lp.formula.clauses.size());
    Sweep s{lp, std::vector<bool>(C + 1, true), {}};
    s.open[0] = false;
    const int c0 = lp.spine[0], cend = lp.spine[2 * C];
    for (int i = 0; i < lp.formula.V; ++i) {
        const Roof& z = lp.roofs[i];
        const LiteralRoles& x = lp.literals[i];
        const Polytope3& P = lp.polytope;
        if (a[i]) {
            s.append(triangulate_cupola(P, lp.var_cupolas[i], z.zT));
            for (auto [p, q, r] : {std::tuple{z.zL, x.x3, z.zB}, {x.x3, z.zB, z.zA}, {z.zB, z.zA, x.x2},
                                   {z.zB, x.x2, z.zR}, {z.zA, x.x1, x.x2}, {x.x1, z.zA, z.zF}})
                s.tet(z.zT, p, q, r);
            s.advance(x.x1, z.zF, z.zR);
            s.tet(x.x1, z.zT, c0, z.zF);
            s.cover(x.x1, x.l1);
            s.advance(x.x2, x.x1, z.zR);
            s.cover(x.x2, x.l2);
            s.advance(z.zT, x.x2, z.zR);
            s.tet(z.zT, x.x2, x.x1, c0);
            s.tet(z.zT, cend, z.zL, z.zR);
        } else {
            s.append(triangulate_cupola(P, lp.var_cupolas[i], z.zF));
            for (auto [p, q, r] : {std::tuple{z.zT, x.x3, z.zA}, {x.x3, z.zA, z.zB}, {x.x3, z.zL, z.zB},
                                   {z.zB, z.zA, x.x2}, {z.zB, x.x2, z.zR}, {z.zA, x.x2, x.x1}, {x.x2, x.x1, z.zR}})
                s.tet(z.zF, p, q, r);
            s.tet(z.zF, z.zL, z.zR, cend);
            s.advance(x.x3, z.zF, z.zL);
            s.cover(x.x3, x.l3);
            s.advance(z.zT, x.x3, z.zL);
            s.tet(z.zT, x.x3, z.zF, c0);
        }
    }
    for (int l = 1; l <= C; ++l)
        if (s.open[l]) throw Error("OpenClauseAtEnd", "clause " + std::to_string(l));
    return std::move(s.T);
}

}  // namespace smalltri
