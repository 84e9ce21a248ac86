#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "smalltri/reduction.hpp"

namespace smalltri {

namespace {

Rational u_of(int j, int C) { return j == 2 * C ? Rational(1) : Rational(j) / (4 * C); }

Rational roof_height(const Rational& x) { return x * (1 - x) + 1; }

enum class Stage { Roofs, Literals, Even, Final };

// Everything the condition checks need, for the frame and for the finished polytope alike.
struct Roles {
    int C = 0, V = 0;
    std::vector<int> spine;
    std::vector<Roof> roofs;
    std::vector<LiteralRoles> lits;
};

std::vector<Face> stage_facets(const Roles& r, Stage st) {
    const auto& c = r.spine;
    const auto& R = r.roofs;
    int C = r.C, V = r.V;
    const Roof &first = R[0], &last = R[V - 1];
    std::vector<Face> F;
    Face front{c[0], first.zF}, back{c[2 * C], first.zR};
    for (const auto& z : R) {
        front.push_back(z.zT);
        back.push_back(z.zL);
    }
    F.push_back(front);
    F.push_back(back);
    if (st == Stage::Roofs || st == Stage::Literals) {
        F.push_back({c[0], c[2 * C], last.zL, last.zT});
        F.push_back({c[0], c[2 * C], first.zR, first.zF});
    } else {
        F.push_back({c[2 * C], last.zL, last.zT});
        F.push_back({c[2 * C], first.zR, first.zF});
        for (int l = 1; l <= C; ++l) {
            F.push_back({c[2 * l - 2], c[2 * l], last.zT});
            if (st == Stage::Even) {
                F.push_back({c[2 * l - 2], c[2 * l], first.zF});
            } else {
                F.push_back({c[2 * l - 2], c[2 * l - 1], first.zF});
                F.push_back({c[2 * l - 1], c[2 * l], first.zF});
                F.push_back({c[2 * l - 2], c[2 * l - 1], c[2 * l]});
            }
        }
    }
    for (int i = 0; i < V; ++i) {
        const Roof& z = R[i];
        const LiteralRoles& x = r.lits[i];
        F.push_back({z.zT, z.zF, z.zA});
        F.push_back({z.zL, z.zR, z.zB});
        if (st == Stage::Roofs) {
            F.push_back({z.zF, z.zR, z.zB, z.zA});
            F.push_back({z.zT, z.zL, z.zB, z.zA});
            continue;
        }
        F.push_back({z.zF, z.zR, x.x1});
        F.push_back({z.zR, x.x1, x.x2});
        F.push_back({z.zR, z.zB, x.x2});
        F.push_back({z.zB, z.zA, x.x2});
        F.push_back({z.zA, x.x1, x.x2});
        F.push_back({z.zA, z.zF, x.x1});
        F.push_back({z.zT, z.zL, x.x3});
        F.push_back({z.zL, z.zB, x.x3});
        F.push_back({z.zB, z.zA, x.x3});
        F.push_back({z.zA, z.zT, x.x3});
    }
    return F;
}

// Point of F = (c_2l-2, c_2l-1, c_2l) in the plane y = u(2l-1) halfway across the chord.
struct ClauseSite {
    Point3 apex, cross, mid;  // chord from c_2l-1 to the opposite edge, and its midpoint
};

ClauseSite clause_site(const std::vector<Point3>& p, const Roles& r, int l) {
    const Point3 &a = p[r.spine[2 * l - 2]], &b = p[r.spine[2 * l]], &o = p[r.spine[2 * l - 1]];
    Rational y = u_of(2 * l - 1, r.C);
    Point3 e = lerp(a, b, (y - a.y) / (b.y - a.y));
    return {o, e, midpoint(o, e)};
}

Plane gable_plane(const std::vector<Point3>& p, const Roof& z) {
    return plane_through(p[z.zT], p[z.zF], midpoint(p[z.zL], p[z.zB]));
}

int literal_vertex(const LiteralRoles& x, int j) { return j == 0 ? x.x1 : (j == 1 ? x.x2 : x.x3); }
int literal_clause(const LiteralRoles& x, int j) { return j == 0 ? x.l1 : (j == 1 ? x.l2 : x.l3); }
int literal_anchor(const Roof& z, int j) { return j < 2 ? z.zF : z.zT; }

struct Guide {
    Line3 d, g;
    Point3 meet, pierce;  // d ∩ H and g ∩ plane(zL, zR, zB)
};

Guide guide(const std::vector<Point3>& p, const Roles& r, int i, int j) {
    const Roof& z = r.roofs[i];
    const LiteralRoles& x = r.lits[i];
    Point3 b = clause_site(p, r, literal_clause(x, j)).mid;
    Guide G;
    G.d = line_through(p[literal_vertex(x, j)], b);
    G.meet = line_plane_point(G.d, gable_plane(p, z));
    G.g = line_through(p[literal_anchor(z, j)], G.meet);
    G.pierce = line_plane_point(G.g, plane_through(p[z.zL], p[z.zR], p[z.zB]));
    return G;
}

bool strictly_between(const Point3& a, const Point3& b, const Point3& x) {
    Vec3 ab = b - a;
    Rational s = dot(x - a, ab) / dot(ab, ab);
    return sgn(s) > 0 && s < 1;
}

bool in_open_triangle(const Point3& x, const Point3& a, const Point3& b, const Point3& c) {
    Vec3 n = cross(b - a, c - a);
    return sgn(dot(cross(b - a, x - a), n)) > 0 && sgn(dot(cross(c - b, x - b), n)) > 0 &&
           sgn(dot(cross(a - c, x - c), n)) > 0;
}

// d_j meets H^i between the literal vertex and the clause point, and g_j runs on
// through the relative interior of the back gable.
void guide_notes(const std::vector<Point3>& p, const Roles& r, std::vector<std::string>& out) {
    for (int i = 0; i < r.V; ++i)
        for (int j = 0; j < 3; ++j) {
            const Roof& z = r.roofs[i];
            std::string tag = "variable " + std::to_string(i + 1) + " literal " + std::to_string(j + 1);
            Guide G;
            try {
                G = guide(p, r, i, j);
            } catch (const Error&) {
                out.push_back(tag + ": guide lines are parallel to their planes");
                continue;
            }
            Point3 b = clause_site(p, r, literal_clause(r.lits[i], j)).mid;
            if (!strictly_between(p[literal_vertex(r.lits[i], j)], b, G.meet))
                out.push_back(tag + ": d does not cross H inside the polytope");
            const Point3& a = p[literal_anchor(z, j)];
            if (!strictly_between(a, G.pierce, G.meet)) out.push_back(tag + ": g meets d outside the gable side");
            if (!in_open_triangle(G.pierce, p[z.zL], p[z.zR], p[z.zB]))
                out.push_back(tag + ": g misses the back gable");
        }
}

// The only frame vertices on H^i are z_T^i and z_F^i.
void gable_plane_notes(const std::vector<Point3>& p, const std::vector<int>& verts, const Roles& r,
                       std::vector<std::string>& out) {
    for (int i = 0; i < r.V; ++i) {
        Plane H = gable_plane(p, r.roofs[i]);
        for (int v : verts)
            if (v != r.roofs[i].zT && v != r.roofs[i].zF && side(H, p[v]) == 0)
                out.push_back("vertex " + std::to_string(v) + " lies on H of variable " + std::to_string(i + 1));
    }
}

// The plane y = u(2l-1) holds c_2l-1 and the literal vertices of clause l only.
void clause_plane_notes(const std::vector<Point3>& p, const std::vector<int>& verts, const Roles& r,
                        std::vector<std::string>& out) {
    for (int l = 1; l <= r.C; ++l) {
        std::set<int> want{r.spine[2 * l - 1]};
        for (int i = 0; i < r.V; ++i)
            for (int j = 0; j < 3; ++j)
                if (literal_clause(r.lits[i], j) == l) want.insert(literal_vertex(r.lits[i], j));
        Rational y = u_of(2 * l - 1, r.C);
        for (int v : verts)
            if ((p[v].y == y) != (want.count(v) > 0))
                out.push_back("vertex " + std::to_string(v) + " breaks the plane of clause " + std::to_string(l));
    }
}

// Each apex of the sweep lies on the negative-x side of the planes through the previous
// apex and consecutive spine vertices.
void sweeping_notes(const std::vector<Point3>& p, const Roles& r, std::vector<std::string>& out) {
    for (int i = 0; i < r.V; ++i) {
        const Roof& z = r.roofs[i];
        const LiteralRoles& x = r.lits[i];
        std::vector<std::pair<int, int>> steps{{z.zF, x.x1}, {x.x1, x.x2}, {z.zF, x.x3}, {x.x2, z.zT}, {x.x3, z.zT}};
        for (auto [w, q] : steps)
            for (int k = 0; k < r.C; ++k)
                for (auto [a, b] : {std::pair{2 * k, 2 * k + 1}, {2 * k + 1, 2 * k + 2}, {2 * k, 2 * k + 2}}) {
                    Plane h = plane_through(p[w], p[r.spine[a]], p[r.spine[b]]);
                    int sx = sgn(h.a.x);
                    if (sx == 0 || side(h, p[q]) != -sx)
                        out.push_back("variable " + std::to_string(i + 1) + ": vertex " + std::to_string(q) +
                                      " is not left of (" + std::to_string(w) + ", c" + std::to_string(a) + ", c" +
                                      std::to_string(b) + ")");
                }
    }
}

std::vector<Point3> pick(const std::vector<Point3>& p, std::initializer_list<int> ids) {
    std::vector<Point3> out;
    for (int v : ids) out.push_back(p[v]);
    return out;
}

void nonblocking_notes(const std::vector<Point3>& p, const Roles& r, std::vector<std::string>& out) {
    for (int i = 0; i < r.V; ++i) {
        const Roof& z = r.roofs[i];
        for (int j = 0; j < 3; ++j) {
            int l = literal_clause(r.lits[i], j);
            int apex = j < 2 ? z.zT : z.zF;
            auto A = pick(p, {apex, z.zL, z.zR, z.zB});
            auto B = pick(p, {literal_vertex(r.lits[i], j), r.spine[2 * l - 2], r.spine[2 * l - 1], r.spine[2 * l]});
            if (!hulls_strictly_separated(A, B))
                out.push_back("variable " + std::to_string(i + 1) + " literal " + std::to_string(j + 1) +
                              " meets the roof tetrahedron");
        }
    }
}

std::string lattice_diff(const std::vector<Point3>& p, const std::vector<int>& verts, const std::vector<Face>& want) {
    std::vector<Point3> q;
    for (int v : verts) q.push_back(p[v]);
    auto h = hull3_indexed(q);
    if (h.poly.size() != static_cast<int>(verts.size())) return "a frame point is not extreme";
    std::set<Face> got, exp;
    for (const auto& f : h.poly.facets) {
        Face g;
        for (int x : f) g.push_back(verts[h.source[x]]);
        got.insert(make_face(g));
    }
    for (const auto& f : want) exp.insert(make_face(f));
    return got == exp ? "" : "frame facets differ from the expected pattern";
}

struct StageSpec {
    std::function<std::vector<Point3>(const Rational&)> at;  // coordinates linear in t
    std::vector<int> verts;
    std::vector<Face> facets;
    std::function<std::vector<std::string>(const std::vector<Point3>&)> extra;
};

// Strict facet inequalities as polynomials in t, then exact confirmation.
Rational solve_stage(const std::string& name, const StageSpec& s) {
    const int deg = 6;
    std::vector<std::vector<Point3>> nodes;
    for (int k = 0; k <= deg; ++k) nodes.push_back(s.at(Rational(k)));
    const Point3 ref(Rational(1, 4), Rational(1, 2), Rational(1, 2));
    std::vector<UniPoly> conds;
    for (const auto& f : s.facets) {
        std::set<int> on(f.begin(), f.end());
        auto o = [&](int k, const Point3& x) -> Rational {
            const auto& p = nodes[k];
            return det3(p[f[1]] - p[f[0]], p[f[2]] - p[f[0]], x - p[f[0]]);
        };
        for (int v : s.verts) {
            if (on.count(v)) continue;
            conds.push_back(interpolate(
                [&](const Rational& t) -> Rational {
                    int k = static_cast<int>(t.get_num().get_si());
                    return o(k, nodes[k][v]) * o(k, ref);
                },
                deg));
        }
    }
    Rational t;
    try {
        t = round_down_pow2(eps_threshold_leading_all(conds));
    } catch (const Error& e) {
        throw Error("InternalFault", name + ": " + e.what());
    }
    std::string why;
    for (int tries = 0; tries < 64; ++tries, t /= 2) {
        auto p = s.at(t);
        why = lattice_diff(p, s.verts, s.facets);
        if (why.empty()) {
            auto notes = s.extra(p);
            if (notes.empty()) return t;
            why = notes.front();
        }
    }
    throw Error("InternalFault", name + ": " + why);
}

void remap(CupolaRecord& rec, const std::vector<int>& m) {
    for (int i = 0; i < 3; ++i) {
        rec.A[i] = m[rec.A[i]];
        rec.B[i] = m[rec.B[i]];
        for (int& v : rec.chains[i]) v = m[v];
    }
    for (int& v : rec.skylight) v = m[v];
    for (int& v : rec.bottom) v = m[v];
    for (int& v : rec.host) v = m[v];
    rec.skylight = make_face(rec.skylight);
    rec.bottom = make_face(rec.bottom);
}

void remap(Roles& r, const std::vector<int>& m) {
    for (int& v : r.spine) v = m[v];
    for (auto& z : r.roofs)
        for (int* v : {&z.zT, &z.zF, &z.zL, &z.zR, &z.zA, &z.zB}) *v = m[*v];
    for (auto& x : r.lits)
        for (int* v : {&x.x1, &x.x2, &x.x3}) *v = m[*v];
}

Roles roles_of(const LogicalPolytope& lp) {
    Roles r;
    r.C = static_cast<int>(lp.formula.clauses.size());
    r.V = lp.formula.V;
    r.spine = lp.spine;
    r.roofs = lp.roofs;
    r.lits = lp.literals;
    return r;
}

std::vector<int> frame_vertices(const Roles& r) {
    std::vector<int> v(r.spine.begin(), r.spine.end());
    for (const auto& z : r.roofs) v.insert(v.end(), {z.zT, z.zF, z.zL, z.zR, z.zA, z.zB});
    for (const auto& x : r.lits) v.insert(v.end(), {x.x1, x.x2, x.x3});
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<Face> frame_facets(const LogicalPolytope& lp) { return stage_facets(roles_of(lp), Stage::Final); }

LogicalPolytope build_logical_polytope(const RestrictedFormula& f, const BuildOptions& opt) {
    if (!is_restricted(f)) throw Error("Unsupported", "formula is not in the restricted form");
    const int C = static_cast<int>(f.clauses.size()), V = f.V;
    LogicalPolytope lp;
    lp.formula = f;
    lp.params = params(C, V);
    lp.m = opt.m >= 0 ? opt.m : static_cast<int>(lp.params.m);

    // frame numbering: spine, front boundary P_0..P_V, back boundary Q_0..Q_V, then
    // z_A, z_B, x1, x2, x3 per roof; roof i spans x in [(V-i)/V, (V-i+1)/V]
    Roles r;
    r.C = C;
    r.V = V;
    auto P = [&](int k) { return 2 * C + 1 + k; };
    auto Q = [&](int k) { return 2 * C + 2 + V + k; };
    const int nf = 2 * C + 3 + 7 * V;
    for (int j = 0; j <= 2 * C; ++j) r.spine.push_back(j);
    for (int i = 1; i <= V; ++i) {
        int b = 2 * C + 3 + 2 * V + 5 * (i - 1);
        r.roofs.push_back({P(V - i), P(V - i + 1), Q(V - i), Q(V - i + 1), b, b + 1});
        LiteralRoles x{b + 2, b + 3, b + 4, 0, 0, 0};
        std::vector<int> pos;
        for (int l = 1; l <= C; ++l)
            for (int lit : f.clauses[l - 1]) {
                if (lit == i) pos.push_back(l);
                if (lit == -i) x.l3 = l;
            }
        x.l1 = pos[0];
        x.l2 = pos[1];
        r.lits.push_back(x);
    }

    // Stage 1: the wedge
    std::vector<Point3> base(nf);
    for (int j = 0; j <= 2 * C; ++j) base[j] = Point3(0, u_of(j, C), 0);
    for (int k = 0; k <= V; ++k) {
        Rational x = Rational(k) / V;
        base[P(k)] = Point3(x, 0, roof_height(x));
        base[Q(k)] = Point3(x, 1, roof_height(x));
    }
    std::vector<int> wedge{0, 2 * C};
    for (int k = 0; k <= V; ++k) wedge.insert(wedge.end(), {P(k), Q(k)});

    // Stage 2: roof ridges, preliminary literal vertices on the roof diagonals
    auto roofs_at = [&](const Rational& t) {
        auto p = base;
        for (int i = 0; i < V; ++i) {
            const Roof& z = r.roofs[i];
            const LiteralRoles& x = r.lits[i];
            Point3 mid = midpoint(p[z.zT], p[z.zF]);
            p[z.zA] = mid + Point3(Rational(0), Rational(1, 3), t);
            p[z.zB] = mid + Point3(Rational(0), Rational(2, 3), t);
            for (int j = 0; j < 3; ++j) {
                const Point3& from = p[j < 2 ? z.zF : z.zT];
                Rational y = u_of(2 * literal_clause(x, j) - 1, C);
                p[literal_vertex(x, j)] = lerp(from, p[z.zB], y / p[z.zB].y);
            }
        }
        return p;
    };
    StageSpec s2;
    s2.at = roofs_at;
    s2.verts = wedge;
    for (const auto& z : r.roofs) s2.verts.insert(s2.verts.end(), {z.zA, z.zB});
    s2.facets = stage_facets(r, Stage::Roofs);
    std::vector<int> all_frame(nf);
    for (int v = 0; v < nf; ++v) all_frame[v] = v;
    std::vector<int> early_verts = s2.verts;
    for (const auto& x : r.lits) early_verts.insert(early_verts.end(), {x.x1, x.x2, x.x3});
    auto early_notes = [&](const std::vector<Point3>& p) {
        std::vector<std::string> out;
        guide_notes(p, r, out);
        gable_plane_notes(p, early_verts, r, out);
        return out;
    };
    s2.extra = early_notes;
    lp.t_roof = solve_stage("roof height", s2);
    const auto p2 = roofs_at(lp.t_roof);

    // Stage 3: literal vertices pushed out along d into planes parallel to their roof faces
    auto literals_at = [&](const Rational& t) {
        auto p = p2;
        for (int i = 0; i < V; ++i) {
            const Roof& z = r.roofs[i];
            const LiteralRoles& x = r.lits[i];
            Point3 inner(Rational(1, 4), Rational(1, 2), Rational(1, 2));
            for (int j = 0; j < 3; ++j) {
                const Point3& from = p2[j < 2 ? z.zF : z.zT];
                const Point3& to = p2[j < 2 ? z.zR : z.zL];
                Plane face = plane_through(from, to, p2[z.zB]);
                if (side(face, inner) > 0) face = flipped(face);
                Line3 d = line_through(p2[literal_vertex(x, j)], clause_site(p2, r, literal_clause(x, j)).mid);
                Plane shifted{face.a, face.b + t};
                p[literal_vertex(x, j)] = line_plane_point(d, shifted);
            }
        }
        return p;
    };
    StageSpec s3;
    s3.at = literals_at;
    s3.verts = early_verts;
    s3.facets = stage_facets(r, Stage::Literals);
    s3.extra = early_notes;
    lp.t_literal = solve_stage("literal push", s3);
    const auto p3 = literals_at(lp.t_literal);

    // Stage 4: even spine vertices on a parabola, odd ones on the segments between them
    auto even_at = [&](const Rational& t) {
        auto p = p3;
        for (int j = 0; j <= 2 * C; j += 2) {
            Rational y = u_of(j, C), a = (y - 1) * (y - 1) * t;
            p[j] = Point3(a / 2, y, a);
        }
        for (int l = 1; l <= C; ++l) p[2 * l - 1] = clause_site(p, r, l).cross;
        return p;
    };
    std::vector<int> late_verts;
    for (int v = 0; v < nf; ++v)
        if (v > 2 * C || v % 2 == 0) late_verts.push_back(v);
    auto late_notes = [&](const std::vector<Point3>& p) {
        std::vector<std::string> out;
        guide_notes(p, r, out);
        gable_plane_notes(p, all_frame, r, out);
        sweeping_notes(p, r, out);
        nonblocking_notes(p, r, out);
        return out;
    };
    StageSpec s4;
    s4.at = even_at;
    s4.verts = late_verts;
    s4.facets = stage_facets(r, Stage::Even);
    s4.extra = late_notes;
    lp.t_even = solve_stage("even spine", s4);
    const auto p4 = even_at(lp.t_even);

    // odd spine vertices move beyond G_l = (c_2l-2, c_2l, z_F^1) keeping their y
    std::vector<Vec3> push(C + 1);
    {
        const Point3 inner(Rational(1, 4), Rational(1, 2), Rational(1, 2));
        const Point3& zf = p4[r.roofs[0].zF];
        const Point3& zt = p4[r.roofs[V - 1].zT];
        for (int l = 1; l <= C; ++l) {
            Plane G = plane_through(p4[2 * l - 2], p4[2 * l], zf);
            Plane L = plane_through(p4[2 * l - 2], p4[2 * l], zt);
            if (side(G, inner) > 0) G = flipped(G);
            if (side(L, inner) > 0) L = flipped(L);
            Vec3 n(G.a.x, Rational(0), G.a.z);
            if (sgn(dot(n, G.a)) <= 0 || sgn(dot(n, L.a)) >= 0)
                throw Error("InternalFault", "no y-preserving push beyond G_" + std::to_string(l));
            push[l] = n;
        }
    }
    auto odd_at = [&](const Rational& t) {
        auto p = p4;
        for (int l = 1; l <= C; ++l) p[2 * l - 1] = p4[2 * l - 1] + t * push[l];
        return p;
    };
    StageSpec s5;
    s5.at = odd_at;
    s5.verts = all_frame;
    s5.facets = stage_facets(r, Stage::Final);
    s5.extra = [&](const std::vector<Point3>& p) {
        auto out = late_notes(p);
        clause_plane_notes(p, all_frame, r, out);
        return out;
    };
    lp.t_odd = solve_stage("odd spine", s5);
    const auto p5 = odd_at(lp.t_odd);

    // Stage 5: cupolas over the back gables, then over the clause triangles
    auto hull = hull3_indexed(p5);
    std::vector<int> idx(nf, -1);
    for (int v = 0; v < hull.poly.size(); ++v) idx[hull.source[v]] = v;
    remap(r, idx);
    Polytope3 cur = std::move(hull.poly);
    auto apply = [&](const std::vector<int>& o2n) {
        remap(r, o2n);
        for (auto& c : lp.var_cupolas) remap(c, o2n);
        for (auto& c : lp.clause_cupolas) remap(c, o2n);
    };
    for (int i = 0; i < V; ++i) {
        const auto& p = cur.vertices;
        const Roof& z = r.roofs[i];
        Plane H = gable_plane(p, z);
        std::vector<Line3> lines;
        std::vector<Point3> marks;
        for (int j = 0; j < 3; ++j) {
            Guide G = guide(p, r, i, j);
            lines.push_back(G.g);
            marks.push_back(G.pierce);
        }
        Face F = make_face({z.zL, z.zR, z.zB});
        Cone3 cone = make_visibility_cone(cur, F, H, marks);
        auto b = build_cupola(cur, F, cone, lp.m, lines);
        apply(b.old_to_new);
        lp.var_cupolas.push_back(b.rec);
        lp.var_eps.push_back(b.eps);
        cur = std::move(b.poly);
    }
    for (int l = 1; l <= C; ++l) {
        const auto& p = cur.vertices;
        ClauseSite cs = clause_site(p, r, l);
        Plane H{Vec3(0, 1, 0), u_of(2 * l - 1, C)};
        std::vector<Line3> lines;
        for (int i = 0; i < V; ++i)
            for (int j = 0; j < 3; ++j)
                if (literal_clause(r.lits[i], j) == l) lines.push_back(line_through(p[literal_vertex(r.lits[i], j)], cs.mid));
        std::vector<Point3> marks{midpoint(cs.apex, cs.mid), cs.mid, midpoint(cs.mid, cs.cross)};
        Face F = make_face({r.spine[2 * l - 2], r.spine[2 * l - 1], r.spine[2 * l]});
        Cone3 cone = make_visibility_cone(cur, F, H, marks);
        auto b = build_cupola(cur, F, cone, lp.m, lines);
        apply(b.old_to_new);
        lp.clause_cupolas.push_back(b.rec);
        lp.clause_eps.push_back(b.eps);
        cur = std::move(b.poly);
    }
    lp.polytope = std::move(cur);
    lp.spine = r.spine;
    lp.roofs = r.roofs;
    lp.literals = r.lits;
    return lp;
}

ConditionReport check_logical_conditions(const LogicalPolytope& lp) {
    ConditionReport rep;
    const Polytope3& P = lp.polytope;
    const auto& p = P.vertices;
    Roles r = roles_of(lp);
    int n = P.size();
    auto in_range = [&](int v) { return v >= 0 && v < n; };
    std::vector<int> fv = frame_vertices(r);
    bool roles_ok = static_cast<int>(fv.size()) == 2 * r.C + 3 + 7 * r.V &&
                    static_cast<int>(lp.var_cupolas.size()) == r.V && static_cast<int>(lp.clause_cupolas.size()) == r.C;
    for (int v : fv) roles_ok &= in_range(v);
    if (!roles_ok) {
        rep.notes.push_back("convexity: role map is incomplete");
        return rep;
    }
    std::vector<const CupolaRecord*> cups;
    for (const auto& c : lp.var_cupolas) cups.push_back(&c);
    for (const auto& c : lp.clause_cupolas) cups.push_back(&c);

    // Convexity
    std::vector<int> owner(n, -1);
    for (int v : fv) owner[v] = -2;
    bool partition = true;
    for (size_t k = 0; k < cups.size(); ++k) {
        const auto& c = *cups[k];
        std::vector<int> vs(c.A.begin(), c.A.end());
        vs.insert(vs.end(), c.B.begin(), c.B.end());
        for (const auto& ch : c.chains)
            if (ch.size() >= 2) vs.insert(vs.end(), ch.begin() + 1, ch.end() - 1);
        for (int v : vs) {
            if (!in_range(v) || owner[v] != -1) {
                partition = false;
                continue;
            }
            owner[v] = static_cast<int>(k);
        }
    }
    for (int v = 0; v < n; ++v) partition &= owner[v] != -1;
    rep.convexity = partition;
    if (!partition) rep.notes.push_back("convexity: roles do not partition the vertices");
    if (partition) {
        std::string a = audit_polytope(P);
        if (!a.empty()) {
            rep.convexity = false;
            rep.notes.push_back("convexity: " + a);
        }
        std::set<Face> frame;
        std::set<Face> hosts;
        for (const auto* c : cups) hosts.insert(make_face(c->host));
        for (const auto& f : stage_facets(r, Stage::Final)) {
            Face g = make_face(f);
            if (hosts.count(g)) continue;
            frame.insert(g);
            if (!P.has_facet(g)) {
                rep.convexity = false;
                rep.notes.push_back("convexity: frame facet missing");
            }
        }
        for (size_t k = 0; k < cups.size(); ++k) {
            std::string why = cupola_audit(P, *cups[k]);
            if (!why.empty()) {
                rep.convexity = false;
                rep.notes.push_back("convexity: cupola " + std::to_string(k) + ": " + why);
            }
        }
        for (const auto& f : P.facets) {
            Face g = make_face(f);
            if (frame.count(g)) continue;
            int k = -1;
            for (int v : g)
                if (owner[v] >= 0) k = owner[v];
            bool ok = k >= 0;
            for (int v : g)
                ok = ok && (owner[v] == k || std::count(cups[k]->host.begin(), cups[k]->host.end(), v) > 0);
            if (!ok) {
                rep.convexity = false;
                rep.notes.push_back("convexity: unexpected facet");
                break;
            }
        }
    }

    // Visibility
    rep.visibility = true;
    for (size_t k = 0; k < cups.size(); ++k) {
        std::set<int> want;
        if (k < lp.var_cupolas.size()) {
            want = {r.roofs[k].zT, r.roofs[k].zF};
        } else {
            int l = static_cast<int>(k - lp.var_cupolas.size()) + 1;
            for (int i = 0; i < r.V; ++i)
                for (int j = 0; j < 3; ++j)
                    if (literal_clause(r.lits[i], j) == l) want.insert(literal_vertex(r.lits[i], j));
        }
        for (int v = 0; v < n; ++v)
            if (cups[k]->cone.contains(p[v]) != (want.count(v) > 0)) {
                rep.visibility = false;
                rep.notes.push_back("visibility: cupola " + std::to_string(k) + " and vertex " + std::to_string(v));
            }
    }

    // Blocking
    rep.blocking = true;
    auto sky = [&](const CupolaRecord& c, int apex) -> Tet {
        return {p[apex], p[c.B[0]], p[c.B[1]], p[c.B[2]]};
    };
    for (int i = 0; i < r.V; ++i)
        for (int j = 0; j < 3; ++j) {
            const auto& x = r.lits[i];
            Tet a = sky(lp.var_cupolas[i], literal_anchor(r.roofs[i], j));
            Tet b = sky(lp.clause_cupolas[literal_clause(x, j) - 1], literal_vertex(x, j));
            if (!tetra_open_intersect(a, b)) {
                rep.blocking = false;
                rep.notes.push_back("blocking: variable " + std::to_string(i + 1) + " literal " + std::to_string(j + 1));
            }
        }

    std::vector<std::string> nb, sw;
    nonblocking_notes(p, r, nb);
    sweeping_notes(p, r, sw);
    rep.nonblocking = nb.empty();
    rep.sweeping = sw.empty();
    for (auto& s : nb) rep.notes.push_back("non-blocking: " + s);
    for (auto& s : sw) rep.notes.push_back("sweeping: " + s);
    return rep;
}

Extraction extract_assignment(const LogicalPolytope& lp, const Triangulation& T) {
    Extraction ex;
    for (size_t i = 0; i < lp.var_cupolas.size(); ++i) {
        const Face& s = lp.var_cupolas[i].skylight;
        int apex = -1, found = 0;
        for (const auto& t : T.tets)
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                ++found;
                for (int v : t)
                    if (!std::binary_search(s.begin(), s.end(), v)) apex = v;
            }
        if (found != 1) throw Error("SkylightNotFound", "variable " + std::to_string(i + 1));
        if (apex == lp.roofs[i].zT)
            ex.assignment.push_back(true);
        else if (apex == lp.roofs[i].zF)
            ex.assignment.push_back(false);
        else
            throw Error("ApexOutsideCone", "variable " + std::to_string(i + 1) + " skylight apex " + std::to_string(apex));
    }
    ex.satisfies = satisfies(lp.formula, ex.assignment);
    return ex;
}

}  // namespace smalltri
