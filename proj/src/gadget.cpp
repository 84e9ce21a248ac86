#include "smalltri/gadget.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>

namespace smalltri {

SchonhardtFrame canonical_frame() {
    SchonhardtFrame f;
    f.A = {Point3(10, 0, 0), Point3(-5, 10, 0), Point3(-5, -10, 0)};
    f.B = {Point3(Rational(120, 13), Rational(-50, 13), 10), Point3(Rational(-10, 13), Rational(145, 13), 10),
           Point3(Rational(-110, 13), Rational(-95, 13), 10)};
    return f;
}

namespace {

// Vertex numbering used by the chirotope checks: A_i -> i, B_i -> 3 + i.
std::array<Point3, 6> six(const SchonhardtFrame& f) { return {f.A[0], f.A[1], f.A[2], f.B[0], f.B[1], f.B[2]}; }

int a_(int i) { return i % 3; }
int b_(int i) { return 3 + i % 3; }

using Quad = std::array<int, 4>;

int quad_key(Quad q) {
    std::sort(q.begin(), q.end());
    int k = 0;
    for (int v : q) k |= 1 << v;
    return k;
}

// Sign of a permutation of a sorted quadruple.
int perm_sign(Quad q) {
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (q[i] > q[j]) s = -s;
    return s;
}

}  // namespace

namespace {

// Orientation of every sorted quadruple predicted from the oriented boundary of the
// twisted prism, up to one global sign; empty if the relations are inconsistent.
std::map<int, int> compute_pattern() {
    std::vector<std::array<int, 3>> tri{{a_(0), a_(2), a_(1)}, {b_(0), b_(1), b_(2)}};
    for (int i = 0; i < 3; ++i) {
        tri.push_back({a_(i), a_(i + 1), b_(i)});
        tri.push_back({a_(i + 1), b_(i + 1), b_(i)});
    }
    std::map<int, int> pred;
    for (size_t s = 0; s < tri.size(); ++s)
        for (int k = 0; k < 3; ++k) {
            int u = tri[s][k], v = tri[s][(k + 1) % 3];
            // the other facet runs v -> u
            for (size_t t = 0; t < tri.size(); ++t) {
                if (t == s) continue;
                for (int l = 0; l < 3; ++l)
                    if (tri[t][l] == v && tri[t][(l + 1) % 3] == u) {
                        int d = tri[t][(l + 2) % 3];
                        // the diagonals (B_i, A_i+1) are the reflex edges
                        bool reflex = (u >= 3 && v == (u - 2) % 3) || (v >= 3 && u == (v - 2) % 3);
                        Quad q{tri[s][0], tri[s][1], tri[s][2], d};
                        pred[quad_key(q)] = (reflex ? 1 : -1) * perm_sign(q);
                    }
            }
        }
    if (pred.size() != 12) return {};
    auto get = [&](Quad q) { return pred.at(quad_key(q)) * perm_sign(q); };
    // The three remaining quadruples are forced by Grassmann-Pluecker relations.
    for (int i = 0; i < 3; ++i) {
        int a = a_(i), b = a_(i + 1), x1 = a_(i + 2), x2 = b_(i), x3 = b_(i + 1), x4 = b_(i + 2);
        int t2 = -get({a, b, x1, x3}) * get({a, b, x2, x4});
        int t3 = get({a, b, x1, x4}) * get({a, b, x2, x3});
        if (t2 != t3) return {};
        int u = -t2 * get({a, b, x1, x2});
        Quad q{a, b, x3, x4};
        pred[quad_key(q)] = u * perm_sign(q);
    }
    return pred;
}

const std::map<int, int>& pattern() {
    static const std::map<int, int> p = compute_pattern();
    return p;
}

}  // namespace

bool is_schonhardt_position(const SchonhardtFrame& f) {
    auto p = six(f);
    const auto& pred = pattern();
    if (pred.size() != 15) return false;
    int sigma = 0;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c)
                for (int d = c + 1; d < 6; ++d) {
                    int o = orient4(p[a], p[b], p[c], p[d]);
                    if (o == 0) return false;
                    int want = pred.at(quad_key({a, b, c, d}));
                    if (sigma == 0) sigma = o * want;
                    if (o != sigma * want) return false;
                }
    return true;
}

bool Cone3::contains(const Point3& x) const {
    for (const auto& h : planes)
        if (side(h, x) <= 0) return false;
    return true;
}

Point3 Cone3::apex() const { return planes_point(planes[0], planes[1], planes[2]); }

Cone3 visibility_cone(const SchonhardtFrame& f) {
    if (!is_schonhardt_position(f)) throw Error("NotSchonhardt");
    Point3 c = centroid({f.B[0], f.B[1], f.B[2]});
    Cone3 V;
    for (int i = 0; i < 3; ++i) {
        Plane h = canonical(plane_through(f.B[i], f.B[(i + 1) % 3], f.A[(i + 1) % 3]));
        V.planes[i] = side(h, c) > 0 ? h : flipped(h);
    }
    return V;
}

namespace {

// Open segment (s, t) against the closed hull of four points.
bool open_segment_meets_hull4(const Point3& s, const Point3& t, const std::array<Point3, 4>& q) {
    if (orient4(q[0], q[1], q[2], q[3]) != 0) {
        // closed parameter interval of the line inside the hull, then meet with (0, 1)
        std::optional<Rational> lo, hi;
        for (int k = 0; k < 4; ++k) {
            Plane h = plane_through(q[(k + 1) % 4], q[(k + 2) % 4], q[(k + 3) % 4]);
            if (side(h, q[k]) < 0) h = flipped(h);
            Rational e0 = eval(h, s), e1 = eval(h, t) - e0;
            if (sgn(e1) == 0) {
                if (sgn(e0) < 0) return false;
                continue;
            }
            Rational r = -e0 / e1;
            if (sgn(e1) > 0) {
                if (!lo || r > *lo) lo = r;
            } else if (!hi || r < *hi) {
                hi = r;
            }
        }
        if (lo && hi && *lo > *hi) return false;
        Rational L = lo && *lo > 0 ? *lo : Rational(0), H = hi && *hi < 1 ? *hi : Rational(1);
        if (L < H) return true;
        return L == H && sgn(L) > 0 && L < 1;
    }
    Plane h;
    bool found = false;
    for (int k = 0; k < 4 && !found; ++k) {
        const Point3 &u = q[k], &v = q[(k + 1) % 4], &w = q[(k + 2) % 4];
        if (!cross(v - u, w - u).is_zero()) {
            h = plane_through(u, v, w);
            found = true;
        }
    }
    if (!found) throw Error("DegenerateTriangle", "skylight hull is not two-dimensional");
    Rational e0 = eval(h, s), e1 = eval(h, t);
    if (sgn(e0) == 0 && sgn(e1) == 0) throw Error("DegenerateInput", "segment lies in the hull plane");
    if (sgn(e0) * sgn(e1) >= 0) return false;
    Point3 x = lerp(s, t, e0 / (e0 - e1));
    for (int k = 0; k < 4; ++k)
        if (point_in_closed_simplex(x, {q[(k + 1) % 4], q[(k + 2) % 4], q[(k + 3) % 4]})) return true;
    return false;
}

}  // namespace

bool sees_skylight(const SchonhardtFrame& f, const Point3& x) {
    if (!is_schonhardt_position(f)) throw Error("NotSchonhardt");
    std::array<Point3, 4> q{x, f.B[0], f.B[1], f.B[2]};
    for (int i = 0; i < 3; ++i)
        if (open_segment_meets_hull4(f.B[i], f.A[(i + 1) % 3], q)) return false;
    return true;
}

UntriangulableReport schonhardt_search(const SchonhardtFrame& f) {
    Polytope3 P;
    auto p = six(f);
    P.vertices.assign(p.begin(), p.end());
    std::vector<Tetra> notch;
    Rational body = volume(hull3(P.vertices));
    for (int i = 0; i < 3; ++i) {
        notch.push_back(make_tetra(a_(i), a_(i + 1), b_(i), b_(i + 1)));
        const auto& t = notch.back();
        body -= abs(det3(p[t[1]] - p[t[0]], p[t[2]] - p[t[0]], p[t[3]] - p[t[0]])) / 6;
    }
    std::vector<Tetra> cand;
    std::vector<Rational> vol;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c)
                for (int d = c + 1; d < 6; ++d) {
                    if (orient4(p[a], p[b], p[c], p[d]) == 0) continue;
                    Tet t{p[a], p[b], p[c], p[d]};
                    bool inside = true;
                    for (const auto& n : notch)
                        inside &= !tetra_open_intersect(t, {p[n[0]], p[n[1]], p[n[2]], p[n[3]]});
                    if (!inside) continue;
                    cand.push_back({a, b, c, d});
                    vol.push_back(abs(det3(p[b] - p[a], p[c] - p[a], p[d] - p[a])) / 6);
                }
    UntriangulableReport r;
    r.candidates = static_cast<int>(cand.size());
    for (unsigned long mask = 1; mask < (1ul << cand.size()) && !r.triangulable; ++mask) {
        Rational v = 0;
        for (size_t i = 0; i < cand.size(); ++i)
            if (mask >> i & 1) v += vol[i];
        if (v != body) continue;
        bool ok = true;
        for (size_t i = 0; i < cand.size() && ok; ++i)
            for (size_t j = i + 1; j < cand.size() && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1)) ok = proper_pair(P, cand[i], cand[j]);
        r.triangulable = ok;
    }
    return r;
}

namespace {

using PVec = std::array<UniPoly, 3>;

UniPoly constant(const Rational& r) { return UniPoly(std::vector<Rational>{r}); }

PVec linear(const Vec3& base, const Vec3& dir) {
    PVec p;
    for (int k = 0; k < 3; ++k) p[k] = UniPoly(std::vector<Rational>{base[k], dir[k]});
    return p;
}

PVec operator-(const PVec& a, const PVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

UniPoly pdot(const PVec& a, const Vec3& v) { return a[0] * constant(v.x) + a[1] * constant(v.y) + a[2] * constant(v.z); }

UniPoly pdet(const PVec& a, const PVec& b, const PVec& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Rational pick_eps(const std::vector<UniPoly>& conds, const char* what) {
    try {
        return round_down_pow2(eps_threshold_leading_all(conds));
    } catch (const Error& e) {
        throw Error(what, e.what());
    }
}

// Whether the cycle of facet f visits x then y consecutively.
bool runs(const std::vector<int>& f, int x, int y) {
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] == x && f[(i + 1) % f.size()] == y) return true;
    return false;
}

}  // namespace

ChainResult attach_chain(const Polytope3& P, int a, int b, int q0, int qend, const Plane& G, int m) {
    int n = P.size();
    for (int v : {a, b, q0, qend})
        if (v < 0 || v >= n) throw Error("NotAFacetPair", "vertex out of range");
    if (m < 0) throw Error("NotAFacetPair", "negative chain length");
    int f1 = P.facet_index(make_face({a, q0, qend})), f2 = P.facet_index(make_face({b, q0, qend}));
    if (f1 < 0 || f2 < 0 || a == b || P.facets[f1].size() != 3 || P.facets[f2].size() != 3)
        throw Error("NotAFacetPair", "(a, q0, qend) and (b, q0, qend) must be triangular facets");
    const auto& V = P.vertices;
    if (side(G, V[q0]) * side(G, V[qend]) >= 0) throw Error("PlaneDoesNotSeparate");
    ChainResult r;
    if (m == 0) {
        r.poly = P;
        r.chain = {q0, qend};
        for (int i = 0; i < n; ++i) r.old_to_new.push_back(i);
        return r;
    }
    const Vec3 &n1 = P.facet_planes[f1].a, &n2 = P.facet_planes[f2].a;
    // weighted sum of the outer normals that points beyond the edge
    Rational c = dot(n1, n2), lam = 1;
    if (sgn(c) < 0) lam = (dot(n1, n1) / -c + -c / dot(n2, n2)) / 2;
    Vec3 v = n1 + lam * n2;
    Vec3 e = V[qend] - V[q0];
    Vec3 nH = cross(e, v);
    Point3 D = line_plane_point(line_through(V[q0], V[qend]), G);
    Vec3 w = cross(G.a, nH);
    if (sgn(dot(n1, w)) < 0) w = -w;
    // p(t) = p0(t) + eps * 4t(1 - t) w passes through q0, D + eps w, qend at t = 0, 1/2, 1
    std::vector<Point3> base;
    std::vector<Vec3> dir;
    for (int i = 1; i <= m; ++i) {
        Rational t = Rational(i) / (4 * m);
        Rational l0 = 2 * (t - Rational(1, 2)) * (t - 1), l1 = 4 * t * (1 - t), l2 = 2 * t * (t - Rational(1, 2));
        base.push_back(l0 * V[q0] + l1 * D + l2 * V[qend]);
        dir.push_back(l1 * w);
    }
    // base points lie on the edge at q0 + s e; facet values are affine in s
    Rational d = dot(D - V[q0], e) / dot(e, e), s_lo = 2, s_hi = -1, l1_hi = 0;
    for (int i = 1; i <= m; ++i) {
        Rational t = Rational(i) / (4 * m);
        Rational l1 = 4 * t * (1 - t), s = l1 * d + 2 * t * (t - Rational(1, 2));
        s_lo = std::min(s_lo, s);
        s_hi = std::max(s_hi, s);
        l1_hi = std::max(l1_hi, l1);
    }
    Rational bound = 1;
    for (size_t f = 0; f < P.facets.size(); ++f) {
        const Plane& h = P.facet_planes[f];
        Rational W = dot(h.a, w);
        if (static_cast<int>(f) == f1 || static_cast<int>(f) == f2) {
            if (sgn(W) <= 0) throw Error("ChainPlacementFailed", "chain does not leave the edge outwards");
            continue;
        }
        Rational E0 = eval(h, V[q0]), E1 = dot(h.a, e);
        Rational lo = std::min(Rational(-E0 - s_lo * E1), Rational(-E0 - s_hi * E1));
        if (sgn(lo) <= 0) throw Error("ChainPlacementFailed", "edge touches another facet");
        if (sgn(W) > 0) bound = std::min(bound, Rational(lo / (2 * l1_hi * W)));
    }
    std::vector<UniPoly> conds;
    for (int i = 0; i < m; ++i) {
        UniPoly g(std::vector<Rational>{eval(G, base[i]), dot(G.a, dir[i])});
        conds.push_back(side(G, V[q0]) > 0 ? g : constant(0) - g);
    }
    // chain triangles must keep the other chain points and the opposite apex inside
    std::vector<PVec> Q{linear(V[q0], Vec3(0, 0, 0))};
    for (int i = 0; i < m; ++i) Q.push_back(linear(base[i], dir[i]));
    Q.push_back(linear(V[qend], Vec3(0, 0, 0)));
    for (auto [apex, other, f] : {std::tuple{a, b, f1}, std::tuple{b, a, f2}}) {
        bool fwd = runs(P.facets[f], q0, qend);
        PVec pa = linear(V[apex], Vec3(0, 0, 0)), po = linear(V[other], Vec3(0, 0, 0));
        for (int k = 0; k <= m; ++k) {
            const PVec& s = fwd ? Q[k] : Q[k + 1];
            const PVec& t = fwd ? Q[k + 1] : Q[k];
            auto inside = [&](const PVec& x) { return constant(0) - pdet(s - pa, t - pa, x - pa); };
            conds.push_back(inside(po));
            // the chain is a convex arc in one plane: one other chain point decides for all
            conds.push_back(inside(Q[k == 0 ? m + 1 : 0]));
        }
    }
    Rational eps = round_down_pow2(std::min(bound, pick_eps(conds, "ChainPlacementFailed")));
    std::vector<Point3> X;
    for (int i = 0; i < m; ++i) X.push_back(base[i] + eps * dir[i]);
    auto ext = extend_beyond(P, X);
    r.poly = std::move(ext.poly);
    r.old_to_new = std::move(ext.old_to_new);
    r.chain.push_back(r.old_to_new[q0]);
    r.chain.insert(r.chain.end(), ext.added.begin(), ext.added.end());
    r.chain.push_back(r.old_to_new[qend]);
    r.eps = eps;
    std::set<Face> want;
    for (int k = 0; k <= m; ++k) {
        want.insert(make_face({r.old_to_new[a], r.chain[k], r.chain[k + 1]}));
        want.insert(make_face({r.old_to_new[b], r.chain[k], r.chain[k + 1]}));
    }
    std::set<Face> got;
    for (const auto& f : r.poly.facets)
        for (int x : ext.added)
            if (std::find(f.begin(), f.end(), x) != f.end()) got.insert(make_face(f));
    for (const auto& f : want) got.insert(f);
    if (got.size() != want.size() || r.poly.facets.size() != P.facets.size() + 2 * m)
        throw Error("ChainPlacementFailed", "unexpected facets around the chain");
    return r;
}

namespace {

bool inside_except(const Polytope3& P, int skip, const Point3& x) {
    for (size_t k = 0; k < P.facets.size(); ++k)
        if (static_cast<int>(k) != skip && side(P.facet_planes[k], x) >= 0) return false;
    return true;
}

// -eval of every facet plane except skip at x(eps) = base + eps dir.
void push_inside_except(std::vector<UniPoly>& out, const Polytope3& P, int skip, const Point3& base, const Vec3& dir) {
    for (size_t k = 0; k < P.facets.size(); ++k) {
        if (static_cast<int>(k) == skip) continue;
        const Plane& h = P.facet_planes[k];
        out.push_back(UniPoly(std::vector<Rational>{-eval(h, base), -dot(h.a, dir)}));
    }
}

// x strictly inside the triangle t, all moving in a plane with normal n.
void push_in_triangle(std::vector<UniPoly>& out, const std::array<PVec, 3>& t, const PVec& x, const Vec3& n) {
    PVec pn = linear(n, Vec3(0, 0, 0));
    UniPoly o = pdet(t[1] - t[0], t[2] - t[0], pn);
    int tau = o.is_zero() ? 0 : sgn(o.c[0]);
    if (tau == 0) throw Error("InternalFault", "degenerate triangle at eps = 0");
    for (int i = 0; i < 3; ++i) {
        UniPoly d = pdet(t[(i + 1) % 3] - t[i], x - t[i], pn);
        out.push_back(tau > 0 ? d : constant(0) - d);
    }
}

struct Lift {
    Point3 base;  // point of the line at the plane a.x = b + c0
    Vec3 dir;     // motion per unit increase of the offset
};

Lift lift(const Line3& g, const Plane& h, const Rational& c0) {
    Rational ad = dot(h.a, g.dir);
    Rational s0 = (h.b + c0 - dot(h.a, g.base)) / ad;
    return {g.base + s0 * g.dir, g.dir / ad};
}

void compose(std::vector<int>& total, const std::vector<int>& step) {
    for (int& v : total)
        if (v >= 0) v = step[v];
}

CupolaBuild build_once(const Polytope3& P, int fi, const Cone3& V, int m, const std::vector<Line3>& lines) {
    const Plane& hF = P.facet_planes[fi];
    std::array<Line3, 3> l;
    std::array<Point3, 3> D0;
    std::array<Vec3, 3> dD;
    for (int i = 0; i < 3; ++i) {
        l[i] = planes_line(V.planes[(i + 2) % 3], V.planes[i]);
        Lift t = lift(l[i], hF, 0);
        D0[i] = t.base;
        dD[i] = t.dir;
    }
    std::vector<Lift> X0;
    for (const auto& g : lines) X0.push_back(lift(g, hF, 0));
    Vec3 n = hF.a;
    // (i) bottom plane lifted by e1, then the prolongation factor e2
    std::vector<UniPoly> conds;
    std::array<PVec, 3> Dp;
    for (int i = 0; i < 3; ++i) {
        push_inside_except(conds, P, fi, D0[i], dD[i]);
        Dp[i] = linear(D0[i], dD[i]);
    }
    for (const auto& x : X0) push_in_triangle(conds, Dp, linear(x.base, x.dir), n);
    Rational e1 = pick_eps(conds, "ConeMissesFacet");
    std::array<Point3, 3> D;
    for (int i = 0; i < 3; ++i) D[i] = D0[i] + e1 * dD[i];
    conds.clear();
    std::array<PVec, 3> Ap;
    for (int i = 0; i < 3; ++i) {
        Vec3 out = D[i] - D[(i + 2) % 3];
        push_inside_except(conds, P, fi, D[i], out);
        Ap[i] = linear(D[i], out);
    }
    for (const auto& x : X0) push_in_triangle(conds, Ap, linear(x.base + e1 * x.dir, Vec3(0, 0, 0)), n);
    Rational e2 = pick_eps(conds, "ConeMissesFacet");
    std::vector<Point3> A;
    for (int i = 0; i < 3; ++i) A.push_back(D[i] + e2 * (D[i] - D[(i + 2) % 3]));
    auto ext1 = extend_beyond(P, A);
    const Polytope3& P1 = ext1.poly;
    int bottom = P1.facet_index(make_face({ext1.added[0], ext1.added[1], ext1.added[2]}));
    if (bottom < 0) throw Error("InternalFault", "bottom triangle is not a facet");
    // (ii) skylight plane lifted by e3 above the bottom, along the extreme rays
    conds.clear();
    std::array<PVec, 3> Bp;
    for (int i = 0; i < 3; ++i) {
        push_inside_except(conds, P1, bottom, D[i], dD[i]);
        Bp[i] = linear(D[i], dD[i]);
    }
    for (const auto& x : X0) push_in_triangle(conds, Bp, linear(x.base + e1 * x.dir, x.dir), n);
    std::array<PVec, 6> six_p;
    for (int i = 0; i < 3; ++i) {
        six_p[i] = linear(A[i], Vec3(0, 0, 0));
        six_p[3 + i] = Bp[i];
    }
    std::vector<UniPoly> orient;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c)
                for (int d = c + 1; d < 6; ++d) {
                    UniPoly o = pdet(six_p[b] - six_p[a], six_p[c] - six_p[a], six_p[d] - six_p[a]);
                    orient.push_back(pattern().at(quad_key({a, b, c, d})) > 0 ? o : constant(0) - o);
                }
    Rational e3 = pick_eps(conds, "ConeMissesFacet");
    std::optional<Rational> e3o;
    for (int sigma : {1, -1}) {
        std::vector<UniPoly> all = orient;
        if (sigma < 0)
            for (auto& p : all) p = constant(0) - p;
        try {
            e3o = eps_threshold_leading_all(all);
            break;
        } catch (const Error&) {
        }
    }
    if (!e3o) throw Error("TwistMismatch");
    if (*e3o < e3) e3 = round_down_pow2(*e3o);
    std::vector<Point3> B;
    for (int i = 0; i < 3; ++i) B.push_back(D[i] + e3 * dD[i]);
    auto ext2 = extend_beyond(P1, B);
    CupolaBuild out;
    out.old_to_new = ext1.old_to_new;
    compose(out.old_to_new, ext2.old_to_new);
    std::array<int, 3> Ai, Bi;
    for (int i = 0; i < 3; ++i) {
        Ai[i] = ext2.old_to_new[ext1.added[i]];
        Bi[i] = ext2.added[i];
    }
    Polytope3 cur = std::move(ext2.poly);
    SchonhardtFrame fr{{A[0], A[1], A[2]}, {B[0], B[1], B[2]}};
    if (!is_schonhardt_position(fr)) throw Error("InternalFault", "frame is not in Schonhardt position");
    Cone3 vc = visibility_cone(fr);
    for (int i = 0; i < 3; ++i)
        if (!(vc.planes[i] == canonical(V.planes[i]))) throw Error("InternalFault", "frame cone differs from V");
    out.eps = {e1, e2, e3};
    // (iii) chains beyond the edges (A_j, B_j+1)
    std::array<std::vector<int>, 3> chains;
    for (int j = 0; j < 3; ++j) {
        Plane G = plane_through(B[j], A[(j + 1) % 3], B[(j + 2) % 3]);
        auto cr = attach_chain(cur, Bi[j], Ai[(j + 1) % 3], Ai[j], Bi[(j + 1) % 3], G, m);
        compose(out.old_to_new, cr.old_to_new);
        for (int i = 0; i < 3; ++i) {
            Ai[i] = cr.old_to_new[Ai[i]];
            Bi[i] = cr.old_to_new[Bi[i]];
        }
        for (int k = 0; k < j; ++k) compose(chains[k], cr.old_to_new);
        chains[j] = cr.chain;
        out.eps.push_back(cr.eps);
        cur = std::move(cr.poly);
    }
    CupolaRecord& rec = out.rec;
    rec.A = Ai;
    rec.B = Bi;
    rec.m = m;
    rec.chains = chains;
    rec.skylight = make_face({Bi[0], Bi[1], Bi[2]});
    rec.bottom = make_face({Ai[0], Ai[1], Ai[2]});
    rec.cone = V;
    for (int v : P.facets[fi]) rec.host.push_back(out.old_to_new[v]);
    std::sort(rec.host.begin(), rec.host.end());
    out.poly = std::move(cur);
    return out;
}

}  // namespace

CupolaBuild build_cupola(const Polytope3& P, const Face& F, const Cone3& V, int m, const std::vector<Line3>& lines) {
    int fi = P.facet_index(F);
    if (fi < 0 || P.facets[fi].size() != 3) throw Error("UnknownFace", "F must be a triangular facet");
    if (m < 0) throw Error("BadCount", "negative chain length");
    const Plane& hF = P.facet_planes[fi];
    for (int i = 0; i < 3; ++i) {
        Line3 li;
        try {
            li = planes_line(V.planes[(i + 2) % 3], V.planes[i]);
        } catch (const Error&) {
            throw Error("ConeMissesFacet", "cone planes are not in general position");
        }
        if (sgn(dot(hF.a, li.dir)) == 0) throw Error("ConeMissesFacet", "extreme ray parallel to F");
        Point3 d = line_plane_point(li, hF);
        if (side(V.planes[(i + 1) % 3], d) <= 0 || !inside_except(P, fi, d))
            throw Error("ConeMissesFacet", "cone does not meet F in a triangle inside relint(F)");
    }
    for (const auto& g : lines) {
        if (sgn(dot(hF.a, g.dir)) == 0) throw Error("LineMissesFacet", "line parallel to F");
        Point3 x = line_plane_point(g, hF);
        if (!V.contains(x) || !inside_except(P, fi, x))
            throw Error("LineMissesFacet", "line does not pierce the cone's trace on F");
    }
    try {
        return build_once(P, fi, V, m, lines);
    } catch (const Error& e) {
        if (e.kind() != "TwistMismatch") throw;
    }
    // the other cyclic labeling of the cone planes twists the frame the other way
    Cone3 R{{V.planes[2], V.planes[1], V.planes[0]}};
    return build_once(P, fi, R, m, lines);
}

SchonhardtFrame frame_of(const Polytope3& P, const CupolaRecord& rec) {
    SchonhardtFrame f;
    for (int i = 0; i < 3; ++i) {
        f.A[i] = P.vertices.at(rec.A[i]);
        f.B[i] = P.vertices.at(rec.B[i]);
    }
    return f;
}

std::vector<Tetra> triangulate_cupola(const Polytope3& P, const CupolaRecord& rec, int v) {
    if (v < 0 || v >= P.size() || !rec.cone.contains(P.vertices[v])) throw Error("ApexNotInCone");
    std::vector<Tetra> T;
    for (int j = 0; j < 3; ++j) {
        const auto& c = rec.chains[j];
        for (size_t k = 0; k + 1 < c.size(); ++k)
            T.push_back(make_tetra(rec.B[j], rec.A[(j + 1) % 3], c[k], c[k + 1]));
    }
    auto cone_to = [&](const std::vector<int>& f) {
        if (std::find(f.begin(), f.end(), v) != f.end()) return;
        for (size_t i = 1; i + 1 < f.size(); ++i) T.push_back(make_tetra(v, f[0], f[i], f[i + 1]));
    };
    cone_to({rec.B[0], rec.B[1], rec.B[2]});
    for (int i = 0; i < 3; ++i) {
        cone_to({rec.A[i], rec.A[(i + 1) % 3], rec.B[i]});
        cone_to({rec.A[(i + 1) % 3], rec.B[(i + 1) % 3], rec.B[i]});
    }
    std::vector<Point3> pts;
    std::vector<int> ids;
    for (int h : rec.host) ids.push_back(h);
    for (int a : rec.A) ids.push_back(a);
    for (int id : ids) pts.push_back(P.vertices.at(id));
    auto hull = hull3_indexed(pts);
    Face host = make_face(rec.host), bottom = rec.bottom;
    for (const auto& f : hull.poly.facets) {
        std::vector<int> g;
        for (int x : f) g.push_back(ids[hull.source[x]]);
        Face s = make_face(g);
        if (s == host || s == bottom) continue;
        cone_to(g);
    }
    return T;
}

std::string cupola_audit(const Polytope3& P, const CupolaRecord& rec) {
    int n = P.size();
    std::vector<int> all;
    for (int i = 0; i < 3; ++i) {
        all.push_back(rec.A[i]);
        all.push_back(rec.B[i]);
    }
    for (int j = 0; j < 3; ++j) {
        const auto& c = rec.chains[j];
        if (static_cast<int>(c.size()) != rec.m + 2) return "chain " + std::to_string(j) + " has the wrong length";
        if (c.front() != rec.A[j] || c.back() != rec.B[(j + 1) % 3])
            return "chain " + std::to_string(j) + " does not run from A_j to B_j+1";
        all.insert(all.end(), c.begin() + 1, c.end() - 1);
    }
    for (int v : all)
        if (v < 0 || v >= n) return "vertex index out of range";
    std::vector<int> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "repeated cupola vertex";
    SchonhardtFrame f = frame_of(P, rec);
    if (!is_schonhardt_position(f)) return "frame is not in Schonhardt position";
    if (rec.skylight != make_face({rec.B[0], rec.B[1], rec.B[2]}) || rec.bottom != make_face({rec.A[0], rec.A[1], rec.A[2]}))
        return "skylight or bottom does not match the frame";
    std::set<Face> want{rec.skylight, rec.bottom};
    for (int j = 0; j < 3; ++j) {
        const auto& c = rec.chains[j];
        for (size_t k = 0; k + 1 < c.size(); ++k) {
            want.insert(make_face({rec.B[j], c[k], c[k + 1]}));
            want.insert(make_face({rec.A[(j + 1) % 3], c[k], c[k + 1]}));
        }
    }
    std::vector<Point3> pts;
    for (int v : all) pts.push_back(P.vertices[v]);
    auto C = hull3_indexed(pts);
    if (C.poly.size() != static_cast<int>(all.size())) return "some cupola point is not a vertex of its hull";
    std::set<Face> got;
    for (const auto& fc : C.poly.facets) {
        std::vector<int> g;
        for (int x : fc) g.push_back(all[C.source[x]]);
        got.insert(make_face(g));
    }
    if (got != want) return "cupola facets differ from the chain pattern";
    for (const auto& fc : want)
        if (fc != rec.bottom && !P.has_facet(fc)) return "cupola facet missing from the host polytope";
    for (int j = 0; j < 3; ++j) {
        Plane G = plane_through(f.B[j], f.A[(j + 1) % 3], f.B[(j + 2) % 3]);
        int far = side(G, f.B[(j + 1) % 3]);
        const auto& c = rec.chains[j];
        for (size_t k = 1; k + 1 < c.size(); ++k)
            if (side(G, P.vertices[c[k]]) != -far) return "chain point on the wrong side of its separating plane";
    }
    Cone3 vc = visibility_cone(f);
    for (int i = 0; i < 3; ++i)
        if (!(vc.planes[i] == canonical(rec.cone.planes[i]))) return "recorded cone is not the frame's visibility cone";
    return "";
}

namespace {

struct PolyPlane {
    PVec a;
    UniPoly b;
};

// base + eps * tilt, as a plane with polynomial coefficients
PolyPlane tilt(const Plane& base, const Plane& t, int sgn_base) {
    PolyPlane p;
    for (int k = 0; k < 3; ++k) p.a[k] = UniPoly(std::vector<Rational>{sgn_base * base.a[k], t.a[k]});
    p.b = UniPoly(std::vector<Rational>{sgn_base * base.b, t.b});
    return p;
}

UniPoly pdot(const PVec& a, const PVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Sign-equivalent form of h(X) for X = P1 ∩ P2 ∩ F, cleared of the Cramer denominator.
UniPoly at_corner(const PolyPlane& p1, const PolyPlane& p2, const Plane& F, const PolyPlane& h) {
    std::array<PVec, 3> rows{p1.a, p2.a, linear(F.a, Vec3(0, 0, 0))};
    std::array<UniPoly, 3> rhs{p1.b, p2.b, constant(F.b)};
    UniPoly D = pdet(rows[0], rows[1], rows[2]);
    PVec N;
    for (int k = 0; k < 3; ++k) {
        auto r = rows;
        for (int i = 0; i < 3; ++i) r[i][k] = rhs[i];
        N[k] = pdet(r[0], r[1], r[2]);
    }
    return (pdot(h.a, N) - h.b * D) * D;
}

PolyPlane fixed(const Plane& h) { return {linear(h.a, Vec3(0, 0, 0)), constant(h.b)}; }

Plane combine(const Plane& p, const Plane& q, const Rational& k) { return {p.a - k * q.a, p.b - k * q.b}; }

}  // namespace

Cone3 make_visibility_cone(const Polytope3& P, const Face& F, const Plane& H, const std::vector<Point3>& marked) {
    int fi = P.facet_index(F);
    if (fi < 0) throw Error("UnknownFace", "F is not a facet");
    const auto& cyc = P.facets[fi];
    const Plane& hF = P.facet_planes[fi];
    bool pos = false, neg = false;
    for (int v : cyc) {
        pos |= side(H, P.vertices[v]) > 0;
        neg |= side(H, P.vertices[v]) < 0;
    }
    if (!pos || !neg) throw Error("PlaneMissesFacetInterior");
    std::vector<int> S;
    for (int v = 0; v < P.size(); ++v)
        if (side(H, P.vertices[v]) == 0 && std::find(cyc.begin(), cyc.end(), v) == cyc.end()) S.push_back(v);
    if (S.empty()) throw Error("EmptySight");
    // the chord F ∩ H
    std::vector<Point3> ch;
    for (size_t i = 0; i < cyc.size(); ++i) {
        const Point3 &p = P.vertices[cyc[i]], &q = P.vertices[cyc[(i + 1) % cyc.size()]];
        Rational ep = eval(H, p), eq = eval(H, q);
        if (sgn(ep) == 0)
            ch.push_back(p);
        else if (sgn(ep) * sgn(eq) < 0)
            ch.push_back(lerp(p, q, ep / (ep - eq)));
    }
    if (ch.size() != 2) throw Error("InternalFault", "facet chord");
    const Point3& c0 = ch[0];
    Vec3 u = ch[1] - ch[0], wv = cross(H.a, u);
    if (sgn(dot(wv, hF.a)) > 0) wv = -wv;
    Rational uu = dot(u, u), ww = dot(wv, wv);
    struct P2 {
        Rational s, t;
    };
    auto coords = [&](const Point3& x) { return P2{dot(x - c0, u) / uu, dot(x - c0, wv) / ww}; };
    // f(x) = alpha s(x) + beta t(x) + gamma as an oriented plane
    auto affine = [&](const Rational& al, const Rational& be, const Rational& ga) {
        Plane h;
        h.a = (al / uu) * u + (be / ww) * wv;
        h.b = -(ga - al * dot(c0, u) / uu - be * dot(c0, wv) / ww);
        return h;
    };
    std::vector<P2> M;
    for (const auto& x : marked) {
        if (side(H, x) != 0 || side(hF, x) != 0 || !inside_except(P, fi, x))
            throw Error("NotInFacet", "marked points must lie in relint(F) ∩ H");
        M.push_back(coords(x));
    }
    if (M.empty()) M.push_back({Rational(1, 2), 0});
    P2 ml = M[0], mr = M[0];
    for (const auto& p : M) {
        if (p.s < ml.s) ml = p;
        if (p.s > mr.s) mr = p;
    }
    auto cross2 = [](const P2& a, const P2& b) -> Rational { return a.s * b.t - a.t * b.s; };
    auto minus = [](const P2& a, const P2& b) { return P2{a.s - b.s, a.t - b.t}; };
    std::vector<P2> Sc;
    for (int v : S) Sc.push_back(coords(P.vertices[v]));
    P2 sl = Sc[0], sr = Sc[0];
    for (const auto& y : Sc) {
        if (sgn(cross2(minus(sl, ml), minus(y, ml))) > 0) sl = y;
        if (sgn(cross2(minus(sr, mr), minus(y, mr))) < 0) sr = y;
    }
    P2 dl = minus(sl, ml), dr = minus(sr, mr);
    Point3 v = c0 + H.a;
    Rational Hv = eval(H, v);
    std::set<int> inS(S.begin(), S.end());
    std::vector<Plane> edges;
    {
        Point3 cen(0, 0, 0);
        for (int x : cyc) cen = cen + P.vertices[x];
        cen = cen / Rational(static_cast<long>(cyc.size()));
        for (size_t i = 0; i < cyc.size(); ++i) {
            const Point3 &p = P.vertices[cyc[i]], &q = P.vertices[cyc[(i + 1) % cyc.size()]];
            Plane e = plane_through(p, q, p + hF.a);
            edges.push_back(side(e, cen) > 0 ? e : flipped(e));
        }
    }
    for (Rational delta = Rational(1, 2); delta > Rational(1, 1L << 60); delta /= 2) {
        // l', r', f' in H and the planes through them and v
        Plane Ll = affine(dl.t, -dl.s, -dl.t * ml.s + dl.s * ml.t + delta);
        Plane Lr = affine(-dr.t, dr.s, dr.t * mr.s - dr.s * mr.t + delta);
        Plane Lf = affine(0, 1, delta);
        std::array<Plane, 3> G;
        std::array<Plane, 3> L{Ll, Lr, Lf};
        for (int k = 0; k < 3; ++k) G[k] = combine(L[k], H, eval(L[k], v) / Hv);
        std::array<int, 3> base_sign{1, 1, -1};
        std::array<PolyPlane, 3> C;
        for (int k = 0; k < 3; ++k) C[k] = tilt(H, G[k], base_sign[k]);
        auto value = [&](int k, const Point3& x) {
            return UniPoly(std::vector<Rational>{base_sign[k] * eval(H, x), eval(G[k], x)});
        };
        std::vector<UniPoly> conds;
        bool ok = true;
        for (int x = 0; x < P.size() && ok; ++x) {
            const Point3& p = P.vertices[x];
            if (inS.count(x)) {
                for (int k = 0; k < 3; ++k) conds.push_back(value(k, p));
                continue;
            }
            int hs = side(H, p);
            if (hs < 0) {
                conds.push_back(constant(0) - value(0, p));
            } else if (hs > 0) {
                conds.push_back(constant(0) - value(2, p));
            } else {
                int k = 0;
                while (k < 3 && side(G[k], p) >= 0) ++k;
                if (k == 3) ok = false;
                else conds.push_back(constant(0) - value(k, p));
            }
        }
        if (!ok) continue;
        for (const auto& x : marked)
            for (int k = 0; k < 3; ++k) conds.push_back(value(k, x));
        for (int k = 0; k < 3; ++k) {
            const PolyPlane &p1 = C[k], &p2 = C[(k + 1) % 3], &p3 = C[(k + 2) % 3];
            conds.push_back(at_corner(p1, p2, hF, p3));
            for (const auto& e : edges) conds.push_back(at_corner(p1, p2, hF, fixed(e)));
        }
        Rational eps;
        try {
            eps = round_down_pow2(eps_threshold_leading_all(conds));
        } catch (const Error&) {
            continue;
        }
        Cone3 V;
        for (int k = 0; k < 3; ++k) {
            Plane h{base_sign[k] * H.a + eps * G[k].a, base_sign[k] * H.b + eps * G[k].b};
            V.planes[k] = canonical(h);
        }
        bool good = true;
        for (int x = 0; x < P.size() && good; ++x) good = V.contains(P.vertices[x]) == (inS.count(x) > 0);
        for (const auto& x : marked) good = good && V.contains(x);
        for (int k = 0; k < 3 && good; ++k) {
            Point3 c = planes_point(V.planes[k], V.planes[(k + 1) % 3], hF);
            good = side(V.planes[(k + 2) % 3], c) > 0 && inside_except(P, fi, c);
        }
        if (good) return V;
    }
    throw Error("InternalFault", "no admissible shift for the cone boundary lines");
}

}  // namespace smalltri
