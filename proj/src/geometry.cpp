#include "smalltri/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace smalltri {

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw Error("SyntaxError", "empty rational");
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool slash = false;
    if (i == s.size()) throw Error("SyntaxError", "bad rational '" + s + "'");
    for (size_t k = i; k < s.size(); ++k) {
        if (s[k] == '/') {
            if (slash || k == i || k + 1 == s.size()) throw Error("SyntaxError", "bad rational '" + s + "'");
            slash = true;
        } else if (s[k] < '0' || s[k] > '9') {
            throw Error("SyntaxError", "bad rational '" + s + "'");
        }
    }
    Rational r;
    if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw Error("SyntaxError", "bad rational '" + s + "'");
    if (sgn(r.get_den()) == 0) throw Error("SyntaxError", "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

bool Vec3::operator<(const Vec3& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
}

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
Vec3 operator*(const Rational& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
Vec3 operator/(const Vec3& a, const Rational& s) { return {a.x / s, a.y / s, a.z / s}; }
Rational dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Rational det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }
Point3 lerp(const Point3& p, const Point3& q, const Rational& t) { return p + t * (q - p); }
Point3 midpoint(const Point3& p, const Point3& q) { return Rational(1, 2) * (p + q); }

Point3 centroid(const std::vector<Point3>& pts) {
    Vec3 s(0, 0, 0);
    for (const auto& p : pts) s = s + p;
    return s / Rational(static_cast<long>(pts.size()));
}

std::string to_string(const Vec3& v) {
    return "(" + to_string(v.x) + "," + to_string(v.y) + "," + to_string(v.z) + ")";
}

Sign orient4(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4) {
    return sign_of(det3(p2 - p1, p3 - p1, p4 - p1));
}

bool gp_holds(const Point3& a, const Point3& b, const Point3& x1, const Point3& x2,
              const Point3& x3, const Point3& x4) {
    return gp_triple_ok({orient4(a, b, x1, x2) * orient4(a, b, x3, x4),
                         -orient4(a, b, x1, x3) * orient4(a, b, x2, x4),
                         orient4(a, b, x1, x4) * orient4(a, b, x2, x3)});
}

bool gp_triple_ok(const std::array<Sign, 3>& t) {
    bool pos = false, neg = false, nonzero = false;
    for (int s : t) {
        pos |= s > 0;
        neg |= s < 0;
        nonzero |= s != 0;
    }
    return !nonzero || (pos && neg);
}

std::optional<Circuit> circuit5(const std::array<Point3, 5>& x) {
    Circuit c;
    bool any = false;
    for (int i = 0; i < 5; ++i) {
        std::array<Point3, 4> rest;
        int k = 0;
        for (int j = 0; j < 5; ++j)
            if (j != i) rest[k++] = x[j];
        // index i is 0-based; the 1-based rule is (-1)^(i+1)
        int s = orient4(rest[0], rest[1], rest[2], rest[3]);
        c.sign[i] = (i % 2 == 0) ? -s : s;
        any |= s != 0;
    }
    if (!any) return std::nullopt;
    for (int i = 0; i < 5; ++i) {
        if (c.sign[i] > 0) c.plus.push_back(i);
        if (c.sign[i] < 0) c.minus.push_back(i);
    }
    return c;
}

static mpz_class lcm_den(std::initializer_list<const Rational*> xs) {
    mpz_class l = 1;
    for (auto* r : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r->get_den_mpz_t());
    return l;
}

Plane canonical(const Plane& h) {
    if (h.a.is_zero()) throw Error("DegenerateInput", "zero plane normal");
    mpz_class l = lcm_den({&h.a.x, &h.a.y, &h.a.z, &h.b});
    Rational v[4] = {h.a.x * l, h.a.y * l, h.a.z * l, h.b * l};
    mpz_class g = 0;
    for (auto& r : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.get_num_mpz_t());
    for (auto& r : v) r /= g;
    return {{v[0], v[1], v[2]}, v[3]};
}

Plane flipped(const Plane& h) { return {-h.a, -h.b}; }

Plane unoriented_key(const Plane& h) {
    Plane c = canonical(h);
    for (int i = 0; i < 3; ++i) {
        int s = sgn(c.a[i]);
        if (s != 0) return s > 0 ? c : flipped(c);
    }
    return c;
}

Plane plane_through(const Point3& p, const Point3& q, const Point3& r) {
    Vec3 a = cross(q - p, r - p);
    if (a.is_zero()) throw Error("DegenerateInput", "collinear points define no plane");
    return canonical({a, dot(a, p)});
}

Plane parallel_through(const Plane& h, const Point3& p) { return canonical({h.a, dot(h.a, p)}); }

Rational eval(const Plane& h, const Point3& x) { return dot(h.a, x) - h.b; }
// Sign of a sum of fractions by cross-multiplying the (positive) denominators.
Sign side(const Plane& h, const Point3& x) {
    const mpq_class* num[4][2] = {{&h.a.x, &x.x}, {&h.a.y, &x.y}, {&h.a.z, &x.z}, {&h.b, nullptr}};
    mpz_class n[4], d[4];
    for (int k = 0; k < 4; ++k) {
        if (num[k][1]) {
            n[k] = num[k][0]->get_num() * num[k][1]->get_num();
            d[k] = num[k][0]->get_den() * num[k][1]->get_den();
        } else {
            n[k] = -num[k][0]->get_num();
            d[k] = num[k][0]->get_den();
        }
    }
    mpz_class total = 0;
    for (int k = 0; k < 4; ++k) {
        if (sgn(n[k]) == 0) continue;
        mpz_class term = n[k];
        for (int j = 0; j < 4; ++j)
            if (j != k && d[j] != 1) term *= d[j];
        total += term;
    }
    return sgn(total) > 0 ? 1 : (sgn(total) < 0 ? -1 : 0);
}

Vec3 primitive_direction(const Vec3& v) {
    if (v.is_zero()) throw Error("DegenerateInput", "zero direction");
    Plane c = canonical({v, 0});
    return c.a;
}

Line3 line_through(const Point3& p, const Point3& q) {
    if (p == q) throw Error("DegenerateInput", "coincident points define no line");
    return {p, primitive_direction(q - p)};
}

Point3 line_plane_point(const Line3& l, const Plane& h) {
    Rational d = dot(h.a, l.dir);
    if (sgn(d) == 0) throw Error("ParallelElements", "line parallel to plane");
    Rational t = (h.b - dot(h.a, l.base)) / d;
    return l.base + t * l.dir;
}

Vec3 solve3(const Vec3& r0, const Vec3& r1, const Vec3& r2, const Vec3& rhs) {
    Rational D = det3(r0, r1, r2);
    if (sgn(D) == 0) throw Error("ParallelElements", "singular 3x3 system");
    // Cramer on the transposed column layout
    Vec3 c0(r0.x, r1.x, r2.x), c1(r0.y, r1.y, r2.y), c2(r0.z, r1.z, r2.z);
    return {det3(rhs, c1, c2) / D, det3(c0, rhs, c2) / D, det3(c0, c1, rhs) / D};
}

Line3 planes_line(const Plane& h1, const Plane& h2) {
    Vec3 d = cross(h1.a, h2.a);
    if (d.is_zero()) throw Error("ParallelElements", "parallel planes");
    Point3 p = solve3(h1.a, h2.a, d, {h1.b, h2.b, Rational(0)});
    return {p, primitive_direction(d)};
}

Point3 planes_point(const Plane& h1, const Plane& h2, const Plane& h3) {
    return solve3(h1.a, h2.a, h3.a, {h1.b, h2.b, h3.b});
}

void UniPoly::trim() {
    while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
}

Rational UniPoly::operator()(const Rational& e) const {
    Rational r = 0;
    for (size_t k = c.size(); k-- > 0;) r = r * e + c[k];
    return r;
}

UniPoly operator+(const UniPoly& p, const UniPoly& q) {
    std::vector<Rational> r(std::max(p.c.size(), q.c.size()), Rational(0));
    for (size_t k = 0; k < p.c.size(); ++k) r[k] += p.c[k];
    for (size_t k = 0; k < q.c.size(); ++k) r[k] += q.c[k];
    return UniPoly(std::move(r));
}

UniPoly operator-(const UniPoly& p, const UniPoly& q) {
    std::vector<Rational> r(std::max(p.c.size(), q.c.size()), Rational(0));
    for (size_t k = 0; k < p.c.size(); ++k) r[k] += p.c[k];
    for (size_t k = 0; k < q.c.size(); ++k) r[k] -= q.c[k];
    return UniPoly(std::move(r));
}

UniPoly operator*(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<Rational> r(p.c.size() + q.c.size() - 1, Rational(0));
    for (size_t i = 0; i < p.c.size(); ++i)
        for (size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
    return UniPoly(std::move(r));
}

Rational eps_threshold(const UniPoly& p) {
    if (p.is_zero() || sgn(p.c[0]) <= 0) throw Error("NonPositiveAtZero");
    Rational s = 0;
    for (size_t k = 1; k < p.c.size(); ++k) s += abs(p.c[k]);
    if (sgn(s) == 0) return 1;
    Rational r = p.c[0] / (2 * s);
    return r < 1 ? r : Rational(1);
}

Rational eps_threshold_all(const std::vector<UniPoly>& ps) {
    Rational best = 1;
    for (size_t i = 0; i < ps.size(); ++i) {
        try {
            Rational r = eps_threshold(ps[i]);
            if (r < best) best = r;
        } catch (const Error& e) {
            throw Error(e.kind(), "condition " + std::to_string(i));
        }
    }
    return best;
}

Rational eps_threshold_leading(const UniPoly& p) {
    size_t k = 0;
    while (k < p.c.size() && sgn(p.c[k]) == 0) ++k;
    if (k == p.c.size()) throw Error("NonPositiveAtZero", "identically zero condition");
    return eps_threshold(UniPoly(std::vector<Rational>(p.c.begin() + k, p.c.end())));
}

Rational eps_threshold_leading_all(const std::vector<UniPoly>& ps) {
    Rational best = 1;
    for (size_t i = 0; i < ps.size(); ++i) {
        try {
            Rational r = eps_threshold_leading(ps[i]);
            if (r < best) best = r;
        } catch (const Error& e) {
            throw Error(e.kind(), "condition " + std::to_string(i));
        }
    }
    return best;
}

Rational round_down_pow2(const Rational& r) {
    if (sgn(r) <= 0) throw Error("NonPositiveAtZero", "threshold must be positive");
    Rational p = 1;
    while (p > r) p /= 2;
    return p;
}

UniPoly interpolate(const std::function<Rational(const Rational&)>& f, int degree) {
    // Newton divided differences at eps = 0, 1, ..., degree
    int n = degree + 1;
    std::vector<Rational> xs(n), dd(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = i;
        dd[i] = f(xs[i]);
    }
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    UniPoly p({dd[n - 1]});
    for (int i = n - 2; i >= 0; --i) p = p * UniPoly({-xs[i], Rational(1)}) + UniPoly({dd[i]});
    return p;
}

Point3 QuadCurve::operator()(const Rational& t) const { return a + t * b + (t * t) * c; }

QuadCurve parabola_through(const Point3& p0, const Point3& p1, const Point3& p2,
                           const Rational& t0, const Rational& t1, const Rational& t2) {
    if (t0 == t1 || t0 == t2 || t1 == t2) throw Error("DuplicateParameters");
    if (cross(p1 - p0, p2 - p0).is_zero()) throw Error("CollinearPoints");
    // Lagrange form collected into monomials
    const Point3* p[3] = {&p0, &p1, &p2};
    const Rational* t[3] = {&t0, &t1, &t2};
    QuadCurve q{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int i = 0; i < 3; ++i) {
        const Rational& u = *t[(i + 1) % 3];
        const Rational& v = *t[(i + 2) % 3];
        Rational den = (*t[i] - u) * (*t[i] - v);
        q.a = q.a + (u * v / den) * *p[i];
        q.b = q.b + (-(u + v) / den) * *p[i];
        q.c = q.c + (Rational(1) / den) * *p[i];
    }
    return q;
}

namespace {

// Drops the coordinate where the normal is largest in magnitude.
int drop_axis(const Vec3& n) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (abs(n[i]) > abs(n[k])) k = i;
    return k;
}

struct P2 {
    Rational u, v;
};

P2 project(const Point3& p, int drop) {
    if (drop == 0) return {p.y, p.z};
    if (drop == 1) return {p.z, p.x};
    return {p.x, p.y};
}

Rational orient2(const P2& a, const P2& b, const P2& c) {
    return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

}  // namespace

bool segment_meets_triangle_relint(const Point3& s0, const Point3& s1, const Point3& t0,
                                   const Point3& t1, const Point3& t2) {
    Vec3 n = cross(t1 - t0, t2 - t0);
    if (n.is_zero()) throw Error("DegenerateTriangle");
    int o0 = orient4(t0, t1, t2, s0), o1 = orient4(t0, t1, t2, s1);
    if (o0 != 0 || o1 != 0) {
        if (o0 * o1 >= 0) return false;
        int a = orient4(s0, s1, t0, t1), b = orient4(s0, s1, t1, t2), c = orient4(s0, s1, t2, t0);
        return a != 0 && a == b && b == c;
    }
    int drop = drop_axis(n);
    P2 a = project(t0, drop), b = project(t1, drop), c = project(t2, drop);
    if (sgn(orient2(a, b, c)) < 0) std::swap(b, c);
    P2 p = project(s0, drop), q = project(s1, drop);
    if (s0 == s1) {
        return sgn(orient2(a, b, p)) > 0 && sgn(orient2(b, c, p)) > 0 && sgn(orient2(c, a, p)) > 0;
    }
    // open interval of t in (0,1) where all three edge functions are positive
    Rational lo = 0, hi = 1;
    const P2* e[3][2] = {{&a, &b}, {&b, &c}, {&c, &a}};
    for (auto& ed : e) {
        Rational f0 = orient2(*ed[0], *ed[1], p), f1 = orient2(*ed[0], *ed[1], q);
        Rational slope = f1 - f0;
        if (sgn(slope) == 0) {
            if (sgn(f0) <= 0) return false;
            continue;
        }
        Rational root = -f0 / slope;
        if (sgn(slope) > 0) {
            if (root > lo) lo = root;
        } else if (root < hi) {
            hi = root;
        }
    }
    return lo < hi;
}

namespace {

bool separated_on(const Vec3& n, const std::vector<Point3>& A, const std::vector<Point3>& B, bool strict) {
    if (n.is_zero()) return false;
    Rational amax = dot(n, A[0]), amin = amax, bmax = dot(n, B[0]), bmin = bmax;
    for (const auto& p : A) {
        Rational d = dot(n, p);
        if (d > amax) amax = d;
        if (d < amin) amin = d;
    }
    for (const auto& p : B) {
        Rational d = dot(n, p);
        if (d > bmax) bmax = d;
        if (d < bmin) bmin = d;
    }
    if (strict) return amax < bmin || bmax < amin;
    return amax <= bmin || bmax <= amin;
}

// Face normals of either hull, then cross products of edge pairs; stops at the first separating axis.
bool any_separating_axis(const std::vector<Point3>& A, const std::vector<Point3>& B, bool strict) {
    std::vector<Vec3> da, db;
    for (const auto* S : {&A, &B}) {
        const auto& P = *S;
        for (size_t i = 0; i < P.size(); ++i)
            for (size_t j = i + 1; j < P.size(); ++j) {
                (S == &A ? da : db).push_back(P[j] - P[i]);
                for (size_t k = j + 1; k < P.size(); ++k)
                    if (separated_on(cross(P[j] - P[i], P[k] - P[i]), A, B, strict)) return true;
            }
    }
    for (const auto& u : da)
        for (const auto& v : db)
            if (separated_on(cross(u, v), A, B, strict)) return true;
    return false;
}

}  // namespace

bool hulls_strictly_separated(const std::vector<Point3>& A, const std::vector<Point3>& B) {
    return any_separating_axis(A, B, true);
}

bool hulls_weakly_separated(const std::vector<Point3>& A, const std::vector<Point3>& B) {
    return any_separating_axis(A, B, false);
}

static void require_solid(const Tet& t) {
    if (orient4(t[0], t[1], t[2], t[3]) == 0) throw Error("DegenerateTetrahedron");
}

bool tetra_open_intersect(const Tet& t1, const Tet& t2) {
    require_solid(t1);
    require_solid(t2);
    return !hulls_weakly_separated({t1.begin(), t1.end()}, {t2.begin(), t2.end()});
}

bool tetra_closed_disjoint(const Tet& t1, const Tet& t2) {
    require_solid(t1);
    require_solid(t2);
    return hulls_strictly_separated({t1.begin(), t1.end()}, {t2.begin(), t2.end()});
}

bool point_in_closed_simplex(const Point3& x, const std::vector<Point3>& s) {
    switch (s.size()) {
    case 1:
        return x == s[0];
    case 2: {
        Vec3 d = s[1] - s[0], w = x - s[0];
        if (d.is_zero()) return w.is_zero();
        if (!cross(d, w).is_zero()) return false;
        Rational t = dot(w, d), dd = dot(d, d);
        return sgn(t) >= 0 && t <= dd;
    }
    case 3: {
        if (orient4(s[0], s[1], s[2], x) != 0) return false;
        Vec3 n = cross(s[1] - s[0], s[2] - s[0]);
        if (n.is_zero()) return false;
        for (int i = 0; i < 3; ++i) {
            Vec3 e = cross(s[(i + 1) % 3] - s[i], x - s[i]);
            if (sgn(dot(e, n)) < 0) return false;
        }
        return true;
    }
    case 4: {
        int o = orient4(s[0], s[1], s[2], s[3]);
        if (o == 0) return false;
        for (int i = 0; i < 4; ++i) {
            auto q = s;
            q[i] = x;
            if (orient4(q[0], q[1], q[2], q[3]) * o < 0) return false;
        }
        return true;
    }
    default:
        throw Error("DegenerateInput", "simplex must have 1 to 4 vertices");
    }
}

}  // namespace smalltri
