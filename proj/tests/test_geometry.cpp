#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "smalltri/geometry.hpp"

using namespace smalltri;

namespace {

std::mt19937_64 rng(12345);

Rational rand_q(long lo, long hi, long den = 1) {
    std::uniform_int_distribution<long> d(lo, hi), dd(1, den);
    long n = d(rng);
    Rational r(n, dd(rng));
    r.canonicalize();
    return r;
}

Point3 rand_pt(long r = 20, long den = 1) { return {rand_q(-r, r, den), rand_q(-r, r, den), rand_q(-r, r, den)}; }

// Independent nullspace of the 4x5 lifted matrix by Gaussian elimination.
std::vector<Rational> affine_dependence(const std::array<Point3, 5>& x) {
    std::vector<std::vector<Rational>> m(4, std::vector<Rational>(5));
    for (int j = 0; j < 5; ++j) {
        m[0][j] = x[j].x;
        m[1][j] = x[j].y;
        m[2][j] = x[j].z;
        m[3][j] = 1;
    }
    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < 5 && r < 4; ++c) {
        int p = -1;
        for (int i = r; i < 4; ++i)
            if (sgn(m[i][c]) != 0) p = i;
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        for (int i = 0; i < 4; ++i)
            if (i != r && sgn(m[i][c]) != 0) {
                Rational f = m[i][c] / m[r][c];
                for (int k = 0; k < 5; ++k) m[i][k] -= f * m[r][k];
            }
        pivcol.push_back(c);
        ++r;
    }
    int freec = -1;
    for (int c = 0; c < 5; ++c)
        if (std::find(pivcol.begin(), pivcol.end(), c) == pivcol.end()) {
            freec = c;
            break;
        }
    std::vector<Rational> lam(5, Rational(0));
    lam[freec] = 1;
    for (size_t i = 0; i < pivcol.size(); ++i) lam[pivcol[i]] = -m[i][freec] / m[i][pivcol[i]];
    return lam;
}

}  // namespace

TEST_CASE("orient4 examples and antisymmetry") {
    CHECK(orient4({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == 1);
    CHECK(orient4({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {3, 7, 0}) == 0);
    for (int it = 0; it < 1000; ++it) {
        std::array<Point3, 4> p{rand_pt(), rand_pt(), rand_pt(), rand_pt()};
        int s = orient4(p[0], p[1], p[2], p[3]);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                auto q = p;
                std::swap(q[i], q[j]);
                CHECK(orient4(q[0], q[1], q[2], q[3]) == -s);
            }
    }
}

TEST_CASE("Grassmann-Pluecker relation is an identity") {
    int fails = 0;
    for (int it = 0; it < 2000; ++it) {
        auto a = rand_pt(5), b = rand_pt(5), x1 = rand_pt(5), x2 = rand_pt(5), x3 = rand_pt(5), x4 = rand_pt(5);
        fails += !gp_holds(a, b, x1, x2, x3, x4);
    }
    CHECK(fails == 0);
    Point3 o(0, 0, 0);
    CHECK(gp_holds(o, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}, {5, 1, 0}));
    CHECK_FALSE(gp_triple_ok({1, 1, 0}));
    CHECK_FALSE(gp_triple_ok({-1, 0, 0}));
    CHECK(gp_triple_ok({1, -1, 1}));
    CHECK(gp_triple_ok({0, 0, 0}));
}

TEST_CASE("circuit5 examples") {
    std::array<Point3, 5> t{Point3(0, 0, 0), Point3(4, 0, 0), Point3(0, 4, 0), Point3(0, 0, 4), Point3(1, 1, 1)};
    auto c = circuit5(t);
    REQUIRE(c);
    auto small = c->plus.size() == 1 ? c->plus : c->minus;
    auto big = c->plus.size() == 1 ? c->minus : c->plus;
    CHECK(small == std::vector<int>{4});
    CHECK(big == std::vector<int>{0, 1, 2, 3});

    std::array<Point3, 5> q{Point3(0, 0, 0), Point3(2, 2, 2), Point3(2, 0, 0), Point3(0, 2, 2), Point3(7, -3, 11)};
    c = circuit5(q);
    REQUIRE(c);
    CHECK(c->sign[4] == 0);
    auto a = c->plus, b = c->minus;
    if (a.front() != 0) std::swap(a, b);
    CHECK(a == std::vector<int>{0, 1});
    CHECK(b == std::vector<int>{2, 3});

    std::array<Point3, 5> flat{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0), Point3(2, 5, 0)};
    CHECK_FALSE(circuit5(flat));
}

TEST_CASE("circuit5 agrees with an independent affine dependence") {
    for (int it = 0; it < 500; ++it) {
        std::array<Point3, 5> x{rand_pt(6), rand_pt(6), rand_pt(6), rand_pt(6), rand_pt(6)};
        auto c = circuit5(x);
        if (!c) continue;
        auto lam = affine_dependence(x);
        int glob = 0;
        for (int i = 0; i < 5; ++i) {
            int s = sgn(lam[i]) > 0 ? 1 : (sgn(lam[i]) < 0 ? -1 : 0);
            if (c->sign[i] == 0) {
                CHECK(s == 0);
                continue;
            }
            if (glob == 0) glob = s * c->sign[i];
            CHECK(s == glob * c->sign[i]);
        }
        // witness point of the Radon partition
        Rational wp = 0;
        Vec3 pp(0, 0, 0), pm(0, 0, 0);
        Rational wm = 0;
        for (int i = 0; i < 5; ++i) {
            if (sgn(lam[i]) > 0) {
                pp = pp + lam[i] * x[i];
                wp += lam[i];
            } else if (sgn(lam[i]) < 0) {
                pm = pm + (-lam[i]) * x[i];
                wm -= lam[i];
            }
        }
        CHECK(pp / wp == pm / wm);
    }
}

TEST_CASE("eps_threshold") {
    CHECK(eps_threshold(UniPoly({Rational(1)})) == 1);
    CHECK(eps_threshold(UniPoly({Rational(1), Rational(-4)})) == Rational(1, 8));
    CHECK(eps_threshold(UniPoly({Rational(2), Rational(3), Rational(-5)})) == Rational(1, 8));
    CHECK_THROWS_AS(eps_threshold(UniPoly({Rational(0), Rational(1)})), Error);
    CHECK(eps_threshold_all({UniPoly({Rational(1), Rational(-4)}), UniPoly({Rational(2), Rational(3), Rational(-5)})}) ==
          Rational(1, 8));
    CHECK(eps_threshold_all({UniPoly({Rational(1)})}) == 1);
    try {
        eps_threshold_all({UniPoly({Rational(1)}), UniPoly({Rational(-1)})});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == "NonPositiveAtZero");
        CHECK(std::string(e.what()).find("condition 1") != std::string::npos);
    }
    CHECK(eps_threshold_leading(UniPoly({Rational(0), Rational(0), Rational(3), Rational(-6)})) == Rational(1, 4));
    CHECK(round_down_pow2(Rational(3, 10)) == Rational(1, 4));
    CHECK(round_down_pow2(Rational(1)) == 1);
}

TEST_CASE("eps_threshold positivity on random polynomials") {
    std::vector<UniPoly> all;
    for (int it = 0; it < 300; ++it) {
        int deg = std::uniform_int_distribution<int>(0, 8)(rng);
        std::vector<Rational> c(deg + 1);
        c[0] = rand_q(1, 1000000);
        for (int k = 1; k <= deg; ++k) c[k] = rand_q(-1000000, 1000000);
        UniPoly p(c);
        Rational r = eps_threshold(p);
        for (Rational e : std::vector<Rational>{r, r / 2, r / 10, r / 1000000}) CHECK(sgn(p(e)) > 0);
        all.push_back(p);
    }
    Rational r = eps_threshold_all(all);
    for (int g = 1; g <= 50; ++g)
        for (const auto& p : all) REQUIRE(sgn(p(r * Rational(g, 50))) > 0);
}

TEST_CASE("interpolate recovers polynomials") {
    UniPoly p({Rational(3), Rational(-2, 7), Rational(0), Rational(5)});
    UniPoly q = interpolate([&](const Rational& e) { return p(e); }, 5);
    CHECK(q.c == p.c);
}

TEST_CASE("plane and line constructors") {
    Plane h = plane_through({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    CHECK(h.a == Vec3(0, 0, 1));
    CHECK(h.b == 0);
    CHECK(side(h, {0, 0, 1}) == 1);
    for (int it = 0; it < 200; ++it) {
        auto p = rand_pt(), q = rand_pt(), r = rand_pt(), x = rand_pt();
        if (orient4(p, q, r, rand_pt()) == 0 && cross(q - p, r - p).is_zero()) continue;
        if (cross(q - p, r - p).is_zero()) continue;
        CHECK(side(plane_through(p, q, r), x) == orient4(p, q, r, x));
    }
    Plane z5 = canonical({{0, 0, 2}, 10});
    CHECK(z5.a == Vec3(0, 0, 1));
    CHECK(z5.b == 5);
    CHECK(canonical({{Rational(-1, 2), 0, 0}, 3}).a == Vec3(-1, 0, 0));
    CHECK(unoriented_key({{Rational(-1, 2), 0, 0}, 3}).a == Vec3(1, 0, 0));
    CHECK(line_plane_point({{0, 0, 0}, {0, 0, 1}}, z5) == Point3(0, 0, 5));
    Line3 l = planes_line({{1, 0, 0}, 0}, {{0, 1, 0}, 0});
    CHECK(l.base == Point3(0, 0, 0));
    CHECK((l.dir == Vec3(0, 0, 1) || l.dir == Vec3(0, 0, -1)));
    CHECK_THROWS_AS(planes_line({{1, 0, 0}, 0}, {{2, 0, 0}, 1}), Error);
    CHECK_THROWS_AS(line_plane_point({{0, 0, 0}, {1, 0, 0}}, z5), Error);
    CHECK_THROWS_AS(plane_through({0, 0, 0}, {1, 1, 1}, {2, 2, 2}), Error);
}

TEST_CASE("parabola_through") {
    QuadCurve q = parabola_through({0, 0, 0}, {1, 1, 0}, {2, 0, 0}, 0, Rational(1, 2), 1);
    CHECK(q(Rational(1, 2)) == Point3(1, 1, 0));
    CHECK_THROWS_AS(parabola_through({0, 0, 0}, {1, 1, 1}, {2, 2, 2}, 0, 1, 2), Error);
    CHECK_THROWS_AS(parabola_through({0, 0, 0}, {1, 1, 0}, {2, 0, 0}, 0, 0, 1), Error);
    for (int it = 0; it < 50; ++it) {
        auto p0 = rand_pt(), p1 = rand_pt(), p2 = rand_pt();
        if (cross(p1 - p0, p2 - p0).is_zero()) continue;
        QuadCurve c = parabola_through(p0, p1, p2, 0, Rational(1, 2), 1);
        CHECK(c(0) == p0);
        CHECK(c(1) == p2);
        std::vector<Point3> s;
        for (int k = 0; k < 20; ++k) s.push_back(c(Rational(k, 19)));
        for (const auto& x : s) CHECK(orient4(p0, p1, p2, x) == 0);
        // convex position: consecutive triples turn the same way inside the plane
        Vec3 n = cross(p1 - p0, p2 - p0);
        int turn = 0;
        for (size_t i = 0; i + 2 < s.size(); ++i) {
            int t = sign_of(dot(cross(s[i + 1] - s[i], s[i + 2] - s[i + 1]), n));
            CHECK(t != 0);
            if (turn == 0) turn = t;
            CHECK(t == turn);
        }
        // chord planes separate the arc between the chord ends from the rest
        for (int l = 0; l < 19; l += 3)
            for (int r = l + 2; r < 20; r += 4) {
                Plane h = plane_through(s[l], s[r], s[l] + n);
                int inner = side(h, s[l + 1]);
                CHECK(inner != 0);
                for (int k = 0; k < 20; ++k) {
                    if (k == l || k == r) continue;
                    CHECK(side(h, s[k]) == ((k > l && k < r) ? inner : -inner));
                }
            }
    }
}

TEST_CASE("segment_meets_triangle_relint examples") {
    Point3 a(-1, -1, 0), b(2, 0, 0), c(0, 2, 0);
    CHECK(segment_meets_triangle_relint({0, 0, -1}, {0, 0, 1}, a, b, c));
    CHECK_FALSE(segment_meets_triangle_relint({2, 0, -1}, {2, 0, 1}, a, b, c));
    CHECK_FALSE(segment_meets_triangle_relint({2, 0, 0}, {2, 0, 5}, a, b, c));
    CHECK(segment_meets_triangle_relint({-5, Rational(1, 3), 0}, {5, Rational(1, 3), 0}, a, b, c));
    CHECK_FALSE(segment_meets_triangle_relint({-5, -1, 0}, {5, -1, 0}, a, b, c));
    CHECK_FALSE(segment_meets_triangle_relint({-1, -1, 0}, {2, 0, 0}, a, b, c));
    CHECK_THROWS_AS(segment_meets_triangle_relint({0, 0, 0}, {1, 1, 1}, a, a, c), Error);
}

TEST_CASE("segment_meets_triangle_relint matches a parametric oracle") {
    auto oracle = [](const Point3& s0, const Point3& s1, const Point3& t0, const Point3& t1, const Point3& t2) {
        Vec3 d = s1 - s0, e1 = t1 - t0, e2 = t2 - t0;
        Rational D = det3(d, -e1, -e2);
        if (sgn(D) != 0) {
            // s0 + t d = t0 + u e1 + v e2
            Vec3 rhs = t0 - s0;
            Rational t = det3(rhs, -e1, -e2) / D, u = det3(d, rhs, -e2) / D, v = det3(d, -e1, rhs) / D;
            return sgn(t) > 0 && t < 1 && sgn(u) > 0 && sgn(v) > 0 && u + v < 1;
        }
        Vec3 n = cross(e1, e2);
        if (orient4(t0, t1, t2, s0) != 0) return false;
        auto inside = [&](const Point3& x) {
            const Point3* v[3] = {&t0, &t1, &t2};
            for (int i = 0; i < 3; ++i)
                if (sgn(dot(cross(*v[(i + 1) % 3] - *v[i], x - *v[i]), n)) <= 0) return false;
            return true;
        };
        std::vector<Rational> br{0, 1};
        const Point3* v[3] = {&t0, &t1, &t2};
        for (int i = 0; i < 3; ++i) {
            Rational f0 = dot(cross(*v[(i + 1) % 3] - *v[i], s0 - *v[i]), n);
            Rational f1 = dot(cross(*v[(i + 1) % 3] - *v[i], s1 - *v[i]), n);
            if (f0 != f1) {
                Rational r = f0 / (f0 - f1);
                if (sgn(r) > 0 && r < 1) br.push_back(r);
            }
        }
        std::sort(br.begin(), br.end());
        for (size_t i = 0; i + 1 < br.size(); ++i)
            if (br[i] < br[i + 1] && inside(lerp(s0, s1, (br[i] + br[i + 1]) / 2))) return true;
        return false;
    };
    int coplanar = 0, hits = 0;
    for (int it = 0; it < 1000; ++it) {
        Point3 t0 = rand_pt(4), t1 = rand_pt(4), t2 = rand_pt(4);
        if (cross(t1 - t0, t2 - t0).is_zero()) continue;
        Point3 s0 = rand_pt(4), s1 = rand_pt(4);
        if (it % 3 == 0) {
            // force coplanarity with the triangle
            s0 = t0 + rand_q(-2, 2) * (t1 - t0) + rand_q(-2, 2, 2) * (t2 - t0);
            s1 = t0 + rand_q(-2, 2, 3) * (t1 - t0) + rand_q(-2, 2) * (t2 - t0);
            if (s0 == s1) continue;
            ++coplanar;
        }
        bool got = segment_meets_triangle_relint(s0, s1, t0, t1, t2);
        hits += got;
        CHECK(got == oracle(s0, s1, t0, t1, t2));
    }
    CHECK(coplanar > 100);
    CHECK(hits > 50);
}

TEST_CASE("tetra_open_intersect") {
    Tet t{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)};
    CHECK(tetra_open_intersect(t, t));
    Tet u{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, -1)};
    CHECK_FALSE(tetra_open_intersect(t, u));
    CHECK_FALSE(tetra_closed_disjoint(t, u));
    Tet far{Point3(5, 0, 0), Point3(6, 0, 0), Point3(5, 1, 0), Point3(5, 0, 1)};
    CHECK(tetra_closed_disjoint(t, far));
    // interlocking pair: an edge of each passes through the other
    Tet a{Point3(-2, 0, 0), Point3(2, 0, 0), Point3(0, 2, 1), Point3(0, -2, 1)};
    Tet b{Point3(0, -2, 0), Point3(0, 2, 0), Point3(2, 0, 1), Point3(-2, 0, 1)};
    CHECK(tetra_open_intersect(a, b));
    Tet flat{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0)};
    CHECK_THROWS_AS(tetra_open_intersect(t, flat), Error);
}

TEST_CASE("tetra_open_intersect agrees with sampled witnesses") {
    auto strictly_in = [](const Point3& x, const Tet& t) {
        int o = orient4(t[0], t[1], t[2], t[3]);
        for (int i = 0; i < 4; ++i) {
            Tet q = t;
            q[i] = x;
            if (orient4(q[0], q[1], q[2], q[3]) != o) return false;
        }
        return true;
    };
    int witnessed = 0, positive = 0;
    for (int it = 0; it < 300; ++it) {
        Tet a{rand_pt(3), rand_pt(3), rand_pt(3), rand_pt(3)};
        Tet b{rand_pt(3), rand_pt(3), rand_pt(3), rand_pt(3)};
        if (orient4(a[0], a[1], a[2], a[3]) == 0 || orient4(b[0], b[1], b[2], b[3]) == 0) continue;
        bool got = tetra_open_intersect(a, b);
        positive += got;
        bool wit = false;
        std::vector<Point3> all(a.begin(), a.end());
        all.insert(all.end(), b.begin(), b.end());
        for (int s = 0; s < 400 && !wit; ++s) {
            std::vector<long> w(8);
            long tot = 0;
            for (auto& x : w) tot += (x = std::uniform_int_distribution<long>(0, 6)(rng));
            if (tot == 0) continue;
            Vec3 p(0, 0, 0);
            for (int k = 0; k < 8; ++k) p = p + (Rational(w[k]) / tot) * all[k];
            wit = strictly_in(p, a) && strictly_in(p, b);
        }
        if (wit) CHECK(got);
        witnessed += wit;
        if (got) CHECK_FALSE(tetra_closed_disjoint(a, b));
    }
    CHECK(witnessed > positive / 2);
}

TEST_CASE("point_in_closed_simplex") {
    CHECK(point_in_closed_simplex({1, 0, 0}, {{0, 0, 0}, {2, 0, 0}}));
    CHECK_FALSE(point_in_closed_simplex({3, 0, 0}, {{0, 0, 0}, {2, 0, 0}}));
    CHECK(point_in_closed_simplex({1, 1, 0}, {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}}));
    CHECK_FALSE(point_in_closed_simplex({1, 1, 1}, {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}}));
    CHECK(point_in_closed_simplex({0, 0, 0}, {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}}));
    CHECK_FALSE(point_in_closed_simplex({-1, 0, 0}, {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}}));
    // repeated endpoints collapse to a point
    CHECK_FALSE(point_in_closed_simplex({0, 0, 0}, {{-1, 1, 0}, {-1, 1, 0}}));
    CHECK(point_in_closed_simplex({-1, 1, 0}, {{-1, 1, 0}, {-1, 1, 0}}));
}

TEST_CASE("parse_rational round trip") {
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("1.5"), Error);
    CHECK_THROWS_AS(parse_rational("/3"), Error);
}
