#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "shapes.hpp"
#include "smalltri/polytope.hpp"

using namespace smalltri;

namespace {

std::mt19937_64 rng(777);

long rint(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

// Supporting planes found by brute force over all point triples.
std::set<std::vector<Rational>> brute_facet_planes(const std::vector<Point3>& pts) {
    std::set<std::vector<Rational>> out;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                if (cross(pts[j] - pts[i], pts[k] - pts[i]).is_zero()) continue;
                Plane h = plane_through(pts[i], pts[j], pts[k]);
                int pos = 0, neg = 0;
                for (const auto& p : pts) {
                    int s = side(h, p);
                    pos += s > 0;
                    neg += s < 0;
                }
                if (pos && neg) continue;
                Plane u = unoriented_key(h);
                out.insert({u.a.x, u.a.y, u.a.z, u.b});
            }
    return out;
}

}  // namespace

TEST_CASE("hull3 examples") {
    auto t = hull3(shapes::tetrahedron());
    CHECK(t.size() == 4);
    CHECK(t.facets.size() == 4);
    auto c = hull3(shapes::cube());
    CHECK(c.size() == 8);
    CHECK(c.facets.size() == 6);
    for (const auto& f : c.facets) CHECK(f.size() == 4);
    CHECK(c.edges().size() == 12);
    auto pts = shapes::cube();
    pts.push_back({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    auto cc = hull3_indexed(pts);
    CHECK(cc.poly.size() == 8);
    CHECK(std::find(cc.source.begin(), cc.source.end(), 8) == cc.source.end());
    CHECK(audit_polytope(c) == "");
    CHECK_THROWS_AS(hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), Error);
    // a point in the middle of an edge and one in the middle of a facet are dropped
    pts = shapes::cube();
    pts.push_back({Rational(1, 2), 0, 0});
    pts.push_back({Rational(1, 2), Rational(1, 2), 0});
    auto c2 = hull3(pts);
    CHECK(c2.size() == 8);
    CHECK(audit_polytope(c2) == "");
}

TEST_CASE("hull3 matches brute-force supporting planes") {
    for (int it = 0; it < 60; ++it) {
        std::vector<Point3> pts;
        int n = static_cast<int>(rint(5, 14));
        // small grid forces coplanarities and collinearities
        for (int i = 0; i < n; ++i) pts.push_back({rint(-2, 2), rint(-2, 2), rint(-2, 2)});
        HullResult h;
        try {
            h = hull3_indexed(pts);
        } catch (const Error& e) {
            CHECK(e.kind() == "DegenerateSpan");
            continue;
        }
        CHECK(audit_polytope(h.poly) == "");
        std::set<std::vector<Rational>> got;
        for (const auto& pl : h.poly.facet_planes) {
            Plane u = unoriented_key(pl);
            got.insert({u.a.x, u.a.y, u.a.z, u.b});
        }
        CHECK(got == brute_facet_planes(pts));
        // every input point is inside the closed hull
        for (const auto& p : pts) CHECK(inside_closed(h.poly, p));
        CHECK(is_three_connected(skeleton(h.poly)));
    }
}

TEST_CASE("volume") {
    CHECK(volume(hull3(shapes::cube())) == 1);
    CHECK(volume(hull3(shapes::tetrahedron())) == Rational(1, 6));
    auto pts = shapes::cube();
    for (auto& p : pts) p = Rational(2) * p;
    CHECK(volume(hull3(pts)) == 8);
    for (int it = 0; it < 20; ++it) {
        std::vector<Point3> q;
        for (int i = 0; i < 9; ++i) q.push_back({rint(-5, 5), rint(-5, 5), rint(-5, 5)});
        Rational v;
        try {
            v = volume(hull3(q));
        } catch (const Error&) {
            continue;
        }
        std::shuffle(q.begin(), q.end(), rng);
        CHECK(volume(hull3(q)) == v);
        q.push_back(centroid(q));
        CHECK(volume(hull3(q)) == v);
    }
}

TEST_CASE("is_beyond") {
    auto c = hull3(shapes::cube());
    int top = -1;
    for (size_t i = 0; i < c.facets.size(); ++i)
        if (c.facet_planes[i].a == Vec3(0, 0, 1)) top = static_cast<int>(i);
    REQUIRE(top >= 0);
    Face F = c.facets[top];
    std::sort(F.begin(), F.end());
    CHECK(is_beyond(c, F, {Rational(1, 2), Rational(1, 2), Rational(11, 10)}));
    CHECK_FALSE(is_beyond(c, F, {Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    CHECK_FALSE(is_beyond(c, F, {Rational(3, 2), Rational(1, 2), Rational(11, 10)}));
    CHECK_THROWS_AS(is_beyond(c, {0, 7}, {0, 0, 0}), Error);
    // beyond an edge: violates both incident facets
    Face e{F[0], F[1]};
    if (c.facets_containing(e).size() == 2) {
        Point3 m = midpoint(c.vertices[e[0]], c.vertices[e[1]]);
        Point3 out = m + Rational(1, 10) * (m - Point3(Rational(1, 2), Rational(1, 2), Rational(1, 2)));
        CHECK(is_beyond(c, e, out));
    }
}

TEST_CASE("is_beyond keeps the other facets") {
    for (int it = 0; it < 30; ++it) {
        auto c = hull3(shapes::cube());
        int fi = static_cast<int>(rint(0, 5));
        Face F = c.facets[fi];
        std::sort(F.begin(), F.end());
        Point3 x = centroid({c.vertices[F[0]], c.vertices[F[1]], c.vertices[F[2]], c.vertices[F[3]]});
        x = x + Rational(rint(1, 9), 10) * c.facet_planes[fi].a;
        int free_axis = sgn(c.facet_planes[fi].a.x) == 0 ? 0 : 1;
        x[free_axis] += Rational(rint(-3, 3), 10);
        REQUIRE(is_beyond(c, F, x));
        auto pts = c.vertices;
        pts.push_back(x);
        auto h = hull3(pts);
        auto fs = h.facet_set();
        for (size_t j = 0; j < c.facets.size(); ++j) {
            if (static_cast<int>(j) == fi) continue;
            Face g = c.facets[j];
            std::sort(g.begin(), g.end());
            CHECK(fs.count(g) == 1);
        }
    }
}

TEST_CASE("attach_check") {
    std::vector<Point3> base{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    auto up = base, down = base;
    up.push_back({0, 0, 1});
    down.push_back({Rational(1, 4), Rational(1, 4), -1});
    auto P = hull3(up), Q = hull3(down);
    Face F{0, 1, 2};
    CHECK(attach_check(P, Q, F, F));
    auto over = base;
    over.push_back({Rational(1, 4), Rational(1, 4), Rational(1, 2)});
    CHECK_FALSE(attach_check(P, hull3(over), F, F));
}

TEST_CASE("skeleton") {
    auto t = skeleton(hull3(shapes::tetrahedron()));
    CHECK(t.edges.size() == 6);
    auto c = skeleton(hull3(shapes::cube()));
    CHECK(c.edges.size() == 12);
    for (const auto& a : c.adjacency()) CHECK(a.size() == 3);
    auto o = skeleton(hull3(shapes::octahedron()));
    CHECK(o.edges.size() == 12);
    auto adj = o.adjacency();
    for (int v = 0; v < 6; ++v) CHECK(adj[v].size() == 4);
    CHECK(is_three_connected(o));
}
