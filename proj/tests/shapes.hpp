#pragma once

// Small polytopes shared by the test programs.

#include <random>
#include <vector>

#include "smalltri/polytope.hpp"

namespace shapes {

using smalltri::Point3;
using smalltri::Rational;

inline std::vector<Point3> tetrahedron() { return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

inline std::vector<Point3> cube() {
    std::vector<Point3> p;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) p.push_back({x, y, z});
    return p;
}

inline std::vector<Point3> octahedron() {
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

inline std::vector<Point3> triangular_prism() {
    return {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {2, 0, 2}, {0, 2, 2}};
}

// Convex k-gon with integer vertices, extruded to a prism.
inline std::vector<Point3> prism(const std::vector<std::pair<long, long>>& poly) {
    std::vector<Point3> p;
    for (auto [x, y] : poly) p.push_back({x, y, 0});
    for (auto [x, y] : poly) p.push_back({x, y, 3});
    return p;
}

inline std::vector<Point3> pentagonal_prism() { return prism({{0, 0}, {4, 0}, {5, 3}, {2, 5}, {-1, 3}}); }
inline std::vector<Point3> hexagonal_prism() { return prism({{0, 0}, {4, 0}, {6, 3}, {4, 6}, {0, 6}, {-2, 3}}); }

inline std::vector<Point3> square_pyramid() { return {{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}, {1, 1, 2}}; }

inline std::vector<Point3> bipyramid() { return {{0, 0, 0}, {3, 0, 0}, {0, 3, 0}, {1, 1, 2}, {1, 1, -2}}; }

// Icosahedron with the golden ratio replaced by 8/5; all faces stay triangles.
inline std::vector<Point3> icosahedron() {
    Rational g(8, 5);
    std::vector<Point3> p;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            p.push_back({Rational(0), Rational(s1), g * s2});
            p.push_back({Rational(s1), g * s2, Rational(0)});
            p.push_back({g * s2, Rational(0), Rational(s1)});
        }
    return p;
}

// Wedge-like solid: a triangular prism with a tilted roof ridge.
inline std::vector<Point3> wedge() {
    return {{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {4, 4, 0}, {1, 0, 3}, {1, 4, 3}};
}

// Repeatedly places a point just beyond a random facet of a simplex.
inline std::vector<Point3> random_stacked(int stackings, std::mt19937_64& rng) {
    std::vector<Point3> pts = {{0, 0, 0}, {64, 0, 0}, {0, 64, 0}, {0, 0, 64}};
    for (int s = 0; s < stackings; ++s) {
        auto P = smalltri::hull3(pts);
        for (int attempt = 0; attempt < 200; ++attempt) {
            int fi = std::uniform_int_distribution<int>(0, static_cast<int>(P.facets.size()) - 1)(rng);
            const auto& f = P.facets[fi];
            if (f.size() != 3) continue;
            long w[3];
            long tot = 0;
            for (auto& x : w) tot += (x = std::uniform_int_distribution<long>(1, 5)(rng));
            Point3 c(0, 0, 0);
            for (int k = 0; k < 3; ++k) c = c + (Rational(w[k]) / tot) * P.vertices[f[k]];
            Rational step = Rational(1, 1 << std::uniform_int_distribution<int>(4, 9)(rng));
            bool ok = false;
            for (int halve = 0; halve < 40 && !ok; ++halve, step /= 2) {
                Point3 x = c + step * P.facet_planes[fi].a;
                smalltri::Face F(f.begin(), f.end());
                std::sort(F.begin(), F.end());
                if (smalltri::is_beyond(P, F, x)) {
                    pts.push_back(x);
                    ok = true;
                }
            }
            if (ok) break;
        }
    }
    return pts;
}

}  // namespace shapes
