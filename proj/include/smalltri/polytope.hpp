#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "smalltri/geometry.hpp"

namespace smalltri {

using Face = std::vector<int>;  // sorted vertex indices
using Edge = std::pair<int, int>;

inline Face make_face(Face f) {
    std::sort(f.begin(), f.end());
    return f;
}

struct Polytope3 {
    std::vector<Point3> vertices;
    std::vector<std::vector<int>> facets;  // CCW seen from outside
    std::vector<Plane> facet_planes;       // interior on the negative side

    int size() const { return static_cast<int>(vertices.size()); }
    std::vector<Edge> edges() const;
    // Indices of facets whose cycle contains every vertex of f.
    std::vector<int> facets_containing(const Face& f) const;
    // Throws UnknownFace unless f is a face (vertex, edge or facet).
    void require_face(const Face& f) const;
    int facet_index(const Face& f) const;  // -1 if f is not a facet
    bool has_facet(const Face& f) const { return facet_index(f) >= 0; }
    std::set<Face> facet_set() const;
};

struct Graph {
    int n = 0;
    std::set<Edge> edges;  // (u, v) with u < v

    void add(int u, int v);
    bool has(int u, int v) const;
    std::vector<std::vector<int>> adjacency() const;
};

struct HullResult {
    Polytope3 poly;
    std::vector<int> source;  // source[v] = index of the input point that became vertex v
};

HullResult hull3_indexed(const std::vector<Point3>& points);
Polytope3 hull3(const std::vector<Point3>& points);

Rational volume(const Polytope3& P);
bool is_beyond(const Polytope3& P, const Face& F, const Point3& x);
// Strict interior test against all facet inequalities.
bool strictly_inside(const Polytope3& P, const Point3& x);
bool inside_closed(const Polytope3& P, const Point3& x);
bool attach_check(const Polytope3& P, const Polytope3& Q, const Face& FP, const Face& FQ);
Graph skeleton(const Polytope3& P);

// Structural audit: Euler relation, planar strictly convex CCW cycles, every vertex
// strictly inside every non-incident facet inequality. Returns an empty string when valid.
std::string audit_polytope(const Polytope3& P);
// Rebuilds facet planes from cycles; throws on malformed input.
void recompute_planes(Polytope3& P);

bool is_three_connected(const Graph& g);

// Adds points that all see the same set of facets of P. The hull is updated
// locally: the visible facets are replaced by the facets of conv(visible part, X)
// through a new point. Vertices of P that stop being extreme are dropped.
struct Extension {
    Polytope3 poly;
    std::vector<int> old_to_new;  // -1 for dropped vertices
    std::vector<int> added;       // index of each new point in poly
};
Extension extend_beyond(const Polytope3& P, const std::vector<Point3>& X);

}  // namespace smalltri
