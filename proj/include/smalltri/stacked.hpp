#pragma once

#include <optional>
#include <vector>

#include "smalltri/triangulation.hpp"

namespace smalltri {

// Leaf: at most k+1 vertices. Node: a separator whose removal disconnects the
// graph, one child per component (the component plus the separator, completed).
struct StackedCertificate {
    std::vector<int> vertices;  // sorted
    std::vector<int> separator;  // empty at a leaf
    std::vector<StackedCertificate> children;

    bool leaf() const { return separator.empty(); }
};

// k-decomposability of a connected graph; throws Disconnected.
std::optional<StackedCertificate> is_stacked_graph(const Graph& g, int k = 3);

// Cuts P along the separator triangles of cert; n - 3 tetrahedra. Throws
// NonRealizableCut when a separator plane does not split P cleanly.
Triangulation stacked_triangulation(const Polytope3& P, const StackedCertificate& cert);

enum class MinorKind { Octahedron, PentagonalPrism };

std::optional<MinorKind> forbidden_minor(const Graph& g);

const char* to_string(MinorKind k);

}  // namespace smalltri
