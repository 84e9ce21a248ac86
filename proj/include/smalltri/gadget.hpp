#pragma once

#include <array>
#include <map>
#include <vector>

#include "smalltri/triangulation.hpp"

namespace smalltri {

// Indices i+1 are taken mod 3 throughout.
struct SchonhardtFrame {
    std::array<Point3, 3> A, B;
};

// Repository constant: A on z = 0, B twisted by (12/13, -5/13) and lifted to z = 10.
SchonhardtFrame canonical_frame();

bool is_schonhardt_position(const SchonhardtFrame& f);

// Open triangular cone: the strictly positive side of all three planes.
struct Cone3 {
    std::array<Plane, 3> planes;

    bool contains(const Point3& x) const;
    Point3 apex() const;
};

Cone3 visibility_cone(const SchonhardtFrame& f);

// conv(x, B1, B2, B3) avoids the relative interior of every diagonal (B_i, A_{i+1}).
bool sees_skylight(const SchonhardtFrame& f, const Point3& x);

// Tries every subset of tetrahedra on the six frame points that fits inside the
// twisted prism; returns the number of candidate tetrahedra and whether any subset
// tiles the body.
struct UntriangulableReport {
    int candidates = 0;
    bool triangulable = false;
};
UntriangulableReport schonhardt_search(const SchonhardtFrame& f);

// Adds m points on a parabola beyond the edge (q0, qend) so that the facets
// (a, q_k, q_k+1) and (b, q_k, q_k+1) appear. Returns the new polytope; the chain
// is reported in order q0, q1, ..., qend as indices of the result.
struct ChainResult {
    Polytope3 poly;
    std::vector<int> chain;
    std::vector<int> old_to_new;  // index map for the vertices of the input
    Rational eps = 0;
};
ChainResult attach_chain(const Polytope3& P, int a, int b, int q0, int qend, const Plane& G, int m);

// Cone over the facet F through the plane H capturing S (vertices of P on H off F)
// and the marked points S' in relint(F) ∩ H, and no other vertex of P.
Cone3 make_visibility_cone(const Polytope3& P, const Face& F, const Plane& H,
                           const std::vector<Point3>& marked);

struct CupolaRecord {
    std::array<int, 3> A{}, B{};
    int m = 0;
    // chains[j] runs A_j, q_1, ..., q_m, B_{j+1}
    std::array<std::vector<int>, 3> chains;
    Face skylight, bottom;
    Cone3 cone;
    std::vector<int> host;  // vertices of the host facet under the bottom
};

struct CupolaBuild {
    Polytope3 poly;
    CupolaRecord rec;
    std::vector<int> old_to_new;
    // lift of the bottom plane, prolongation factor, lift of the skylight plane, chain pulls
    std::vector<Rational> eps;
};

CupolaBuild build_cupola(const Polytope3& P, const Face& F, const Cone3& V, int m,
                         const std::vector<Line3>& lines);

// Chain tetrahedra, then v coned to the non-bottom frame facets and to the lateral
// facets of conv(F_host, bottom).
std::vector<Tetra> triangulate_cupola(const Polytope3& P, const CupolaRecord& rec, int v);

// Empty string when the record describes a cupola of P.
std::string cupola_audit(const Polytope3& P, const CupolaRecord& rec);

SchonhardtFrame frame_of(const Polytope3& P, const CupolaRecord& rec);

}  // namespace smalltri
