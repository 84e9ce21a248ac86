#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smalltri/polytope.hpp"

namespace smalltri {

using Tetra = std::array<int, 4>;  // sorted vertex indices

Tetra make_tetra(int a, int b, int c, int d);

struct Triangulation {
    std::vector<Tetra> tets;

    size_t size() const { return tets.size(); }
    std::set<Edge> edge_set() const;
};

struct ValidationFailure {
    std::string kind;  // BadPair, VolumeMismatch, TetraOutside, DegenerateTetra
    std::vector<int> indices;
};

struct ValidationReport {
    bool verdict = true;
    std::vector<ValidationFailure> failures;
    size_t pairs_checked = 0;
};

struct ValidateOptions {
    unsigned threads = 0;      // 0 = hardware concurrency
    size_t max_failures = 50;  // stop collecting bad pairs after this many
};

ValidationReport validate(const Polytope3& P, const Triangulation& T, const ValidateOptions& opt = {});

// Closed intersection of the two tetrahedra equals the simplex on their shared vertices.
bool proper_pair(const Polytope3& P, const Tetra& s, const Tetra& t);

struct BruteOptions {
    std::set<Edge> forbidden_edges;
    std::set<Edge> required_edges;
    std::optional<long> budget;  // search nodes
    int max_vertices = 14;
};

struct BruteResult {
    size_t size = 0;
    Triangulation witness;
    long nodes = 0;
};

BruteResult brute_min(const Polytope3& P, const BruteOptions& opt = {});

Triangulation cone_triangulation(const Polytope3& P, int apex);

struct SizeBounds {
    long lower = 0;
    long total_upper = 0;
    long minimal_upper = 0;
    bool minimal_upper_applies = false;
};
SizeBounds size_bounds(long n);

}  // namespace smalltri
