#pragma once

#include <string>
#include <vector>

#include "smalltri/gadget.hpp"

namespace smalltri {

struct CnfFormula {
    int V = 0;
    std::vector<std::vector<int>> clauses;  // signed variable ids, 1-based
};

// Every variable occurs exactly twice positive and once negative.
struct RestrictedFormula : CnfFormula {
    // source[v-1] = original variable of v, negated when the variable was flipped
    std::vector<int> source;
};

bool is_restricted(const CnfFormula& f);

// Flips, pure-variable deletion and resolution of once/once variables to a fixpoint.
// Throws EmptyClauseProduced, Unsupported or TriviallySatisfied.
RestrictedFormula normalize(const CnfFormula& f);

struct Params {
    long C = 0, V = 0;
    long p_T = 0, p_n = 0;
    long m = 0, n = 0, K = 0;
};
Params params(long C, long V);

using Assignment = std::vector<bool>;  // index v-1 holds X_v
bool satisfies(const CnfFormula& f, const Assignment& a);

struct Roof {
    int zT = -1, zF = -1, zL = -1, zR = -1, zA = -1, zB = -1;
};

// x1 and x2 are the positive occurrences (l1 < l2), x3 the negated one; clauses 1-based.
struct LiteralRoles {
    int x1 = -1, x2 = -1, x3 = -1;
    int l1 = 0, l2 = 0, l3 = 0;
};

struct LogicalPolytope {
    Polytope3 polytope;
    RestrictedFormula formula;
    Params params;
    int m = 0;  // chain length actually used
    std::vector<int> spine;  // c_0 .. c_2C
    std::vector<Roof> roofs;
    std::vector<LiteralRoles> literals;
    std::vector<CupolaRecord> var_cupolas, clause_cupolas;
    Rational t_roof, t_literal, t_even, t_odd;
    std::vector<std::vector<Rational>> var_eps, clause_eps;
};

struct BuildOptions {
    int m = -1;  // -1: the value from params
};

LogicalPolytope build_logical_polytope(const RestrictedFormula& f, const BuildOptions& opt = {});

// Facets of the frame before the cupolas, in the indices of lp.
std::vector<Face> frame_facets(const LogicalPolytope& lp);

struct ConditionReport {
    bool convexity = false, visibility = false, blocking = false, nonblocking = false, sweeping = false;
    std::vector<std::string> notes;  // one line per violation
    bool all() const { return convexity && visibility && blocking && nonblocking && sweeping; }
};

ConditionReport check_logical_conditions(const LogicalPolytope& lp);

struct Extraction {
    Assignment assignment;
    bool satisfies = false;
};

// Reads X_i from the apex over the skylight of the i-th variable cupola.
Extraction extract_assignment(const LogicalPolytope& lp, const Triangulation& T);

// Sweep from right to left; throws UnsatisfiedAssignment or OpenClauseAtEnd.
Triangulation sweep_triangulate(const LogicalPolytope& lp, const Assignment& a);

}  // namespace smalltri
