#pragma once

#include <string>

#include "smalltri/reduction.hpp"
#include "smalltri/stacked.hpp"

namespace smalltri {

// Duplicate literals collapse; throws SyntaxError, HeaderMismatch, TautologicalClause.
CnfFormula parse_dimacs(const std::string& text);
std::string print_dimacs(const CnfFormula& f);

// "polytope3 nv nf", then "v x y z" and "f k i1 .. ik" lines.
std::string print_polytope(const Polytope3& P);
Polytope3 parse_polytope(const std::string& text);

// "triangulation nt", then "t i j k l" lines.
std::string print_triangulation(const Triangulation& T);
Triangulation parse_triangulation(const std::string& text);

// "graph n m", then "e u v" lines.
std::string print_graph(const Graph& g);
Graph parse_graph(const std::string& text);

// Role map records: param, spine, roof, literal, cupola (frame and chains), cone.
std::string print_roles(const LogicalPolytope& lp);
// Fills the roles of lp; lp.polytope and lp.formula must already be set.
void parse_roles(const std::string& text, LogicalPolytope& lp);

// Directory layout: polytope.txt, roles.txt, formula.cnf, params.json.
void save_logical(const std::string& dir, const LogicalPolytope& lp);
LogicalPolytope load_logical(const std::string& dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

std::string print_certificate(const StackedCertificate& c);

}  // namespace smalltri
