#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "shapes.hpp"
#include "smalltri/io.hpp"

using namespace smalltri;

namespace {

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

const LogicalPolytope& small_two() {
    static const LogicalPolytope lp = [] {
        RestrictedFormula f;
        f.V = 2;
        f.clauses = {{1, 2}, {1, -2}, {-1, 2}};
        f.source = {1, 2};
        return build_logical_polytope(f, {1});
    }();
    return lp;
}

}  // namespace

TEST_CASE("dimacs parsing") {
    auto f = parse_dimacs("c sample\np cnf 4 3\n1 -2 3 -4 0\n-1 2 -3 4 0\n1 2 3 4 0\n");
    CHECK(f.V == 4);
    REQUIRE(f.clauses.size() == 3);
    CHECK(f.clauses[0] == std::vector<int>{1, -2, 3, -4});
    CHECK(print_dimacs(f) == "p cnf 4 3\n1 -2 3 -4 0\n-1 2 -3 4 0\n1 2 3 4 0\n");

    auto g = parse_dimacs("p cnf 3 2\n3 1 1 0 -2\n 3 0\n");
    CHECK(g.clauses[0] == std::vector<int>{1, 3});
    CHECK(g.clauses[1] == std::vector<int>{-2, 3});

    CHECK(kind_of([] { parse_dimacs("1 2 0\n"); }) == "SyntaxError");
    CHECK(kind_of([] { parse_dimacs("p cnf 2 1\n1 x 0\n"); }) == "SyntaxError");
    CHECK(kind_of([] { parse_dimacs("p cnf 2 1\n1 2\n"); }) == "SyntaxError");
    CHECK(kind_of([] { parse_dimacs("p cnf 2 2\n1 2 0\n"); }) == "HeaderMismatch");
    CHECK(kind_of([] { parse_dimacs("p cnf 2 1\n1 3 0\n"); }) == "HeaderMismatch");
    CHECK(kind_of([] { parse_dimacs("p cnf 2 1\n1 -1 0\n"); }) == "TautologicalClause");
}

TEST_CASE("polytope and triangulation round trips") {
    for (auto pts : {shapes::cube(), shapes::icosahedron(), shapes::pentagonal_prism()}) {
        auto P = hull3(pts);
        std::string s = print_polytope(P);
        auto Q = parse_polytope(s);
        CHECK(print_polytope(Q) == s);
        CHECK(audit_polytope(Q).empty());
        auto T = cone_triangulation(P, 0);
        std::string t = print_triangulation(T);
        CHECK(print_triangulation(parse_triangulation(t)) == t);
        CHECK(validate(Q, parse_triangulation(t)).verdict);
        std::string gs = print_graph(skeleton(P));
        CHECK(print_graph(parse_graph(gs)) == gs);
    }
    CHECK(kind_of([] { parse_polytope("v 0 0 0\n"); }) == "SyntaxError");
    CHECK(kind_of([] { parse_triangulation("triangulation 1\nt 3 2 1 0\n"); }) == "SyntaxError");
    CHECK(kind_of([] { parse_triangulation("triangulation 2\nt 0 1 2 3\n"); }) == "SyntaxError");
    CHECK(kind_of([] { read_file("/nonexistent/none.txt"); }) == "IOError");
}

TEST_CASE("rational coordinates survive printing") {
    Polytope3 P = hull3({{0, 0, 0}, {Rational(1, 3), 0, 0}, {0, Rational(-7, 5), 0}, {0, 0, Rational(22, 7)}});
    auto Q = parse_polytope(print_polytope(P));
    CHECK(Q.vertices == P.vertices);
}

TEST_CASE("logical polytope directory round trip") {
    const auto& lp = small_two();
    auto dir = std::filesystem::temp_directory_path() / "smalltri_io_test";
    std::filesystem::create_directories(dir);
    save_logical(dir.string(), lp);
    auto back = load_logical(dir.string());
    CHECK(print_polytope(back.polytope) == print_polytope(lp.polytope));
    CHECK(print_roles(back) == print_roles(lp));
    CHECK(back.m == lp.m);
    CHECK(back.spine == lp.spine);
    CHECK(check_logical_conditions(back).all());
    auto T = sweep_triangulate(back, {true, true});
    CHECK(validate(back.polytope, T).verdict);
    CHECK(extract_assignment(lp, T).assignment == Assignment{true, true});

    auto roles = read_file((dir / "roles.txt").string());
    LogicalPolytope broken = back;
    CHECK(kind_of([&] { parse_roles(roles.substr(0, roles.size() / 2), broken); }) == "SyntaxError");
    std::filesystem::remove_all(dir);
}
