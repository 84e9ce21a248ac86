#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "smalltri/reduction.hpp"

using namespace smalltri;

namespace {

RestrictedFormula restricted(int V, std::vector<std::vector<int>> clauses) {
    RestrictedFormula f;
    f.V = V;
    f.clauses = std::move(clauses);
    for (int v = 1; v <= V; ++v) f.source.push_back(v);
    return f;
}

RestrictedFormula paper_f() { return restricted(4, {{1, -2, 3, -4}, {-1, 2, -3, 4}, {1, 2, 3, 4}}); }
RestrictedFormula two_var() { return restricted(2, {{1, 2}, {1, -2}, {-1, 2}}); }

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

std::vector<Assignment> satisfying(const CnfFormula& f) {
    std::vector<Assignment> out;
    for (int mask = 0; mask < (1 << f.V); ++mask) {
        Assignment a(f.V);
        for (int i = 0; i < f.V; ++i) a[i] = (mask >> i) & 1;
        if (satisfies(f, a)) out.push_back(a);
    }
    return out;
}

const LogicalPolytope& small_f() {
    static const LogicalPolytope lp = build_logical_polytope(paper_f(), {1});
    return lp;
}

const LogicalPolytope& small_two() {
    static const LogicalPolytope lp = build_logical_polytope(two_var(), {1});
    return lp;
}

}  // namespace

TEST_CASE("normalize keeps restricted formulas") {
    CnfFormula f = paper_f();
    CHECK(is_restricted(f));
    auto g = normalize(f);
    CHECK(g.V == 4);
    CHECK(g.clauses == f.clauses);
    CHECK(g.source == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("normalize simplifications") {
    CHECK(kind_of([] { normalize(CnfFormula{2, {{1, 2}, {1, -2}}}); }) == "TriviallySatisfied");
    // X once/once: (X v Y)(-X v Z) merge to (Y v Z)
    auto g = normalize(CnfFormula{3, {{1, 2}, {-1, 3}, {2, -3}, {-2, 3}}});
    CHECK(g.V == 2);
    CHECK(g.source == std::vector<int>{2, 3});
    std::set<std::vector<int>> cs(g.clauses.begin(), g.clauses.end());
    CHECK(cs == std::set<std::vector<int>>{{1, 2}, {1, -2}, {-1, 2}});
    // variable with more negative occurrences is flipped
    auto h = normalize(CnfFormula{1, {{-1}, {-1}, {1}}});
    CHECK(h.source == std::vector<int>{-1});
    CHECK(h.clauses == std::vector<std::vector<int>>{{1}, {1}, {-1}});
    CHECK(kind_of([] { normalize(CnfFormula{1, {{1}, {-1}}}); }) == "EmptyClauseProduced");
    CHECK(kind_of([] { normalize(CnfFormula{1, {{1}, {}}}); }) == "EmptyClauseProduced");
    CHECK(kind_of([] { normalize(CnfFormula{2, {{1, 2}, {1, 2}, {1, 2}, {-1}, {-2}}}); }) == "Unsupported");
    CHECK(kind_of([] { normalize(CnfFormula{1, {{2}}}); }) == "Unsupported");
}

TEST_CASE("parameter identity") {
    for (long C = 1; C <= 50; ++C)
        for (long V = 1; V <= 50; ++V) {
            Params p = params(C, V);
            CHECK(p.K == p.n + p.m - 4);
            CHECK(p.m > p.p_T - p.p_n);
            CHECK(p.m == 8 * C + 10 * V + 3 * C * V + 2);
        }
    auto spot = [](long C, long V, long m, long n, long K) {
        Params p = params(C, V);
        CHECK(p.m == m);
        CHECK(p.n == n);
        CHECK(p.K == K);
    };
    spot(3, 4, 102, 2221, 2319);
    spot(3, 1, 45, 580, 621);
    spot(3, 2, 64, 1013, 1073);
    CHECK(kind_of([] { params(0, 2); }) == "ZeroSize");
}

TEST_CASE("small logical polytopes satisfy the five conditions") {
    for (const LogicalPolytope* lp : {&small_f(), &small_two()}) {
        const int C = static_cast<int>(lp->formula.clauses.size()), V = lp->formula.V;
        CHECK(lp->polytope.size() == (3 * lp->m + 6) * (V + C) + 7 * V + 2 * C + 3);
        auto r = check_logical_conditions(*lp);
        for (const auto& s : r.notes) MESSAGE(s);
        CHECK(r.convexity);
        CHECK(r.visibility);
        CHECK(r.blocking);
        CHECK(r.nonblocking);
        CHECK(r.sweeping);
        for (const auto& f : frame_facets(*lp)) {
            bool host = false;
            for (const auto& c : lp->var_cupolas) host |= make_face(c.host) == make_face(f);
            for (const auto& c : lp->clause_cupolas) host |= make_face(c.host) == make_face(f);
            if (!host) CHECK(lp->polytope.has_facet(make_face(f)));
        }
    }
}

TEST_CASE("unsatisfiable restricted formula still builds") {
    auto lp = build_logical_polytope(restricted(1, {{1}, {1}, {-1}}), {1});
    CHECK(lp.polytope.size() == 9 * 4 + 7 + 6 + 3);
    CHECK(check_logical_conditions(lp).all());
    CHECK(kind_of([&] { sweep_triangulate(lp, {true}); }) == "UnsatisfiedAssignment");
    CHECK(kind_of([&] { sweep_triangulate(lp, {false}); }) == "UnsatisfiedAssignment");
}

TEST_CASE("sweep round-trips every satisfying assignment") {
    for (const LogicalPolytope* lp : {&small_two(), &small_f()}) {
        for (const auto& a : satisfying(lp->formula)) {
            auto T = sweep_triangulate(*lp, a);
            auto rep = validate(lp->polytope, T);
            CHECK(rep.verdict);
            auto ex = extract_assignment(*lp, T);
            CHECK(ex.assignment == a);
            CHECK(ex.satisfies);
        }
    }
}

TEST_CASE("extraction errors") {
    const auto& lp = small_two();
    auto T = sweep_triangulate(lp, {true, true});
    const Face& sky = lp.var_cupolas[0].skylight;
    auto holds = [&](const Tetra& t) { return std::includes(t.begin(), t.end(), sky.begin(), sky.end()); };
    auto it = std::find_if(T.tets.begin(), T.tets.end(), holds);
    REQUIRE(it != T.tets.end());
    Triangulation other = T;
    other.tets[it - T.tets.begin()] = make_tetra(sky[0], sky[1], sky[2], lp.var_cupolas[0].chains[0][1]);
    CHECK(kind_of([&] { extract_assignment(lp, other); }) == "ApexOutsideCone");
    Triangulation missing = T;
    missing.tets.erase(missing.tets.begin() + (it - T.tets.begin()));
    CHECK(kind_of([&] { extract_assignment(lp, missing); }) == "SkylightNotFound");
}

TEST_CASE("perturbed polytopes fail their conditions") {
    SUBCASE("odd spine vertex back on its segment") {
        LogicalPolytope lp = small_two();
        auto& p = lp.polytope.vertices;
        const Point3 &a = p[lp.spine[0]], &b = p[lp.spine[2]];
        Point3& o = p[lp.spine[1]];
        o = lerp(a, b, (o.y - a.y) / (b.y - a.y));
        recompute_planes(lp.polytope);
        CHECK_FALSE(check_logical_conditions(lp).convexity);
    }
    SUBCASE("literal vertex pulled off its clause plane") {
        LogicalPolytope lp = small_two();
        Point3& x = lp.polytope.vertices[lp.literals[0].x1];
        x.y += Rational(1, 1000);
        recompute_planes(lp.polytope);
        auto r = check_logical_conditions(lp);
        CHECK_FALSE(r.visibility);
    }
}
