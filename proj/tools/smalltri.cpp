#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smalltri/io.hpp"

using namespace smalltri;
using nlohmann::json;

namespace {

// Exit codes shared by all subcommands.
enum Exit {
    Ok = 0,
    Negative = 1,       // a check, validation or satisfaction verdict is "no"
    Unsupported = 2,
    Trivial = 3,        // TriviallySatisfied
    BadInput = 4,       // unreadable or malformed files
    Failure = 5,        // any other error
};

std::string format = "text";

bool as_json() { return format == "json"; }

void emit(const json& j) {
    if (as_json()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_string())
            std::cout << it.key() << ": " << it.value().get<std::string>() << "\n";
        else if (it.value().is_boolean())
            std::cout << it.key() << ": " << (it.value().get<bool>() ? "yes" : "no") << "\n";
        else if (it.value().is_array()) {
            for (const auto& x : it.value()) std::cout << it.key() << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
        } else
            std::cout << it.key() << ": " << it.value().dump() << "\n";
    }
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

Polytope3 load_polytope(const std::string& path) {
    Polytope3 P = parse_polytope(read_file(path));
    std::string why = audit_polytope(P);
    if (!why.empty()) throw Error("MalformedPolytope", why);
    return P;
}

Edge edge_arg(const std::string& s) {
    auto c = s.find(',');
    if (c == std::string::npos) throw Error("SyntaxError", "edge must be written i,j");
    int u = std::stoi(s.substr(0, c)), v = std::stoi(s.substr(c + 1));
    return {std::min(u, v), std::max(u, v)};
}

long effective_K(const LogicalPolytope& lp) { return lp.m * (3 * lp.params.C + 3 * lp.params.V) + lp.params.p_T; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact tools for small triangulations of convex 3-polytopes"};
    app.require_subcommand(1);
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));

    std::string cnf, dir, out, poly, tri, bits, file;
    int chain = -1, apex = 0;
    long budget = -1;
    std::vector<std::string> forbid, require;
    bool deterministic = false;

    auto* c_norm = app.add_subcommand("normalize", "reduce a CNF to the restricted form");
    c_norm->add_option("cnf", cnf)->required();
    auto* c_build = app.add_subcommand("build", "build the logical polytope of a CNF");
    c_build->add_option("cnf", cnf)->required();
    c_build->add_option("-o,--out", dir)->required();
    c_build->add_option("--chain", chain, "chain length m (default: from the parameters)");
    auto* c_check = app.add_subcommand("check", "check the logical conditions of a built polytope");
    c_check->add_option("dir", dir)->required();
    auto* c_sweep = app.add_subcommand("sweep", "triangulate a built polytope from an assignment");
    c_sweep->add_option("dir", dir)->required();
    c_sweep->add_option("--assignment", bits, "one 0/1 per variable")->required();
    c_sweep->add_option("-o,--out", out);
    auto* c_verify = app.add_subcommand("verify", "validate a triangulation");
    c_verify->add_option("polytope", poly)->required();
    c_verify->add_option("triangulation", tri)->required();
    auto* c_extract = app.add_subcommand("extract", "read an assignment off a triangulation");
    c_extract->add_option("dir", dir)->required();
    c_extract->add_option("triangulation", tri)->required();
    auto* c_min = app.add_subcommand("minsearch", "exhaustive minimum triangulation");
    c_min->add_option("polytope", poly)->required();
    c_min->add_option("--forbid-edge", forbid);
    c_min->add_option("--require-edge", require);
    c_min->add_option("--budget", budget);
    c_min->add_flag("--deterministic", deterministic, "accepted; the search is sequential and always deterministic");
    c_min->add_option("-o,--out", out);
    auto* c_stacked = app.add_subcommand("stacked", "recognize stacked polytopes");
    c_stacked->add_option("file", file, "polytope or graph file")->required();
    c_stacked->add_option("--triangulate", out, "write the n - 3 triangulation here");
    auto* c_cone = app.add_subcommand("cone-approx", "cone triangulation from one vertex");
    c_cone->add_option("polytope", poly)->required();
    c_cone->add_option("--apex", apex)->required();
    c_cone->add_option("-o,--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_norm->parsed()) {
            auto f = normalize(parse_dimacs(read_file(cnf)));
            std::cout << print_dimacs(f);
            json j;
            j["variables"] = f.V;
            j["clauses"] = f.clauses.size();
            std::string src;
            for (int s : f.source) src += (src.empty() ? "" : " ") + std::to_string(s);
            j["source"] = src;
            if (as_json()) emit(j);
            return Ok;
        }
        if (c_build->parsed()) {
            auto f = normalize(parse_dimacs(read_file(cnf)));
            auto lp = build_logical_polytope(f, BuildOptions{chain});
            save_logical(dir, lp);
            json j;
            j["n"] = lp.polytope.size();
            j["m"] = lp.m;
            j["K"] = effective_K(lp);
            if (as_json())
                emit(j);
            else
                std::cout << "n=" << lp.polytope.size() << " m=" << lp.m << " K=" << effective_K(lp) << "\n";
            return Ok;
        }
        if (c_check->parsed()) {
            auto lp = load_logical(dir);
            auto r = check_logical_conditions(lp);
            json j;
            j["convexity"] = r.convexity;
            j["visibility"] = r.visibility;
            j["blocking"] = r.blocking;
            j["nonblocking"] = r.nonblocking;
            j["sweeping"] = r.sweeping;
            j["all"] = r.all();
            j["note"] = r.notes;
            emit(j);
            return r.all() ? Ok : Negative;
        }
        if (c_sweep->parsed()) {
            auto lp = load_logical(dir);
            if (static_cast<int>(bits.size()) != lp.formula.V || bits.find_first_not_of("01") != std::string::npos)
                throw Error("SyntaxError", "assignment needs one 0/1 per variable");
            Assignment a;
            for (char c : bits) a.push_back(c == '1');
            auto T = sweep_triangulate(lp, a);
            write_or_print(out.empty() ? dir + "/triangulation.txt" : out, print_triangulation(T));
            json j;
            j["size"] = T.size();
            j["K"] = effective_K(lp);
            j["size<=K"] = static_cast<long>(T.size()) <= effective_K(lp);
            emit(j);
            return Ok;
        }
        if (c_verify->parsed()) {
            auto P = load_polytope(poly);
            auto T = parse_triangulation(read_file(tri));
            auto r = validate(P, T);
            json j;
            j["valid"] = r.verdict;
            j["tetrahedra"] = T.size();
            j["pairs checked"] = r.pairs_checked;
            std::vector<std::string> fails;
            for (const auto& f : r.failures) {
                std::string s = f.kind;
                for (int i : f.indices) s += " " + std::to_string(i);
                fails.push_back(s);
            }
            j["failure"] = fails;
            emit(j);
            return r.verdict ? Ok : Negative;
        }
        if (c_extract->parsed()) {
            auto lp = load_logical(dir);
            auto T = parse_triangulation(read_file(tri));
            auto ex = extract_assignment(lp, T);
            std::string s;
            for (bool b : ex.assignment) s += b ? '1' : '0';
            json j;
            j["assignment"] = s;
            j["satisfies"] = ex.satisfies;
            emit(j);
            return ex.satisfies ? Ok : Negative;
        }
        if (c_min->parsed()) {
            auto P = load_polytope(poly);
            BruteOptions opt;
            for (const auto& e : forbid) opt.forbidden_edges.insert(edge_arg(e));
            for (const auto& e : require) opt.required_edges.insert(edge_arg(e));
            if (budget >= 0) opt.budget = budget;
            auto r = brute_min(P, opt);
            json j;
            j["size"] = r.size;
            j["nodes"] = r.nodes;
            if (!out.empty()) write_file(out, print_triangulation(r.witness));
            emit(j);
            if (out.empty() && !as_json()) std::cout << print_triangulation(r.witness);
            return Ok;
        }
        if (c_stacked->parsed()) {
            std::string text = read_file(file);
            bool is_poly = text.rfind("polytope3", 0) == 0;
            Polytope3 P;
            Graph g;
            if (is_poly) {
                P = load_polytope(file);
                g = skeleton(P);
            } else {
                g = parse_graph(text);
            }
            auto cert = is_stacked_graph(g);
            json j;
            j["stacked"] = cert.has_value();
            if (cert) {
                j["certificate"] = print_certificate(*cert);
                if (!out.empty()) {
                    if (!is_poly) throw Error("Unsupported", "--triangulate needs a polytope file");
                    auto T = stacked_triangulation(P, *cert);
                    write_file(out, print_triangulation(T));
                    j["tetrahedra"] = T.size();
                }
            } else if (auto minor = forbidden_minor(g)) {
                j["minor"] = to_string(*minor);
            }
            if (as_json()) {
                emit(j);
            } else {
                std::cout << "stacked: " << (cert ? "yes" : "no") << "\n";
                if (cert) std::cout << print_certificate(*cert);
                if (j.contains("tetrahedra")) std::cout << "tetrahedra: " << j["tetrahedra"].dump() << "\n";
                if (j.contains("minor")) std::cout << "minor: " << j["minor"].get<std::string>() << "\n";
            }
            return Ok;
        }
        if (c_cone->parsed()) {
            auto P = load_polytope(poly);
            auto T = cone_triangulation(P, apex);
            write_or_print(out, print_triangulation(T));
            if (!out.empty()) emit(json{{"size", T.size()}});
            return Ok;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const std::string& k = e.kind();
        if (k == "Unsupported") return Unsupported;
        if (k == "TriviallySatisfied") return Trivial;
        if (k == "SyntaxError" || k == "HeaderMismatch" || k == "TautologicalClause" || k == "IOError" ||
            k == "MalformedPolytope" || k == "EmptyClauseProduced")
            return BadInput;
        return Failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Failure;
    }
    return Failure;
}
