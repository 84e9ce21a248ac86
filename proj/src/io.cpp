#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smalltri/io.hpp"

namespace smalltri {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> t;
    for (std::string s; in >> s;) t.push_back(s);
    return t;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        out.push_back(l);
    }
    return out;
}

[[noreturn]] void bad(size_t line, const std::string& what) {
    throw Error("SyntaxError", "line " + std::to_string(line + 1) + ": " + what);
}

long to_long(const std::string& s, size_t line) {
    if (s.empty()) bad(line, "expected an integer");
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) bad(line, "expected an integer, got '" + s + "'");
    for (size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') bad(line, "expected an integer, got '" + s + "'");
    return std::strtol(s.c_str(), nullptr, 10);
}

int to_index(const std::string& s, size_t line, int limit) {
    long v = to_long(s, line);
    if (v < 0 || v >= limit) bad(line, "index " + s + " out of range");
    return static_cast<int>(v);
}

Rational to_rational(const std::string& s, size_t line) {
    try {
        return parse_rational(s);
    } catch (const Error&) {
        bad(line, "bad rational '" + s + "'");
    }
}

// Non-empty lines that are not comments, with their line numbers.
std::vector<std::pair<size_t, std::vector<std::string>>> records(const std::string& text) {
    std::vector<std::pair<size_t, std::vector<std::string>>> out;
    auto ls = lines_of(text);
    for (size_t i = 0; i < ls.size(); ++i) {
        auto t = tokens(ls[i]);
        if (t.empty() || t[0][0] == '#') continue;
        out.push_back({i, t});
    }
    return out;
}

const char* roof_names[6] = {"zT", "zF", "zL", "zR", "zA", "zB"};

int* roof_slot(Roof& z, int k) {
    int* s[6] = {&z.zT, &z.zF, &z.zL, &z.zR, &z.zA, &z.zB};
    return s[k];
}

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    long declared = -1;
    std::vector<int> cur;
    auto ls = lines_of(text);
    for (size_t i = 0; i < ls.size(); ++i) {
        auto t = tokens(ls[i]);
        if (t.empty() || t[0] == "c" || t[0][0] == 'c') continue;
        if (t[0] == "%") break;
        if (t[0] == "p") {
            if (declared >= 0) bad(i, "second header");
            if (t.size() != 4 || t[1] != "cnf") bad(i, "header must be 'p cnf V C'");
            f.V = static_cast<int>(to_long(t[2], i));
            declared = to_long(t[3], i);
            if (f.V < 0 || declared < 0) bad(i, "negative count in header");
            continue;
        }
        if (declared < 0) bad(i, "clause before the header");
        for (const auto& s : t) {
            long l = to_long(s, i);
            if (l == 0) {
                std::sort(cur.begin(), cur.end());
                cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
                for (int x : cur)
                    if (std::binary_search(cur.begin(), cur.end(), -x))
                        throw Error("TautologicalClause", "line " + std::to_string(i + 1));
                std::sort(cur.begin(), cur.end(), [](int a, int b) {
                    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
                });
                f.clauses.push_back(cur);
                cur.clear();
                continue;
            }
            if (std::abs(l) > f.V)
                throw Error("HeaderMismatch", "line " + std::to_string(i + 1) + ": variable " + s + " exceeds V");
            cur.push_back(static_cast<int>(l));
        }
    }
    if (declared < 0) throw Error("SyntaxError", "missing 'p cnf' header");
    if (!cur.empty()) throw Error("SyntaxError", "last clause is not terminated by 0");
    if (static_cast<long>(f.clauses.size()) != declared)
        throw Error("HeaderMismatch", "header declares " + std::to_string(declared) + " clauses, found " +
                                          std::to_string(f.clauses.size()));
    return f;
}

std::string print_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    out << "p cnf " << f.V << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) {
        for (int l : c) out << l << " ";
        out << "0\n";
    }
    return out.str();
}

std::string print_polytope(const Polytope3& P) {
    std::ostringstream out;
    out << "polytope3 " << P.size() << " " << P.facets.size() << "\n";
    for (const auto& v : P.vertices) out << "v " << to_string(v.x) << " " << to_string(v.y) << " " << to_string(v.z) << "\n";
    for (const auto& f : P.facets) {
        out << "f " << f.size();
        for (int x : f) out << " " << x;
        out << "\n";
    }
    return out.str();
}

Polytope3 parse_polytope(const std::string& text) {
    auto rs = records(text);
    if (rs.empty() || rs[0].second[0] != "polytope3" || rs[0].second.size() != 3)
        throw Error("SyntaxError", "missing 'polytope3 nv nf' header");
    size_t h = rs[0].first;
    long nv = to_long(rs[0].second[1], h), nf = to_long(rs[0].second[2], h);
    if (nv < 4 || nf < 4 || static_cast<long>(rs.size()) != 1 + nv + nf) bad(h, "record count differs from the header");
    Polytope3 P;
    for (long i = 1; i <= nv; ++i) {
        const auto& [ln, t] = rs[i];
        if (t.size() != 4 || t[0] != "v") bad(ln, "expected 'v x y z'");
        P.vertices.push_back({to_rational(t[1], ln), to_rational(t[2], ln), to_rational(t[3], ln)});
    }
    for (long i = 1 + nv; i < 1 + nv + nf; ++i) {
        const auto& [ln, t] = rs[i];
        if (t.size() < 2 || t[0] != "f") bad(ln, "expected 'f k i1 .. ik'");
        long k = to_long(t[1], ln);
        if (k < 3 || static_cast<long>(t.size()) != 2 + k) bad(ln, "facet size does not match its indices");
        std::vector<int> f;
        for (long j = 0; j < k; ++j) f.push_back(to_index(t[2 + j], ln, static_cast<int>(nv)));
        P.facets.push_back(f);
    }
    recompute_planes(P);
    return P;
}

std::string print_triangulation(const Triangulation& T) {
    std::ostringstream out;
    out << "triangulation " << T.size() << "\n";
    for (const auto& t : T.tets) out << "t " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    return out.str();
}

Triangulation parse_triangulation(const std::string& text) {
    auto rs = records(text);
    if (rs.empty() || rs[0].second[0] != "triangulation" || rs[0].second.size() != 2)
        throw Error("SyntaxError", "missing 'triangulation nt' header");
    long nt = to_long(rs[0].second[1], rs[0].first);
    if (nt < 0 || static_cast<long>(rs.size()) != 1 + nt) bad(rs[0].first, "record count differs from the header");
    Triangulation T;
    for (long i = 1; i <= nt; ++i) {
        const auto& [ln, t] = rs[i];
        if (t.size() != 5 || t[0] != "t") bad(ln, "expected 't i j k l'");
        Tetra x;
        for (int k = 0; k < 4; ++k) x[k] = to_index(t[1 + k], ln, 1 << 30);
        if (!std::is_sorted(x.begin(), x.end())) bad(ln, "indices must be sorted");
        T.tets.push_back(x);
    }
    return T;
}

std::string print_graph(const Graph& g) {
    std::ostringstream out;
    out << "graph " << g.n << " " << g.edges.size() << "\n";
    for (auto [u, v] : g.edges) out << "e " << u << " " << v << "\n";
    return out.str();
}

Graph parse_graph(const std::string& text) {
    auto rs = records(text);
    if (rs.empty() || rs[0].second[0] != "graph" || rs[0].second.size() != 3)
        throw Error("SyntaxError", "missing 'graph n m' header");
    Graph g;
    g.n = static_cast<int>(to_long(rs[0].second[1], rs[0].first));
    long m = to_long(rs[0].second[2], rs[0].first);
    if (g.n < 1 || static_cast<long>(rs.size()) != 1 + m) bad(rs[0].first, "record count differs from the header");
    for (long i = 1; i <= m; ++i) {
        const auto& [ln, t] = rs[i];
        if (t.size() != 3 || t[0] != "e") bad(ln, "expected 'e u v'");
        int u = to_index(t[1], ln, g.n), v = to_index(t[2], ln, g.n);
        if (u == v) bad(ln, "loop");
        g.add(u, v);
    }
    return g;
}

std::string print_roles(const LogicalPolytope& lp) {
    std::ostringstream out;
    const int C = static_cast<int>(lp.formula.clauses.size()), V = lp.formula.V;
    out << "param C " << C << "\nparam V " << V << "\nparam m " << lp.m << "\nparam K " << lp.params.K << "\n";
    for (size_t j = 0; j < lp.spine.size(); ++j) out << "spine " << j << " " << lp.spine[j] << "\n";
    for (int i = 0; i < V; ++i) {
        Roof z = lp.roofs[i];
        for (int k = 0; k < 6; ++k) out << "roof " << i + 1 << " " << roof_names[k] << " " << *roof_slot(z, k) << "\n";
    }
    for (int i = 0; i < V; ++i) {
        const auto& x = lp.literals[i];
        out << "literal " << i + 1 << " 1 " << x.x1 << " clause " << x.l1 << "\n";
        out << "literal " << i + 1 << " 2 " << x.x2 << " clause " << x.l2 << "\n";
        out << "literal " << i + 1 << " 3bar " << x.x3 << " clause " << x.l3 << "\n";
    }
    auto cupola = [&](const char* kind, int i, const CupolaRecord& c) {
        out << "cupola " << kind << " " << i << " skylight " << c.B[0] << " " << c.B[1] << " " << c.B[2] << " bottom "
            << c.A[0] << " " << c.A[1] << " " << c.A[2] << " host";
        for (int h : c.host) out << " " << h;
        out << "\n";
        for (int j = 0; j < 3; ++j) {
            out << "cupola " << kind << " " << i << " chain " << j << "," << (j + 1) % 3;
            for (int v : c.chains[j]) out << " " << v;
            out << "\n";
        }
        for (const auto& h : c.cone.planes)
            out << "cone " << kind << " " << i << " plane " << to_string(h.a.x) << " " << to_string(h.a.y) << " "
                << to_string(h.a.z) << " " << to_string(h.b) << "\n";
    };
    for (int i = 0; i < V; ++i) cupola("var", i + 1, lp.var_cupolas[i]);
    for (int l = 0; l < C; ++l) cupola("clause", l + 1, lp.clause_cupolas[l]);
    return out.str();
}

void parse_roles(const std::string& text, LogicalPolytope& lp) {
    const int n = lp.polytope.size();
    std::map<std::string, long> param;
    std::map<int, int> spine;
    std::vector<Roof> roofs;
    std::vector<LiteralRoles> lits;
    std::map<std::pair<std::string, int>, CupolaRecord> cups;
    std::map<std::pair<std::string, int>, int> chains_seen, planes_seen;
    auto grow = [](auto& v, int i, size_t line) {
        if (i < 1 || i > 100000) bad(line, "bad record number");
        if (static_cast<int>(v.size()) < i) v.resize(i);
    };
    for (const auto& [ln, t] : records(text)) {
        const std::string& kind = t[0];
        if (kind == "param") {
            if (t.size() != 3) bad(ln, "expected 'param name value'");
            param[t[1]] = to_long(t[2], ln);
        } else if (kind == "spine") {
            if (t.size() != 3) bad(ln, "expected 'spine j idx'");
            spine[static_cast<int>(to_long(t[1], ln))] = to_index(t[2], ln, n);
        } else if (kind == "roof") {
            if (t.size() != 4) bad(ln, "expected 'roof i name idx'");
            int i = static_cast<int>(to_long(t[1], ln));
            grow(roofs, i, ln);
            auto at = std::find(std::begin(roof_names), std::end(roof_names), t[2]);
            if (at == std::end(roof_names)) bad(ln, "unknown roof vertex " + t[2]);
            *roof_slot(roofs[i - 1], static_cast<int>(at - std::begin(roof_names))) = to_index(t[3], ln, n);
        } else if (kind == "literal") {
            if (t.size() != 6 || t[4] != "clause") bad(ln, "expected 'literal i 1|2|3bar idx clause l'");
            int i = static_cast<int>(to_long(t[1], ln));
            grow(lits, i, ln);
            int idx = to_index(t[3], ln, n), l = static_cast<int>(to_long(t[5], ln));
            auto& x = lits[i - 1];
            if (t[2] == "1") x.x1 = idx, x.l1 = l;
            else if (t[2] == "2") x.x2 = idx, x.l2 = l;
            else if (t[2] == "3bar") x.x3 = idx, x.l3 = l;
            else bad(ln, "literal slot must be 1, 2 or 3bar");
        } else if (kind == "cupola" || kind == "cone") {
            if (t.size() < 4 || (t[1] != "var" && t[1] != "clause")) bad(ln, "expected var or clause");
            auto key = std::make_pair(t[1], static_cast<int>(to_long(t[2], ln)));
            CupolaRecord& c = cups[key];
            if (kind == "cone") {
                if (t.size() != 8 || t[3] != "plane") bad(ln, "expected 'cone kind i plane a1 a2 a3 b'");
                int& k = planes_seen[key];
                if (k >= 3) bad(ln, "more than three cone planes");
                c.cone.planes[k++] = Plane{{to_rational(t[4], ln), to_rational(t[5], ln), to_rational(t[6], ln)},
                                           to_rational(t[7], ln)};
            } else if (t[3] == "skylight") {
                if (t.size() < 12 || t[7] != "bottom" || t[11] != "host") bad(ln, "malformed cupola frame record");
                for (int k = 0; k < 3; ++k) {
                    c.B[k] = to_index(t[4 + k], ln, n);
                    c.A[k] = to_index(t[8 + k], ln, n);
                }
                c.host.clear();
                for (size_t k = 12; k < t.size(); ++k) c.host.push_back(to_index(t[k], ln, n));
                c.skylight = make_face({c.B[0], c.B[1], c.B[2]});
                c.bottom = make_face({c.A[0], c.A[1], c.A[2]});
            } else if (t[3] == "chain") {
                if (t.size() < 6) bad(ln, "chain needs at least its two ends");
                int j = static_cast<int>(to_long(t[4].substr(0, t[4].find(',')), ln));
                if (j < 0 || j > 2) bad(ln, "chain number must be 0, 1 or 2");
                c.chains[j].clear();
                for (size_t k = 5; k < t.size(); ++k) c.chains[j].push_back(to_index(t[k], ln, n));
                c.m = static_cast<int>(t.size()) - 7;
                ++chains_seen[key];
            } else {
                bad(ln, "unknown cupola record");
            }
        } else {
            bad(ln, "unknown record '" + kind + "'");
        }
    }
    for (const char* p : {"C", "V", "m"})
        if (!param.count(p)) throw Error("SyntaxError", std::string("missing param ") + p);
    const int C = static_cast<int>(param["C"]), V = static_cast<int>(param["V"]);
    if (C != static_cast<int>(lp.formula.clauses.size()) || V != lp.formula.V)
        throw Error("SyntaxError", "role map does not match the formula");
    lp.params = params(C, V);
    lp.m = static_cast<int>(param["m"]);
    lp.spine.clear();
    for (int j = 0; j <= 2 * C; ++j) {
        if (!spine.count(j)) throw Error("SyntaxError", "missing spine " + std::to_string(j));
        lp.spine.push_back(spine[j]);
    }
    if (static_cast<int>(roofs.size()) != V || static_cast<int>(lits.size()) != V)
        throw Error("SyntaxError", "roof or literal records incomplete");
    for (auto& z : roofs)
        for (int k = 0; k < 6; ++k)
            if (*roof_slot(z, k) < 0) throw Error("SyntaxError", "roof record incomplete");
    for (const auto& x : lits)
        if (x.x1 < 0 || x.x2 < 0 || x.x3 < 0) throw Error("SyntaxError", "literal record incomplete");
    lp.roofs = roofs;
    lp.literals = lits;
    lp.var_cupolas.clear();
    lp.clause_cupolas.clear();
    auto take = [&](const std::string& kind, int count, std::vector<CupolaRecord>& out) {
        for (int i = 1; i <= count; ++i) {
            auto key = std::make_pair(kind, i);
            if (!cups.count(key) || chains_seen[key] != 3 || planes_seen[key] != 3 || cups[key].host.empty())
                throw Error("SyntaxError", "cupola " + kind + " " + std::to_string(i) + " incomplete");
            out.push_back(cups[key]);
        }
    };
    take("var", V, lp.var_cupolas);
    take("clause", C, lp.clause_cupolas);
    if (static_cast<int>(cups.size()) != V + C) throw Error("SyntaxError", "extra cupola records");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("IOError", "cannot write " + path);
}

void save_logical(const std::string& dir, const LogicalPolytope& lp) {
    std::filesystem::create_directories(dir);
    write_file(dir + "/polytope.txt", print_polytope(lp.polytope));
    write_file(dir + "/roles.txt", print_roles(lp));
    write_file(dir + "/formula.cnf", print_dimacs(lp.formula));
    nlohmann::json j;
    const Params& p = lp.params;
    j["C"] = p.C;
    j["V"] = p.V;
    j["p_T"] = p.p_T;
    j["p_n"] = p.p_n;
    j["m"] = p.m;
    j["n"] = p.n;
    j["K"] = p.K;
    j["chain_length"] = lp.m;
    j["vertices"] = lp.polytope.size();
    j["t_roof"] = to_string(lp.t_roof);
    j["t_literal"] = to_string(lp.t_literal);
    j["t_even"] = to_string(lp.t_even);
    j["t_odd"] = to_string(lp.t_odd);
    write_file(dir + "/params.json", j.dump(2) + "\n");
}

LogicalPolytope load_logical(const std::string& dir) {
    LogicalPolytope lp;
    lp.polytope = parse_polytope(read_file(dir + "/polytope.txt"));
    CnfFormula f = parse_dimacs(read_file(dir + "/formula.cnf"));
    if (!is_restricted(f)) throw Error("Unsupported", "stored formula is not restricted");
    lp.formula.V = f.V;
    lp.formula.clauses = f.clauses;
    for (int v = 1; v <= f.V; ++v) lp.formula.source.push_back(v);
    parse_roles(read_file(dir + "/roles.txt"), lp);
    return lp;
}

std::string print_certificate(const StackedCertificate& c) {
    std::ostringstream out;
    std::function<void(const StackedCertificate&, int)> go = [&](const StackedCertificate& x, int depth) {
        out << std::string(2 * depth, ' ');
        if (x.leaf()) {
            out << "leaf";
            for (int v : x.vertices) out << " " << v;
        } else {
            out << "cut";
            for (int v : x.separator) out << " " << v;
        }
        out << "\n";
        for (const auto& ch : x.children) go(ch, depth + 1);
    };
    go(c, 0);
    return out.str();
}

}  // namespace smalltri
