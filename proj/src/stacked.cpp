#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "smalltri/stacked.hpp"

namespace smalltri {

namespace {

struct Sub {
    std::vector<int> verts;  // sorted global ids
    std::set<Edge> edges;

    bool operator<(const Sub& o) const { return verts != o.verts ? verts < o.verts : edges < o.edges; }
};

// Components of the subgraph with the vertices in cut removed.
std::vector<std::vector<int>> components(const Sub& g, const std::vector<int>& cut) {
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::set<int> gone(cut.begin(), cut.end()), seen;
    std::vector<std::vector<int>> out;
    for (int s : g.verts) {
        if (gone.count(s) || seen.count(s)) continue;
        std::vector<int> comp{s}, stack{s};
        seen.insert(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!gone.count(v) && seen.insert(v).second) {
                    comp.push_back(v);
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(comp);
    }
    return out;
}

Sub piece(const Sub& g, const std::vector<int>& comp, const std::vector<int>& cut) {
    Sub s;
    s.verts = comp;
    s.verts.insert(s.verts.end(), cut.begin(), cut.end());
    std::sort(s.verts.begin(), s.verts.end());
    std::set<int> in(s.verts.begin(), s.verts.end());
    for (auto [u, v] : g.edges)
        if (in.count(u) && in.count(v)) s.edges.insert({u, v});
    for (size_t i = 0; i < cut.size(); ++i)
        for (size_t j = i + 1; j < cut.size(); ++j) s.edges.insert({std::min(cut[i], cut[j]), std::max(cut[i], cut[j])});
    return s;
}

struct Decomposer {
    int k;
    std::map<Sub, std::optional<StackedCertificate>> memo;

    std::optional<StackedCertificate> run(const Sub& g) {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        std::optional<StackedCertificate> res;
        if (static_cast<int>(g.verts.size()) <= k + 1) {
            res = StackedCertificate{g.verts, {}, {}};
        } else {
            std::vector<int> cut;
            // separators in lexicographic order, smallest size first
            std::function<bool(size_t, int)> choose = [&](size_t from, int left) -> bool {
                if (left == 0) {
                    auto comps = components(g, cut);
                    if (comps.size() < 2) return false;
                    StackedCertificate c{g.verts, cut, {}};
                    for (const auto& comp : comps) {
                        auto child = run(piece(g, comp, cut));
                        if (!child) return false;
                        c.children.push_back(std::move(*child));
                    }
                    res = std::move(c);
                    return true;
                }
                for (size_t i = from; i < g.verts.size(); ++i) {
                    cut.push_back(g.verts[i]);
                    bool ok = choose(i + 1, left - 1);
                    cut.pop_back();
                    if (ok) return true;
                }
                return false;
            };
            for (int size = 1; size <= k && !res; ++size) choose(0, size);
        }
        memo[g] = res;
        return res;
    }
};

void cut_up(const Polytope3& P, const StackedCertificate& c, Triangulation& T) {
    const auto& V = P.vertices;
    if (c.leaf()) {
        if (c.vertices.size() < 4) return;
        if (c.vertices.size() > 4) throw Error("NonRealizableCut", "leaf with more than four vertices");
        const auto& v = c.vertices;
        if (orient4(V[v[0]], V[v[1]], V[v[2]], V[v[3]]) == 0) throw Error("NonRealizableCut", "flat leaf");
        T.tets.push_back(make_tetra(v[0], v[1], v[2], v[3]));
        return;
    }
    if (c.separator.size() != 3) throw Error("NonRealizableCut", "separator is not a triangle");
    const auto& s = c.separator;
    Vec3 n = cross(V[s[1]] - V[s[0]], V[s[2]] - V[s[0]]);
    if (n.is_zero()) throw Error("NonRealizableCut", "collinear separator");
    Plane H{n, dot(n, V[s[0]])};
    std::set<int> sides;
    for (const auto& child : c.children) {
        int sd = 0;
        for (int v : child.vertices) {
            if (std::count(s.begin(), s.end(), v)) continue;
            int x = side(H, V[v]);
            if (x == 0 || (sd != 0 && x != sd)) throw Error("NonRealizableCut", "separator plane crosses a component");
            sd = x;
        }
        if (!sides.insert(sd).second) throw Error("NonRealizableCut", "two components on one side");
        cut_up(P, child, T);
    }
}

using Adj = std::vector<std::vector<char>>;

Adj adj_of(int n, const std::vector<Edge>& es) {
    Adj a(n, std::vector<char>(n, 0));
    for (auto [u, v] : es) a[u][v] = a[v][u] = 1;
    return a;
}

int edge_count(const Adj& a) {
    int e = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) e += a[i][j];
    return e;
}

// H a spanning subgraph of G, both on the same number of vertices.
bool spanning_subgraph(const Adj& H, const Adj& G) {
    int n = static_cast<int>(H.size());
    std::vector<int> order(n), dh(n), dg(n);
    for (int i = 0; i < n; ++i) {
        order[i] = i;
        dh[i] = static_cast<int>(std::count(H[i].begin(), H[i].end(), 1));
        dg[i] = static_cast<int>(std::count(G[i].begin(), G[i].end(), 1));
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return dh[a] > dh[b]; });
    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(int)> go = [&](int k) {
        if (k == n) return true;
        int h = order[k];
        for (int g = 0; g < n; ++g) {
            if (used[g] || dg[g] < dh[h]) continue;
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                int h2 = order[j];
                if (H[h][h2] && !G[g][img[h2]]) ok = false;
            }
            if (!ok) continue;
            img[h] = g;
            used[g] = 1;
            if (go(k + 1)) return true;
            used[g] = 0;
        }
        img[h] = -1;
        return false;
    };
    return go(0);
}

// Minors by deleting and contracting; a state keeps its parts ordered by their
// smallest original vertex, so each partition has one key.
struct MinorSearch {
    const Adj& H;
    int h, eh;
    std::set<Adj> dead;

    bool run(const Adj& G) {
        int n = static_cast<int>(G.size());
        if (n < h || edge_count(G) < eh) return false;
        if (n == h) return spanning_subgraph(H, G);
        if (dead.count(G)) return false;
        for (int v = n - 1; v >= 0; --v) {
            Adj g2;
            for (int i = 0; i < n; ++i) {
                if (i == v) continue;
                std::vector<char> row;
                for (int j = 0; j < n; ++j)
                    if (j != v) row.push_back(G[i][j]);
                g2.push_back(row);
            }
            if (run(g2)) return true;
        }
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                if (!G[u][v]) continue;
                Adj g2;
                for (int i = 0; i < n; ++i) {
                    if (i == v) continue;
                    std::vector<char> row;
                    for (int j = 0; j < n; ++j) {
                        if (j == v) continue;
                        char x = G[i][j];
                        if (i == u && j != u) x |= G[v][j];
                        if (j == u && i != u) x |= G[i][v];
                        row.push_back(x);
                    }
                    g2.push_back(row);
                }
                if (run(g2)) return true;
            }
        dead.insert(G);
        return false;
    }
};

bool has_minor(const Graph& g, int hn, const std::vector<Edge>& he) {
    Adj H = adj_of(hn, he);
    Adj G = adj_of(g.n, std::vector<Edge>(g.edges.begin(), g.edges.end()));
    MinorSearch s{H, hn, static_cast<int>(he.size()), {}};
    return s.run(G);
}

}  // namespace

std::optional<StackedCertificate> is_stacked_graph(const Graph& g, int k) {
    Sub s;
    for (int v = 0; v < g.n; ++v) s.verts.push_back(v);
    s.edges = g.edges;
    if (g.n > 0 && components(s, {}).size() != 1) throw Error("Disconnected");
    Decomposer d{k, {}};
    return d.run(s);
}

Triangulation stacked_triangulation(const Polytope3& P, const StackedCertificate& cert) {
    Triangulation T;
    cut_up(P, cert, T);
    return T;
}

std::optional<MinorKind> forbidden_minor(const Graph& g) {
    // octahedron: K6 minus a perfect matching; pentagonal prism: two 5-cycles and rungs
    std::vector<Edge> oct;
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            if (v != u + 3) oct.push_back({u, v});
    std::vector<Edge> prism;
    for (int i = 0; i < 5; ++i) {
        prism.push_back({i, (i + 1) % 5});
        prism.push_back({5 + i, 5 + (i + 1) % 5});
        prism.push_back({i, 5 + i});
    }
    if (has_minor(g, 6, oct)) return MinorKind::Octahedron;
    if (has_minor(g, 10, prism)) return MinorKind::PentagonalPrism;
    return std::nullopt;
}

const char* to_string(MinorKind k) { return k == MinorKind::Octahedron ? "octahedron" : "pentagonal prism"; }

}  // namespace smalltri
