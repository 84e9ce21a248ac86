#include "smalltri/polytope.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace smalltri {

std::vector<Edge> Polytope3::edges() const {
    std::set<Edge> s;
    for (const auto& f : facets)
        for (size_t i = 0; i < f.size(); ++i) {
            int u = f[i], v = f[(i + 1) % f.size()];
            s.insert({std::min(u, v), std::max(u, v)});
        }
    return {s.begin(), s.end()};
}

std::vector<int> Polytope3::facets_containing(const Face& f) const {
    std::vector<int> out;
    for (size_t i = 0; i < facets.size(); ++i) {
        bool all = true;
        for (int v : f)
            if (std::find(facets[i].begin(), facets[i].end(), v) == facets[i].end()) {
                all = false;
                break;
            }
        if (all) out.push_back(static_cast<int>(i));
    }
    return out;
}

void Polytope3::require_face(const Face& f) const {
    if (f.empty()) throw Error("UnknownFace", "empty face");
    for (int v : f)
        if (v < 0 || v >= size()) throw Error("UnknownFace", "vertex index out of range");
    auto fs = facets_containing(f);
    if (fs.empty()) throw Error("UnknownFace", "no facet contains the given vertices");
    std::set<int> common(facets[fs[0]].begin(), facets[fs[0]].end());
    for (size_t k = 1; k < fs.size(); ++k) {
        std::set<int> next;
        for (int v : facets[fs[k]])
            if (common.count(v)) next.insert(v);
        common.swap(next);
    }
    if (common != std::set<int>(f.begin(), f.end())) throw Error("UnknownFace", "vertex set is not a face");
}

int Polytope3::facet_index(const Face& f) const {
    Face s = f;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i < facets.size(); ++i) {
        if (facets[i].size() != s.size()) continue;
        Face t = facets[i];
        std::sort(t.begin(), t.end());
        if (t == s) return static_cast<int>(i);
    }
    return -1;
}

std::set<Face> Polytope3::facet_set() const {
    std::set<Face> out;
    for (auto f : facets) {
        std::sort(f.begin(), f.end());
        out.insert(f);
    }
    return out;
}

void Graph::add(int u, int v) {
    if (u == v) return;
    edges.insert({std::min(u, v), std::max(u, v)});
}

bool Graph::has(int u, int v) const { return edges.count({std::min(u, v), std::max(u, v)}) > 0; }

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

namespace {

struct Homog {
    mpz_class X, Y, Z, W;
};

Homog homog(const Point3& p) {
    Homog h;
    mpz_lcm(h.W.get_mpz_t(), p.x.get_den_mpz_t(), p.y.get_den_mpz_t());
    mpz_lcm(h.W.get_mpz_t(), h.W.get_mpz_t(), p.z.get_den_mpz_t());
    h.X = p.x.get_num() * (h.W / p.x.get_den());
    h.Y = p.y.get_num() * (h.W / p.y.get_den());
    h.Z = p.z.get_num() * (h.W / p.z.get_den());
    return h;
}

struct Tri {
    int v[3];
    mpz_class a[3], b;
    bool alive = true;
};

class IncrementalHull {
public:
    explicit IncrementalHull(const std::vector<Point3>& pts) : p_(pts) {
        for (const auto& q : pts) h_.push_back(homog(q));
    }

    HullResult run();

private:
    const std::vector<Point3>& p_;
    std::vector<Homog> h_;
    std::vector<Tri> tris_;
    std::unordered_map<uint64_t, int> edge_;

    uint64_t key(int u, int v) const { return static_cast<uint64_t>(u) * p_.size() + static_cast<uint64_t>(v); }

    int side(const Tri& t, int i) const {
        const Homog& q = h_[i];
        mpz_class s = t.a[0] * q.X + t.a[1] * q.Y + t.a[2] * q.Z - t.b * q.W;
        return sgn(s);
    }

    void add_tri(int u, int v, int w) {
        Tri t;
        t.v[0] = u;
        t.v[1] = v;
        t.v[2] = w;
        Plane pl = plane_through(p_[u], p_[v], p_[w]);
        for (int k = 0; k < 3; ++k) t.a[k] = pl.a[k].get_num();
        t.b = pl.b.get_num();
        int id = static_cast<int>(tris_.size());
        tris_.push_back(std::move(t));
        edge_[key(u, v)] = id;
        edge_[key(v, w)] = id;
        edge_[key(w, u)] = id;
    }

    void insert(int p);
    void compact();
    bool init();
    HullResult export_polytope();
};

void IncrementalHull::compact() {
    std::vector<Tri> keep;
    for (auto& t : tris_)
        if (t.alive) keep.push_back(std::move(t));
    tris_.swap(keep);
    edge_.clear();
    for (size_t i = 0; i < tris_.size(); ++i)
        for (int k = 0; k < 3; ++k) edge_[key(tris_[i].v[k], tris_[i].v[(k + 1) % 3])] = static_cast<int>(i);
}

void IncrementalHull::insert(int p) {
    std::vector<int> vis;
    for (size_t i = 0; i < tris_.size(); ++i)
        if (tris_[i].alive && side(tris_[i], p) > 0) vis.push_back(static_cast<int>(i));
    if (vis.empty()) return;
    for (int t : vis) tris_[t].alive = false;
    std::vector<std::pair<int, int>> horizon;
    for (int t : vis)
        for (int k = 0; k < 3; ++k) {
            int u = tris_[t].v[k], v = tris_[t].v[(k + 1) % 3];
            auto it = edge_.find(key(v, u));
            if (it != edge_.end() && tris_[it->second].alive) horizon.push_back({u, v});
        }
    for (int t : vis)
        for (int k = 0; k < 3; ++k) {
            auto it = edge_.find(key(tris_[t].v[k], tris_[t].v[(k + 1) % 3]));
            if (it != edge_.end() && it->second == t) edge_.erase(it);
        }
    for (auto [u, v] : horizon) add_tri(u, v, p);
    // edge_ holds three entries per live triangle
    if (tris_.size() > 64 && 3 * tris_.size() > 2 * edge_.size()) compact();
}

bool IncrementalHull::init() {
    int n = static_cast<int>(p_.size());
    if (n < 4) return false;
    int i1 = -1, i2 = -1, i3 = -1;
    for (int i = 1; i < n && i1 < 0; ++i)
        if (!(p_[i] == p_[0])) i1 = i;
    if (i1 < 0) return false;
    for (int i = i1 + 1; i < n && i2 < 0; ++i)
        if (!cross(p_[i1] - p_[0], p_[i] - p_[0]).is_zero()) i2 = i;
    if (i2 < 0) return false;
    for (int i = i2 + 1; i < n && i3 < 0; ++i)
        if (orient4(p_[0], p_[i1], p_[i2], p_[i]) != 0) i3 = i;
    if (i3 < 0) return false;
    int q[4] = {0, i1, i2, i3};
    for (int k = 0; k < 4; ++k) {
        int a = q[(k + 1) % 4], b = q[(k + 2) % 4], c = q[(k + 3) % 4], d = q[k];
        if (orient4(p_[a], p_[b], p_[c], p_[d]) > 0) std::swap(b, c);
        add_tri(a, b, c);
    }
    for (int i = 1; i < n; ++i)
        if (i != i1 && i != i2 && i != i3) insert(i);
    return true;
}

HullResult IncrementalHull::export_polytope() {
    // group live triangles by their oriented plane
    std::map<std::vector<mpz_class>, std::vector<int>> groups;
    for (size_t i = 0; i < tris_.size(); ++i) {
        if (!tris_[i].alive) continue;
        const Tri& t = tris_[i];
        groups[{t.a[0], t.a[1], t.a[2], t.b}].push_back(static_cast<int>(i));
    }
    std::vector<std::vector<int>> cycles;
    for (auto& [k, ids] : groups) {
        std::set<std::pair<int, int>> de;
        for (int id : ids)
            for (int j = 0; j < 3; ++j) de.insert({tris_[id].v[j], tris_[id].v[(j + 1) % 3]});
        std::map<int, int> next;
        for (auto [u, v] : de)
            if (!de.count({v, u})) next[u] = v;
        int start = next.begin()->first;
        std::vector<int> cyc{start};
        for (int v = next[start]; v != start; v = next[v]) cyc.push_back(v);
        if (cyc.size() != next.size()) throw Error("InternalFault", "facet boundary is not a single cycle");
        cycles.push_back(std::move(cyc));
    }
    // drop vertices where a cycle goes straight
    for (auto& cyc : cycles) {
        std::vector<int> kept;
        size_t m = cyc.size();
        for (size_t i = 0; i < m; ++i) {
            const Point3& u = p_[cyc[(i + m - 1) % m]];
            const Point3& v = p_[cyc[i]];
            const Point3& w = p_[cyc[(i + 1) % m]];
            if (!cross(v - u, w - v).is_zero()) kept.push_back(cyc[i]);
        }
        cyc.swap(kept);
    }
    std::set<int> used;
    for (auto& cyc : cycles) used.insert(cyc.begin(), cyc.end());
    HullResult r;
    std::map<int, int> renum;
    for (int u : used) {
        renum[u] = static_cast<int>(r.source.size());
        r.source.push_back(u);
        r.poly.vertices.push_back(p_[u]);
    }
    for (auto& cyc : cycles) {
        for (int& v : cyc) v = renum[v];
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
    }
    std::sort(cycles.begin(), cycles.end());
    r.poly.facets = std::move(cycles);
    recompute_planes(r.poly);
    return r;
}

HullResult IncrementalHull::run() {
    if (!init()) throw Error("DegenerateSpan", "points do not span 3-space");
    return export_polytope();
}

}  // namespace

HullResult hull3_indexed(const std::vector<Point3>& points) {
    IncrementalHull h(points);
    return h.run();
}

Polytope3 hull3(const std::vector<Point3>& points) { return hull3_indexed(points).poly; }

void recompute_planes(Polytope3& P) {
    P.facet_planes.clear();
    for (const auto& f : P.facets) {
        if (f.size() < 3) throw Error("MalformedPolytope", "facet with fewer than 3 vertices");
        P.facet_planes.push_back(plane_through(P.vertices[f[0]], P.vertices[f[1]], P.vertices[f[2]]));
    }
}

Rational volume(const Polytope3& P) {
    Rational v = 0;
    const Point3& o = P.vertices[0];
    for (const auto& f : P.facets)
        for (size_t i = 1; i + 1 < f.size(); ++i)
            v += det3(P.vertices[f[0]] - o, P.vertices[f[i]] - o, P.vertices[f[i + 1]] - o);
    return v / 6;
}

bool is_beyond(const Polytope3& P, const Face& F, const Point3& x) {
    P.require_face(F);
    auto in = P.facets_containing(F);
    std::set<int> s(in.begin(), in.end());
    for (size_t i = 0; i < P.facets.size(); ++i) {
        int sd = side(P.facet_planes[i], x);
        if (s.count(static_cast<int>(i)) ? sd <= 0 : sd >= 0) return false;
    }
    return true;
}

bool strictly_inside(const Polytope3& P, const Point3& x) {
    for (const auto& h : P.facet_planes)
        if (side(h, x) >= 0) return false;
    return true;
}

bool inside_closed(const Polytope3& P, const Point3& x) {
    for (const auto& h : P.facet_planes)
        if (side(h, x) > 0) return false;
    return true;
}

namespace {

// Each vertex of A is either a vertex of the gluing facet of B or strictly beyond it.
bool beyond_all(const Polytope3& A, const Polytope3& B, const Face& FB) {
    std::vector<Point3> glue;
    for (int v : FB) glue.push_back(B.vertices[v]);
    bool strict_seen = false;
    for (const auto& p : A.vertices) {
        if (std::find(glue.begin(), glue.end(), p) != glue.end()) continue;
        if (!is_beyond(B, FB, p)) return false;
        strict_seen = true;
    }
    return strict_seen;
}

}  // namespace

bool attach_check(const Polytope3& P, const Polytope3& Q, const Face& FP, const Face& FQ) {
    if (!P.has_facet(FP) || !Q.has_facet(FQ)) throw Error("UnknownFace", "attach_check needs facets");
    return beyond_all(P, Q, FQ) && beyond_all(Q, P, FP);
}

Graph skeleton(const Polytope3& P) {
    Graph g;
    g.n = P.size();
    for (auto [u, v] : P.edges()) g.add(u, v);
    return g;
}

std::string audit_polytope(const Polytope3& P) {
    int n = P.size();
    if (P.facets.size() != P.facet_planes.size()) return "facet/plane count mismatch";
    std::map<std::pair<int, int>, int> directed;
    for (size_t i = 0; i < P.facets.size(); ++i) {
        const auto& f = P.facets[i];
        if (f.size() < 3) return "facet " + std::to_string(i) + " has fewer than 3 vertices";
        std::set<int> uniq(f.begin(), f.end());
        if (uniq.size() != f.size()) return "facet " + std::to_string(i) + " repeats a vertex";
        for (int v : f)
            if (v < 0 || v >= n) return "facet " + std::to_string(i) + " has an out-of-range index";
        const Plane& h = P.facet_planes[i];
        for (int v : f)
            if (side(h, P.vertices[v]) != 0) return "facet " + std::to_string(i) + " is not planar";
        size_t m = f.size();
        for (size_t k = 0; k < m; ++k) {
            const Point3& u = P.vertices[f[k]];
            const Point3& v = P.vertices[f[(k + 1) % m]];
            const Point3& w = P.vertices[f[(k + 2) % m]];
            if (sgn(dot(cross(v - u, w - v), h.a)) <= 0)
                return "facet " + std::to_string(i) + " is not strictly convex counterclockwise";
            if (directed[{f[k], f[(k + 1) % m]}]++ > 0) return "directed edge used twice";
        }
        for (int v = 0; v < n; ++v)
            if (!uniq.count(v) && side(h, P.vertices[v]) >= 0)
                return "vertex " + std::to_string(v) + " violates facet " + std::to_string(i);
    }
    for (auto& [e, c] : directed)
        if (!directed.count({e.second, e.first})) return "edge without opposite facet";
    long V = n, E = static_cast<long>(directed.size()) / 2, F = static_cast<long>(P.facets.size());
    if (V - E + F != 2) return "Euler relation fails";
    std::vector<bool> seen(n, false);
    for (const auto& f : P.facets)
        for (int v : f) seen[v] = true;
    for (int v = 0; v < n; ++v)
        if (!seen[v]) return "vertex " + std::to_string(v) + " lies on no facet";
    return "";
}

bool is_three_connected(const Graph& g) {
    if (g.n < 4) return false;
    auto adj = g.adjacency();
    auto connected_without = [&](int a, int b) {
        std::vector<char> seen(g.n, 0);
        if (a >= 0) seen[a] = 1;
        if (b >= 0) seen[b] = 1;
        int start = -1, total = 0;
        for (int v = 0; v < g.n; ++v)
            if (!seen[v]) {
                ++total;
                if (start < 0) start = v;
            }
        std::vector<int> st{start};
        seen[start] = 1;
        int reached = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            for (int w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    st.push_back(w);
                }
        }
        return reached == total;
    };
    if (!connected_without(-1, -1)) return false;
    for (int a = 0; a < g.n; ++a)
        for (int b = a + 1; b < g.n; ++b)
            if (!connected_without(a, b)) return false;
    return true;
}

Extension extend_beyond(const Polytope3& P, const std::vector<Point3>& X) {
    if (X.empty()) throw Error("NotBeyond", "no points to add");
    int n = P.size();
    std::vector<char> vis(P.facets.size(), 0);
    for (size_t k = 0; k < X.size(); ++k)
        for (size_t i = 0; i < P.facets.size(); ++i) {
            int sd = side(P.facet_planes[i], X[k]);
            if (sd == 0) throw Error("NotBeyond", "point on a facet plane");
            if (k == 0)
                vis[i] = sd > 0;
            else if (vis[i] != (sd > 0))
                throw Error("NotBeyond", "points see different facets");
        }
    std::vector<int> U;
    for (size_t i = 0; i < P.facets.size(); ++i)
        if (vis[i]) U.insert(U.end(), P.facets[i].begin(), P.facets[i].end());
    if (U.empty()) throw Error("NotBeyond", "point inside the polytope");
    std::sort(U.begin(), U.end());
    U.erase(std::unique(U.begin(), U.end()), U.end());
    std::vector<Point3> pts;
    for (int u : U) pts.push_back(P.vertices[u]);
    pts.insert(pts.end(), X.begin(), X.end());
    auto small = hull3_indexed(pts);
    // global index: old vertices keep theirs, X[k] becomes n + k
    auto global = [&](int v) {
        int s = small.source[v];
        return s < static_cast<int>(U.size()) ? U[s] : n + (s - static_cast<int>(U.size()));
    };
    std::vector<char> seen(X.size(), 0);
    for (int s : small.source)
        if (s >= static_cast<int>(U.size())) seen[s - U.size()] = 1;
    for (char c : seen)
        if (!c) throw Error("NotBeyond", "added point is not extreme");
    std::vector<std::vector<int>> facets;
    std::vector<Plane> planes;
    for (size_t i = 0; i < P.facets.size(); ++i)
        if (!vis[i]) {
            facets.push_back(P.facets[i]);
            planes.push_back(P.facet_planes[i]);
        }
    size_t first_new = facets.size();
    for (size_t i = 0; i < small.poly.facets.size(); ++i) {
        std::vector<int> cyc;
        bool fresh = false;
        for (int v : small.poly.facets[i]) {
            cyc.push_back(global(v));
            fresh |= cyc.back() >= n;
        }
        if (!fresh) continue;
        facets.push_back(cyc);
        planes.push_back(small.poly.facet_planes[i]);
    }
    auto point = [&](int g) -> const Point3& { return g < n ? P.vertices[g] : X[g - n]; };
    // the new facets must support the whole point set
    for (size_t i = first_new; i < facets.size(); ++i) {
        std::set<int> on(facets[i].begin(), facets[i].end());
        for (int g = 0; g < n + static_cast<int>(X.size()); ++g)
            if (!on.count(g) && side(planes[i], point(g)) >= 0)
                throw Error("NotBeyond", "extension is not local");
    }
    std::set<std::pair<int, int>> de;
    for (const auto& f : facets)
        for (size_t j = 0; j < f.size(); ++j)
            if (!de.insert({f[j], f[(j + 1) % f.size()]}).second) throw Error("InternalFault", "repeated directed edge");
    for (auto [u, v] : de)
        if (!de.count({v, u})) throw Error("InternalFault", "extension surface is not closed");
    std::vector<char> used(n + X.size(), 0);
    for (const auto& f : facets)
        for (int g : f) used[g] = 1;
    Extension r;
    std::vector<int> renum(n + X.size(), -1);
    for (size_t g = 0; g < used.size(); ++g)
        if (used[g]) {
            renum[g] = r.poly.size();
            r.poly.vertices.push_back(point(static_cast<int>(g)));
        }
    r.old_to_new.assign(renum.begin(), renum.begin() + n);
    for (size_t k = 0; k < X.size(); ++k) r.added.push_back(renum[n + k]);
    for (auto& f : facets)
        for (int& g : f) g = renum[g];
    r.poly.facets = std::move(facets);
    r.poly.facet_planes = std::move(planes);
    return r;
}

}  // namespace smalltri
