#include <algorithm>
#include <map>

#include "smalltri/triangulation.hpp"

namespace smalltri {

namespace {

using Tri = std::array<int, 3>;

class MinSearch {
public:
    MinSearch(const Polytope3& P, const BruteOptions& opt) : P_(P), opt_(opt), n_(P.size()) {
        id_.assign(static_cast<size_t>(n_) * n_ * n_ * n_, -1);
        for (int a = 0; a < n_; ++a)
            for (int b = a + 1; b < n_; ++b)
                for (int c = b + 1; c < n_; ++c)
                    for (int d = c + 1; d < n_; ++d)
                        if (orient4(P.vertices[a], P.vertices[b], P.vertices[c], P.vertices[d]) != 0) {
                            id_[idx(a, b, c, d)] = static_cast<int>(tets_.size());
                            tets_.push_back({a, b, c, d});
                        }
        compat_.assign(tets_.size() * tets_.size(), -1);
        boundary_.assign(static_cast<size_t>(n_) * n_ * n_, 0);
        for (const auto& f : P.facets)
            for (size_t i = 0; i < f.size(); ++i)
                for (size_t j = 0; j < f.size(); ++j)
                    for (size_t k = 0; k < f.size(); ++k) boundary_[(f[i] * n_ + f[j]) * n_ + f[k]] = 1;
    }

    BruteResult run();

private:
    const Polytope3& P_;
    const BruteOptions& opt_;
    int n_;
    std::vector<int> id_;
    std::vector<Tetra> tets_;
    std::vector<signed char> compat_;
    std::vector<char> boundary_;
    size_t best_ = SIZE_MAX;
    std::vector<int> best_set_;
    long nodes_ = 0;

    size_t idx(int a, int b, int c, int d) const { return ((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d; }

    int tet_id(int a, int b, int c, int d) const {
        Tetra t = make_tetra(a, b, c, d);
        return id_[idx(t[0], t[1], t[2], t[3])];
    }

    bool compatible(int s, int t) {
        auto& c = compat_[static_cast<size_t>(s) * tets_.size() + t];
        if (c < 0) {
            c = proper_pair(P_, tets_[s], tets_[t]) ? 1 : 0;
            compat_[static_cast<size_t>(t) * tets_.size() + s] = c;
        }
        return c == 1;
    }

    bool allowed(const Tetra& t) const {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (opt_.forbidden_edges.count({t[i], t[j]})) return false;
        return true;
    }

    bool has_required(const std::vector<int>& placed) const {
        std::set<Edge> e;
        for (int s : placed)
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) e.insert({tets_[s][i], tets_[s][j]});
        for (const auto& r : opt_.required_edges)
            if (!e.count(r)) return false;
        return true;
    }

    void place(int s, std::map<Tri, int>& frontier, std::vector<int>& uses) {
        const Tetra& t = tets_[s];
        for (int k = 0; k < 4; ++k) {
            Tri f;
            int o = t[k], m = 0;
            for (int j = 0; j < 4; ++j)
                if (j != k) f[m++] = t[j];
            if (boundary_[(f[0] * n_ + f[1]) * n_ + f[2]]) continue;
            auto it = frontier.find(f);
            if (it != frontier.end())
                frontier.erase(it);
            else
                frontier[f] = o;
        }
        for (int v : t) ++uses[v];
    }

    void dfs(std::vector<int>& placed, const std::map<Tri, int>& frontier, const std::vector<int>& uses);
};

void MinSearch::dfs(std::vector<int>& placed, const std::map<Tri, int>& frontier, const std::vector<int>& uses) {
    if (opt_.budget && ++nodes_ > *opt_.budget) throw Error("BudgetExceeded");
    if (!opt_.budget) ++nodes_;
    if (frontier.empty()) {
        if (placed.size() < best_ && has_required(placed)) {
            best_ = placed.size();
            best_set_ = placed;
        }
        return;
    }
    size_t unused = 0;
    for (int u : uses) unused += u == 0;
    size_t lb = placed.size() + std::max((frontier.size() + 3) / 4, unused);
    lb = std::max(lb, static_cast<size_t>(n_ - 3));
    if (lb >= best_) return;
    const auto& [f, o] = *frontier.begin();
    const auto& V = P_.vertices;
    int so = orient4(V[f[0]], V[f[1]], V[f[2]], V[o]);
    for (int w = 0; w < n_; ++w) {
        if (w == f[0] || w == f[1] || w == f[2]) continue;
        if (orient4(V[f[0]], V[f[1]], V[f[2]], V[w]) * so >= 0) continue;
        int s = tet_id(f[0], f[1], f[2], w);
        if (!allowed(tets_[s])) continue;
        bool ok = true;
        for (int q : placed)
            if (!compatible(s, q)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        auto fr = frontier;
        auto us = uses;
        place(s, fr, us);
        placed.push_back(s);
        dfs(placed, fr, us);
        placed.pop_back();
        if (best_ == static_cast<size_t>(n_ - 3)) return;
    }
}

BruteResult MinSearch::run() {
    Triangulation cone = cone_triangulation(P_, 0);
    bool cone_ok = true;
    for (const auto& t : cone.tets) cone_ok &= allowed(t);
    if (cone_ok) {
        std::vector<int> ids;
        for (const auto& t : cone.tets) ids.push_back(tet_id(t[0], t[1], t[2], t[3]));
        if (has_required(ids)) {
            best_ = ids.size();
            best_set_ = ids;
        }
    }
    const auto& f0 = P_.facets[0];
    int u = f0[0], v = f0[1];
    for (int w : f0) {
        if (w == u || w == v) continue;
        for (int x = 0; x < n_; ++x) {
            if (std::find(f0.begin(), f0.end(), x) != f0.end()) continue;
            int s = tet_id(u, v, w, x);
            if (s < 0 || !allowed(tets_[s])) continue;
            std::map<Tri, int> fr;
            std::vector<int> uses(n_, 0);
            place(s, fr, uses);
            std::vector<int> placed{s};
            dfs(placed, fr, uses);
        }
    }
    if (best_ == SIZE_MAX) throw Error("NoTriangulation");
    BruteResult r;
    r.size = best_;
    for (int s : best_set_) r.witness.tets.push_back(tets_[s]);
    std::sort(r.witness.tets.begin(), r.witness.tets.end());
    r.nodes = nodes_;
    return r;
}

}  // namespace

BruteResult brute_min(const Polytope3& P, const BruteOptions& opt) {
    if (P.size() > opt.max_vertices)
        throw Error("TooLarge", std::to_string(P.size()) + " vertices exceed the limit " + std::to_string(opt.max_vertices));
    for (const auto& e : opt.forbidden_edges)
        if (e.first >= e.second) throw Error("BadEdge", "edges must be given as (i, j) with i < j");
    for (const auto& e : opt.required_edges)
        if (e.first >= e.second) throw Error("BadEdge", "edges must be given as (i, j) with i < j");
    MinSearch s(P, opt);
    return s.run();
}

}  // namespace smalltri
