#include "smalltri/triangulation.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

namespace smalltri {

Tetra make_tetra(int a, int b, int c, int d) {
    Tetra t{a, b, c, d};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[3]) throw Error("DegenerateTetra", "repeated vertex");
    return t;
}

std::set<Edge> Triangulation::edge_set() const {
    std::set<Edge> e;
    for (const auto& t : tets)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) e.insert({t[i], t[j]});
    return e;
}

namespace {

bool origin_in_hull(const std::vector<Vec3>& v) {
    Point3 o(0, 0, 0);
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (point_in_closed_simplex(o, {v[i], v[j]})) return true;
            for (size_t k = j + 1; k < n; ++k) {
                if (point_in_closed_simplex(o, {v[i], v[j], v[k]})) return true;
                for (size_t l = k + 1; l < n; ++l)
                    if (point_in_closed_simplex(o, {v[i], v[j], v[k], v[l]})) return true;
            }
        }
    return false;
}

// w lies in the plane normal to e; true when some open half-plane through 0 holds all of w.
bool in_open_half_plane(const std::vector<Vec3>& w, const Vec3& e) {
    for (const auto& wi : w)
        for (int s : {1, -1}) {
            Vec3 n = Rational(s) * cross(e, wi);
            bool ok = true;
            for (const auto& wj : w) {
                int d = sgn(dot(n, wj));
                if (d < 0 || (d == 0 && sgn(dot(wi, wj)) <= 0)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    return false;
}

}  // namespace

bool proper_pair(const Polytope3& P, const Tetra& s, const Tetra& t) {
    std::vector<int> shared, so, to;
    for (int a : s)
        (std::find(t.begin(), t.end(), a) != t.end() ? shared : so).push_back(a);
    for (int b : t)
        if (std::find(s.begin(), s.end(), b) == s.end()) to.push_back(b);
    const auto& V = P.vertices;
    switch (shared.size()) {
    case 4:
        return false;
    case 3: {
        const Point3 &a = V[shared[0]], &b = V[shared[1]], &c = V[shared[2]];
        return orient4(a, b, c, V[so[0]]) * orient4(a, b, c, V[to[0]]) < 0;
    }
    case 2: {
        const Point3& v = V[shared[0]];
        Vec3 e = V[shared[1]] - v;
        std::vector<Vec3> w;
        for (int a : so) w.push_back(cross(V[a] - v, e));
        for (int b : to) w.push_back(-cross(V[b] - v, e));
        return in_open_half_plane(w, e);
    }
    case 1: {
        const Point3& v = V[shared[0]];
        std::vector<Vec3> w;
        for (int a : so) w.push_back(V[a] - v);
        for (int b : to) w.push_back(v - V[b]);
        return hulls_strictly_separated({Point3(0, 0, 0)}, w) || !origin_in_hull(w);
    }
    default: {
        std::vector<Point3> A, B;
        for (int a : s) A.push_back(V[a]);
        for (int b : t) B.push_back(V[b]);
        return hulls_strictly_separated(A, B);
    }
    }
}

ValidationReport validate(const Polytope3& P, const Triangulation& T, const ValidateOptions& opt) {
    ValidationReport rep;
    int n = P.size();
    std::vector<int> good;
    Rational vol = 0;
    for (size_t i = 0; i < T.tets.size(); ++i) {
        const auto& t = T.tets[i];
        bool in_range = true;
        for (int v : t) in_range &= v >= 0 && v < n;
        if (!in_range || t[0] == t[1] || t[1] == t[2] || t[2] == t[3]) {
            rep.failures.push_back({"TetraOutside", {static_cast<int>(i)}});
            continue;
        }
        Rational d = det3(P.vertices[t[1]] - P.vertices[t[0]], P.vertices[t[2]] - P.vertices[t[0]],
                          P.vertices[t[3]] - P.vertices[t[0]]);
        if (sgn(d) == 0) {
            rep.failures.push_back({"DegenerateTetra", {static_cast<int>(i)}});
            continue;
        }
        // vertices of P lie in P, so the tetrahedron does too
        vol += abs(d) / 6;
        good.push_back(static_cast<int>(i));
    }
    struct Box {
        Vec3 lo, hi;
    };
    std::vector<Box> box(T.tets.size());
    for (int i : good) {
        Box b{P.vertices[T.tets[i][0]], P.vertices[T.tets[i][0]]};
        for (int v : T.tets[i])
            for (int k = 0; k < 3; ++k) {
                if (P.vertices[v][k] < b.lo[k]) b.lo[k] = P.vertices[v][k];
                if (P.vertices[v][k] > b.hi[k]) b.hi[k] = P.vertices[v][k];
            }
        box[i] = b;
    }
    std::sort(good.begin(), good.end(), [&](int a, int b) { return box[a].lo.x < box[b].lo.x; });
    unsigned th = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    std::mutex mu;
    std::vector<std::pair<int, int>> bad;
    size_t checked = 0;
    auto worker = [&](unsigned id) {
        size_t local = 0;
        std::vector<std::pair<int, int>> mine;
        for (size_t a = id; a < good.size(); a += th) {
            int i = good[a];
            for (size_t b = a + 1; b < good.size(); ++b) {
                int j = good[b];
                if (box[j].lo.x > box[i].hi.x) break;
                if (box[j].lo.y > box[i].hi.y || box[i].lo.y > box[j].hi.y) continue;
                if (box[j].lo.z > box[i].hi.z || box[i].lo.z > box[j].hi.z) continue;
                ++local;
                if (!proper_pair(P, T.tets[i], T.tets[j])) mine.push_back({std::min(i, j), std::max(i, j)});
            }
        }
        std::lock_guard<std::mutex> g(mu);
        checked += local;
        bad.insert(bad.end(), mine.begin(), mine.end());
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < th; ++k) pool.emplace_back(worker, k);
    for (auto& t : pool) t.join();
    std::sort(bad.begin(), bad.end());
    for (size_t k = 0; k < bad.size() && k < opt.max_failures; ++k)
        rep.failures.push_back({"BadPair", {bad[k].first, bad[k].second}});
    rep.pairs_checked = checked;
    if (vol != volume(P)) rep.failures.push_back({"VolumeMismatch", {}});
    rep.verdict = rep.failures.empty();
    return rep;
}

Triangulation cone_triangulation(const Polytope3& P, int apex) {
    if (apex < 0 || apex >= P.size()) throw Error("UnknownFace", "apex is not a vertex");
    Triangulation T;
    for (const auto& f : P.facets) {
        if (std::find(f.begin(), f.end(), apex) != f.end()) continue;
        for (size_t i = 1; i + 1 < f.size(); ++i) T.tets.push_back(make_tetra(apex, f[0], f[i], f[i + 1]));
    }
    std::sort(T.tets.begin(), T.tets.end());
    return T;
}

SizeBounds size_bounds(long n) {
    if (n < 4) throw Error("TooSmall", "need at least 4 vertices");
    SizeBounds b;
    b.lower = n - 3;
    b.total_upper = n * (n - 1) / 2 - 2 * n + 3;
    b.minimal_upper = 2 * n - 10;
    b.minimal_upper_applies = n > 12;
    return b;
}

}  // namespace smalltri
