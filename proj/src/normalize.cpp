#include <algorithm>
#include <cstdlib>
#include <map>

#include "smalltri/reduction.hpp"

namespace smalltri {

namespace {

using Clause = std::vector<int>;

Clause tidy(Clause c) {
    std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

bool tautology(const Clause& c) {
    for (size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] == -c[i + 1]) return true;
    return false;
}

struct Count {
    int pos = 0, neg = 0;
};

std::map<int, Count> occurrences(const std::vector<Clause>& cs) {
    std::map<int, Count> occ;
    for (const auto& c : cs)
        for (int l : c) (l > 0 ? occ[l].pos : occ[-l].neg)++;
    return occ;
}

}  // namespace

bool is_restricted(const CnfFormula& f) {
    if (f.V < 1 || f.clauses.empty()) return false;
    std::vector<Count> occ(f.V + 1);
    for (const auto& c : f.clauses) {
        if (c.empty() || tidy(c).size() != c.size()) return false;
        for (int l : c) {
            if (l == 0 || std::abs(l) > f.V) return false;
            (l > 0 ? occ[l].pos : occ[-l].neg)++;
        }
    }
    for (int v = 1; v <= f.V; ++v)
        if (occ[v].pos != 2 || occ[v].neg != 1) return false;
    return true;
}

RestrictedFormula normalize(const CnfFormula& f) {
    std::vector<Clause> cs;
    for (const auto& c : f.clauses) {
        if (c.empty()) throw Error("EmptyClauseProduced", "the input has an empty clause");
        for (int l : c)
            if (l == 0 || std::abs(l) > f.V) throw Error("Unsupported", "literal out of range");
        Clause t = tidy(c);
        if (tautology(t)) throw Error("Unsupported", "tautological clause");
        cs.push_back(t);
    }
    for (bool changed = true; changed;) {
        changed = false;
        auto occ = occurrences(cs);
        for (const auto& [v, k] : occ) {
            if (k.pos == 0 || k.neg == 0) {
                int var = v;
                std::erase_if(cs, [&](const Clause& c) {
                    return std::any_of(c.begin(), c.end(), [&](int l) { return std::abs(l) == var; });
                });
                changed = true;
                break;
            }
            if (k.pos == 1 && k.neg == 1) {
                auto ip = std::find_if(cs.begin(), cs.end(), [&](const Clause& c) { return std::count(c.begin(), c.end(), v) > 0; });
                auto in = std::find_if(cs.begin(), cs.end(), [&](const Clause& c) { return std::count(c.begin(), c.end(), -v) > 0; });
                Clause r;
                for (int l : *ip)
                    if (l != v) r.push_back(l);
                for (int l : *in)
                    if (l != -v) r.push_back(l);
                r = tidy(r);
                if (r.empty()) throw Error("EmptyClauseProduced", "resolving variable " + std::to_string(v));
                size_t a = ip - cs.begin(), b = in - cs.begin();
                cs.erase(cs.begin() + std::max(a, b));
                cs.erase(cs.begin() + std::min(a, b));
                // a tautological resolvent is always satisfied
                if (!tautology(r)) cs.push_back(r);
                changed = true;
                break;
            }
        }
    }
    if (cs.empty()) throw Error("TriviallySatisfied");
    auto occ = occurrences(cs);
    RestrictedFormula out;
    std::map<int, int> id;
    for (const auto& [v, k] : occ) {
        bool flip = k.neg > k.pos;
        int p = flip ? k.neg : k.pos, q = flip ? k.pos : k.neg;
        if (p != 2 || q != 1)
            throw Error("Unsupported", "variable " + std::to_string(v) + " occurs " + std::to_string(k.pos) + "+/" +
                                           std::to_string(k.neg) + "-");
        id[v] = static_cast<int>(out.source.size()) + 1;
        out.source.push_back(flip ? -v : v);
    }
    out.V = static_cast<int>(out.source.size());
    for (const auto& c : cs) {
        Clause d;
        for (int l : c) {
            int v = std::abs(l), s = (l > 0) == (out.source[id[v] - 1] > 0) ? 1 : -1;
            d.push_back(s * id[v]);
        }
        out.clauses.push_back(tidy(d));
    }
    return out;
}

Params params(long C, long V) {
    if (C < 1 || V < 1) throw Error("ZeroSize", "need at least one clause and one variable");
    Params p;
    p.C = C;
    p.V = V;
    p.p_T = 16 * C + 23 * V + 3 * C * V + 1;
    p.p_n = 8 * C + 13 * V;
    p.m = p.p_T - p.p_n + 1;
    p.n = (3 * p.m + 6) * (V + C) + 7 * V + 2 + 2 * C + 1;
    p.K = p.m * (3 * C + 3 * V) + p.p_T;
    if (p.K != p.n + p.m - 4) throw Error("InternalFault", "K differs from n + m - 4");
    return p;
}

bool satisfies(const CnfFormula& f, const Assignment& a) {
    if (static_cast<int>(a.size()) != f.V) return false;
    for (const auto& c : f.clauses) {
        bool ok = false;
        for (int l : c) ok |= a[std::abs(l) - 1] == (l > 0);
        if (!ok) return false;
    }
    return true;
}

}  // namespace smalltri
