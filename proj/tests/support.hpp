#pragma once

// Shared helpers for the unit, property and acceptance tests: small named
// graphs, a test-side random graph generator and independent oracles that
// do not go through the library's transfer-matrix code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "treezeta/graph.hpp"
#include "treezeta/scalar.hpp"

namespace tzt {

using namespace treezeta;

// Segment c —a→ d with ω(a) = wa, ω(ā) = wb.
inline WeightedGraph segment(long wa, long wb) {
    return WeightedGraph::build({"c", "d"}, {{"a", "c", "d", "ab", wa}, {"ab", "d", "c", "a", wb}});
}

// One loop a at c with ω(a) = wa, ω(ā) = wb.
inline WeightedGraph loop(long wa, long wb) {
    return WeightedGraph::build({"c"}, {{"a", "c", "c", "ab", wa}, {"ab", "c", "c", "a", wb}});
}

// Bouquet of loops at c, one pair per weight (both members weighted alike).
inline WeightedGraph bouquet(const std::vector<long>& weights) {
    std::vector<RawEdge> es;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::string a = "a" + std::to_string(i), ab = a + "b";
        es.push_back({a, "c", "c", ab, weights[i]});
        es.push_back({ab, "c", "c", a, weights[i]});
    }
    return WeightedGraph::build({"c"}, es);
}

// Path graph v0 — v1 — … with the given (forward, backward) weights.
inline WeightedGraph path_graph(const std::vector<std::pair<long, long>>& w) {
    std::vector<std::string> vs{"v0"};
    std::vector<RawEdge> es;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::string o = "v" + std::to_string(i), t = "v" + std::to_string(i + 1);
        vs.push_back(t);
        std::string a = "p" + std::to_string(i), ab = a + "b";
        es.push_back({a, o, t, ab, w[i].first});
        es.push_back({ab, t, o, a, w[i].second});
    }
    return WeightedGraph::build(vs, es);
}

// Test-side random connected graph: `pairs` edge pairs on up to pairs+1
// vertices, weights uniform in [lo, hi]. Loops and multi-edges allowed when
// `cycles` is true; otherwise a tree.
inline WeightedGraph random_test_graph(std::mt19937_64& rng, int pairs, long lo, long hi, bool cycles) {
    std::uniform_int_distribution<long> wd(lo, hi);
    std::vector<std::string> vs{"n0"};
    std::vector<RawEdge> es;
    for (int k = 0; k < pairs; ++k) {
        std::uniform_int_distribution<std::size_t> vd(0, vs.size() - 1);
        std::string from = vs[vd(rng)];
        std::string to;
        if (!cycles || std::bernoulli_distribution(0.6)(rng)) {
            to = "n" + std::to_string(vs.size());
            vs.push_back(to);
        } else {
            to = vs[vd(rng)];
        }
        std::string a = "x" + std::to_string(k), ab = a + "r";
        es.push_back({a, from, to, ab, wd(rng)});
        es.push_back({ab, to, from, a, wd(rng)});
    }
    return WeightedGraph::build(vs, es);
}

inline bool gamma_setting(const WeightedGraph& g) {
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (g.weight(e) < 2) return false;
        if (g.weight(e) < 3 && g.weight(g.inverse(e)) < 3) return false;
    }
    return true;
}

// Unit term: 1 when a vertex source equals the target, and for an edge
// source a, 1 when the target is o(a), t(a), a or ā.
inline long oracle_unit(const WeightedGraph& g, const Site& u, const Site& w) {
    if (u.is_vertex()) return w.is_vertex() && w.index == u.index ? 1 : 0;
    const std::size_t a = u.index;
    bool hit = w.is_vertex() ? (w.index == g.origin(a) || w.index == g.terminus(a))
                             : (w.index == a || w.index == g.inverse(a));
    return hit ? 1 : 0;
}

// Path-count oracle: sums weight^{-s} over every path from the source up to
// length L by explicit depth-first search, with weights computed directly
// from the definitions (step factor ω(b), or ω(b) − 1 when b = ā).
template <class T>
T brute_series(const WeightedGraph& g, const Site& u, const Site& w, const std::function<T(std::uint64_t)>& pw,
               long L) {
    auto ends_in = [&](std::size_t e) {
        if (w.is_vertex()) return g.terminus(e) == w.index;
        return e == w.index || e == g.inverse(w.index);
    };
    T total = T(oracle_unit(g, u, w));
    std::function<void(std::size_t, std::uint64_t, long)> walk = [&](std::size_t last, std::uint64_t weight,
                                                                      long len) {
        if (len > L) return;
        bool counts = u.is_vertex() ? len >= 1 : len >= 2;
        if (counts && ends_in(last)) total += pw(weight);
        if (len == L) return;
        for (std::size_t b : g.out_edges(g.terminus(last))) {
            std::uint64_t f = b == g.inverse(last) ? g.weight(b) - 1 : g.weight(b);
            if (f == 0) continue;
            walk(b, weight * f, len + 1);
        }
    };
    if (u.is_vertex()) {
        for (std::size_t a : g.out_edges(u.index)) walk(a, g.weight(a), 1);
    } else {
        walk(u.index, 1, 1);
        walk(g.inverse(u.index), 1, 1);
    }
    return total;
}

inline Rational rational_power(std::uint64_t n, long s) {
    Rational r(1);
    Rational b(static_cast<long>(n));
    long e = s < 0 ? -s : s;
    for (long i = 0; i < e; ++i) r *= b;
    if (s > 0) r = 1 / r;
    return r;
}

inline Complex complex_power(std::uint64_t n, Complex s) { return std::exp(-s * std::log(static_cast<double>(n))); }

// Determinant by permutation expansion (Leibniz), for small matrices.
template <class T>
T leibniz_det(const std::vector<std::vector<T>>& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    T total = T(0);
    do {
        T term = T(1);
        for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        total += inversions % 2 ? T(-term) : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Hand-derived closed forms for the one-segment and one-loop graphs, written
// in terms of x = α^{-s}, y = β^{-s}, P = (α+1)^{-s}, Q = (β+1)^{-s} where
// α = ω(a) − 1 and β = ω(ā) − 1.
template <class T>
struct ClosedForms {
    T x, y, P, Q;

    template <class Pow>
    ClosedForms(const Pow& pw, std::uint64_t alpha, std::uint64_t beta)
        : x(pw(alpha)), y(pw(beta)), P(pw(alpha + 1)), Q(pw(beta + 1)) {}

    T one() const { return T(1); }
    T segment_vertex() const { return (one() + (P - x) * y) / (one() - x * y); }
    T segment_edge() const { return (one() + x) * (one() + y) / (one() - x * y); }
    T loop_den() const { return (one() - P) * (one() - Q) - x * y; }
    T loop_vertex() const { return (one() - (P - x) * (Q - y)) / loop_den(); }
    T loop_edge() const { return ((x + one()) * (y + one()) - P * Q) / loop_den(); }
    // Balanced loop (α = β), with the common factor cancelled.
    T balanced_loop_vertex() const { return (one() - x + P) / (one() - x - P); }
    T balanced_loop_edge() const { return (one() + x + P) / (one() - x - P); }
};

// Coefficient oracle: number of paths from u into the target set with each
// weight ≤ n_max, by depth-first search pruned on the weight.
inline std::map<std::uint64_t, Integer> brute_coefficients(const WeightedGraph& g, const Site& u, const Site& w,
                                                    std::uint64_t n_max) {
    std::map<std::uint64_t, Integer> out;
    auto ends_in = [&](std::size_t e) {
        if (w.is_vertex()) return g.terminus(e) == w.index;
        return e == w.index || e == g.inverse(w.index);
    };
    if (long unit = oracle_unit(g, u, w)) out[1] += unit;
    std::function<void(std::size_t, std::uint64_t, long)> walk = [&](std::size_t last, std::uint64_t weight,
                                                                      long len) {
        if (weight > n_max) return;
        if ((u.is_vertex() || len >= 2) && ends_in(last)) out[weight] += 1;
        for (std::size_t b : g.out_edges(g.terminus(last))) {
            std::uint64_t f = b == g.inverse(last) ? g.weight(b) - 1 : g.weight(b);
            walk(b, weight * f, len + 1);
        }
    };
    if (u.is_vertex()) {
        for (std::size_t a : g.out_edges(u.index)) walk(a, g.weight(a), 1);
    } else {
        walk(u.index, 1, 1);
        walk(g.inverse(u.index), 1, 1);
    }
    return out;
}

// Relative stabilizer sizes m(v) = |G_c|/|G_v|, propagated along edges by
// m(t(a)) = m(o(a))·ω(a)/ω(ā). Returns nothing when some cycle is unbalanced.
inline std::optional<std::vector<Rational>> relative_sizes(const WeightedGraph& g, std::size_t c) {
    std::vector<std::optional<Rational>> m(g.num_vertices());
    m[c] = Rational(1);
    std::vector<std::size_t> stack{c};
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t a : g.out_edges(v)) {
            Rational next = *m[v] * Rational(static_cast<long>(g.weight(a)), static_cast<long>(g.weight(g.inverse(a))));
            next.canonicalize();
            std::size_t t = g.terminus(a);
            if (!m[t]) {
                m[t] = next;
                stack.push_back(t);
            } else if (*m[t] != next) {
                return std::nullopt;
            }
        }
    }
    std::vector<Rational> out;
    for (const auto& x : m) out.push_back(*x);
    return out;
}

// χ(Γ,c) = Σ_v m(v) − Σ_{pairs} m(o(a))·ω(a), with χ(Γ,a) = χ(Γ,o(a))/ω(a).
inline Rational oracle_chi(const WeightedGraph& g, const Site& u) {
    std::size_t c = u.is_vertex() ? u.index : g.origin(u.index);
    std::vector<Rational> m = *relative_sizes(g, c);
    Rational chi(0);
    for (const auto& x : m) chi += x;
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        if (a < g.inverse(a)) chi -= m[g.origin(a)] * static_cast<long>(g.weight(a));
    if (!u.is_vertex()) chi /= static_cast<long>(g.weight(u.index));
    return chi;
}

}  // namespace tzt
