#pragma once

// Multiplicative path weights, the (∗_k) lifting property, and Dirichlet
// coefficient tables obtained by counting weighted paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/graph.hpp"
#include "treezeta/scalar.hpp"

namespace treezeta {

// Weight factor contributed by stepping from edge a to edge b: ω(b), or
// ω(b) − 1 when the step backtracks along ā.
inline std::uint64_t step_factor(const WeightedGraph& g, std::size_t a, std::size_t b) {
    std::uint64_t w = g.weight(b);
    return b == g.inverse(a) ? w - 1 : w;
}

// Number of geodesic lifts starting at a fixed lift of the first edge.
inline Integer n_edg(const WeightedGraph& g, const Path& p) {
    validate_path(g, p);
    if (p.length() <= 1) return Integer(static_cast<unsigned long>(p.length()));
    Integer r(1);
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i) r *= static_cast<unsigned long>(step_factor(g, p.edges[i], p.edges[i + 1]));
    return r;
}

// Number of geodesic lifts starting at a fixed lift of the start vertex.
inline Integer n_vert(const WeightedGraph& g, const Path& p) {
    if (p.length() == 0) {
        validate_path(g, p);
        return Integer(1);
    }
    return Integer(static_cast<unsigned long>(g.weight(p.edges.front()))) * n_edg(g, p);
}

// All weights at least 2 and every edge pair has a member of weight at least 3.
inline bool setting_gamma_ok(const WeightedGraph& g) {
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (g.weight(e) < 2) return false;
        if (g.weight(e) < 3 && g.weight(g.inverse(e)) < 3) return false;
    }
    return true;
}

inline void require_weights_at_least_two(const WeightedGraph& g, const char* what) {
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.weight(e) < 2)
            throw SettingError(std::string(what) + ": edge '" + g.edge_id(e) + "' has weight < 2");
}

inline void require_setting_gamma(const WeightedGraph& g, const char* what) {
    require_weights_at_least_two(g, what);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.weight(e) < 3 && g.weight(g.inverse(e)) < 3)
            throw SettingError(std::string(what) + ": edge pair '" + g.edge_id(e) + "' has both weights < 3");
}

// (∗_k) by exhaustive enumeration: every path of length k+1 has N_edg ≥ 2.
inline bool star_k_wlit(const WeightedGraph& g, long k) {
    if (k < 1) throw ValidationError("star_k_wlit: k must be at least 1");
    require_weights_at_least_two(g, "star_k_wlit");
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        bool ok = true;
        for_each_path(g, Site::edge(e), k + 1, [&](const Path& p) {
            if (ok && static_cast<long>(p.length()) == k + 1 && n_edg(g, p) < 2) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

namespace detail {

// Whether the directed graph given by adjacency lists has a walk with k steps.
inline bool has_walk_of_length(const std::vector<std::vector<std::size_t>>& next, long k) {
    const std::size_t n = next.size();
    std::vector<bool> reach(n, true);
    for (long step = 0; step < k; ++step) {
        std::vector<bool> nxt(n, false);
        bool any = false;
        for (std::size_t a = 0; a < n; ++a)
            if (reach[a])
                for (std::size_t b : next[a]) nxt[b] = any = true;
        if (!any) return false;
        reach = std::move(nxt);
    }
    return true;
}

// One more than the longest walk in the graph, or 0 when walks are
// unbounded (the graph has a cycle).
inline long smallest_k_without_walk(const std::vector<std::vector<std::size_t>>& next) {
    const std::size_t n = next.size();
    std::vector<long> longest(n, -1);  // −1 unknown, −2 on the stack
    long best = 0;
    bool cyclic = false;
    std::function<long(std::size_t)> visit = [&](std::size_t a) -> long {
        if (longest[a] >= 0) return longest[a];
        if (longest[a] == -2) {
            cyclic = true;
            return 0;
        }
        longest[a] = -2;
        long l = 0;
        for (std::size_t b : next[a]) l = std::max(l, 1 + visit(b));
        longest[a] = l;
        return l;
    };
    for (std::size_t a = 0; a < n && !cyclic; ++a) best = std::max(best, visit(a));
    return cyclic ? 0 : best + 1;
}

}  // namespace detail

// Steps a → b with factor 1, as adjacency lists over edges.
inline std::vector<std::vector<std::size_t>> unit_factor_steps(const WeightedGraph& g) {
    std::vector<std::vector<std::size_t>> next(g.num_edges());
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        for (std::size_t b : g.out_edges(g.terminus(a)))
            if (step_factor(g, a, b) == 1) next[a].push_back(b);
    return next;
}

// (∗_k) by dynamic programming. With weights ≥ 2 a path of length k+1 has
// N_edg < 2 exactly when each of its k steps has factor 1, so it suffices to
// look for a walk of k factor-1 steps.
inline bool star_k_wlit_dp(const WeightedGraph& g, long k) {
    if (k < 1) throw ValidationError("star_k_wlit: k must be at least 1");
    require_weights_at_least_two(g, "star_k_wlit");
    return !detail::has_walk_of_length(unit_factor_steps(g), k);
}

// Smallest k in 1..|E|²+2 with (∗_k), or 0 when none exists. Factor-1 walks
// of every length exist exactly when the factor-1 step graph has a cycle;
// otherwise the smallest k is one more than its longest walk.
inline long smallest_star_k(const WeightedGraph& g) {
    require_weights_at_least_two(g, "smallest_star_k");
    return detail::smallest_k_without_walk(unit_factor_steps(g));
}

// Maximal weighted out-degree max_c Σ_{a∈o⁻¹(c)} ω(a).
inline std::uint64_t max_weighted_degree(const WeightedGraph& g) {
    std::uint64_t best = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::uint64_t d = 0;
        for (std::size_t e : g.out_edges(v)) d += g.weight(e);
        best = std::max(best, d);
    }
    return best;
}

// The set U of Notation: {u} for a vertex, {u, ū} for an edge.
inline bool path_ends_in(const WeightedGraph& g, const Site& target, std::size_t last_edge) {
    if (target.is_vertex()) return g.terminus(last_edge) == target.index;
    return last_edge == target.index || last_edge == g.inverse(target.index);
}

// The unit term contributed by paths of length 0 (vertex source) or by the
// convention for edge sources: 1_{o(a),t(a)}(w) or 1_{a,ā}(w).
inline long unit_term(const WeightedGraph& g, const Site& source, const Site& target) {
    if (source.is_vertex()) return target.is_vertex() && target.index == source.index ? 1 : 0;
    std::size_t a = source.index;
    if (target.is_vertex()) return target.index == g.origin(a) || target.index == g.terminus(a) ? 1 : 0;
    return target.index == a || target.index == g.inverse(a) ? 1 : 0;
}

// Distribution of path weights: weight → number of paths from the source to
// the target set with that weight, for paths up to max_len edges (vertex
// source: N_vert, all lengths; edge source: N_edg, lengths ≥ 2, starting
// with a or ā). Unit terms are included at weight 1. Paths of weight above
// weight_cap (when non-zero) are dropped, which is safe because weights
// never decrease along extensions.
inline std::map<std::uint64_t, Integer> weight_distribution(const WeightedGraph& g, const Site& source,
                                                            const Site& target, long max_len,
                                                            std::uint64_t weight_cap = 0) {
    std::map<std::uint64_t, Integer> out;
    auto add = [&](std::uint64_t w, const Integer& c) {
        if (sgn(c) == 0) return;
        out[w] += c;
    };
    long unit = unit_term(g, source, target);
    if (unit) add(1, Integer(unit));
    if (max_len < 1) return out;

    const std::size_t m = g.num_edges();
    using Layer = std::vector<std::map<std::uint64_t, Integer>>;
    Layer layer(m);
    long len = 1;
    if (source.is_vertex()) {
        for (std::size_t a : g.out_edges(source.index)) {
            std::uint64_t w = g.weight(a);
            if (weight_cap && w > weight_cap) continue;
            layer[a][w] += 1;
        }
    } else {
        std::size_t a = source.index;
        layer[a][1] += 1;
        layer[g.inverse(a)][1] += 1;
    }
    auto record = [&](const Layer& l) {
        if (source.is_edge() && len < 2) return;
        for (std::size_t e = 0; e < m; ++e) {
            if (l[e].empty() || !path_ends_in(g, target, e)) continue;
            for (const auto& [w, c] : l[e]) add(w, c);
        }
    };
    record(layer);
    while (len < max_len) {
        Layer next(m);
        bool any = false;
        for (std::size_t a = 0; a < m; ++a) {
            if (layer[a].empty()) continue;
            for (std::size_t b : g.out_edges(g.terminus(a))) {
                std::uint64_t f = step_factor(g, a, b);
                if (f == 0) continue;
                for (const auto& [w, c] : layer[a]) {
                    std::uint64_t nw;
                    if (__builtin_mul_overflow(w, f, &nw)) throw CapacityError("path weight overflow");
                    if (weight_cap && nw > weight_cap) continue;
                    next[b][nw] += c;
                    any = true;
                }
            }
        }
        layer = std::move(next);
        ++len;
        record(layer);
        if (!any) break;
    }
    return out;
}

// The same distribution computed by listing every path. Used as an oracle.
inline std::map<std::uint64_t, Integer> weight_distribution_bruteforce(const WeightedGraph& g, const Site& source,
                                                                       const Site& target, long max_len) {
    std::map<std::uint64_t, Integer> out;
    long unit = unit_term(g, source, target);
    if (unit) out[1] += unit;
    std::vector<Site> starts;
    if (source.is_vertex())
        starts.push_back(source);
    else {
        starts.push_back(Site::edge(source.index));
        starts.push_back(Site::edge(g.inverse(source.index)));
    }
    for (const Site& st : starts)
        for_each_path(g, st, max_len, [&](const Path& p) {
            if (p.length() == 0) return;
            if (source.is_edge() && p.length() < 2) return;
            if (!path_ends_in(g, target, p.edges.back())) return;
            Integer w = source.is_vertex() ? n_vert(g, p) : n_edg(g, p);
            if (sgn(w) == 0) return;
            out[w.get_ui()] += 1;
        });
    return out;
}

struct CoefficientTable {
    std::map<std::uint64_t, Integer> a;  // only non-zero entries
    std::map<std::uint64_t, Integer> b;
    std::uint64_t n_max = 0;

    Integer a_at(std::uint64_t n) const {
        auto it = a.find(n);
        return it == a.end() ? Integer(0) : it->second;
    }
    Integer b_at(std::uint64_t n) const {
        auto it = b.find(n);
        return it == b.end() ? Integer(0) : it->second;
    }

    // Tab-separated "n a_n b_n" lines sorted by n, zero rows omitted.
    std::string to_tsv() const {
        std::string s;
        for (const auto& [n, an] : a) s += std::to_string(n) + "\t" + an.get_str() + "\t" + b_at(n).get_str() + "\n";
        return s;
    }
};

// Length bound past which every path has weight above n_max, given (∗_k):
// weight ≥ 2^{(ℓ−k)/k} forces ℓ ≤ k·(log₂ n_max + 1).
inline long coefficient_length_bound(long k, std::uint64_t n_max) {
    long bits = 0;
    while ((std::uint64_t(1) << bits) <= n_max && bits < 63) ++bits;  // floor(log2 n_max) + 1
    return k * (bits + 1);
}

// a_n and b_n = n·a_n for 1 ≤ n ≤ n_max, counting every path from u into W.
inline CoefficientTable dirichlet_coefficients_wlit(const WeightedGraph& g, const Site& u, const Site& w,
                                                    std::uint64_t n_max) {
    require_setting_gamma(g, "dirichlet_coefficients_wlit");
    if (n_max < 1) throw ValidationError("n_max must be at least 1");
    long k = smallest_star_k(g);
    if (k == 0) throw SettingError("dirichlet_coefficients_wlit: no k with property (*_k)");
    CoefficientTable t;
    t.n_max = n_max;
    t.a = weight_distribution(g, u, w, coefficient_length_bound(k, n_max), n_max);
    for (const auto& [n, an] : t.a) t.b[n] = an * Integer(static_cast<unsigned long>(n));
    return t;
}

}  // namespace treezeta
