#pragma once

// Unimodularity, the Euler-Poincaré characteristic of an edge-weighted graph
// at a vertex or an edge, its comparison with the reciprocal zeta value at
// s = -1, and the weighted Ihara zeta function built from the transfer
// operator at s = -1.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/graph.hpp"
#include "treezeta/matrix.hpp"
#include "treezeta/report.hpp"
#include "treezeta/scalar.hpp"
#include "treezeta/weights.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta {

// Product of ω along the path and along its reverse.
inline std::pair<Integer, Integer> balance_products(const WeightedGraph& g, const Path& p) {
    Integer fwd(1), bwd(1);
    for (std::size_t e : p.edges) {
        fwd *= static_cast<unsigned long>(g.weight(e));
        bwd *= static_cast<unsigned long>(g.weight(g.inverse(e)));
    }
    return {fwd, bwd};
}

// Balanced products on every fundamental cycle. The ratio ∏ω(a)/∏ω(ā) is
// multiplicative under concatenation and inverts under reversal, so a
// backtracking pair contributes 1 and every closed path is balanced once the
// cycle basis is.
inline bool is_unimodular(const WeightedGraph& g) {
    for (const Path& c : fundamental_cycles(g)) {
        auto [fwd, bwd] = balance_products(g, c);
        if (fwd != bwd) return false;
    }
    return true;
}

inline void require_unimodular(const WeightedGraph& g, const char* what) {
    if (!is_unimodular(g)) throw SettingError(std::string(what) + ": graph is not unimodular");
}

namespace detail {

inline Rational integer_ratio(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) throw MathError("path weight ratio with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// N_vert(p)/N_vert(p̄) for a path between vertices.
inline Rational vertex_transport(const WeightedGraph& g, const Path& p) {
    return integer_ratio(n_vert(g, p), n_vert(g, path_reverse(g, p)));
}

// N_edg(q)/N_edg(q̄) for a path between edges.
inline Rational edge_transport(const WeightedGraph& g, const Path& q) {
    return integer_ratio(n_edg(g, q), n_edg(g, path_reverse(g, q)));
}

inline Rational chi_at_vertex(const WeightedGraph& g, std::size_t c) {
    OrientedSpanning os = oriented_spanning(g, c);
    Rational chi(1);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (!os.positive[e]) continue;
        Path p = tree_path(g, os.tree, c, g.origin(e));
        if (os.tree.in_tree[e]) {
            chi += Rational(1 - static_cast<long>(g.weight(e))) * vertex_transport(g, p);
        } else {
            p.edges.push_back(e);
            chi -= integer_ratio(n_vert(g, p), n_edg(g, path_reverse(g, p)));
        }
    }
    return chi;
}

}  // namespace detail

// χ(Γ,c) from a spanning tree oriented toward c; χ(Γ,a) = χ(Γ,o(a))/ω(a).
inline Rational chi_at(const WeightedGraph& g, const Site& u) {
    require_unimodular(g, "chi");
    if (u.is_vertex()) return detail::chi_at_vertex(g, u.index);
    Rational r = detail::chi_at_vertex(g, g.origin(u.index)) / Rational(static_cast<long>(g.weight(u.index)));
    r.canonicalize();
    return r;
}

// The pieces of g at vertex c: each connected component of g − c together
// with its edges to c, and each loop at c on its own. Returned as edge-id
// sets; each piece contains c.
inline std::vector<std::set<std::string>> cut_pieces(const WeightedGraph& g, std::size_t c) {
    std::vector<long> comp(g.num_vertices(), -1);
    long ncomp = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (v == c || comp[v] >= 0) continue;
        std::vector<std::size_t> stack{v};
        comp[v] = ncomp;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t e : g.out_edges(x)) {
                std::size_t y = g.terminus(e);
                if (y == c || comp[y] >= 0) continue;
                comp[y] = ncomp;
                stack.push_back(y);
            }
        }
        ++ncomp;
    }
    std::vector<std::set<std::string>> pieces(static_cast<std::size_t>(ncomp));
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (g.is_loop(e) && g.origin(e) == c) {
            if (e < g.inverse(e)) pieces.push_back({g.edge_id(e), g.edge_id(g.inverse(e))});
            continue;
        }
        std::size_t x = g.origin(e) == c ? g.terminus(e) : g.origin(e);
        pieces[static_cast<std::size_t>(comp[x])].insert(g.edge_id(e));
    }
    return pieces;
}

// Checks χ(o(a)) = ω(a)χ(a), χ(a) = χ(ā), vertex and edge transport along
// every reduced path of length ≤ max_len, and the additive split
// χ(Γ,c) = χ(Γ1,c) + χ(Γ2,c) − 1 at every vertex with at least two pieces.
inline Report verify_chi_relations(const WeightedGraph& g, long max_len = 4) {
    require_unimodular(g, "verify_chi_relations");
    Report rep;
    std::vector<Rational> chi_v(g.num_vertices()), chi_e(g.num_edges());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) chi_v[v] = chi_at(g, Site::vertex(v));
    for (std::size_t e = 0; e < g.num_edges(); ++e) chi_e[e] = chi_at(g, Site::edge(e));

    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const std::string& id = g.edge_id(e);
        Rational scaled = Rational(static_cast<long>(g.weight(e))) * chi_e[e];
        rep.expect_equal("chi(o(a)) = w(a) chi(a) at " + id, chi_v[g.origin(e)], scaled);
        rep.expect_equal("chi(a) = chi(inverse a) at " + id, chi_e[e], chi_e[g.inverse(e)]);
    }
    for (std::size_t c = 0; c < g.num_vertices(); ++c)
        for_each_path(g, Site::vertex(c), max_len, [&](const Path& p) {
            if (!is_reduced(g, p)) return;
            Rational rhs = detail::vertex_transport(g, p) * chi_v[path_end(g, p)];
            rep.expect_equal("vertex transport along " + format_path(g, p) + " from " + g.vertex_id(c), chi_v[c], rhs);
        });
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        for_each_path(g, Site::edge(a), max_len, [&](const Path& q) {
            if (!is_reduced(g, q)) return;
            Rational rhs = detail::edge_transport(g, q) * chi_e[q.edges.back()];
            rep.expect_equal("edge transport along " + format_path(g, q), chi_e[a], rhs);
        });
    for (std::size_t c = 0; c < g.num_vertices(); ++c) {
        auto pieces = cut_pieces(g, c);
        if (pieces.size() < 2) continue;
        const std::string& cid = g.vertex_id(c);
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            std::set<std::string> rest;
            for (std::size_t j = 0; j < pieces.size(); ++j)
                if (j != i) rest.insert(pieces[j].begin(), pieces[j].end());
            WeightedGraph g1 = g.subgraph(pieces[i], {cid});
            WeightedGraph g2 = g.subgraph(rest, {cid});
            Rational rhs = chi_at(g1, g1.site(cid)) + chi_at(g2, g2.site(cid)) - Rational(1);
            rep.expect_equal("additive split at " + cid + " piece " + std::to_string(i + 1), chi_v[c], rhs);
        }
    }
    return rep;
}

// Checks χ(Γ,u) = Z_{u→u}(−1)^{−1} at every site, together with the
// transport relations the reciprocal values satisfy at s = −1 and the fact
// that agreement at one site forces agreement everywhere.
inline Report verify_theorem_E(const WeightedGraph& g) {
    if (!setting_gamma_ok(g)) throw SettingError("theorem E precondition failed: Setting [Gamma] does not hold");
    if (has_long_cycle(g)) throw SettingError("theorem E precondition failed: graph has a cycle of length >= 2");
    if (!is_unimodular(g)) throw SettingError("theorem E precondition failed: graph is not unimodular");
    Report rep;
    std::vector<Rational> zv(g.num_vertices()), ze(g.num_edges());
    bool all_equal = true;
    for (const Site& u : g.all_sites()) {
        Rational chi = chi_at(g, u);
        Rational z = zeta_reciprocal<Rational>(g, u, -1);
        (u.is_vertex() ? zv[u.index] : ze[u.index]) = z;
        all_equal = all_equal && chi == z;
        rep.expect_equal("chi = Z(-1)^-1 at " + g.site_id(u), chi, z);
    }
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        Rational rhs = Rational(static_cast<long>(g.weight(a))) * ze[a];
        rep.expect_equal("Z(-1)^-1 at o(a) = w(a) Z(-1)^-1 at a, a=" + g.edge_id(a), zv[g.origin(a)], rhs);
    }
    SpanningTree t = spanning_tree(g);
    for (std::size_t c = 0; c < g.num_vertices(); ++c)
        for (std::size_t d = 0; d < g.num_vertices(); ++d) {
            Path p = tree_path(g, t, c, d);
            Rational rhs = detail::vertex_transport(g, p) * zv[d];
            rep.expect_equal("Z(-1)^-1 vertex transport " + g.vertex_id(c) + "->" + g.vertex_id(d), zv[c], rhs);
        }
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        for (std::size_t b : g.out_edges(g.terminus(a))) {
            if (b == g.inverse(a)) continue;
            Path q = path_from_edges(g, {a, b});
            Rational rhs = detail::edge_transport(g, q) * ze[b];
            rep.expect_equal("Z(-1)^-1 edge transport " + g.edge_id(a) + "->" + g.edge_id(b), ze[a], rhs);
        }
    bool at_base = chi_at(g, Site::vertex(0)) == zv[0];
    rep.expect("agreement at " + g.vertex_id(0) + " implies agreement at every site", !at_base || all_equal);
    return rep;
}

// The transfer operator at s = −1: T(a,b) = N_edg(a,b) when t(a) = o(b).
// All entries are integers.
inline Matrix<Rational> transition_weight(const WeightedGraph& g) {
    require_weights_at_least_two(g, "transition_weight");
    return bass_E<Rational>(g, -1);
}

// det(I − xT), the reciprocal of the weighted Ihara zeta function.
inline Rational ihara_reciprocal(const Matrix<Rational>& t, const Rational& x) {
    return det(Matrix<Rational>::identity(t.dim()) - t.scaled(x));
}

inline Complex ihara_reciprocal(const Matrix<Rational>& t, const Complex& x) {
    Matrix<Complex> m(t.rows(), t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = to_complex(t(i, j));
    return det(Matrix<Complex>::identity(m.dim()) - m.scaled(x));
}

struct TheoremGResult {
    Rational lhs;  // Z_Γ(−1) / (Z_Γ1(−1)·Z_Γ2(−1)) at the edge a
    Rational rhs;  // (ω(a)ω(ā))^{-1} · Z_W(1) / (Z_W1(1)·Z_W2(1))
    bool unimodular = false;
    // χ(Γ1,a)·χ(Γ2,a)/χ(Γ,a), present when unimodular and χ(Γ,a) ≠ 0.
    std::optional<Rational> chi_form;
};

// Compares the zeta ratio at s = −1 across a decomposition Γ = Γ1 ∪ Γ2
// glued along the segment {a, ā} with the corresponding Ihara ratio at x = 1.
inline TheoremGResult verify_theorem_G(const WeightedGraph& g, const SubgraphSpec& raw1, const SubgraphSpec& raw2,
                                       const std::string& edge) {
    auto require = [](bool cond, const std::string& clause) {
        if (!cond) throw SettingError("theorem G hypothesis failed: " + clause);
    };
    require(setting_gamma_ok(g), "Setting [Gamma] does not hold");
    require(g.find_edge(edge).has_value(), "'" + edge + "' is not an edge");
    const std::size_t a = g.edge(edge);
    const std::size_t abar = g.inverse(a);
    require(!g.is_loop(a), "the gluing edge is a loop");
    SubgraphSpec s1 = normalize_subgraph(g, raw1, "first part");
    SubgraphSpec s2 = normalize_subgraph(g, raw2, "second part");
    require(subgraph_union(s1, s2) == whole_graph(g), "the parts do not cover the graph");
    require(is_one_segment(g, subgraph_intersection(s1, s2), a), "the parts do not meet in the segment of the edge");
    WeightedGraph g1 = component_subgraph(g, s1, edge);
    WeightedGraph g2 = component_subgraph(g, s2, edge);
    require(g1.num_edges() == s1.edges.size() && g1.num_vertices() == s1.vertices.size(),
            "the first part is not connected");
    require(g2.num_edges() == s2.edges.size() && g2.num_vertices() == s2.vertices.size(),
            "the second part is not connected");
    require(g1.out_edges(g1.vertex(g.vertex_id(g.terminus(a)))).size() == 1,
            "the terminus of the edge is not terminal in the first part");
    require(g2.out_edges(g2.vertex(g.vertex_id(g.origin(a)))).size() == 1,
            "the origin of the edge is not terminal in the second part");

    TheoremGResult r;
    Rational z = zeta_det<Rational>(g, Site::edge(a), Site::edge(a), -1);
    Rational z1 = zeta_det<Rational>(g1, g1.site(edge), g1.site(edge), -1);
    Rational z2 = zeta_det<Rational>(g2, g2.site(edge), g2.site(edge), -1);
    if (sgn(z1) == 0 || sgn(z2) == 0) throw MathError("theorem G: a part has vanishing zeta value at s = -1");
    r.lhs = z / (z1 * z2);

    Rational d = ihara_reciprocal(transition_weight(g), Rational(1));
    Rational d1 = ihara_reciprocal(transition_weight(g1), Rational(1));
    Rational d2 = ihara_reciprocal(transition_weight(g2), Rational(1));
    if (sgn(d) == 0) throw PoleError("theorem G: the Ihara zeta function of the graph has a pole at x = 1");
    Rational wprod(static_cast<long>(g.weight(a) * g.weight(abar)));
    r.rhs = d1 * d2 / (wprod * d);
    r.lhs.canonicalize();
    r.rhs.canonicalize();

    r.unimodular = is_unimodular(g);
    if (r.unimodular) {
        Rational c = chi_at(g, Site::edge(a));
        if (sgn(c) != 0) {
            Rational c1 = chi_at(g1, g1.site(edge));
            Rational c2 = chi_at(g2, g2.site(edge));
            r.chi_form = c1 * c2 / c;
            r.chi_form->canonicalize();
        }
    }
    return r;
}

}  // namespace treezeta
