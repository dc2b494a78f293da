#pragma once

// The path zeta function of an edge-weighted graph between two sites (vertex
// or edge): transfer operator, determinant-ratio evaluation, truncated series
// evaluated two independent ways, the reciprocal formula, and the splitting
// and reduction identities relating a graph to its pieces.

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/graph.hpp"
#include "treezeta/limit.hpp"
#include "treezeta/matrix.hpp"
#include "treezeta/scalar.hpp"
#include "treezeta/weights.hpp"

namespace treezeta {

template <class T>
using Exponent = typename ScalarTraits<T>::Exponent;

// Transfer operator on edges: entry (a,b) is N_edg(a,b)^{-s} when t(a)=o(b).
template <class T>
Matrix<T> bass_E(const WeightedGraph& g, const Exponent<T>& s) {
    const std::size_t m = g.num_edges();
    Matrix<T> E(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b : g.out_edges(g.terminus(a))) E(a, b) = ScalarTraits<T>::weight_power(step_factor(g, a, b), s);
    return E;
}

// Indicator row vector of a set of edges.
template <class T>
RowVector<T> indicator(const WeightedGraph& g, std::initializer_list<std::size_t> edges) {
    RowVector<T> v(g.num_edges(), ScalarTraits<T>::zero());
    for (std::size_t e : edges) v[e] = ScalarTraits<T>::one();
    return v;
}

// e_u: the edge itself, or the sum of the edges ending at a vertex.
template <class T>
RowVector<T> site_vector(const WeightedGraph& g, const Site& u) {
    RowVector<T> v(g.num_edges(), ScalarTraits<T>::zero());
    if (u.is_edge())
        v[u.index] = ScalarTraits<T>::one();
    else
        for (std::size_t e : g.in_edges(u.index)) v[e] = ScalarTraits<T>::one();
    return v;
}

// Row vector selecting paths that end in the target set W: e_w for a vertex,
// e_w + e_w̄ for an edge.
template <class T>
RowVector<T> target_vector(const WeightedGraph& g, const Site& w) {
    if (w.is_vertex()) return site_vector<T>(g, w);
    return indicator<T>(g, {w.index, g.inverse(w.index)});
}

// Weighted first steps out of a vertex: Σ_{a∈o⁻¹(u)} ω(a)^{-s} e_a.
template <class T>
RowVector<T> vertex_source_vector(const WeightedGraph& g, std::size_t u, const Exponent<T>& s) {
    RowVector<T> v(g.num_edges(), ScalarTraits<T>::zero());
    for (std::size_t a : g.out_edges(u)) v[a] = ScalarTraits<T>::weight_power(g.weight(a), s);
    return v;
}

// Row vector y with U_{u,w}(s) = f_Wᵀ·y.
template <class T>
RowVector<T> perturbation_row(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s,
                              const Matrix<T>& E) {
    if (u.is_vertex()) {
        RowVector<T> v = vertex_source_vector<T>(g, u.index, s);
        return w.is_vertex() ? v : E.left_multiply(v);
    }
    return E.left_multiply(indicator<T>(g, {u.index, g.inverse(u.index)}));
}

template <class T>
Matrix<T> perturbation_U(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s) {
    Matrix<T> E = bass_E<T>(g, s);
    return Matrix<T>::outer(target_vector<T>(g, w), perturbation_row<T>(g, u, w, s, E));
}

// The additive correction so that value = det-ratio + ε. For a vertex source
// and an edge target it carries the length-1 paths Σ_{b∈{w,w̄}∩o⁻¹(u)} ω(b)^{-s}.
template <class T>
T epsilon_term(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s) {
    T unit = ScalarTraits<T>::from_int(unit_term(g, u, w));
    if (u.is_vertex() && w.is_edge()) {
        for (std::size_t b : {w.index, g.inverse(w.index)})
            if (g.origin(b) == u.index) unit += ScalarTraits<T>::weight_power(g.weight(b), s);
    }
    return unit - ScalarTraits<T>::one();
}

// Quotient by the loop vectors e_a − e_ā of balanced loops (ω(a) = ω(ā)).
// Each such vector is a left eigenvector of E(s), with eigenvalue
// ω(a)^{-s} − (ω(a)−1)^{-s}, and is killed by every target vector, so it
// spans an invariant subspace of E(s) and of E(s) − U(s) for every s. Both
// determinants then share the factor 1 − ω(a)^{-s} + (ω(a)−1)^{-s}, which
// vanishes at s = −1; passing to the quotient cancels it exactly.
struct LoopQuotient {
    std::vector<std::size_t> kept;     // edges indexing the quotient basis
    std::vector<std::size_t> merged;   // per edge, the kept edge it maps to
    bool trivial() const { return kept.size() == merged.size(); }
};

inline LoopQuotient balanced_loop_quotient(const WeightedGraph& g) {
    LoopQuotient q;
    q.merged.resize(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t inv = g.inverse(e);
        bool drop = g.is_loop(e) && g.weight(e) == g.weight(inv) && inv < e;
        if (!drop) q.kept.push_back(e);
    }
    std::vector<std::size_t> pos(g.num_edges(), 0);
    for (std::size_t i = 0; i < q.kept.size(); ++i) pos[q.kept[i]] = i;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t inv = g.inverse(e);
        bool drop = g.is_loop(e) && g.weight(e) == g.weight(inv) && inv < e;
        q.merged[e] = drop ? pos[inv] : pos[e];
    }
    return q;
}

// Induced map on the quotient of the row space: columns of dropped edges
// are added onto their partner, rows of dropped edges are discarded.
template <class T>
Matrix<T> quotient_matrix(const LoopQuotient& q, const Matrix<T>& m) {
    Matrix<T> r(q.kept.size(), q.kept.size());
    for (std::size_t i = 0; i < q.kept.size(); ++i)
        for (std::size_t c = 0; c < q.merged.size(); ++c) r(i, q.merged[c]) += m(q.kept[i], c);
    return r;
}

// Image of a row vector in the quotient.
template <class T>
RowVector<T> quotient_row(const LoopQuotient& q, const RowVector<T>& y) {
    RowVector<T> r(q.kept.size(), ScalarTraits<T>::zero());
    for (std::size_t c = 0; c < q.merged.size(); ++c) r[q.merged[c]] += y[c];
    return r;
}

// A functional constant on each merged pair, restricted to the quotient.
template <class T>
RowVector<T> quotient_functional(const LoopQuotient& q, const RowVector<T>& f) {
    RowVector<T> r(q.kept.size(), ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < q.kept.size(); ++i) r[i] = f[q.kept[i]];
    return r;
}

template <class T>
struct ZetaValue {
    T value = ScalarTraits<T>::zero();
    T numerator_det = ScalarTraits<T>::zero();
    T denominator_det = ScalarTraits<T>::zero();
    bool is_pole_candidate = false;    // denominator (numerically) zero, numerator not
    bool is_zero_denominator_exact = false;  // exact zero of det(I − E) in rational mode
    bool ratio_is_zero = false;        // numerator zero, denominator not
    bool formal = false;               // Setting [Γ] fails; value is the formal ratio
    bool loop_reduced = false;         // raw ratio was 0/0; value taken on the loop quotient
    bool by_limit = false;             // raw ratio was 0/0; value is the limit at the point
};

namespace detail {

// Resolves an exact 0/0 by the limit of the symbolic determinant ratio at
// the integer point sigma0. Returns false when no limit applies (floating
// mode); raises IndeterminateError when the limit cannot be certified.
template <class T>
bool resolve_by_limit(ZetaValue<T>& z, const Matrix<DirichletPoly>& num, const Matrix<DirichletPoly>& den,
                      long sigma0, const T& additive, const std::string& what) {
    RatioLimit lim = ratio_limit(num, den, sigma0);
    z.by_limit = true;
    switch (lim.kind) {
        case RatioLimit::Kind::Value:
            z.value = lim.value + additive;
            return true;
        case RatioLimit::Kind::Pole:
            z.is_pole_candidate = true;
            z.is_zero_denominator_exact = true;
            return true;
        case RatioLimit::Kind::Irrational:
            throw IndeterminateError("0/0 in " + what + ": the limit is not rational");
        case RatioLimit::Kind::TooCostly:
            throw IndeterminateError("0/0 in " + what + ": certifying the limit exceeds the direction budget");
        case RatioLimit::Kind::Degenerate:
            break;
    }
    throw IndeterminateError("indeterminate 0/0 in " + what);
}

}  // namespace detail

// Evaluates det(I−E+U)/det(I−E) + ε. A vanishing denominator is reported in
// the flags (value left at zero). When both determinants vanish, the common
// balanced-loop factor is cancelled; a remaining 0/0 raises
// IndeterminateError.
template <class T>
ZetaValue<T> zeta_det_value(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s) {
    ZetaValue<T> z;
    z.formal = !setting_gamma_ok(g);
    const std::size_t m = g.num_edges();
    Matrix<T> E = bass_E<T>(g, s);
    Matrix<T> A = Matrix<T>::identity(m) - E;
    Matrix<T> B = A + Matrix<T>::outer(target_vector<T>(g, w), perturbation_row<T>(g, u, w, s, E));
    z.denominator_det = det(A);
    z.numerator_det = det(B);
    bool den_zero = is_pole_candidate(z.denominator_det, A);
    bool num_zero = is_pole_candidate(z.numerator_det, B);
    if (den_zero && num_zero) {
        LoopQuotient q = balanced_loop_quotient(g);
        if (!q.trivial()) {
            Matrix<T> Aq = quotient_matrix(q, A);
            Matrix<T> Bq = quotient_matrix(q, B);
            z.denominator_det = det(Aq);
            z.numerator_det = det(Bq);
            den_zero = is_pole_candidate(z.denominator_det, Aq);
            num_zero = is_pole_candidate(z.numerator_det, Bq);
            z.loop_reduced = true;
        }
    }
    if (den_zero && num_zero) {
        const std::string what = "zeta " + g.site_id(u) + "->" + g.site_id(w);
        if constexpr (std::is_same_v<T, Rational>) {
            using D = DirichletPoly;
            LoopQuotient q = balanced_loop_quotient(g);
            Matrix<D> Es = bass_E<D>(g, SymbolicExponent{});
            Matrix<D> As = Matrix<D>::identity(m) - Es;
            Matrix<D> Bs = As + Matrix<D>::outer(target_vector<D>(g, w), perturbation_row<D>(g, u, w, {}, Es));
            if (detail::resolve_by_limit(z, quotient_matrix(q, Bs), quotient_matrix(q, As), s,
                                         epsilon_term<T>(g, u, w, s), what))
                return z;
        }
        throw IndeterminateError("indeterminate 0/0 in " + what);
    }
    if (den_zero) {
        z.is_pole_candidate = true;
        z.is_zero_denominator_exact = ScalarTraits<T>::exact;
        return z;
    }
    z.ratio_is_zero = num_zero;
    z.value = z.numerator_det / z.denominator_det + epsilon_term<T>(g, u, w, s);
    return z;
}

// As zeta_det_value, but a pole raises PoleError.
template <class T>
T zeta_det(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s) {
    ZetaValue<T> z = zeta_det_value<T>(g, u, w, s);
    if (z.is_pole_candidate) throw PoleError("pole of zeta " + g.site_id(u) + "->" + g.site_id(w));
    return z.value;
}

// Partial sum over paths of length ≤ L from the path side (weight
// distribution) only.
template <class T>
T zeta_series_paths(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s, long L) {
    T r = ScalarTraits<T>::zero();
    for (const auto& [n, count] : weight_distribution(g, u, w, L))
        r += ScalarTraits<T>::from_integer(count) * ScalarTraits<T>::weight_power(n, s);
    return r;
}

// Partial sum over paths of length ≤ L from the matrix side (truncated
// Neumann series of E with the boundary vectors).
template <class T>
T zeta_series_matrix(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s, long L) {
    if (L < 0) throw ValidationError("negative series horizon");
    T r = ScalarTraits<T>::from_int(unit_term(g, u, w));
    RowVector<T> f = target_vector<T>(g, w);
    Matrix<T> E = bass_E<T>(g, s);
    if (u.is_vertex()) {
        if (L < 1) return r;
        RowVector<T> v = vertex_source_vector<T>(g, u.index, s);
        return r + dot(neumann_partial(E, L - 1).left_multiply(v), f);
    }
    if (L < 2) return r;
    RowVector<T> y = E.left_multiply(indicator<T>(g, {u.index, g.inverse(u.index)}));
    return r + dot(neumann_partial(E, L - 2).left_multiply(y), f);
}

inline bool series_agree(const Rational& a, const Rational& b) { return a == b; }
inline bool series_agree(const Complex& a, const Complex& b) { return relative_error(a, b) <= 1e-9; }

// Truncated series at horizon L, computed from both sides. Disagreement is a
// bug and raises InternalCheckError.
template <class T>
T zeta_series(const WeightedGraph& g, const Site& u, const Site& w, const Exponent<T>& s, long L) {
    T by_paths = zeta_series_paths<T>(g, u, w, s, L);
    T by_matrix = zeta_series_matrix<T>(g, u, w, s, L);
    if (!series_agree(by_paths, by_matrix))
        throw InternalCheckError("zeta_series: path sum " + format_scalar(by_paths) + " != matrix sum " +
                                 format_scalar(by_matrix));
    return by_paths;
}

// Z_{u→u}(s)^{-1} through the reciprocal formula 1 − y(I − G_u)⁻¹f_Uᵀ with
// G_u = E − U_{u,u}, never by inverting the determinant ratio.
template <class T>
T zeta_reciprocal(const WeightedGraph& g, const Site& u, const Exponent<T>& s) {
    const std::size_t m = g.num_edges();
    Matrix<T> E = bass_E<T>(g, s);
    RowVector<T> f = target_vector<T>(g, u);
    RowVector<T> y = perturbation_row<T>(g, u, u, s, E);
    Matrix<T> G = E - Matrix<T>::outer(f, y);
    Matrix<T> A = Matrix<T>::identity(m) - G;
    if (m == 0) return ScalarTraits<T>::one();
    if (!is_pole_candidate(det(A), A)) return ScalarTraits<T>::one() - bilinear_inverse(y, A, f);
    // The balanced-loop vectors are invariant under G and killed by f, so the
    // formula descends to the quotient, where the singular factor is gone.
    LoopQuotient q = balanced_loop_quotient(g);
    if (!q.trivial()) {
        Matrix<T> Aq = quotient_matrix(q, A);
        if (!is_pole_candidate(det(Aq), Aq))
            return ScalarTraits<T>::one() -
                   bilinear_inverse(quotient_row(q, y), Aq, quotient_functional(q, f));
    }
    // In rational mode a remaining singularity is resolved through the exact
    // value of the determinant ratio, which may itself be a limit.
    if constexpr (std::is_same_v<T, Rational>) {
        ZetaValue<T> z = zeta_det_value<T>(g, u, u, s);
        if (z.is_pole_candidate) return ScalarTraits<T>::zero();
        if (!ScalarTraits<T>::is_zero(z.value)) return ScalarTraits<T>::one() / z.value;
    }
    throw SingularError("zeta_reciprocal: I - G is singular at " + g.site_id(u));
}

// ---------------------------------------------------------------------------
// Subgraphs used by the splitting identities.

// A subgraph given by vertex and edge ids. It need not be connected; zeta
// values are taken on the connected component containing the site.
struct SubgraphSpec {
    std::set<std::string> vertices;
    std::set<std::string> edges;

    bool operator==(const SubgraphSpec& o) const { return vertices == o.vertices && edges == o.edges; }
};

// Validates a spec against g: known ids, edges closed under inversion,
// endpoints present. Returns the completed spec (endpoints added).
inline SubgraphSpec normalize_subgraph(const WeightedGraph& g, const SubgraphSpec& s, const std::string& name) {
    SubgraphSpec r = s;
    for (const auto& v : s.vertices)
        if (!g.find_vertex(v)) throw ValidationError(name + ": unknown vertex '" + v + "'");
    for (const auto& e : s.edges) {
        auto idx = g.find_edge(e);
        if (!idx) throw ValidationError(name + ": unknown edge '" + e + "'");
        if (!s.edges.count(g.edge_id(g.inverse(*idx))))
            throw SettingError(name + ": edge '" + e + "' present without its inverse");
        r.vertices.insert(g.vertex_id(g.origin(*idx)));
        r.vertices.insert(g.vertex_id(g.terminus(*idx)));
    }
    return r;
}

inline SubgraphSpec whole_graph(const WeightedGraph& g) {
    SubgraphSpec s;
    s.vertices.insert(g.vertex_ids().begin(), g.vertex_ids().end());
    s.edges.insert(g.edge_ids().begin(), g.edge_ids().end());
    return s;
}

inline SubgraphSpec subgraph_union(const SubgraphSpec& a, const SubgraphSpec& b) {
    SubgraphSpec r = a;
    r.vertices.insert(b.vertices.begin(), b.vertices.end());
    r.edges.insert(b.edges.begin(), b.edges.end());
    return r;
}

inline SubgraphSpec subgraph_intersection(const SubgraphSpec& a, const SubgraphSpec& b) {
    SubgraphSpec r;
    for (const auto& v : a.vertices)
        if (b.vertices.count(v)) r.vertices.insert(v);
    for (const auto& e : a.edges)
        if (b.edges.count(e)) r.edges.insert(e);
    return r;
}

inline bool subgraph_contains(const SubgraphSpec& big, const SubgraphSpec& small) {
    for (const auto& v : small.vertices)
        if (!big.vertices.count(v)) return false;
    for (const auto& e : small.edges)
        if (!big.edges.count(e)) return false;
    return true;
}

// The connected component of the spec that contains the site id, as a graph.
inline WeightedGraph component_subgraph(const WeightedGraph& g, const SubgraphSpec& spec, const std::string& site) {
    std::string start;
    if (g.find_vertex(site))
        start = site;
    else
        start = g.vertex_id(g.origin(g.edge(site)));
    if (!spec.vertices.count(start)) throw SettingError("subgraph does not contain '" + site + "'");
    if (!g.find_vertex(site) && !spec.edges.count(site)) throw SettingError("subgraph does not contain '" + site + "'");
    std::set<std::string> seen{start};
    std::vector<std::string> stack{start};
    std::set<std::string> edges;
    while (!stack.empty()) {
        std::size_t v = g.vertex(stack.back());
        stack.pop_back();
        for (std::size_t e : g.out_edges(v)) {
            if (!spec.edges.count(g.edge_id(e))) continue;
            edges.insert(g.edge_id(e));
            edges.insert(g.edge_id(g.inverse(e)));
            const std::string& t = g.vertex_id(g.terminus(e));
            if (seen.insert(t).second) stack.push_back(t);
        }
    }
    return g.subgraph(edges, {start});
}

// Validates that the spec is the single-pair segment {a, ā} with a not a loop.
inline bool is_one_segment(const WeightedGraph& g, const SubgraphSpec& s, std::size_t a) {
    if (g.is_loop(a)) return false;
    std::set<std::string> expect_e{g.edge_id(a), g.edge_id(g.inverse(a))};
    std::set<std::string> expect_v{g.vertex_id(g.origin(a)), g.vertex_id(g.terminus(a))};
    return s.edges == expect_e && s.vertices == expect_v;
}

enum class SplitKind { Vertex, Edge, TerminalSegment, Loop };

template <class T>
struct SplitCheck {
    std::string label;
    T lhs;
    T rhs;
};

namespace detail {

template <class T>
T reciprocal_on(const WeightedGraph& g, const SubgraphSpec& spec, const std::string& site, const Exponent<T>& s) {
    WeightedGraph h = component_subgraph(g, spec, site);
    return zeta_reciprocal<T>(h, h.site(site), s);
}

inline void require(bool cond, const std::string& clause) {
    if (!cond) throw SettingError("splitting hypothesis failed: " + clause);
}

// Checks Γ = P1 ∪ P2 with P1 ∩ P2 equal to the expected intersection.
inline void check_cover(const WeightedGraph& g, const SubgraphSpec& p1, const SubgraphSpec& p2,
                        const SubgraphSpec& expected_cap, const std::string& what) {
    require(subgraph_union(p1, p2) == whole_graph(g), what + " union is not the whole graph");
    require(subgraph_intersection(p1, p2) == expected_cap, what + " intersection has the wrong shape");
}

// The loop-reduction right-hand side as a limit at the integer point sigma0,
// for points where its numerator and denominator both vanish (at s = −1 they
// do so identically). The reciprocal zeta of the remaining graph enters as
// det(I − E)/det(I − E + U) of its symbolic matrices.
inline Rational loop_formula_limit(const WeightedGraph& g, const SubgraphSpec& rest, const std::string& cid,
                                   std::uint64_t alpha, std::uint64_t beta, long sigma0) {
    using D = DirichletPoly;
    WeightedGraph h = component_subgraph(g, rest, cid);
    const Site c = h.site(cid);
    const std::size_t m = h.num_edges();
    Matrix<D> Es = bass_E<D>(h, SymbolicExponent{});
    Matrix<D> P = Matrix<D>::identity(m) - Es;
    Matrix<D> Q = P + Matrix<D>::outer(target_vector<D>(h, c), perturbation_row<D>(h, c, c, {}, Es));

    std::set<std::uint64_t> primes;
    detail::collect_primes(P, primes);
    detail::collect_primes(Q, primes);
    for (std::uint64_t n : {alpha, alpha + 1, beta, beta + 1})
        for (const auto& [p, e] : factorize(n)) primes.insert(p);

    auto terms = [=](const Direction& dir, const Rational& eps) {
        auto pw = [&](std::uint64_t n) -> Rational { return evaluate_monomial(n, sigma0, dir, eps); };
        Rational xi1 = Rational(1) - (pw(alpha) - pw(alpha + 1)) * (pw(beta) - pw(beta + 1));
        Rational xi2 = (Rational(1) + pw(alpha) - pw(alpha + 1)) * (Rational(1) + pw(beta) - pw(beta + 1));
        Rational eta = (pw(alpha) + 1) * pw(beta + 1) + pw(alpha + 1) * (pw(beta) + 1) -
                       Rational(2) * pw(alpha + 1) * pw(beta + 1);
        Rational p = m == 0 ? Rational(1) : det(evaluate_matrix(P, sigma0, dir, eps));
        Rational q = m == 0 ? Rational(1) : det(evaluate_matrix(Q, sigma0, dir, eps));
        return std::array<Rational, 2>{xi1 * p - eta * q, xi2 * p + eta * q};
    };
    LimitProblem prob;
    prob.primes.assign(primes.begin(), primes.end());
    prob.sigma0 = sigma0;
    prob.num = [&](const Direction& dir, const Rational& eps) { return terms(dir, eps)[0]; };
    prob.den = [&](const Direction& dir, const Rational& eps) { return terms(dir, eps)[1]; };
    const std::size_t coef = std::max(prime_factor_count(alpha), prime_factor_count(alpha + 1)) +
                             std::max(prime_factor_count(beta), prime_factor_count(beta + 1));
    prob.num_degree = prob.den_degree = coef + std::max(det_degree_bound(P), det_degree_bound(Q));
    RatioLimit lim = ratio_limit(prob);
    if (lim.kind == RatioLimit::Kind::Value) return lim.value;
    if (lim.kind == RatioLimit::Kind::Pole) throw PoleError("loop-reduction formula has a pole");
    throw IndeterminateError("loop-reduction formula is 0/0 and its limit could not be certified");
}

}  // namespace detail

// Evaluates both sides of a splitting or reduction identity.
//   Vertex:  parts {Γ1, Γ2} with Γ1∩Γ2 = {c}, or {Λ1, Λ2, Γ1, Γ2} with
//            Λ1∩Λ2 = {c} and Γi ⊇ Λi; site is the vertex c.
//   Edge:    same shapes with the intersection the segment {a, ā}; site a.
//   TerminalSegment: no parts; site a with o(a) a terminal vertex ≠ t(a);
//            returns the identities at o(a) and at a.
//   Loop:    no parts; site a a loop.
template <class T>
std::vector<SplitCheck<T>> verify_splitting(SplitKind kind, const WeightedGraph& g,
                                            const std::vector<SubgraphSpec>& raw_parts, const std::string& site,
                                            const Exponent<T>& s) {
    using detail::require;
    using Tr = ScalarTraits<T>;
    require(setting_gamma_ok(g), "Setting [Gamma] does not hold on the whole graph");
    std::vector<SubgraphSpec> parts;
    for (std::size_t i = 0; i < raw_parts.size(); ++i)
        parts.push_back(normalize_subgraph(g, raw_parts[i], "part " + std::to_string(i + 1)));
    std::vector<SplitCheck<T>> out;
    const T one = Tr::one();

    if (kind == SplitKind::Vertex || kind == SplitKind::Edge) {
        require(parts.size() == 2 || parts.size() == 4, "expected 2 or 4 parts");
        SubgraphSpec cap;
        if (kind == SplitKind::Vertex) {
            require(g.find_vertex(site).has_value(), "site must be a vertex");
            cap.vertices = {site};
        } else {
            require(g.find_edge(site).has_value(), "site must be an edge");
            std::size_t a = g.edge(site);
            require(!g.is_loop(a), "site edge must not be a loop");
            cap.edges = {site, g.edge_id(g.inverse(a))};
            cap.vertices = {g.vertex_id(g.origin(a)), g.vertex_id(g.terminus(a))};
        }
        const std::string name = kind == SplitKind::Vertex ? "vertex split" : "edge split";
        T lhs = zeta_reciprocal<T>(g, g.site(site), s);
        if (kind == SplitKind::Edge) {
            // Apart from the segment, one side may touch only o(a) and the
            // other only t(a).
            const std::size_t a = g.edge(site);
            auto touches = [&](const SubgraphSpec& p, std::size_t v) {
                for (std::size_t e : g.out_edges(v))
                    if (e != a && e != g.inverse(a) && p.edges.count(g.edge_id(e))) return true;
                return false;
            };
            const std::size_t c = g.origin(a), d = g.terminus(a);
            require((!touches(parts[0], d) && !touches(parts[1], c)) || (!touches(parts[0], c) && !touches(parts[1], d)),
                    "the two sides must meet the segment at opposite endpoints");
        }
        if (parts.size() == 2) {
            detail::check_cover(g, parts[0], parts[1], cap, name);
            T r1 = detail::reciprocal_on<T>(g, parts[0], site, s);
            T r2 = detail::reciprocal_on<T>(g, parts[1], site, s);
            T r3 = kind == SplitKind::Vertex ? one : detail::reciprocal_on<T>(g, cap, site, s);
            out.push_back({name, lhs, r1 + r2 - r3});
        } else {
            detail::check_cover(g, parts[0], parts[1], cap, name + " (inner pieces)");
            require(subgraph_contains(parts[2], parts[0]), "first outer part must contain first inner part");
            require(subgraph_contains(parts[3], parts[1]), "second outer part must contain second inner part");
            SubgraphSpec overlap = subgraph_intersection(parts[2], parts[3]);
            T r1 = detail::reciprocal_on<T>(g, parts[2], site, s);
            T r2 = detail::reciprocal_on<T>(g, parts[3], site, s);
            T r3 = detail::reciprocal_on<T>(g, overlap, site, s);
            out.push_back({name + " with overlap", lhs, r1 + r2 - r3});
        }
        return out;
    }

    require(parts.empty(), "this identity takes no parts");
    require(g.find_edge(site).has_value(), "site must be an edge");
    const std::size_t a = g.edge(site);
    const std::size_t abar = g.inverse(a);
    const std::uint64_t alpha = g.weight(a) - 1;
    const std::uint64_t beta = g.weight(abar) - 1;
    auto pw = [&](std::uint64_t n) -> T { return Tr::weight_power(n, s); };
    auto xi = [&](std::uint64_t x) -> T { return pw(x + 1) - pw(x); };

    if (kind == SplitKind::TerminalSegment) {
        const std::size_t c = g.origin(a);
        const std::size_t d = g.terminus(a);
        require(c != d, "edge must not be a loop");
        require(g.out_edges(c).size() == 1, "origin of the edge must be a terminal vertex");
        SubgraphSpec rest = whole_graph(g);
        rest.edges.erase(g.edge_id(a));
        rest.edges.erase(g.edge_id(abar));
        rest.vertices.erase(g.vertex_id(c));
        T zl = detail::reciprocal_on<T>(g, rest, g.vertex_id(d), s);
        T num = (one + pw(alpha) * xi(beta)) * zl - pw(alpha) * pw(beta + 1);
        T den_c = (one - xi(alpha) * xi(beta)) * zl + xi(alpha) * pw(beta + 1);
        T den_a = (one + pw(alpha)) * ((one - xi(beta)) * zl + pw(beta + 1));
        require(!Tr::is_zero(den_c) && !Tr::is_zero(den_a), "reduced-formula denominator vanishes");
        out.push_back({"terminal segment at vertex", zeta_reciprocal<T>(g, Site::vertex(c), s), num / den_c});
        out.push_back({"terminal segment at edge", zeta_reciprocal<T>(g, Site::edge(a), s), num / den_a});
        return out;
    }

    // Loop reduction.
    const std::size_t c = g.origin(a);
    require(g.is_loop(a), "edge must be a loop");
    SubgraphSpec rest = whole_graph(g);
    rest.edges.erase(g.edge_id(a));
    rest.edges.erase(g.edge_id(abar));
    T zl = detail::reciprocal_on<T>(g, rest, g.vertex_id(c), s);
    T xi1 = one - (pw(alpha) - pw(alpha + 1)) * (pw(beta) - pw(beta + 1));
    T xi2 = (one + pw(alpha) - pw(alpha + 1)) * (one + pw(beta) - pw(beta + 1));
    T eta = (pw(alpha) + one) * pw(beta + 1) + pw(alpha + 1) * (pw(beta) + one) -
            ScalarTraits<T>::from_int(2) * pw(alpha + 1) * pw(beta + 1);
    T den = xi2 * zl + eta;
    if constexpr (std::is_same_v<T, Rational>) {
        if (Tr::is_zero(den)) {
            out.push_back({"loop reduction", zeta_reciprocal<T>(g, Site::edge(a), s),
                           detail::loop_formula_limit(g, rest, g.vertex_id(c), alpha, beta, s)});
            return out;
        }
    }
    require(!Tr::is_zero(den), "reduced-formula denominator vanishes");
    out.push_back({"loop reduction", zeta_reciprocal<T>(g, Site::edge(a), s), (xi1 * zl - eta) / den});
    return out;
}

}  // namespace treezeta
