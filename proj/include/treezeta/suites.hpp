#pragma once

// Randomized verification suites. Each suite maps (seed, instance index) to
// a report; instances are independent and may run on several threads, with
// reports returned in index order.

#include <algorithm>
#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "treezeta/euler.hpp"
#include "treezeta/lad.hpp"
#include "treezeta/random.hpp"
#include "treezeta/report.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta::suites {

using InstanceFn = std::function<Report(std::uint64_t seed, std::size_t index)>;

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::size_t instances = 20;
    unsigned jobs = 1;
};

namespace detail {

inline std::string tag(std::size_t index) { return "#" + std::to_string(index) + " "; }

// Runs body, turning a library error into a single failing line.
inline Report guarded(std::size_t index, const std::function<void(Report&)>& body) {
    Report rep;
    try {
        body(rep);
    } catch (const Error& e) {
        rep.expect(tag(index) + "raised " + e.what(), false);
    }
    for (auto& l : rep.lines)
        if (l.label.rfind('#', 0) != 0) l.label = tag(index) + l.label;
    return rep;
}

inline std::string split_name(std::size_t variant) {
    static const char* names[] = {"vertex split", "vertex split with overlap", "edge split", "edge split with overlap",
                                  "terminal segment", "loop reduction"};
    return names[variant % 6];
}

// The decomposition of the given variant for evaluation at s. At s = −1
// instances are trees with balanced loops, where the values are rational.
inline gen::Decomposition split_instance(gen::Rng& rng, std::size_t variant, long s) {
    const gen::Shape shape = s == -1 ? gen::Shape::TreeLoops : gen::Shape::General;
    switch (variant % 6) {
        case 0: return gen::random_split(rng, SplitKind::Vertex, false, shape, 3);
        case 1: return gen::random_split(rng, SplitKind::Vertex, true, shape, 3);
        case 2: return gen::random_split(rng, SplitKind::Edge, false, shape, 3);
        case 3: return gen::random_split(rng, SplitKind::Edge, true, shape, 3);
        case 4: return gen::random_terminal_segment(rng, shape, 4);
        default: return gen::random_loop_reduction(rng, shape, s == -1 || gen::coin(rng), 4);
    }
}

// All (root vertex, source) pairs of a diagram.
inline std::vector<std::pair<std::size_t, LadSource>> diagram_sources(const LocalActionDiagram& d) {
    std::vector<std::pair<std::size_t, LadSource>> out;
    for (std::size_t c = 0; c < d.graph().num_vertices(); ++c) {
        out.push_back({c, LadSource::root()});
        for (std::size_t x : d.vertex_colors(c)) out.push_back({c, LadSource::at_color(x)});
    }
    return out;
}

inline std::string source_name(const LocalActionDiagram& d, std::size_t c0, const LadSource& r) {
    return d.graph().vertex_id(c0) + "/" + (r.is_root ? std::string("root") : d.color_id(r.color));
}

// The base-graph site matching a diagram source: the root vertex, or the
// edge carrying the colour.
inline Site source_site(const LocalActionDiagram& d, std::size_t c0, const LadSource& r) {
    return r.is_root ? Site::vertex(c0) : Site::edge(d.color_edge(r.color));
}

// Exact diagram values for a batch of queries; a pole raises PoleError.
inline std::vector<Rational> pclosed_values(const LocalActionDiagram& d, const Inversion& iota,
                                            const std::vector<PclosedQuery>& queries, long s) {
    std::vector<Rational> out;
    for (const ZetaValue<Rational>& z : zeta_pclosed_values(d, iota, queries, s)) {
        if (z.is_pole_candidate) throw PoleError("pole of the diagram zeta function");
        out.push_back(z.value);
    }
    return out;
}

}  // namespace detail

// Splitting and reduction identities at s ∈ {−1, 2, 3}; the variant cycles
// with the instance index.
inline Report splitting_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        for (long s : {-1L, 2L, 3L}) {
            gen::Decomposition dec = detail::split_instance(rng, index, s);
            for (const auto& c : verify_splitting<Rational>(dec.kind, dec.graph, dec.parts, dec.site, s))
                rep.expect_equal(c.label + " at " + dec.site + " s=" + std::to_string(s), c.lhs, c.rhs);
        }
    });
}

// χ = Z(−1)^{-1} at every site of a tree decorated with balanced loops.
inline Report theorem_e_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        WeightedGraph g = gen::random_graph(rng, 6, gen::Shape::TreeLoops, {2, 5});
        rep.append(verify_theorem_E(g));
    });
}

// The zeta ratio at s = −1 against the Ihara ratio at x = 1 on a tree glued
// along a bridge, and the χ form (every tree is unimodular).
inline Report theorem_g_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        gen::BridgeDecomposition b = gen::random_bridge_tree(rng, 3);
        TheoremGResult r = verify_theorem_G(b.graph, b.first, b.second, b.edge);
        rep.expect_equal("zeta ratio = Ihara ratio at " + b.edge, r.lhs, r.rhs);
        rep.expect("graph is unimodular", r.unimodular);
        if (r.chi_form)
            rep.expect_equal("chi form = Ihara ratio at " + b.edge, *r.chi_form, r.rhs);
        else
            rep.expect("chi form defined", false, "chi vanishes at " + b.edge);
    });
}

// At s = −1 a diagram with cyclic or dihedral local groups has the same
// zeta values as its block-symmetric companion, for every source and target.
inline Report no_ud_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        gen::DiagramInstance inst = gen::random_cyclic_diagram(rng, 3, gen::Shape::Tree);
        LocalActionDiagram comp = wlit_companion(inst.diagram);
        const WeightedGraph& g = inst.diagram.graph();
        std::vector<PclosedQuery> queries;
        std::vector<std::string> names;
        for (const auto& [c0, r] : detail::diagram_sources(inst.diagram))
            for (const Site& u : g.all_sites()) {
                queries.push_back({c0, r, u});
                names.push_back("s=-1 " + detail::source_name(inst.diagram, c0, r) + "->" + g.site_id(u));
            }
        std::vector<Rational> a = detail::pclosed_values(inst.diagram, inst.inversion, queries, -1);
        std::vector<Rational> b = detail::pclosed_values(comp, inst.inversion, queries, -1);
        for (std::size_t k = 0; k < queries.size(); ++k) rep.expect_equal(names[k], a[k], b[k]);
    });
}

// Full-symmetric diagrams against the graph zeta function, exactly at
// integer s and at complex points to relative error 1e-10. Each instance
// uses a tree with balanced loops, checked at s ∈ {−1, 2, 3}, and a general
// graph, checked at s ∈ {2, 3}; at s = −1 general graphs have limits that
// depend on logarithms of primes.
inline constexpr double kCoherenceTolerance = 1e-10;

namespace detail {

inline void coherence_checks(Report& rep, const gen::DiagramInstance& inst, const std::vector<long>& integer_points,
                             const std::string& prefix) {
    const LocalActionDiagram& d = inst.diagram;
    const WeightedGraph& g = d.graph();
    const std::vector<Complex> points{{2.5, 0.0}, {3.0, 1.0}, {2.0, -2.5}, {4.0, 7.0}, {2.2, 0.3}};
    std::vector<PclosedQuery> queries;
    for (const auto& [c0, r] : diagram_sources(d))
        for (const Site& u : g.all_sites()) queries.push_back({c0, r, u});
    std::vector<std::vector<Rational>> exact;
    for (long s : integer_points) exact.push_back(pclosed_values(d, inst.inversion, queries, s));
    std::size_t k = 0;
    for (const auto& [c0, r] : diagram_sources(d)) {
        const Site src = source_site(d, c0, r);
        for (const Site& u : g.all_sites()) {
            const std::string pair = prefix + source_name(d, c0, r) + "->" + g.site_id(u);
            for (std::size_t i = 0; i < integer_points.size(); ++i) {
                Rational b = zeta_det<Rational>(g, src, u, integer_points[i]);
                rep.expect_equal(pair + " s=" + std::to_string(integer_points[i]), exact[i][k], b);
            }
            ++k;
            for (const Complex& s : points) {
                Complex a = zeta_pclosed<Complex>(d, inst.inversion, c0, r, u, s);
                Complex b = zeta_det<Complex>(g, src, u, s);
                rep.lines.push_back({pair + " s=" + format_scalar(s), relative_error(a, b) <= kCoherenceTolerance,
                                     format_scalar(a), format_scalar(b)});
            }
        }
    }
}

}  // namespace detail

inline Report coherence_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        detail::coherence_checks(rep, gen::random_full_symmetric(rng, 2, gen::Shape::TreeLoops), {-1, 2, 3}, "tree ");
        detail::coherence_checks(rep, gen::random_full_symmetric(rng, 2, gen::Shape::General), {2, 3}, "general ");
    });
}

// Oracle checks on the truncated tree of a random diagram (full-symmetric
// or cyclic), at the largest depth ≤ 5 that fits the vertex cap.
inline Report tree_oracle_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        gen::DiagramInstance inst =
            index % 2 == 0 ? gen::random_full_symmetric(rng, 3) : gen::random_cyclic_diagram(rng, 3);
        const std::size_t c0 = static_cast<std::size_t>(
            gen::uniform_int(rng, 0, static_cast<long>(inst.diagram.graph().num_vertices()) - 1));
        long depth = 5;
        while (depth > 1) {
            auto counts = reduced_path_counts(inst.diagram, inst.inversion, c0, depth);
            Integer total = 0;
            for (const auto& n : counts) total += n;
            if (total <= 20000) break;
            --depth;
        }
        TruncatedDeltaTree t = build_truncated_tree(inst.diagram, inst.inversion, c0, depth);
        TreeOracleReport o = oracle_check_tree(inst.diagram, inst.inversion, t);
        const std::string where = " depth=" + std::to_string(depth) + " (" + std::to_string(o.checks) + " checks)";
        const std::string first = o.failures.empty() ? std::string() : o.failures.front();
        rep.expect("label bijection" + where, o.bijection_ok, first);
        rep.expect("edge lift counts" + where, o.edge_counts_ok, first);
        rep.expect("vertex lift counts" + where, o.vertex_counts_ok, first);
    });
}

// χ relations on a unimodular graph that may have long cycles.
inline Report chi_relations_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        WeightedGraph g = gen::random_unimodular_graph(rng, 5);
        rep.append(verify_chi_relations(g, 3));
    });
}

// The brute-force (∗_k) checks against each other and against the closed
// conditions, and the diagram version on the full-symmetric diagram.
inline Report star_consistency_instance(std::uint64_t seed, std::size_t index) {
    return detail::guarded(index, [&](Report& rep) {
        gen::Rng rng = gen::instance_rng(seed, index);
        gen::GraphDraft draft;
        std::string root = draft.add_vertex();
        gen::grow_piece(rng, draft, root, static_cast<std::size_t>(gen::uniform_int(rng, 1, 4)), gen::Shape::General,
                        {2, 4});
        WeightedGraph g = draft.build();
        bool all3 = true;
        for (std::size_t e = 0; e < g.num_edges(); ++e) all3 = all3 && g.weight(e) >= 3;
        rep.expect("star_1 iff all weights >= 3", star_k_wlit(g, 1) == all3);
        rep.expect("star_2 iff every pair has a weight >= 3", star_k_wlit(g, 2) == setting_gamma_ok(g));
        for (long k = 1; k <= 3; ++k)
            rep.expect("star_" + std::to_string(k) + " enumeration = dynamic programming",
                       star_k_wlit(g, k) == star_k_wlit_dp(g, k));
        if (g.num_edges() <= 4) {
            LocalActionDiagram d = full_symmetric_diagram(g);
            Inversion iota = gen::generated_inversion(d);
            for (long k = 1; k <= 2; ++k)
                rep.expect("diagram star_" + std::to_string(k) + " = graph star_" + std::to_string(k),
                           star_k_pclosed(d, iota, k) == star_k_wlit(g, k));
        }
    });
}

struct SuiteEntry {
    const char* name;
    InstanceFn fn;
};

inline const std::vector<SuiteEntry>& registry() {
    static const std::vector<SuiteEntry> r{
        {"splitting", splitting_instance},     {"theoremE", theorem_e_instance},
        {"theoremG", theorem_g_instance},      {"noUD", no_ud_instance},
        {"coherence", coherence_instance},     {"tree-oracle", tree_oracle_instance},
        {"chi-relations", chi_relations_instance}, {"star-consistency", star_consistency_instance},
    };
    return r;
}

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
}

inline InstanceFn find_suite(const std::string& name) {
    for (const auto& e : registry())
        if (name == e.name) return e.fn;
    throw ValidationError("unknown suite '" + name + "'");
}

// Runs instances 0..n−1 on up to `jobs` threads; results are in index order.
inline std::vector<Report> run_suite(const InstanceFn& fn, const SuiteOptions& opt) {
    std::vector<Report> out(opt.instances);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < opt.instances;) out[i] = fn(opt.seed, i);
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(opt.instances)));
    if (jobs == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace treezeta::suites
