#include <gtest/gtest.h>

#include <map>

#include "support.hpp"
#include "treezeta/random.hpp"

using namespace treezeta;

namespace {

// Renames vertices and edges so that the sorted index order is reversed.
std::pair<WeightedGraph, std::map<std::string, std::string>> relabel(const WeightedGraph& g) {
    std::map<std::string, std::string> name;
    const std::size_t nv = g.num_vertices(), ne = g.num_edges();
    for (std::size_t v = 0; v < nv; ++v) name[g.vertex_id(v)] = "V" + std::to_string(1000 - v);
    for (std::size_t e = 0; e < ne; ++e) name[g.edge_id(e)] = "E" + std::to_string(1000 - e);
    std::vector<std::string> vs;
    for (std::size_t v = 0; v < nv; ++v) vs.push_back(name[g.vertex_id(v)]);
    std::vector<RawEdge> es;
    for (std::size_t e = 0; e < ne; ++e)
        es.push_back({name[g.edge_id(e)], name[g.vertex_id(g.origin(e))], name[g.vertex_id(g.terminus(e))],
                      name[g.edge_id(g.inverse(e))], static_cast<long long>(g.weight(e))});
    return {WeightedGraph::build(vs, es), name};
}

}  // namespace

// Zeta values do not depend on how vertices and edges are named or ordered.
TEST(CrossModule, RelabelingInvariance) {
    gen::Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = gen::random_graph(rng, 4, gen::Shape::General);
        auto [h, name] = relabel(g);
        for (const Site& u : g.all_sites())
            for (const Site& w : g.all_sites()) {
                Site hu = h.site(name[g.site_id(u)]), hw = h.site(name[g.site_id(w)]);
                ZetaValue<Rational> a = zeta_det_value<Rational>(g, u, w, 2);
                ZetaValue<Rational> b = zeta_det_value<Rational>(h, hu, hw, 2);
                EXPECT_EQ(a.is_pole_candidate, b.is_pole_candidate);
                EXPECT_EQ(a.value, b.value);
            }
    }
}

// Exact and floating evaluation agree at integer points.
TEST(CrossModule, ExactAndFloatingAgree) {
    gen::Rng rng(102);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = gen::random_graph(rng, 4, gen::Shape::General);
        for (const Site& u : g.all_sites())
            for (const Site& w : g.all_sites())
                for (long s : {2L, 3L}) {
                    ZetaValue<Rational> a = zeta_det_value<Rational>(g, u, w, s);
                    if (a.is_pole_candidate) continue;
                    Complex b = zeta_det<Complex>(g, u, w, Complex(static_cast<double>(s), 0.0));
                    EXPECT_LE(relative_error(to_complex(a.value), b), 1e-9);
                }
    }
}

// On trees with balanced loops, 1/Z_{o(a)}(−1) = ω(a)/Z_a(−1).
TEST(CrossModule, VertexEdgeRelationAtMinusOne) {
    gen::Rng rng(103);
    for (int trial = 0; trial < 30; ++trial) {
        WeightedGraph g = gen::random_graph(rng, 5, gen::Shape::TreeLoops);
        for (std::size_t a = 0; a < g.num_edges(); ++a) {
            ZetaValue<Rational> zv = zeta_det_value<Rational>(g, Site::vertex(g.origin(a)), Site::vertex(g.origin(a)), -1);
            ZetaValue<Rational> ze = zeta_det_value<Rational>(g, Site::edge(a), Site::edge(a), -1);
            ASSERT_EQ(zv.is_pole_candidate, ze.is_pole_candidate);
            if (zv.is_pole_candidate) continue;
            EXPECT_EQ(ze.value, zv.value * static_cast<long>(g.weight(a)));
        }
    }
}

// Coefficient tables agree with the test-side enumeration and with the
// partial Dirichlet sums of the truncated series.
TEST(CrossModule, CoefficientsMatchOracleAndSeries) {
    gen::Rng rng(104);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = gen::random_graph(rng, 4, gen::Shape::General, {2, 5});
        std::vector<Site> sites = g.all_sites();
        const Site u = gen::pick(rng, sites), w = gen::pick(rng, sites);
        CoefficientTable t = dirichlet_coefficients_wlit(g, u, w, 200);
        EXPECT_EQ(t.a, tzt::brute_coefficients(g, u, w, 200));
        for (const auto& [n, an] : t.a) EXPECT_EQ(t.b_at(n), an * Integer(static_cast<unsigned long>(n)));
        auto dist = weight_distribution(g, u, w, 6);
        auto brute = weight_distribution_bruteforce(g, u, w, 6);
        EXPECT_EQ(dist, brute);
    }
}

// Splitting identities in floating mode at complex arguments.
TEST(CrossModule, SplittingAtComplexArguments) {
    gen::Rng rng(105);
    const Complex s(2.2, 1.3);
    for (int trial = 0; trial < 24; ++trial) {
        gen::Decomposition d = trial % 4 == 0   ? gen::random_split(rng, SplitKind::Vertex, trial % 8 == 0, gen::Shape::General, 3)
                               : trial % 4 == 1 ? gen::random_split(rng, SplitKind::Edge, trial % 8 == 1, gen::Shape::General, 3)
                               : trial % 4 == 2 ? gen::random_terminal_segment(rng, gen::Shape::General, 3)
                                                : gen::random_loop_reduction(rng, gen::Shape::General, false, 3);
        for (const auto& c : verify_splitting<Complex>(d.kind, d.graph, d.parts, d.site, s))
            EXPECT_LE(relative_error(c.lhs, c.rhs), 1e-9) << c.label;
    }
}

// Diagram series converge to the determinant value where the series converges.
TEST(CrossModule, DiagramSeriesConverges) {
    gen::Rng rng(106);
    const Complex s(5.0, 2.0);
    for (int trial = 0; trial < 6; ++trial) {
        gen::DiagramInstance inst = gen::random_cyclic_diagram(rng, 2);
        const LocalActionDiagram& d = inst.diagram;
        for (const Site& u : d.graph().all_sites()) {
            Complex exact = zeta_pclosed<Complex>(d, inst.inversion, 0, LadSource::root(), u, s);
            Complex approx = zeta_pclosed_series_matrix<Complex>(d, inst.inversion, 0, LadSource::root(), u, s, 60);
            EXPECT_LE(relative_error(exact, approx), 1e-8);
        }
    }
}
