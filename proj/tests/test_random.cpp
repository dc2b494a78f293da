#include <gtest/gtest.h>

#include "support.hpp"
#include "treezeta/random.hpp"

using namespace treezeta;

namespace {

std::size_t count_loops(const WeightedGraph& g) {
    std::size_t n = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) n += g.is_loop(e) ? 1 : 0;
    return n / 2;
}

bool weights_in(const WeightedGraph& g, long lo, long hi) {
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (static_cast<long>(g.weight(e)) < lo || static_cast<long>(g.weight(e)) > hi) return false;
    return true;
}

}  // namespace

TEST(Generators, DeterministicPerSeedAndIndex) {
    for (std::uint64_t idx = 0; idx < 5; ++idx) {
        gen::Rng a = gen::instance_rng(7, idx), b = gen::instance_rng(7, idx);
        EXPECT_EQ(gen::random_graph(a, 5, gen::Shape::General).to_json(),
                  gen::random_graph(b, 5, gen::Shape::General).to_json());
        gen::DiagramInstance da = gen::random_cyclic_diagram(a, 3), db = gen::random_cyclic_diagram(b, 3);
        EXPECT_EQ(da.diagram.to_json(), db.diagram.to_json());
        EXPECT_EQ(da.inversion.image, db.inversion.image);
    }
    gen::Rng a = gen::instance_rng(7, 0), b = gen::instance_rng(8, 0);
    EXPECT_NE(a(), b());
}

TEST(Generators, GraphShapesAndWeights) {
    gen::Rng rng(91);
    for (int trial = 0; trial < 60; ++trial) {
        const gen::Shape shape = static_cast<gen::Shape>(trial % 3);
        WeightedGraph g = gen::random_graph(rng, 5, shape, {2, 4});
        const std::size_t pairs = g.num_edges() / 2;
        EXPECT_GE(pairs, 1u);
        EXPECT_LE(pairs, 5u);
        EXPECT_TRUE(weights_in(g, 2, 4));
        EXPECT_TRUE(setting_gamma_ok(g));
        const std::size_t loops = count_loops(g);
        if (shape == gen::Shape::Tree) {
            EXPECT_EQ(loops, 0u);
            EXPECT_EQ(pairs + 1, g.num_vertices());
        }
        if (shape == gen::Shape::TreeLoops) {
            EXPECT_EQ(pairs - loops + 1, g.num_vertices());
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                if (g.is_loop(e)) {
                    EXPECT_EQ(g.weight(e), g.weight(g.inverse(e)));
                }
            EXPECT_TRUE(is_unimodular(g));
        }
    }
}

TEST(Generators, UnimodularGraphs) {
    gen::Rng rng(92);
    for (int trial = 0; trial < 40; ++trial) EXPECT_TRUE(is_unimodular(gen::random_unimodular_graph(rng, 5)));
}

// Every generated decomposition satisfies the hypotheses of its identity.
TEST(Generators, DecompositionsAreAccepted) {
    gen::Rng rng(93);
    for (int trial = 0; trial < 30; ++trial) {
        const gen::Shape shape = trial % 2 ? gen::Shape::General : gen::Shape::TreeLoops;
        std::vector<gen::Decomposition> decs{
            gen::random_split(rng, SplitKind::Vertex, trial % 3 == 0, shape, 3),
            gen::random_split(rng, SplitKind::Edge, trial % 3 == 1, shape, 3),
            gen::random_terminal_segment(rng, shape, 3),
            gen::random_loop_reduction(rng, shape, true, 3),
        };
        for (const auto& d : decs)
            EXPECT_NO_THROW(verify_splitting<Complex>(d.kind, d.graph, d.parts, d.site, Complex(2.5, 0.5)))
                << d.site;
    }
}

TEST(Generators, BridgeTrees) {
    gen::Rng rng(94);
    for (int trial = 0; trial < 20; ++trial) {
        gen::BridgeDecomposition b = gen::random_bridge_tree(rng, 3);
        EXPECT_EQ(count_loops(b.graph), 0u);
        EXPECT_EQ(b.graph.num_edges() / 2 + 1, b.graph.num_vertices());
        EXPECT_NO_THROW(verify_theorem_G(b.graph, b.first, b.second, b.edge));
    }
}

TEST(Generators, Diagrams) {
    gen::Rng rng(95);
    for (int trial = 0; trial < 20; ++trial) {
        gen::DiagramInstance full = gen::random_full_symmetric(rng, 3);
        EXPECT_TRUE(setting_pclosed_ok(full.diagram, full.inversion));
        EXPECT_FALSE(gen::differs_from_companion(full.diagram));

        gen::DiagramInstance cyc = gen::random_cyclic_diagram(rng, 3, gen::Shape::Tree);
        const LocalActionDiagram& d = cyc.diagram;
        const WeightedGraph& g = d.graph();
        EXPECT_TRUE(setting_pclosed_ok(d, cyc.inversion));
        EXPECT_TRUE(gen::differs_from_companion(d));
        EXPECT_EQ(count_loops(g), 0u);
        EXPECT_TRUE(weights_in(g, 2, 4));
        for (std::size_t v = 0; v < g.num_vertices(); ++v)
            EXPECT_LE(gen::companion_order(g, v), gen::kCompanionOrderLimit);
    }
}
