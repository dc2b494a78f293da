#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "support.hpp"
#include "treezeta/euler.hpp"
#include "treezeta/random.hpp"

using namespace treezeta;

TEST(Chi, BouquetValues) {
    WeightedGraph b = tzt::bouquet({2, 2, 2});
    EXPECT_EQ(chi_at(b, b.site("c")), -5);
    EXPECT_EQ(chi_at(b, b.site("a0")), Rational(-5, 2));
    WeightedGraph b2 = tzt::bouquet({3, 5});
    EXPECT_EQ(chi_at(b2, b2.site("c")), 1 - 3 - 5);
}

TEST(Chi, SegmentAndPath) {
    WeightedGraph s = tzt::segment(3, 4);
    // m(d) = 3/4, χ(c) = 1 + 3/4 − 3.
    EXPECT_EQ(chi_at(s, s.site("c")), Rational(-5, 4));
    EXPECT_EQ(chi_at(s, s.site("d")), Rational(-5, 3));
    EXPECT_THROW(chi_at(tzt::loop(3, 4), Site::vertex(0)), SettingError);
}

TEST(Unimodular, Examples) {
    EXPECT_TRUE(is_unimodular(tzt::segment(3, 7)));
    EXPECT_TRUE(is_unimodular(tzt::bouquet({3, 4})));
    EXPECT_FALSE(is_unimodular(tzt::loop(3, 4)));
    // Triangle with forward products 2·3·4 and backward products 4·3·2.
    auto tri = [](long w1, long w2, long w3) {
        return WeightedGraph::build({"u", "v", "w"}, {{"e1", "u", "v", "f1", w1},
                                                      {"f1", "v", "u", "e1", 4},
                                                      {"e2", "v", "w", "f2", w2},
                                                      {"f2", "w", "v", "e2", 3},
                                                      {"e3", "w", "u", "f3", w3},
                                                      {"f3", "u", "w", "e3", 2}});
    };
    EXPECT_TRUE(is_unimodular(tri(2, 3, 4)));
    EXPECT_FALSE(is_unimodular(tri(2, 3, 5)));
}

// Property: unimodularity agrees with consistent stabilizer propagation, and
// χ agrees with the measure-counting oracle.
TEST(ChiProperty, MatchesMeasureOracle) {
    gen::Rng rng(81);
    int unimodular = 0;
    for (int trial = 0; trial < 80; ++trial) {
        WeightedGraph g = trial % 2 ? gen::random_unimodular_graph(rng, 5)
                                    : gen::random_graph(rng, 4, gen::Shape::General, {2, 4});
        bool expect = tzt::relative_sizes(g, 0).has_value();
        ASSERT_EQ(is_unimodular(g), expect);
        if (!expect) continue;
        ++unimodular;
        for (const Site& u : g.all_sites()) EXPECT_EQ(chi_at(g, u), tzt::oracle_chi(g, u)) << g.site_id(u);
        EXPECT_TRUE(verify_chi_relations(g, 3).ok());
    }
    EXPECT_GE(unimodular, 40);
}

// Property: on trees with balanced loops, χ = 1 / Z_{u→u}(−1).
TEST(ChiProperty, ReciprocalZetaAtMinusOne) {
    gen::Rng rng(82);
    for (int trial = 0; trial < 30; ++trial) {
        WeightedGraph g = gen::random_graph(rng, 5, gen::Shape::TreeLoops, {2, 5});
        if (!tzt::gamma_setting(g)) continue;
        for (const Site& u : g.all_sites()) {
            ZetaValue<Rational> z = zeta_det_value<Rational>(g, u, u, -1);
            Rational chi = tzt::oracle_chi(g, u);
            if (z.is_pole_candidate) {
                EXPECT_EQ(chi, 0);
            } else {
                EXPECT_EQ(chi * z.value, 1) << g.site_id(u);
            }
        }
        EXPECT_TRUE(verify_theorem_E(g).ok());
    }
}

TEST(TheoremE, RejectsGraphsOutsideItsHypotheses) {
    EXPECT_THROW(verify_theorem_E(tzt::segment(2, 2)), SettingError);
    EXPECT_THROW(verify_theorem_E(tzt::loop(3, 4)), SettingError);
}

TEST(Ihara, TransitionMatrixAndDeterminant) {
    WeightedGraph s = tzt::segment(3, 5);
    Matrix<Rational> t = transition_weight(s);
    // det(I − xT) = 1 − x²(ω(a)−1)(ω(ā)−1) on a segment.
    for (long x : {-2L, 1L, 3L}) EXPECT_EQ(ihara_reciprocal(t, Rational(x)), 1 - x * x * 2 * 4);
    Complex z(0.1, 0.2);
    EXPECT_NEAR(std::abs(ihara_reciprocal(t, z) - (1.0 - z * z * 8.0)), 0.0, 1e-12);
    EXPECT_THROW(transition_weight(tzt::segment(1, 3)), SettingError);
}

// Property: det(I − xT) against the permutation expansion of a test-built
// transition matrix.
TEST(IharaProperty, MatchesLeibniz) {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = tzt::random_test_graph(rng, 1 + trial % 3, 2, 5, true);
        const std::size_t m = g.num_edges();
        std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(m, Rational(0)));
        const Rational x(static_cast<long>(trial % 5) - 2, 3);
        for (std::size_t a = 0; a < m; ++a) {
            rows[a][a] += 1;
            for (std::size_t b : g.out_edges(g.terminus(a))) {
                long f = static_cast<long>(g.weight(b)) - (b == g.inverse(a) ? 1 : 0);
                rows[a][b] -= x * f;
            }
        }
        EXPECT_EQ(ihara_reciprocal(transition_weight(g), x), tzt::leibniz_det(rows));
    }
}

TEST(TheoremG, PathOfThreeSegments) {
    WeightedGraph g = tzt::path_graph({{3, 4}, {5, 3}, {4, 4}});
    SubgraphSpec first{{}, {"p0", "p0b", "p1", "p1b"}}, second{{}, {"p1", "p1b", "p2", "p2b"}};
    TheoremGResult r = verify_theorem_G(g, first, second, "p1");
    EXPECT_EQ(r.lhs, r.rhs);
    EXPECT_TRUE(r.unimodular);
    ASSERT_TRUE(r.chi_form.has_value());
    EXPECT_EQ(*r.chi_form, r.rhs);
    EXPECT_THROW(verify_theorem_G(g, first, second, "p0"), SettingError);
}

TEST(TheoremGProperty, RandomBridgeTrees) {
    gen::Rng rng(84);
    for (int trial = 0; trial < 20; ++trial) {
        gen::BridgeDecomposition b = gen::random_bridge_tree(rng, 3);
        TheoremGResult r = verify_theorem_G(b.graph, b.first, b.second, b.edge);
        EXPECT_EQ(r.lhs, r.rhs);
        if (r.chi_form) {
            EXPECT_EQ(*r.chi_form, r.rhs);
        }
    }
}
