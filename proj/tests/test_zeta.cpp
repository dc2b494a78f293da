#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "treezeta/zeta.hpp"

using namespace treezeta;
using tzt::ClosedForms;

namespace {

auto rpow(long s) {
    return [s](std::uint64_t n) { return tzt::rational_power(n, s); };
}
auto cpow(Complex s) {
    return [s](std::uint64_t n) { return tzt::complex_power(n, s); };
}

const std::vector<Complex> kComplexPoints{{2.0, 0.0}, {1.5, 3.0}, {2.5, -7.0}, {4.0, 1.0}, {3.0, 10.0}};

}  // namespace

TEST(ClosedForm, SegmentComplex) {
    for (std::uint64_t al : {2, 3, 4})
        for (std::uint64_t be : {2, 3, 4}) {
            WeightedGraph g = tzt::segment(al + 1, be + 1);
            for (Complex s : kComplexPoints) {
                ClosedForms<Complex> f(cpow(s), al, be);
                EXPECT_LE(relative_error(zeta_det<Complex>(g, g.site("c"), g.site("c"), s), f.segment_vertex()),
                          1e-10);
                EXPECT_LE(relative_error(zeta_det<Complex>(g, g.site("a"), g.site("a"), s), f.segment_edge()), 1e-10);
            }
        }
}

TEST(ClosedForm, SegmentExactIncludingMinusOne) {
    for (std::uint64_t al : {2, 3, 4})
        for (std::uint64_t be : {2, 3, 4}) {
            WeightedGraph g = tzt::segment(al + 1, be + 1);
            for (long s : {-1L, 2L, 3L}) {
                ClosedForms<Rational> f(rpow(s), al, be);
                EXPECT_EQ(zeta_det<Rational>(g, g.site("c"), g.site("c"), s), f.segment_vertex());
                EXPECT_EQ(zeta_det<Rational>(g, g.site("a"), g.site("a"), s), f.segment_edge());
            }
        }
}

TEST(ClosedForm, LoopComplexAndExact) {
    for (std::uint64_t al : {2, 3, 4})
        for (std::uint64_t be : {2, 3, 4}) {
            WeightedGraph g = tzt::loop(al + 1, be + 1);
            for (Complex s : kComplexPoints) {
                ClosedForms<Complex> f(cpow(s), al, be);
                EXPECT_LE(relative_error(zeta_det<Complex>(g, g.site("c"), g.site("c"), s), f.loop_vertex()), 1e-10);
                EXPECT_LE(relative_error(zeta_det<Complex>(g, g.site("a"), g.site("a"), s), f.loop_edge()), 1e-10);
            }
            for (long s : {2L, 3L}) {
                ClosedForms<Rational> f(rpow(s), al, be);
                EXPECT_EQ(zeta_det<Rational>(g, g.site("c"), g.site("c"), s), f.loop_vertex());
                EXPECT_EQ(zeta_det<Rational>(g, g.site("a"), g.site("a"), s), f.loop_edge());
            }
        }
}

TEST(ClosedForm, BalancedLoopAtMinusOne) {
    for (std::uint64_t al : {2, 3, 4}) {
        WeightedGraph g = tzt::loop(al + 1, al + 1);
        ClosedForms<Rational> f(rpow(-1), al, al);
        ZetaValue<Rational> z = zeta_det_value<Rational>(g, g.site("c"), g.site("c"), -1);
        EXPECT_TRUE(z.loop_reduced);
        EXPECT_EQ(z.value, f.balanced_loop_vertex());
        EXPECT_EQ(zeta_det<Rational>(g, g.site("a"), g.site("a"), -1), f.balanced_loop_edge());
    }
}

// An unbalanced loop at s = −1 is 0/0 with an irrational limit.
TEST(ClosedForm, UnbalancedLoopAtMinusOneIsIndeterminate) {
    WeightedGraph g = tzt::loop(3, 4);
    ClosedForms<Rational> f(rpow(-1), 2, 3);
    EXPECT_EQ(f.loop_den(), 0);
    EXPECT_THROW(zeta_det<Rational>(g, g.site("c"), g.site("c"), -1), IndeterminateError);
}

TEST(KnownValues, ReferenceExamples) {
    WeightedGraph seg3 = tzt::segment(3, 3);
    EXPECT_EQ(zeta_det<Rational>(seg3, seg3.site("a"), seg3.site("a"), 1), 3);
    EXPECT_EQ(zeta_det<Rational>(seg3, seg3.site("c"), seg3.site("c"), -1), -1);
    WeightedGraph loop3 = tzt::loop(3, 3);
    EXPECT_EQ(zeta_det<Rational>(loop3, loop3.site("c"), loop3.site("c"), -1), Rational(-1, 2));
}

TEST(Poles, DegenerateSegmentHasPole) {
    WeightedGraph g = tzt::segment(2, 2);
    ZetaValue<Rational> z = zeta_det_value<Rational>(g, g.site("c"), g.site("c"), 2);
    EXPECT_TRUE(z.formal);
    EXPECT_TRUE(z.is_pole_candidate);
    EXPECT_THROW(zeta_det<Rational>(g, g.site("c"), g.site("c"), 2), PoleError);
}

TEST(Series, RejectsNegativeHorizon) {
    WeightedGraph g = tzt::segment(3, 3);
    EXPECT_THROW(zeta_series_matrix<Rational>(g, g.site("c"), g.site("c"), 2, -1), ValidationError);
}

// Property: truncated series from both sides match an independent DFS oracle.
TEST(SeriesProperty, MatchesBruteForceOracle) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        WeightedGraph g = tzt::random_test_graph(rng, 1 + trial % 4, 2, 5, trial % 2 == 0);
        std::vector<Site> sites = g.all_sites();
        const Site u = sites[rng() % sites.size()], w = sites[rng() % sites.size()];
        const long s = 1 + static_cast<long>(rng() % 3), L = 5;
        std::function<Rational(std::uint64_t)> pw = rpow(s);
        EXPECT_EQ(zeta_series<Rational>(g, u, w, s, L), tzt::brute_series<Rational>(g, u, w, pw, L))
            << g.site_id(u) << "->" << g.site_id(w);
    }
}

// Property: for Re(s) large the truncated series converges to the determinant value.
TEST(SeriesProperty, ConvergesToDeterminant) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = tzt::random_test_graph(rng, 1 + trial % 3, 3, 5, true);
        std::vector<Site> sites = g.all_sites();
        const Site u = sites[rng() % sites.size()], w = sites[rng() % sites.size()];
        const Complex s(6.0, 1.5);
        Complex exact = zeta_det<Complex>(g, u, w, s);
        Complex approx = zeta_series_matrix<Complex>(g, u, w, s, 40);
        EXPECT_LE(relative_error(exact, approx), 1e-8);
    }
}

// Property: the reciprocal formula agrees with 1 / (determinant ratio).
TEST(ReciprocalProperty, MatchesInverseOfRatio) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        WeightedGraph g = tzt::random_test_graph(rng, 1 + trial % 4, 2, 5, true);
        if (!tzt::gamma_setting(g)) continue;
        for (const Site& u : g.all_sites()) {
            const long s = 2;
            ZetaValue<Rational> z = zeta_det_value<Rational>(g, u, u, s);
            if (z.is_pole_candidate || sgn(z.value) == 0) continue;
            EXPECT_EQ(zeta_reciprocal<Rational>(g, u, s), 1 / z.value);
        }
    }
}

TEST(LoopQuotient, DropsOneMemberPerBalancedLoop) {
    WeightedGraph g = tzt::bouquet({3, 4});
    LoopQuotient q = balanced_loop_quotient(g);
    EXPECT_EQ(q.kept.size(), 2u);
    EXPECT_FALSE(q.trivial());
    EXPECT_TRUE(balanced_loop_quotient(tzt::loop(3, 4)).trivial());
}

TEST(Splitting, VertexSplitOfPath) {
    WeightedGraph g = tzt::path_graph({{3, 4}, {5, 3}});
    SubgraphSpec left{{"v0", "v1"}, {"p0", "p0b"}}, right{{"v1", "v2"}, {"p1", "p1b"}};
    for (long s : {-1L, 2L, 3L})
        for (const auto& c : verify_splitting<Rational>(SplitKind::Vertex, g, {left, right}, "v1", s))
            EXPECT_EQ(c.lhs, c.rhs) << c.label << " s=" << s;
    auto cs = verify_splitting<Complex>(SplitKind::Vertex, g, {left, right}, "v1", Complex(1.5, 2.0));
    for (const auto& c : cs) EXPECT_LE(relative_error(c.lhs, c.rhs), 1e-10);
}

TEST(Splitting, EdgeSplitAndReductions) {
    WeightedGraph g = tzt::path_graph({{3, 4}, {5, 3}, {4, 4}});
    SubgraphSpec left{{}, {"p0", "p0b", "p1", "p1b"}}, right{{}, {"p1", "p1b", "p2", "p2b"}};
    for (long s : {-1L, 2L}) {
        for (const auto& c : verify_splitting<Rational>(SplitKind::Edge, g, {left, right}, "p1", s))
            EXPECT_EQ(c.lhs, c.rhs) << c.label;
        for (const auto& c : verify_splitting<Rational>(SplitKind::TerminalSegment, g, {}, "p0", s))
            EXPECT_EQ(c.lhs, c.rhs) << c.label;
    }
    WeightedGraph b = tzt::bouquet({3, 4});
    for (long s : {-1L, 2L, 3L})
        for (const auto& c : verify_splitting<Rational>(SplitKind::Loop, b, {}, "a0", s))
            EXPECT_EQ(c.lhs, c.rhs) << c.label << " s=" << s;
}

TEST(Splitting, RejectsBadHypotheses) {
    WeightedGraph g = tzt::path_graph({{3, 4}, {5, 3}});
    SubgraphSpec left{{"v0", "v1"}, {"p0", "p0b"}};
    EXPECT_THROW(verify_splitting<Rational>(SplitKind::Vertex, g, {left, left}, "v1", 2), SettingError);
    EXPECT_THROW(verify_splitting<Rational>(SplitKind::Loop, g, {}, "p0", 2), SettingError);
    SubgraphSpec half{{}, {"p0"}};
    EXPECT_THROW(verify_splitting<Rational>(SplitKind::Vertex, g, {half, left}, "v1", 2), SettingError);
}
