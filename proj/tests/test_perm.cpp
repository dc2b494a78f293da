#include <gtest/gtest.h>

#include <random>
#include <set>

#include "treezeta/perm.hpp"

using namespace treezeta;

namespace {

Permutation cycle(std::size_t n) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>((i + 1) % n);
    return p;
}

Permutation transposition(std::size_t n, std::size_t a, std::size_t b) {
    Permutation p = identity_permutation(n);
    std::swap(p[a], p[b]);
    return p;
}

// Möbius maps of the projective line over F_p: points 0..p-1 and p = ∞.
Permutation mobius(std::uint32_t p, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    auto inv = [p](std::uint32_t x) {
        for (std::uint32_t y = 1; y < p; ++y)
            if (x * y % p == 1) return y;
        return 0u;
    };
    Permutation r(p + 1);
    for (std::uint32_t x = 0; x <= p; ++x) {
        std::uint32_t num, den;
        if (x == p) {
            num = a;
            den = c;
        } else {
            num = (a * x + b) % p;
            den = (c * x + d) % p;
        }
        r[x] = den == 0 ? p : num * inv(den) % p;
    }
    return r;
}

Permutation random_perm(std::mt19937_64& rng, std::size_t n) {
    Permutation p = identity_permutation(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace

TEST(Permutations, ComposeAndValidate) {
    Permutation c = cycle(4);
    EXPECT_TRUE(is_permutation(c));
    EXPECT_FALSE(is_permutation({0, 0, 1}));
    Permutation c4 = compose(c, compose(c, compose(c, c)));
    EXPECT_EQ(c4, identity_permutation(4));
    EXPECT_EQ(compose(c, identity_permutation(4)), c);
}

TEST(PermGroup, KnownOrders) {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<Permutation> gens{cycle(n)};
        if (n > 1) gens.push_back(transposition(n, 0, 1));
        std::size_t fact = 1;
        for (std::size_t i = 2; i <= n; ++i) fact *= i;
        EXPECT_EQ(PermGroup(n, gens).order(), fact) << n;
    }
    Permutation r3{1, 2, 0, 3}, dbl{1, 0, 3, 2};
    EXPECT_EQ(PermGroup(4, {r3, dbl}).order(), 12u);
    PermGroup psl25(6, {mobius(5, 1, 1, 0, 1), mobius(5, 4, 0, 0, 1), mobius(5, 0, 4, 1, 0)});
    EXPECT_EQ(psl25.order(), 60u);
    PermGroup trivial(3, {});
    EXPECT_EQ(trivial.order(), 1u);
    EXPECT_EQ(trivial.orbits().size(), 3u);
}

TEST(PermGroup, OrbitsAndStabilizers) {
    PermGroup g(5, {Permutation{1, 0, 2, 3, 4}, Permutation{0, 1, 3, 4, 2}});
    EXPECT_EQ(g.orbits(), (std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3, 4}}));
    EXPECT_EQ(g.order(), 6u);
    EXPECT_EQ(g.stabilizer_order(0), 3u);
    EXPECT_EQ(g.stab_orbit_size(0, 1), 1u);
    EXPECT_EQ(g.stab_orbit_size(0, 2), 3u);
    EXPECT_EQ(g.stab_orbit_size(2, 3), 1u);
    EXPECT_EQ(g.stab_orbit_size(2, 0), 2u);
}

TEST(PermGroup, ValidationAndCap) {
    EXPECT_THROW(PermGroup(3, {Permutation{0, 1}}), ValidationError);
    EXPECT_THROW(PermGroup(3, {Permutation{0, 0, 1}}), ValidationError);
    PermGroup g(3, {cycle(3)});
    EXPECT_THROW(g.orbit(3), ValidationError);
    EXPECT_THROW(closure(6, {cycle(6), transposition(6, 0, 1)}, 100), CapacityError);
    EXPECT_EQ(closure(6, {cycle(6), transposition(6, 0, 1)}, 720).order(), 720u);
}

// Properties on random groups: closure under composition, orbit-stabilizer,
// and stabilizer orbit sizes against |Stab(x)| / |Stab(x) ∩ Stab(y)|.
TEST(PermGroupProperty, RandomGroups) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + rng() % 5;
        std::vector<Permutation> gens;
        for (std::size_t k = 0, m = rng() % 3; k < m; ++k) gens.push_back(random_perm(rng, n));
        PermGroup g(n, gens);
        const auto& el = g.elements();
        std::set<Permutation> set(el.begin(), el.end());
        ASSERT_EQ(set.size(), el.size());
        for (const auto& a : gens) EXPECT_TRUE(set.count(a));
        for (const auto& a : el)
            for (const auto& b : gens) EXPECT_TRUE(set.count(compose(a, b)));
        for (std::size_t x = 0; x < n; ++x) {
            EXPECT_EQ(g.orbit(x).size() * g.stabilizer_order(x), g.order());
            for (std::size_t y = 0; y < n; ++y) {
                std::size_t both = 0;
                for (const auto& a : el) both += a[x] == x && a[y] == y;
                EXPECT_EQ(g.stab_orbit_size(x, y) * both, g.stabilizer_order(x));
            }
        }
    }
}
