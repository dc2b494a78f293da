#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "treezeta/matrix.hpp"

using namespace treezeta;

namespace {

Matrix<Rational> from_rows(const std::vector<std::vector<long>>& rows) {
    Matrix<Rational> m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix<Rational> random_rational(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    Matrix<Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = Rational(num(rng), den(rng));
            m(i, j).canonicalize();
        }
    return m;
}

std::vector<std::vector<Rational>> rows_of(const Matrix<Rational>& m) {
    std::vector<std::vector<Rational>> r(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
    return r;
}

}  // namespace

TEST(Determinant, SmallKnownValues) {
    EXPECT_EQ(det(from_rows({{2, 1}, {1, 3}})), 5);
    EXPECT_EQ(det(from_rows({{0, 1}, {1, 0}})), -1);
    EXPECT_EQ(det(from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})), 0);
    EXPECT_EQ(det(Matrix<Rational>::identity(0)), 1);
}

TEST(Determinant, RationalEntries) {
    Matrix<Rational> m(2, 2);
    m(0, 0) = Rational(1, 2);
    m(0, 1) = Rational(1, 3);
    m(1, 0) = Rational(1, 4);
    m(1, 1) = Rational(1, 5);
    EXPECT_EQ(det(m), Rational(1, 10) - Rational(1, 12));
}

TEST(Determinant, ComplexMatchesRational) {
    Matrix<Rational> m = from_rows({{3, -1, 2}, {0, 4, 1}, {5, 2, -2}});
    Matrix<Complex> c(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c(i, j) = to_complex(m(i, j));
    EXPECT_NEAR(std::abs(det(c) - to_complex(det(m))), 0.0, 1e-12);
}

TEST(Determinant, RejectsNonSquare) { EXPECT_THROW(det(Matrix<Rational>(2, 3)), ValidationError); }

TEST(Solve, SingularSystemThrows) {
    EXPECT_THROW(inverse(from_rows({{1, 2}, {2, 4}})), SingularError);
    Matrix<Complex> c(2, 2);
    c(0, 0) = 1.0;
    c(0, 1) = 2.0;
    c(1, 0) = 2.0;
    c(1, 1) = 4.0;
    EXPECT_THROW(inverse(c), SingularError);
}

TEST(PoleCandidate, FloatingThresholdScalesWithEntries) {
    Matrix<Complex> m = Matrix<Complex>::identity(2).scaled(Complex(1e3, 0.0));
    EXPECT_TRUE(is_pole_candidate(Complex(1e-7, 0.0), m));
    EXPECT_FALSE(is_pole_candidate(Complex(1e-5, 0.0), m));
    EXPECT_TRUE(is_pole_candidate(Rational(0), from_rows({{1}})));
}

TEST(Neumann, PartialSumsOfNilpotent) {
    Matrix<Rational> n = from_rows({{0, 1}, {0, 0}});
    Matrix<Rational> s = neumann_partial(n, 5);
    EXPECT_EQ(s, from_rows({{1, 1}, {0, 1}}));
    EXPECT_THROW(neumann_partial(n, -1), ValidationError);
}

// Property: Bareiss elimination agrees with the permutation expansion.
TEST(DeterminantProperty, MatchesLeibniz) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix<Rational> m = random_rational(rng, 1 + rng() % 5);
        EXPECT_EQ(det(m), tzt::leibniz_det(rows_of(m)));
    }
}

// Property: det is multiplicative and A·A⁻¹ = I for invertible A.
TEST(DeterminantProperty, MultiplicativeAndInverse) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 5;
        Matrix<Rational> a = random_rational(rng, n), b = random_rational(rng, n);
        EXPECT_EQ(det(a * b), det(a) * det(b));
        if (sgn(det(a)) != 0) {
            EXPECT_EQ(a * inverse(a), Matrix<Rational>::identity(n));
        }
    }
}

// Property: matrix determinant lemma det(A + uᵀv)/det(A) = 1 + v·A⁻¹·uᵀ.
TEST(DeterminantProperty, DeterminantLemma) {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<long> d(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 5;
        Matrix<Rational> a = random_rational(rng, n);
        if (sgn(det(a)) == 0) continue;
        RowVector<Rational> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = d(rng);
            v[i] = d(rng);
        }
        EXPECT_EQ(mdl_ratio(a, u, v), det(a + Matrix<Rational>::outer(u, v)) / det(a));
    }
}

// Property: the Neumann partial sum S_L satisfies (I − M)·S_L = I − M^{L+1}.
TEST(NeumannProperty, TelescopingIdentity) {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng() % 4;
        Matrix<Rational> m = random_rational(rng, n);
        long L = static_cast<long>(rng() % 6);
        Matrix<Rational> power = Matrix<Rational>::identity(n);
        for (long k = 0; k <= L; ++k) power = power * m;
        Matrix<Rational> I = Matrix<Rational>::identity(n);
        EXPECT_EQ((I - m) * neumann_partial(m, L), I - power);
    }
}
