#pragma once

// Exact values of determinant ratios at removable singularities.
//
// The transfer matrices have entries that are finite sums Σ c_n·n^{-σ}. Write
// x_p = p^{-σ} for the primes p dividing some n; every entry is then a
// polynomial in the x_p, and near an integer point σ0 the curve
// x_p = p^{-σ0}·p^{-ε} agrees to first order with the line
// x_p = p^{-σ0}(1 − ε·ℓ_p), ℓ_p = log p. The lowest-order Taylor coefficient
// in ε of a determinant along the curve is therefore the lowest-degree
// homogeneous part H_j(ℓ) of the polynomial in the deviations, and
// lim det(B)/det(A) = H^B_j(ℓ)/H^A_j(ℓ) when both start at order j.
//
// The homogeneous parts are probed along rational directions r in place of
// ℓ, on a grid large enough that a non-zero homogeneous polynomial of the
// relevant degree cannot vanish on all of it. The limit is reported as an
// exact rational only when H^B_j is a rational multiple of H^A_j; otherwise
// the value depends on ratios of logarithms of primes and is irrational
// unless those logarithms satisfy a polynomial relation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/matrix.hpp"
#include "treezeta/scalar.hpp"

namespace treezeta {

// A finite formal sum Σ c_n·n^{-σ} in one symbolic exponent σ.
struct DirichletPoly {
    std::map<std::uint64_t, Rational> terms;  // n → c_n, no zero coefficients

    DirichletPoly() = default;
    static DirichletPoly constant(const Rational& c) { return monomial(1, c); }
    static DirichletPoly monomial(std::uint64_t n, const Rational& c = Rational(1)) {
        DirichletPoly p;
        if (sgn(c) != 0) p.terms[n] = c;
        return p;
    }

    DirichletPoly& operator+=(const DirichletPoly& o) {
        for (const auto& [n, c] : o.terms) add_term(n, c);
        return *this;
    }
    DirichletPoly& operator-=(const DirichletPoly& o) {
        for (const auto& [n, c] : o.terms) add_term(n, -c);
        return *this;
    }
    DirichletPoly& operator*=(const DirichletPoly& o) { return *this = *this * o; }
    friend DirichletPoly operator+(DirichletPoly a, const DirichletPoly& b) { return a += b; }
    friend DirichletPoly operator-(DirichletPoly a, const DirichletPoly& b) { return a -= b; }
    friend DirichletPoly operator-(const DirichletPoly& a) { return DirichletPoly() - a; }
    friend DirichletPoly operator*(const DirichletPoly& a, const DirichletPoly& b) {
        DirichletPoly r;
        for (const auto& [n, c] : a.terms)
            for (const auto& [m, d] : b.terms) {
                std::uint64_t nm;
                if (__builtin_mul_overflow(n, m, &nm)) throw CapacityError("Dirichlet polynomial base overflow");
                r.add_term(nm, c * d);
            }
        return r;
    }
    bool operator==(const DirichletPoly& o) const { return terms == o.terms; }

private:
    void add_term(std::uint64_t n, const Rational& c) {
        Rational& slot = terms[n];
        slot += c;
        if (sgn(slot) == 0) terms.erase(n);
    }
};

// The symbolic exponent: weight_power returns the formal monomial and shifts
// are absorbed by the caller, who states the evaluation point explicitly.
struct SymbolicExponent {};

template <>
struct ScalarTraits<DirichletPoly> {
    using Exponent = SymbolicExponent;
    static constexpr bool exact = true;

    static DirichletPoly zero() { return {}; }
    static DirichletPoly one() { return DirichletPoly::constant(Rational(1)); }
    static DirichletPoly from_int(long long v) { return DirichletPoly::constant(Rational(static_cast<long>(v))); }
    static DirichletPoly from_integer(const Integer& v) { return DirichletPoly::constant(Rational(v)); }
    static bool is_zero(const DirichletPoly& v) { return v.terms.empty(); }
    static double magnitude(const DirichletPoly& v) {
        double r = 0.0;
        for (const auto& [n, c] : v.terms) r += std::fabs(c.get_d()) * static_cast<double>(n);
        return r;
    }
    static DirichletPoly weight_power(std::uint64_t base, SymbolicExponent) {
        if (base == 0) return zero();
        return DirichletPoly::monomial(base);
    }
    static Exponent shift(Exponent s, long) { return s; }
    static std::string format(const DirichletPoly& v) {
        if (v.terms.empty()) return "0";
        std::string s;
        for (const auto& [n, c] : v.terms) {
            if (!s.empty()) s += " + ";
            s += c.get_str() + "*" + std::to_string(n) + "^-s";
        }
        return s;
    }
};

namespace detail {

inline std::map<std::uint64_t, unsigned> factorize(std::uint64_t n) {
    std::map<std::uint64_t, unsigned> f;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    if (n > 1) ++f[n];
    return f;
}

inline Rational rational_power(const Rational& b, unsigned long e) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// n^{-σ0}·Π_p (1 − r_p·ε)^{e_p} for n = Π p^{e_p}.
inline Rational evaluate_monomial(std::uint64_t n, long sigma0, const std::map<std::uint64_t, Rational>& dir,
                                  const Rational& eps) {
    Rational r = ScalarTraits<Rational>::weight_power(n, sigma0);
    for (const auto& [p, e] : factorize(n)) r *= rational_power(Rational(1) - dir.at(p) * eps, e);
    return r;
}

inline Matrix<Rational> evaluate_matrix(const Matrix<DirichletPoly>& m, long sigma0,
                                        const std::map<std::uint64_t, Rational>& dir, const Rational& eps) {
    Matrix<Rational> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto& [n, c] : m(i, j).terms) r(i, j) += c * evaluate_monomial(n, sigma0, dir, eps);
    return r;
}

// Upper bound on the ε-degree of det along any line: Σ over rows of the
// largest number of prime factors (with multiplicity) in that row.
inline std::size_t det_degree_bound(const Matrix<DirichletPoly>& m) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto& [n, c] : m(i, j).terms) {
                std::size_t k = 0;
                for (const auto& [p, e] : factorize(n)) k += e;
                best = std::max(best, k);
            }
        total += best;
    }
    return total;
}

// Monomial coefficients of the polynomial through (x_i, y_i), by Newton
// divided differences.
inline std::vector<Rational> interpolate(const std::vector<Rational>& xs, std::vector<Rational> ys) {
    const std::size_t n = xs.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) {
            ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - k]);
            if (i == k) break;
        }
    std::vector<Rational> coef(n, Rational(0));
    // Horner on the Newton form: p = ys[n-1]; p = p·(x − xs[i]) + ys[i].
    for (std::size_t idx = n; idx-- > 0;) {
        std::vector<Rational> next(n, Rational(0));
        for (std::size_t d = 0; d + 1 < n; ++d) {
            next[d + 1] += coef[d];
            next[d] -= coef[d] * xs[idx];
        }
        next[0] += ys[idx];
        coef = std::move(next);
    }
    return coef;
}

using Direction = std::map<std::uint64_t, Rational>;

// A quantity that is a polynomial in the x_p, evaluated at the point
// x_p = p^{-σ0}(1 − r_p·ε) of the line with direction r.
using LineFunction = std::function<Rational(const Direction&, const Rational&)>;

// Taylor coefficients in ε of f along the given direction, for f of
// ε-degree at most deg.
inline std::vector<Rational> along(const LineFunction& f, std::size_t deg, const Direction& dir) {
    std::vector<Rational> xs, ys;
    for (std::size_t i = 0; i <= deg; ++i) {
        Rational eps(static_cast<long>(i + 1));
        xs.push_back(eps);
        ys.push_back(f(dir, eps));
    }
    return interpolate(xs, ys);
}

inline void collect_primes(const Matrix<DirichletPoly>& m, std::set<std::uint64_t>& out) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto& [n, c] : m(i, j).terms)
                for (const auto& [p, e] : factorize(n)) out.insert(p);
}

inline std::size_t prime_factor_count(std::uint64_t n) {
    std::size_t k = 0;
    for (const auto& [p, e] : factorize(n)) k += e;
    return k;
}

inline long lowest_order(const std::vector<Rational>& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (sgn(c[i]) != 0) return static_cast<long>(i);
    return -1;
}

}  // namespace detail

struct RatioLimit {
    enum class Kind {
        Value,       // finite exact rational limit
        Pole,        // numerator vanishes to lower order than the denominator
        Irrational,  // finite limit depending on ratios of prime logarithms
        Degenerate,  // no σ-dependence could resolve the 0/0
        TooCostly,   // the certifying direction grid exceeds the budget
    };
    Kind kind = Kind::Degenerate;
    Rational value;
    long order = 0;  // vanishing order of the denominator
};

inline constexpr std::size_t kLimitDirectionBudget = 400;

// Limits at σ0 of several ratios num_i/den sharing one denominator. All
// quantities are polynomials in the x_p for p in primes, of ε-degree at most
// `degree` along any line; `evaluate` returns the denominator followed by the
// numerators at one point of a line.
struct BatchLimitProblem {
    std::vector<std::uint64_t> primes;
    long sigma0 = 0;
    std::function<std::vector<Rational>(const detail::Direction&, const Rational&)> evaluate;
    std::size_t count = 0;
    std::size_t degree = 0;
};

inline std::vector<RatioLimit> ratio_limits(const BatchLimitProblem& prob) {
    std::vector<RatioLimit> out(prob.count);
    const auto& primes = prob.primes;
    if (primes.empty()) return out;

    auto direction = [&](const std::vector<long>& tail) {
        detail::Direction dir;
        dir[primes[0]] = Rational(1);
        for (std::size_t i = 1; i < primes.size(); ++i) dir[primes[i]] = Rational(tail[i - 1]);
        return dir;
    };
    // Taylor coefficients of the denominator (index 0) and each numerator.
    auto probe = [&](const detail::Direction& dir) {
        std::vector<Rational> xs;
        std::vector<std::vector<Rational>> ys(prob.count + 1);
        for (std::size_t i = 0; i <= prob.degree; ++i) {
            Rational eps(static_cast<long>(i + 1));
            xs.push_back(eps);
            std::vector<Rational> v = prob.evaluate(dir, eps);
            for (std::size_t k = 0; k <= prob.count; ++k) ys[k].push_back(v[k]);
        }
        std::vector<std::vector<Rational>> coef;
        for (auto& y : ys) coef.push_back(detail::interpolate(xs, y));
        return coef;
    };

    // Order along the all-ones direction bounds the true order from above.
    std::vector<long> tail(primes.size() - 1, 1);
    std::vector<std::vector<std::vector<Rational>>> probes{probe(direction(tail))};
    long bound = detail::lowest_order(probes[0][0]);
    if (bound < 0) bound = static_cast<long>(probes[0][0].size());
    std::size_t side = static_cast<std::size_t>(bound) + 1;
    std::size_t total = 1;
    for (std::size_t i = 1; i < primes.size(); ++i) {
        total *= side;
        if (total > kLimitDirectionBudget) {
            for (auto& o : out) o.kind = RatioLimit::Kind::TooCostly;
            return out;
        }
    }
    for (std::size_t k = 1; k < total; ++k) {
        for (std::size_t i = 0; i < tail.size(); ++i) {
            if (++tail[i] <= static_cast<long>(side)) break;
            tail[i] = 1;
        }
        probes.push_back(probe(direction(tail)));
    }

    long j0 = -1;
    for (const auto& p : probes) {
        long o = detail::lowest_order(p[0]);
        if (o >= 0 && (j0 < 0 || o < j0)) j0 = o;
    }
    if (j0 < 0) return out;
    auto at = [](const std::vector<Rational>& c, long j) -> Rational {
        return static_cast<std::size_t>(j) < c.size() ? c[static_cast<std::size_t>(j)] : Rational(0);
    };
    for (std::size_t k = 0; k < prob.count; ++k) {
        RatioLimit& r = out[k];
        r.order = j0;
        r.kind = RatioLimit::Kind::Value;
        bool have = false;
        for (const auto& p : probes) {
            for (long j = 0; j < j0 && r.kind == RatioLimit::Kind::Value; ++j)
                if (sgn(at(p[k + 1], j)) != 0) r.kind = RatioLimit::Kind::Pole;
            if (r.kind != RatioLimit::Kind::Value) break;
            Rational dj = at(p[0], j0), nj = at(p[k + 1], j0);
            if (sgn(dj) == 0) {
                if (sgn(nj) != 0) r.kind = RatioLimit::Kind::Irrational;
                continue;
            }
            Rational q = nj / dj;
            if (!have) {
                r.value = q;
                have = true;
            } else if (q != r.value) {
                r.kind = RatioLimit::Kind::Irrational;
            }
        }
    }
    return out;
}

// The limit at σ0 of a single ratio num/den, with separate degree bounds.
struct LimitProblem {
    std::vector<std::uint64_t> primes;
    long sigma0 = 0;
    detail::LineFunction num;
    detail::LineFunction den;
    std::size_t num_degree = 0;
    std::size_t den_degree = 0;
};

inline RatioLimit ratio_limit(const LimitProblem& prob) {
    BatchLimitProblem b;
    b.primes = prob.primes;
    b.sigma0 = prob.sigma0;
    b.count = 1;
    b.degree = std::max(prob.num_degree, prob.den_degree);
    b.evaluate = [&](const detail::Direction& dir, const Rational& eps) {
        return std::vector<Rational>{prob.den(dir, eps), prob.num(dir, eps)};
    };
    return ratio_limits(b).front();
}

// lim_{σ→σ0} det(num(σ))/det(den(σ)) for matrices of formal Dirichlet sums.
inline RatioLimit ratio_limit(const Matrix<DirichletPoly>& num, const Matrix<DirichletPoly>& den, long sigma0) {
    std::set<std::uint64_t> primes;
    detail::collect_primes(num, primes);
    detail::collect_primes(den, primes);
    LimitProblem prob;
    prob.primes.assign(primes.begin(), primes.end());
    prob.sigma0 = sigma0;
    prob.num = [&](const detail::Direction& dir, const Rational& eps) {
        return det(detail::evaluate_matrix(num, sigma0, dir, eps));
    };
    prob.den = [&](const detail::Direction& dir, const Rational& eps) {
        return det(detail::evaluate_matrix(den, sigma0, dir, eps));
    };
    prob.num_degree = detail::det_degree_bound(num);
    prob.den_degree = detail::det_degree_bound(den);
    return ratio_limit(prob);
}

}  // namespace treezeta
