#pragma once

// Scalar arithmetic used by every matrix computation in the library.
//
// Two evaluation modes exist. Exact mode uses GMP rationals and is selected
// whenever the exponent s is an integer, because w^(-s) is then rational.
// Floating mode uses std::complex<double> for arbitrary complex s. The two
// modes are distinct C++ types, so a matrix can never mix them.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>

#include "treezeta/errors.hpp"

namespace treezeta {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    using Exponent = long;
    static constexpr bool exact = true;

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long long v) { return Rational(static_cast<long>(v)); }
    static Rational from_integer(const Integer& v) { return Rational(v); }
    static bool is_zero(const Rational& v) { return sgn(v) == 0; }
    static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }

    // base^(-s) for a non-negative integer base. A zero base means the path
    // cannot be lifted, and contributes nothing.
    static Rational weight_power(std::uint64_t base, long s) {
        if (base == 0) return zero();
        Integer b;
        mpz_import(b.get_mpz_t(), 1, 1, sizeof(base), 0, 0, &base);
        Integer p;
        unsigned long e = static_cast<unsigned long>(s < 0 ? -s : s);
        mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), e);
        if (s <= 0) return Rational(p);
        Rational r(Integer(1), p);
        r.canonicalize();
        return r;
    }

    static Exponent shift(Exponent s, long by) { return s + by; }

    static std::string format(const Rational& v) { return v.get_str(); }
};

template <>
struct ScalarTraits<Complex> {
    using Exponent = Complex;
    static constexpr bool exact = false;

    static Complex zero() { return Complex(0.0, 0.0); }
    static Complex one() { return Complex(1.0, 0.0); }
    static Complex from_int(long long v) { return Complex(static_cast<double>(v), 0.0); }
    static Complex from_integer(const Integer& v) { return Complex(v.get_d(), 0.0); }
    static bool is_zero(const Complex& v) { return v == Complex(0.0, 0.0); }
    static double magnitude(const Complex& v) { return std::abs(v); }

    static Complex weight_power(std::uint64_t base, const Complex& s) {
        if (base == 0) return zero();
        if (base == 1) return one();
        return std::exp(-s * std::log(static_cast<double>(base)));
    }

    static Exponent shift(const Exponent& s, long by) { return s + static_cast<double>(by); }

    static std::string format(const Complex& v) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.15g%+.15gi", v.real(), v.imag());
        return buf;
    }
};

template <class T>
std::string format_scalar(const T& v) {
    return ScalarTraits<T>::format(v);
}

// Converts an exact value to floating mode, for cross-mode comparisons.
inline Complex to_complex(const Rational& v) { return Complex(v.get_d(), 0.0); }
inline Complex to_complex(const Complex& v) { return v; }

// Relative distance |a-b| / max(1, |a|, |b|).
inline double relative_error(const Complex& a, const Complex& b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

// An exponent s as typed by a user: an integer selects exact mode, and
// "re" or "re,im" with a fractional or imaginary part selects floating mode.
struct ParsedExponent {
    bool exact = true;
    long integer = 0;
    Complex value{0.0, 0.0};
};

inline ParsedExponent parse_exponent(const std::string& text) {
    ParsedExponent out;
    auto comma = text.find(',');
    std::string re_part = text.substr(0, comma);
    std::string im_part = comma == std::string::npos ? "" : text.substr(comma + 1);
    auto parse_double = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse number '" + text + "'");
        }
        if (used != t.size()) throw ValidationError("cannot parse number '" + text + "'");
        return v;
    };
    bool integral_text = !re_part.empty() && im_part.empty() &&
                         re_part.find_first_not_of("+-0123456789") == std::string::npos;
    if (integral_text) {
        std::size_t used = 0;
        try {
            out.integer = std::stol(re_part, &used);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse integer '" + text + "'");
        }
        if (used != re_part.size()) throw ValidationError("cannot parse integer '" + text + "'");
        out.exact = true;
        out.value = Complex(static_cast<double>(out.integer), 0.0);
        return out;
    }
    out.exact = false;
    out.value = Complex(parse_double(re_part), im_part.empty() ? 0.0 : parse_double(im_part));
    return out;
}

}  // namespace treezeta
