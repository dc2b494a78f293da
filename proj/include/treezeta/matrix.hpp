#pragma once

// Dense matrices over the two scalar modes, with determinants, linear solves,
// the matrix determinant lemma ratio, and partial geometric sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/scalar.hpp"

namespace treezeta {

template <class T>
using RowVector = std::vector<T>;

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<T>::zero()) {}

    static Matrix zero(std::size_t n) { return Matrix(n, n); }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t dim() const { return rows_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw ValidationError("matrix product dimension mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (ScalarTraits<T>::is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Matrix scaled(const T& c) const {
        Matrix r(*this);
        for (auto& v : r.data_) v *= c;
        return r;
    }
    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    // Row vector times this matrix.
    RowVector<T> left_multiply(const RowVector<T>& v) const {
        if (v.size() != rows_) throw ValidationError("vector-matrix dimension mismatch");
        RowVector<T> r(cols_, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            if (ScalarTraits<T>::is_zero(v[i])) continue;
            for (std::size_t j = 0; j < cols_; ++j) r[j] += v[i] * (*this)(i, j);
        }
        return r;
    }
    // This matrix times a column vector.
    RowVector<T> apply(const RowVector<T>& v) const {
        if (v.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
        RowVector<T> r(rows_, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    // Outer product uᵀ·v of two row vectors.
    static Matrix outer(const RowVector<T>& u, const RowVector<T>& v) {
        Matrix r(u.size(), v.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * v[j];
        return r;
    }

    // Submatrix keeping the listed row and column indices, in the given order.
    Matrix restrict_to(const std::vector<std::size_t>& idx) const {
        Matrix r(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(idx[i], idx[j]);
        return r;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix dimension mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
T dot(const RowVector<T>& a, const RowVector<T>& b) {
    if (a.size() != b.size()) throw ValidationError("vector dimension mismatch");
    T r = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

// Largest entry magnitude, used to scale the floating-mode pole threshold.
template <class T>
double max_norm(const Matrix<T>& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, ScalarTraits<T>::magnitude(m(i, j)));
    return r;
}

namespace detail {

// Fraction-free elimination on an integer matrix (Bareiss). Every
// intermediate division is exact, so the result is the exact determinant.
inline Integer bareiss_det(std::vector<std::vector<Integer>> a) {
    const std::size_t n = a.size();
    if (n == 0) return Integer(1);
    Integer prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a[k][k]) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(a[p][k]) == 0) ++p;
            if (p == n) return Integer(0);
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = std::move(t);
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Integer d = a[n - 1][n - 1];
    return sign > 0 ? d : Integer(-d);
}

}  // namespace detail

inline Rational det(const Matrix<Rational>& m) {
    if (!m.square()) throw ValidationError("determinant of a non-square matrix");
    const std::size_t n = m.dim();
    // Clear denominators row by row, then eliminate over the integers.
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Integer scale(1);
    for (std::size_t i = 0; i < n; ++i) {
        Integer l(1);
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
        scale *= l;
    }
    Rational r(detail::bareiss_det(std::move(a)), scale);
    r.canonicalize();
    return r;
}

inline Complex det(const Matrix<Complex>& m) {
    if (!m.square()) throw ValidationError("determinant of a non-square matrix");
    const std::size_t n = m.dim();
    Matrix<Complex> a(m);
    Complex d(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) == 0.0) return Complex(0.0, 0.0);
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            d = -d;
        }
        d *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex f = a(i, k) / a(k, k);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

// True when a determinant value should be treated as zero: exactly zero in
// rational mode, and below 1e-12 times max-norm^dim of the matrix otherwise.
inline bool is_pole_candidate(const Rational& d, const Matrix<Rational>&) { return sgn(d) == 0; }
inline bool is_pole_candidate(const Complex& d, const Matrix<Complex>& m) {
    double scale = std::pow(std::max(max_norm(m), 1.0), static_cast<double>(m.dim()));
    return std::abs(d) < 1e-12 * scale;
}

// Solves A·X = B by Gaussian elimination with pivoting. Throws SingularError
// when A is singular (exactly, or by the pole threshold in floating mode).
template <class T>
Matrix<T> solve(const Matrix<T>& A, const Matrix<T>& B) {
    if (!A.square() || A.rows() != B.rows()) throw ValidationError("solve dimension mismatch");
    const std::size_t n = A.dim();
    const std::size_t m = B.cols();
    Matrix<T> a(A);
    Matrix<T> b(B);
    const double tiny = ScalarTraits<T>::exact ? 0.0 : 1e-13 * std::max(max_norm(A), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = n;
        if constexpr (ScalarTraits<T>::exact) {
            for (std::size_t i = k; i < n; ++i)
                if (!ScalarTraits<T>::is_zero(a(i, k))) {
                    p = i;
                    break;
                }
        } else {
            double best = -1.0;
            for (std::size_t i = k; i < n; ++i)
                if (ScalarTraits<T>::magnitude(a(i, k)) > best) {
                    best = ScalarTraits<T>::magnitude(a(i, k));
                    p = i;
                }
            if (best <= tiny) p = n;
        }
        if (p == n) throw SingularError("singular linear system");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(p, j));
        }
        T inv = ScalarTraits<T>::one() / a(k, k);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || ScalarTraits<T>::is_zero(a(i, k))) continue;
            T f = a(i, k) * inv;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        T inv = ScalarTraits<T>::one() / a(i, i);
        for (std::size_t j = 0; j < m; ++j) b(i, j) *= inv;
    }
    return b;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& A) {
    return solve(A, Matrix<T>::identity(A.dim()));
}

// v·A⁻¹·uᵀ for row vectors u, v.
template <class T>
T bilinear_inverse(const RowVector<T>& v, const Matrix<T>& A, const RowVector<T>& u) {
    Matrix<T> col(u.size(), 1);
    for (std::size_t i = 0; i < u.size(); ++i) col(i, 0) = u[i];
    Matrix<T> y = solve(A, col);
    T r = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < v.size(); ++i) r += v[i] * y(i, 0);
    return r;
}

// Matrix determinant lemma: det(A + uᵀv) / det(A) = 1 + v·A⁻¹·uᵀ.
template <class T>
T mdl_ratio(const Matrix<T>& A, const RowVector<T>& u, const RowVector<T>& v) {
    return ScalarTraits<T>::one() + bilinear_inverse(v, A, u);
}

// Σ_{n=0}^{L} mⁿ evaluated by Horner's scheme S ← I + m·S.
template <class T>
Matrix<T> neumann_partial(const Matrix<T>& m, long L) {
    if (L < 0) throw ValidationError("negative Neumann horizon");
    if (!m.square()) throw ValidationError("Neumann sum of a non-square matrix");
    Matrix<T> I = Matrix<T>::identity(m.dim());
    Matrix<T> S = I;
    for (long k = 0; k < L; ++k) S = I + m * S;
    return S;
}

template <class T>
std::string format_matrix(const Matrix<T>& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += '\t';
            out += format_scalar(m(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace treezeta
