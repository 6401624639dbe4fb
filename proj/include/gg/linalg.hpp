#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "gg/scalar.hpp"

namespace gg {

/// Dense matrix over a complex scalar type, sized for 2^n x 2^n working sets (n <= 8).
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, scalar_traits<S>::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<S>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: size mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (scalar_traits<S>::is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Matrix operator*(const S& s, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = s * a.data_[i];
        return r;
    }

    std::vector<S> apply(const std::vector<S>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix: size mismatch in apply");
        std::vector<S> r(rows_, scalar_traits<S>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!scalar_traits<S>::is_zero((*this)(i, j))) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    Matrix conjugated() const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = scalar_traits<S>::conj((*this)(i, j));
        return r;
    }
    Matrix adjoint() const { return transposed().conjugated(); }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!scalar_traits<S>::is_negligible(x)) return false;
        return true;
    }
    double approx_max() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, scalar_traits<S>::approx_abs(x));
        return m;
    }

private:
    static void check_same(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: size mismatch");
    }
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> data_;
};

namespace detail {

// Row echelon pass shared by rank/kernel/solve. Pivots: first usable entry in exact mode,
// largest magnitude in float mode.
template <class S>
std::vector<std::ptrdiff_t> echelon(Matrix<S>& m, std::vector<std::size_t>* pivot_cols = nullptr) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::ptrdiff_t> pivot_of_col(C, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t best = row;
        bool found = false;
        if constexpr (scalar_traits<S>::exact) {
            for (std::size_t r = row; r < R; ++r)
                if (!scalar_traits<S>::is_zero(m(r, col))) {
                    best = r;
                    found = true;
                    break;
                }
        } else {
            double mx = 0;
            for (std::size_t r = row; r < R; ++r) {
                double a = scalar_traits<S>::approx_abs(m(r, col));
                if (a > mx) {
                    mx = a;
                    best = r;
                }
            }
            found = mx > scalar_traits<S>::eps;
        }
        if (!found) continue;
        if (best != row)
            for (std::size_t c = 0; c < C; ++c) std::swap(m(row, c), m(best, c));
        S inv = scalar_traits<S>::one() / m(row, col);
        for (std::size_t c = col; c < C; ++c) m(row, c) = inv * m(row, c);
        for (std::size_t r = 0; r < R; ++r) {
            if (r == row) continue;
            S f = m(r, col);
            if (scalar_traits<S>::is_negligible(f)) continue;
            for (std::size_t c = col; c < C; ++c) m(r, c) = m(r, c) - f * m(row, c);
        }
        pivot_of_col[col] = static_cast<std::ptrdiff_t>(row);
        if (pivot_cols) pivot_cols->push_back(col);
        ++row;
    }
    return pivot_of_col;
}

}  // namespace detail

template <class S>
std::size_t rank(Matrix<S> m) {
    std::vector<std::size_t> pcols;
    detail::echelon(m, &pcols);
    return pcols.size();
}

/// Basis of the right null space, as columns.
template <class S>
std::vector<std::vector<S>> kernel_basis(Matrix<S> m) {
    const std::size_t C = m.cols();
    auto pivot_of_col = detail::echelon(m);
    std::vector<std::vector<S>> basis;
    for (std::size_t fc = 0; fc < C; ++fc) {
        if (pivot_of_col[fc] >= 0) continue;
        std::vector<S> v(C, scalar_traits<S>::zero());
        v[fc] = scalar_traits<S>::one();
        for (std::size_t c = 0; c < C; ++c)
            if (pivot_of_col[c] >= 0)
                v[c] = -m(static_cast<std::size_t>(pivot_of_col[c]), fc);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve m x = b; throws if inconsistent or underdetermined solution requested uniquely.
template <class S>
std::vector<S> solve(Matrix<S> m, std::vector<S> b) {
    const std::size_t R = m.rows(), C = m.cols();
    Matrix<S> aug(R, C + 1);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t c = 0; c < C; ++c) aug(r, c) = m(r, c);
        aug(r, C) = b[r];
    }
    auto piv = detail::echelon(aug);
    if (piv[C] >= 0) throw std::domain_error("solve: inconsistent system");
    std::vector<S> x(C, scalar_traits<S>::zero());
    for (std::size_t c = 0; c < C; ++c)
        if (piv[c] >= 0) x[c] = aug(static_cast<std::size_t>(piv[c]), C);
    return x;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    const std::size_t N = m.rows();
    Matrix<S> aug(N, 2 * N);
    for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t c = 0; c < N; ++c) aug(r, c) = m(r, c);
        aug(r, N + r) = scalar_traits<S>::one();
    }
    std::vector<std::size_t> pcols;
    detail::echelon(aug, &pcols);
    if (pcols.size() != N) throw std::domain_error("inverse: singular matrix");
    Matrix<S> inv(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) inv(r, c) = aug(r, N + c);
    return inv;
}

template <class S>
S determinant(Matrix<S> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    const std::size_t N = m.rows();
    S det = scalar_traits<S>::one();
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t best = col;
        bool found = false;
        if constexpr (scalar_traits<S>::exact) {
            for (std::size_t r = col; r < N; ++r)
                if (!scalar_traits<S>::is_zero(m(r, col))) {
                    best = r;
                    found = true;
                    break;
                }
        } else {
            double mx = 0;
            for (std::size_t r = col; r < N; ++r) {
                double a = scalar_traits<S>::approx_abs(m(r, col));
                if (a > mx) {
                    mx = a;
                    best = r;
                }
            }
            found = mx > scalar_traits<S>::eps;
        }
        if (!found) return scalar_traits<S>::zero();
        if (best != col) {
            for (std::size_t c = 0; c < N; ++c) std::swap(m(col, c), m(best, c));
            det = -det;
        }
        det = det * m(col, col);
        S inv = scalar_traits<S>::one() / m(col, col);
        for (std::size_t r = col + 1; r < N; ++r) {
            S f = m(r, col) * inv;
            if (scalar_traits<S>::is_negligible(f)) continue;
            for (std::size_t c = col; c < N; ++c) m(r, c) = m(r, c) - f * m(col, c);
        }
    }
    return det;
}

}  // namespace gg
