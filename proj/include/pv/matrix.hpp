#pragma once

#include <cmath>
#include <vector>

#include "pv/rational.hpp"

namespace pv {

// Row-major dense matrix; everything here is at most 14x14.
template <class T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T{}) {}

    T& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// Gauss-Jordan over the rationals; returns the rank and leaves `m` in reduced
// row echelon form. Exact.
inline std::size_t rref_rational(Mat<Rational>& m, std::vector<std::size_t>* pivot_cols = nullptr) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t piv = rank;
        while (piv < m.rows && m(piv, col).is_zero()) ++piv;
        if (piv == m.rows) continue;
        for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(rank, c), m(piv, c));
        Rational inv = Rational(1) / m(rank, col);
        for (std::size_t c = 0; c < m.cols; ++c) m(rank, c) *= inv;
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank || m(r, col).is_zero()) continue;
            Rational f = m(r, col);
            for (std::size_t c = 0; c < m.cols; ++c) m(r, c) -= f * m(rank, c);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

inline std::size_t rank_rational(Mat<Rational> m) { return rref_rational(m); }

// Basis of the null space {x : m x = 0}, exact.
inline std::vector<std::vector<Rational>> kernel_rational(Mat<Rational> m) {
    std::vector<std::size_t> pivots;
    std::size_t rank = rref_rational(m, &pivots);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols, Rational(0));
        v[free] = Rational(1);
        for (std::size_t r = 0; r < rank; ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Rank with partial pivoting and a relative pivot tolerance.
inline std::size_t rank_double(Mat<double> m, double tol = 1e-9) {
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return 0;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < m.rows; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
        if (std::fabs(m(piv, col)) <= tol * scale) continue;
        for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(rank, c), m(piv, c));
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            double f = m(r, col) / m(rank, col);
            for (std::size_t c = col; c < m.cols; ++c) m(r, c) -= f * m(rank, c);
        }
        ++rank;
    }
    return rank;
}

// Singular values of a 2 x c matrix via the closed-form 2x2 Gram eigenvalues.
inline std::pair<double, double> singular_values_2xc(const Mat<double>& m) {
    double g11 = 0, g12 = 0, g22 = 0;
    for (std::size_t c = 0; c < m.cols; ++c) {
        g11 += m(0, c) * m(0, c);
        g12 += m(0, c) * m(1, c);
        g22 += m(1, c) * m(1, c);
    }
    double tr = g11 + g22;
    double det = g11 * g22 - g12 * g12;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double l1 = tr / 2.0 + disc;
    double l2 = std::max(0.0, tr / 2.0 - disc);
    return {std::sqrt(l1), std::sqrt(l2)};
}

}  // namespace pv
