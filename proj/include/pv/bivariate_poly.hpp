#pragma once

#include <cmath>
#include <vector>

#include "pv/rational.hpp"

namespace pv {

// Dense polynomial in (t, s) of bounded total degree; coefficient (a, b)
// multiplies t^a s^b and entries with a+b > degree stay zero.
template <class T>
struct BivariatePoly {
    int degree = 0;
    std::vector<T> coeff;  // (degree+1)^2, row a, column b
    double norm = 0.0;     // coefficient l2 norm, kept by refresh_norm()

    BivariatePoly() = default;
    explicit BivariatePoly(int d) : degree(d), coeff(static_cast<std::size_t>(d + 1) * static_cast<std::size_t>(d + 1), T{}) {}

    T& at(int a, int b) { return coeff[static_cast<std::size_t>(a) * static_cast<std::size_t>(degree + 1) + static_cast<std::size_t>(b)]; }
    const T& at(int a, int b) const {
        return coeff[static_cast<std::size_t>(a) * static_cast<std::size_t>(degree + 1) + static_cast<std::size_t>(b)];
    }

    static double coeff_abs(const T& v) {
        if constexpr (std::is_same_v<T, Rational>)
            return std::fabs(v.to_double());
        else
            return std::fabs(v);
    }

    double computed_norm() const {
        double sq = 0;
        for (const T& c : coeff) {
            double v = coeff_abs(c);
            sq += v * v;
        }
        return std::sqrt(sq);
    }
    void refresh_norm() { norm = computed_norm(); }

    bool is_zero() const {
        for (const T& c : coeff)
            if (coeff_abs(c) != 0.0) return false;
        return true;
    }

    // highest total degree with a nonzero coefficient; -1 for the zero poly
    int actual_degree() const {
        int best = -1;
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; b + a <= degree; ++b)
                if (coeff_abs(at(a, b)) != 0.0) best = std::max(best, a + b);
        return best;
    }

    T eval(T t, T s) const {
        // Horner in t with inner Horner in s
        T result{};
        for (int a = degree; a >= 0; --a) {
            T row{};
            for (int b = degree - a; b >= 0; --b) row = row * s + at(a, b);
            result = result * t + row;
        }
        return result;
    }

    friend BivariatePoly operator*(const BivariatePoly& p, const BivariatePoly& q) {
        BivariatePoly r(p.degree + q.degree);
        for (int a = 0; a <= p.degree; ++a)
            for (int b = 0; a + b <= p.degree; ++b) {
                if (coeff_abs(p.at(a, b)) == 0.0) continue;
                for (int c = 0; c <= q.degree; ++c)
                    for (int d = 0; c + d <= q.degree; ++d) r.at(a + c, b + d) += p.at(a, b) * q.at(c, d);
            }
        r.refresh_norm();
        return r;
    }
    friend BivariatePoly operator-(const BivariatePoly& p, const BivariatePoly& q) {
        BivariatePoly r(std::max(p.degree, q.degree));
        for (int a = 0; a <= p.degree; ++a)
            for (int b = 0; a + b <= p.degree; ++b) r.at(a, b) += p.at(a, b);
        for (int a = 0; a <= q.degree; ++a)
            for (int b = 0; a + b <= q.degree; ++b) r.at(a, b) -= q.at(a, b);
        r.refresh_norm();
        return r;
    }

    // zero-padded or truncating copy to a new degree bound (entries beyond
    // the new bound must already be zero)
    BivariatePoly resized(int new_degree) const {
        BivariatePoly r(new_degree);
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                if (a + b > new_degree) {
                    if (coeff_abs(at(a, b)) != 0.0) throw std::domain_error("resize drops nonzero coefficient");
                    continue;
                }
                r.at(a, b) = at(a, b);
            }
        r.refresh_norm();
        return r;
    }
};

using BivariatePolynomial = BivariatePoly<double>;
using RationalPoly = BivariatePoly<Rational>;

inline BivariatePolynomial to_double_poly(const RationalPoly& p) {
    BivariatePolynomial q(p.degree);
    for (std::size_t i = 0; i < p.coeff.size(); ++i) q.coeff[i] = p.coeff[i].to_double();
    q.refresh_norm();
    return q;
}

}  // namespace pv
