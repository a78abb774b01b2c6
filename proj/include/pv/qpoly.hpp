#pragma once

#include <vector>

#include "pv/bivariate_poly.hpp"
#include "pv/errors.hpp"
#include "pv/monomial.hpp"

namespace pv {

// Canonical tangent vectors at a surface point: n1 stacks d/dt of every
// monomial, n2 stacks d/ds, in canonical component order.
struct TangentFrame {
    double t = 0.0;
    double s = 0.0;
    std::vector<double> n1;
    std::vector<double> n2;
};

TangentFrame tangent_frame(const MonomialSystem& sys, double t, double s);

// d/dt and d/ds of monomial component c as polynomials
template <class T>
BivariatePoly<T> monomial_dt(const MonomialSystem& sys, int c, int degree) {
    BivariatePoly<T> p(degree);
    const Monomial& m = sys.at(c);
    if (m.i >= 1) p.at(m.i - 1, m.j) = T(m.i);
    p.refresh_norm();
    return p;
}

template <class T>
BivariatePoly<T> monomial_ds(const MonomialSystem& sys, int c, int degree) {
    BivariatePoly<T> p(degree);
    const Monomial& m = sys.at(c);
    if (m.j >= 1) p.at(m.i, m.j - 1) = T(m.j);
    p.refresh_norm();
    return p;
}

// Q_{v,w} = (n1.v)(n2.w) - (n1.w)(n2.v), expanded exactly; degree <= 2k-2,
// bilinear and antisymmetric in (v, w).
template <class T>
BivariatePoly<T> q_polynomial(const MonomialSystem& sys, const std::vector<T>& v, const std::vector<T>& w) {
    if (v.size() != sys.monomials.size() || w.size() != sys.monomials.size())
        throw ValidationError("vector length does not match the system dimension");
    const int part_deg = sys.k - 1;
    BivariatePoly<T> n1v(part_deg), n2w(part_deg), n1w(part_deg), n2v(part_deg);
    for (int c = 0; c < sys.n; ++c) {
        const Monomial& m = sys.at(c);
        if (m.i >= 1) {
            n1v.at(m.i - 1, m.j) += v[static_cast<std::size_t>(c)] * T(m.i);
            n1w.at(m.i - 1, m.j) += w[static_cast<std::size_t>(c)] * T(m.i);
        }
        if (m.j >= 1) {
            n2v.at(m.i, m.j - 1) += v[static_cast<std::size_t>(c)] * T(m.j);
            n2w.at(m.i, m.j - 1) += w[static_cast<std::size_t>(c)] * T(m.j);
        }
    }
    BivariatePoly<T> q = n1v * n2w - n1w * n2v;
    q.refresh_norm();
    return q.resized(2 * sys.k - 2);
}

}  // namespace pv
