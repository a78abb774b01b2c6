#include "pv/oscillatory.hpp"

#include <cmath>

#include "pv/errors.hpp"
#include "pv/kahan.hpp"
#include "pv/rng.hpp"

namespace pv {

CoefficientGrid CoefficientGrid::ones(int n) {
    CoefficientGrid g;
    g.n = n;
    g.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), cplx(1.0, 0.0));
    return g;
}

CoefficientGrid CoefficientGrid::single(int n, int i, int j, cplx value) {
    CoefficientGrid g;
    g.n = n;
    g.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), cplx(0.0, 0.0));
    g.at(i, j) = value;
    return g;
}

CoefficientGrid CoefficientGrid::random_unimodular(int n, std::uint64_t seed) {
    CoefficientGrid g;
    g.n = n;
    g.a.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    Rng rng = Rng::stream(seed, 0);
    for (auto& v : g.a) {
        double theta = 6.283185307179586476925287 * rng.unit();
        v = cplx(std::cos(theta), std::sin(theta));
    }
    return g;
}

double CoefficientGrid::norm_lp(double p) const {
    if (p <= 0) throw ValidationError("norm exponent must be positive");
    double acc = 0;
    for (const cplx& v : a) acc += std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

double CoefficientGrid::norm_l1() const {
    KahanSum s;
    for (const cplx& v : a) s.add(std::abs(v));
    return s.value();
}

NodeSet NodeSet::midpoints(int n) {
    NodeSet ns;
    ns.u.resize(static_cast<std::size_t>(n));
    ns.v.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ns.u[static_cast<std::size_t>(i)] = (i + 0.5) / n;
        ns.v[static_cast<std::size_t>(i)] = (i + 0.5) / n;
    }
    return ns;
}

NodeSet NodeSet::right_endpoints(int n) {
    NodeSet ns;
    ns.u.resize(static_cast<std::size_t>(n));
    ns.v.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ns.u[static_cast<std::size_t>(i)] = (i + 1.0) / n;
        ns.v[static_cast<std::size_t>(i)] = (i + 1.0) / n;
    }
    return ns;
}

namespace {

void validate_nodes(const std::vector<double>& nodes, int n, const char* which) {
    if (static_cast<int>(nodes.size()) != n) throw ValidationError("node list length must match the grid");
    for (int i = 0; i < n; ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        if (!(nodes[static_cast<std::size_t>(i)] > lo && nodes[static_cast<std::size_t>(i)] <= hi))
            throw ValidationError(std::string(which) + " node outside its window");
    }
}

}  // namespace

cplx weyl_sum(const MonomialSystem& sys, const CoefficientGrid& grid, const NodeSet& nodes,
              const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != sys.n) throw ValidationError("frequency vector length must be n");
    validate_nodes(nodes.u, grid.n, "first");
    validate_nodes(nodes.v, grid.n, "second");

    constexpr double two_pi = 6.283185307179586476925287;
    KahanSum re, im;
    for (int i = 1; i <= grid.n; ++i) {
        const double u = nodes.u[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= grid.n; ++j) {
            const cplx& aij = grid.at(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            const double v = nodes.v[static_cast<std::size_t>(j - 1)];
            double phase = 0.0;
            for (int c = 0; c < sys.n; ++c) {
                const Monomial& m = sys.at(c);
                phase += x[static_cast<std::size_t>(c)] * std::pow(u, m.i) * std::pow(v, m.j);
            }
            double ang = two_pi * phase;
            double cs = std::cos(ang), sn = std::sin(ang);
            re.add(aij.real() * cs - aij.imag() * sn);
            im.add(aij.real() * sn + aij.imag() * cs);
        }
    }
    return {re.value(), im.value()};
}

}  // namespace pv
