#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pv/monomial.hpp"
#include "pv/parallel.hpp"

namespace pv {

using cplx = std::complex<double>;

// N x N complex coefficients a_{i,j}, i and j starting at 1.
struct CoefficientGrid {
    int n = 0;
    std::vector<cplx> a;  // row-major, (i-1)*n + (j-1)

    static CoefficientGrid ones(int n);
    static CoefficientGrid single(int n, int i, int j, cplx value);
    static CoefficientGrid random_unimodular(int n, std::uint64_t seed);

    cplx& at(int i, int j) { return a[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j - 1)]; }
    const cplx& at(int i, int j) const {
        return a[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j - 1)];
    }
    double norm_lp(double p) const;
    double norm_l1() const;
};

// Per-slot evaluation nodes: u[i], v[i] in ((i-1)/N, i/N].
struct NodeSet {
    std::vector<double> u;
    std::vector<double> v;

    static NodeSet midpoints(int n);
    static NodeSet right_endpoints(int n);
};

// Direct double sum a_{i,j} e(x . phi(u_i, v_j)) with compensated
// accumulation; phases follow the canonical monomial order with the first
// variable u and the second v.
cplx weyl_sum(const MonomialSystem& sys, const CoefficientGrid& grid, const NodeSet& nodes,
              const std::vector<double>& x);

// Which sampler a plan is meant for: the frequency torus, or a ball in R^n
// (uniform for plain averages, weight-shaped for the weighted norms).
// `unspecified` adopts the operation's natural domain; naming the wrong
// domain is rejected.
enum class SampleDomain { unspecified, torus, ball };

struct SamplePlan {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int threads = default_threads();
    SampleDomain domain = SampleDomain::unspecified;
};

struct MeanReport {
    double estimate = 0.0;
    double stderr_mean = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

// Monte Carlo estimate of the torus mean of |full Weyl sum|^{2s} over the
// frequency cube, a == 1 and integer nodes; its expectation is exactly the
// solution count. The first two coordinates are stratified, and fixed-size
// sample chunks keep the reduction identical for every thread count.
MeanReport torus_mean_mc(const MonomialSystem& sys, int s, std::int64_t n, const SamplePlan& plan);

struct RatioReport {
    double ratio = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

// (average of |weyl_sum|^p over the radius-R ball)^{1/p} divided by the l^p
// norm of the coefficients; a lower-bound probe for the discrete restriction
// constant. Requires R >= N^2.
RatioReport restriction_ratio(const MonomialSystem& sys, const CoefficientGrid& grid, const NodeSet& nodes,
                              double p, double radius, const SamplePlan& plan);

// Piecewise-constant input on the decoupling cells: cells_per_axis^2 complex
// values, cell (a, b) = [a/L, (a+1)/L] x [b/L, (b+1)/L].
struct CellFunction {
    int cells_per_axis = 0;
    std::vector<cplx> values;

    static CellFunction single_cell(int cells_per_axis, int a, int b, cplx value);
    static CellFunction random_unimodular(int cells_per_axis, std::uint64_t seed);
    const cplx& at(int a, int b) const {
        return values[static_cast<std::size_t>(a) * static_cast<std::size_t>(cells_per_axis) + static_cast<std::size_t>(b)];
    }
};

struct ProbeOptions {
    int gl_order = 8;            // tensor Gauss-Legendre points per panel axis
    int max_panels_per_axis = 512;
    double modulation_u = 0.0;   // shift of the two linear frequency slots
    double modulation_v = 0.0;
    std::vector<double> center;  // ball center, defaults to the origin
};

struct ProbeReport {
    double ratio = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

// integral of e(x . phi) over cell (a, b) of the cells_per_axis grid, by the
// same panelled quadrature the probe uses
cplx extension_cell_integral(const MonomialSystem& sys, int cells_per_axis, int a, int b,
                             const std::vector<double>& x, int gl_order = 8, int max_panels = 512);

// Weighted-ball ratio ||E g|| / (sum_cells ||E_cell g||^p)^{1/p}: a
// quadrature-certified lower bound for the decoupling constant at (N, p).
// Cell integrals use tensor Gauss-Legendre panels sized so the phase varies
// less than a quarter cycle per panel; the sampler follows the polynomial
// ball weight, truncated where it falls below 1e-10 of its peak.
ProbeReport decoupling_probe(const MonomialSystem& sys, const CellFunction& g, std::int64_t n, double p,
                             const SamplePlan& plan, const ProbeOptions& opts = {});

struct AscentReport {
    ProbeReport best;
    CellFunction best_g;
    int restarts = 0;
};

// Random-restart coordinate ascent over unimodular cell values; makes no
// optimality claim, just reports the best ratio encountered.
AscentReport probe_maximize(const MonomialSystem& sys, std::int64_t n, double p, const SamplePlan& plan,
                            int restarts, int sweeps, const ProbeOptions& opts = {});

}  // namespace pv
