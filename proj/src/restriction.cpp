#include <chrono>
#include <cmath>

#include "pv/errors.hpp"
#include "pv/kahan.hpp"
#include "pv/oscillatory.hpp"
#include "pv/rng.hpp"

namespace pv {

RatioReport restriction_ratio(const MonomialSystem& sys, const CoefficientGrid& grid, const NodeSet& nodes,
                              double p, double radius, const SamplePlan& plan) {
    if (p < 2.0) throw ValidationError("restriction exponent must be >= 2");
    const double n2 = static_cast<double>(grid.n) * static_cast<double>(grid.n);
    if (radius < n2) throw ValidationError("ball radius must be at least N^2");
    if (plan.samples < 1) throw ValidationError("need at least one sample");
    if (plan.domain != SampleDomain::unspecified && plan.domain != SampleDomain::ball)
        throw ValidationError("restriction ratio requires a ball sample plan");

    auto t0 = std::chrono::steady_clock::now();
    const std::size_t dim = static_cast<std::size_t>(sys.n);

    constexpr std::uint64_t chunk = 1024;
    const std::size_t nchunks = static_cast<std::size_t>((plan.samples + chunk - 1) / chunk);
    std::vector<double> chunk_sum(nchunks);

    parallel_chunks(nchunks, plan.threads, [&](std::size_t ci) {
        KahanSum acc;
        const std::uint64_t lo = static_cast<std::uint64_t>(ci) * chunk;
        const std::uint64_t hi = std::min(plan.samples, lo + chunk);
        std::vector<double> x(dim);
        for (std::uint64_t m = lo; m < hi; ++m) {
            Rng rng = Rng::stream(plan.seed, m);
            // uniform direction, radius with the n-ball density
            double norm2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                x[c] = rng.gaussian();
                norm2 += x[c] * x[c];
            }
            double r = radius * std::pow(rng.unit_pos(), 1.0 / static_cast<double>(dim));
            double scale = r / std::sqrt(norm2 > 0 ? norm2 : 1.0);
            for (std::size_t c = 0; c < dim; ++c) x[c] *= scale;
            acc.add(std::pow(std::abs(weyl_sum(sys, grid, nodes, x)), p));
        }
        chunk_sum[ci] = acc.value();
    });

    KahanSum total;
    for (double v : chunk_sum) total.add(v);

    auto t1 = std::chrono::steady_clock::now();
    RatioReport rep;
    rep.numerator = std::pow(total.value() / static_cast<double>(plan.samples), 1.0 / p);
    rep.denominator = grid.norm_lp(p);
    if (rep.denominator == 0.0) throw ValidationError("coefficient grid must be nonzero");
    rep.ratio = rep.numerator / rep.denominator;
    rep.samples = plan.samples;
    rep.seed = plan.seed;
    rep.seconds = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

}  // namespace pv
