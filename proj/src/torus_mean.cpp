#include <chrono>
#include <cmath>
#include <numeric>

#include "pv/errors.hpp"
#include "pv/kahan.hpp"
#include "pv/oscillatory.hpp"
#include "pv/rng.hpp"

namespace pv {

namespace {

std::uint64_t coprime_stride(std::uint64_t m) {
    if (m <= 2) return 1;
    std::uint64_t a = static_cast<std::uint64_t>(0.6180339887498949 * static_cast<double>(m)) | 1ULL;
    while (std::gcd(a, m) != 1) a += 2;
    return a % m;
}

}  // namespace

MeanReport torus_mean_mc(const MonomialSystem& sys, int s, std::int64_t n, const SamplePlan& plan) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    if (n < 1) throw ValidationError("box size must be >= 1");
    if (plan.samples < 2) throw ValidationError("need at least two samples");
    if (plan.domain != SampleDomain::unspecified && plan.domain != SampleDomain::torus)
        throw ValidationError("torus mean requires a torus sample plan");

    auto t0 = std::chrono::steady_clock::now();
    const std::size_t npoints = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    const std::size_t ncomp = static_cast<std::size_t>(sys.n);
    std::vector<double> phi(npoints * ncomp);
    {
        std::size_t p = 0;
        for (std::int64_t x = 1; x <= n; ++x)
            for (std::int64_t y = 1; y <= n; ++y, ++p) {
                MomentVector v = moment_map(sys, x, y);
                for (std::size_t c = 0; c < ncomp; ++c) phi[p * ncomp + c] = static_cast<double>(v[c]);
            }
    }

    const std::uint64_t M = plan.samples;
    // marginal stratification of the two linear frequencies via coprime strides
    const std::uint64_t stride1 = coprime_stride(M);
    const std::uint64_t stride2 = coprime_stride(M + (M % 2 ? 1 : 3));

    constexpr double two_pi = 6.283185307179586476925287;
    constexpr std::uint64_t chunk = 4096;
    const std::size_t nchunks = static_cast<std::size_t>((M + chunk - 1) / chunk);
    std::vector<double> chunk_sum(nchunks), chunk_sumsq(nchunks);

    parallel_chunks(nchunks, plan.threads, [&](std::size_t ci) {
        KahanSum fsum, fsq;
        const std::uint64_t lo = static_cast<std::uint64_t>(ci) * chunk;
        const std::uint64_t hi = std::min(M, lo + chunk);
        std::vector<double> alpha(ncomp);
        for (std::uint64_t m = lo; m < hi; ++m) {
            Rng rng = Rng::stream(plan.seed, m);
            alpha[0] = (static_cast<double>((m * stride1) % M) + rng.unit()) / static_cast<double>(M);
            if (ncomp > 1) alpha[1] = (static_cast<double>((m * stride2) % M) + rng.unit()) / static_cast<double>(M);
            for (std::size_t c = 2; c < ncomp; ++c) alpha[c] = rng.unit();

            KahanSum re, im;
            for (std::size_t p = 0; p < npoints; ++p) {
                double phase = 0.0;
                const double* row = &phi[p * ncomp];
                for (std::size_t c = 0; c < ncomp; ++c) phase += alpha[c] * row[c];
                double ang = two_pi * phase;
                re.add(std::cos(ang));
                im.add(std::sin(ang));
            }
            double mag2 = re.value() * re.value() + im.value() * im.value();
            double f = 1.0;
            for (int e = 0; e < s; ++e) f *= mag2;
            fsum.add(f);
            fsq.add(f * f);
        }
        chunk_sum[ci] = fsum.value();
        chunk_sumsq[ci] = fsq.value();
    });

    KahanSum total, total_sq;
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        total.add(chunk_sum[ci]);
        total_sq.add(chunk_sumsq[ci]);
    }
    const double mean = total.value() / static_cast<double>(M);
    const double var =
        std::max(0.0, (total_sq.value() - total.value() * mean) / static_cast<double>(M - 1));

    auto t1 = std::chrono::steady_clock::now();
    MeanReport rep;
    rep.estimate = mean;
    rep.stderr_mean = std::sqrt(var / static_cast<double>(M));
    rep.samples = M;
    rep.seed = plan.seed;
    rep.seconds = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

}  // namespace pv
