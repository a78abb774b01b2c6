#pragma once

#include <cmath>
#include <cstdint>

namespace pv {

// Counter-style generator built on the splitmix64 mixer. Streams are derived
// from (seed, stream id) so per-sample and per-restart substreams are
// reproducible independently of thread count and scheduling.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
        r.next();  // decorrelate nearby stream ids
        r.next();
        return r;
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1]; never returns 0 so logs are safe.
    double unit_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Box-Muller; avoids std::normal_distribution for cross-build determinism.
    double gaussian() {
        double u1 = unit_pos();
        double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
};

}  // namespace pv
