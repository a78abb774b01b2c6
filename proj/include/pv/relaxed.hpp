#pragma once

#include <cstdint>
#include <vector>

#include "pv/counting.hpp"

namespace pv {

// Real sites S[i] in (i-1, i], one per integer slot. The sampler draws dyadic
// values with 12 fractional bits so every window sum below is an exact double
// and all comparisons run at tolerance zero.
struct RelaxedSites {
    std::vector<double> sx;
    std::vector<double> sy;

    RelaxedSites(std::vector<double> x, std::vector<double> y);
    std::int64_t n() const { return static_cast<std::int64_t>(sx.size()); }

    static RelaxedSites integer_sites(std::int64_t n);
    static RelaxedSites sample(std::int64_t n, std::uint64_t seed);
};

struct RelaxedOptions {
    int threads = default_threads();
    double max_half_tuples = 2e7;
};

// Number of pairs of s-tuples drawn from the sites satisfying
// |sum X - sum X'| <= 1/N, |sum Y - sum Y'| <= 1/N and the three quadratic
// windows |sum X^2 - ...| <= 1, |sum Y^2 - ...| <= 1, |sum XY - ...| <= 1,
// all closed. Buckets half-tuple sums per coordinate and scans the 3^5
// neighboring buckets, then verifies each candidate exactly; the result does
// not depend on the bucketing.
CountRecord relaxed_count(int s, const RelaxedSites& sites, const RelaxedOptions& opts = {});

}  // namespace pv
