#pragma once

#include <cstdint>

#include "pv/counting.hpp"

namespace pv {

struct QuarticOptions {
    int threads = default_threads();
    double max_half_tuples = 8.3e8;     // (n+1)^8; n <= 12 by default
    std::size_t batch_entries = 3000000;  // in-memory half-tuples per sweep
    bool swap_xy = false;               // exchanges the two coordinate roles
};

// Solutions of the perturbed quartic system with the eight points in
// [n, 2n]^2: both linear sums exactly balanced, and |sum X^4 - sum X'^4|,
// |sum Y^4 - sum Y'^4|, |sum X^2 Y^2 - sum X'^2 Y'^2| all <= window_c * n^2.
// Half-tuples are grouped by the exact linear sums; windowed coordinates are
// joined per group through 3^3 neighbor buckets with exact verification.
CountRecord quartic_count(std::int64_t n, double window_c, const QuarticOptions& opts = {});

}  // namespace pv
