#pragma once

#include <cstdint>
#include <vector>

#include "pv/int128.hpp"
#include "pv/monomial.hpp"
#include "pv/packed_key.hpp"
#include "pv/parallel.hpp"

namespace pv {

struct CountOptions {
    int threads = default_threads();
    std::uint64_t max_table_entries = 1ULL << 31;  // materialized support budget
    double max_emitted = 8e9;                      // per-join emission budget
    int partition_target_bits = 20;                // ~1M entries per partition
};

// Representation counts r_s: multiplicity of each attainable s-fold moment
// sum over a point box. Keys are packed moment vectors, ascending.
struct RepTable {
    MonomialSystem sys;
    int s_level = 0;
    PointBox box;
    KeyLayout layout;  // layout.s >= s_level so joins add keys fieldwise
    std::vector<u128> keys;
    std::vector<std::uint64_t> mults;

    std::size_t size() const { return keys.size(); }
    u128 total_mass() const;
};

// The 1-fold table over a box: one key per point, all multiplicities 1.
// `layout_folds` sizes the key fields for the eventual fold count.
RepTable point_table(const MonomialSystem& sys, const PointBox& box, int layout_folds);

// Same, over an explicit point list (used by the metamorphic tests to drive
// translated/reflected/swapped enumerations through the identical join path).
RepTable point_table_from(const MonomialSystem& sys, const PointBox& box, int layout_folds,
                          const std::vector<std::pair<std::int64_t, std::int64_t>>& points);

struct JoinResult {
    u128 mass = 0;       // sum of multiplicities
    u128 sum_sq = 0;     // sum of squared multiplicities
    std::size_t support = 0;
};

// One convolution step r_{s+1} = r_s * r_1 as a partitioned radix-sort/merge
// join. Partition boundaries depend only on the data, so output is identical
// for every thread count. When `out` is non-null the merged table is
// materialized there (subject to the entry budget); otherwise the join only
// streams the mass and sum-of-squares tallies.
JoinResult convolve_step(const RepTable& table, const RepTable& points, const CountOptions& opts,
                         RepTable* out);

// r_s over the box, built iteratively from the point table.
RepTable build_rep_table_box(const MonomialSystem& sys, int s, const PointBox& box, const CountOptions& opts);

}  // namespace pv
