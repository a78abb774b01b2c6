#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pv/int128.hpp"
#include "pv/rep_table.hpp"

namespace pv {

enum class Method { brute, mitm, relaxed, quartic };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct CountRecord {
    int k = 0;
    int s = 0;
    std::int64_t n = 0;
    Method method = Method::mitm;
    u128 count = 0;
    double seconds = 0.0;
    int threads = 1;
    std::optional<std::uint64_t> seed;

    bool operator==(const CountRecord&) const = default;
};

// Exact count of 2s-tuples solving the full moment system with variables in
// [1,n], by direct enumeration of all (n^2)^(2s) tuples. Guarded to oracle
// scale; this is the independent check for the join-based counter.
u128 brute_force_count(int k, int s, std::int64_t n);

RepTable build_rep_table(int k, int s, std::int64_t n, const CountOptions& opts = {});

// count = sum over attainable moment sums z of r_s(z)^2. The final fold is
// streamed per partition, so only r_{s-1} is ever materialized.
CountRecord mitm_count(int k, int s, std::int64_t n, const CountOptions& opts = {});
CountRecord mitm_count_box(int k, int s, const PointBox& box, const CountOptions& opts = {});
u128 mitm_count_points(const MonomialSystem& sys, int s, const PointBox& box,
                       const std::vector<std::pair<std::int64_t, std::int64_t>>& points,
                       const CountOptions& opts = {});

struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

// Least-squares slope of log(count) against log(n). Requires >= 3 records
// with matching (k, s, method) and pairwise distinct n.
FitResult exponent_fit(const std::vector<CountRecord>& records);

}  // namespace pv
