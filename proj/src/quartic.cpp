#include "pv/quartic.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "pv/errors.hpp"

namespace pv {

namespace {

struct HalfSums {
    std::int64_t lin_x, lin_y;   // exact-match coordinates
    std::int64_t q4x, q4y, q22;  // windowed coordinates
};

struct TripleKey {
    std::array<std::int64_t, 3> q;
    bool operator==(const TripleKey&) const = default;
};

struct TripleKeyHash {
    std::size_t operator()(const TripleKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int64_t v : k.q) h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// enumerate all ordered 4-tuples of points, incremental partial sums
template <class Fn>
void enumerate_half_tuples(const std::vector<HalfSums>& pts, Fn&& fn) {
    const std::size_t m = pts.size();
    HalfSums s1, s2, s3, s4;
    for (std::size_t a = 0; a < m; ++a) {
        s1 = pts[a];
        for (std::size_t b = 0; b < m; ++b) {
            s2.lin_x = s1.lin_x + pts[b].lin_x;
            s2.lin_y = s1.lin_y + pts[b].lin_y;
            s2.q4x = s1.q4x + pts[b].q4x;
            s2.q4y = s1.q4y + pts[b].q4y;
            s2.q22 = s1.q22 + pts[b].q22;
            for (std::size_t c = 0; c < m; ++c) {
                s3.lin_x = s2.lin_x + pts[c].lin_x;
                s3.lin_y = s2.lin_y + pts[c].lin_y;
                s3.q4x = s2.q4x + pts[c].q4x;
                s3.q4y = s2.q4y + pts[c].q4y;
                s3.q22 = s2.q22 + pts[c].q22;
                for (std::size_t d = 0; d < m; ++d) {
                    s4.lin_x = s3.lin_x + pts[d].lin_x;
                    s4.lin_y = s3.lin_y + pts[d].lin_y;
                    s4.q4x = s3.q4x + pts[d].q4x;
                    s4.q4y = s3.q4y + pts[d].q4y;
                    s4.q22 = s3.q22 + pts[d].q22;
                    fn(s4);
                }
            }
        }
    }
}

struct StoredTuple {
    std::int64_t q4x, q4y, q22;
};

}  // namespace

CountRecord quartic_count(std::int64_t n, double window_c, const QuarticOptions& opts) {
    if (n < 1) throw ValidationError("box size must be >= 1");
    if (!(window_c > 0)) throw ValidationError("window constant must be positive");
    const double half_tuples = std::pow(static_cast<double>(n + 1), 8.0);
    if (half_tuples > opts.max_half_tuples)
        throw BudgetError("memory budget exceeded; " + std::to_string(half_tuples) + " half-tuples");

    auto t0 = std::chrono::steady_clock::now();

    std::vector<HalfSums> pts;
    pts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (std::int64_t x = n; x <= 2 * n; ++x)
        for (std::int64_t y = n; y <= 2 * n; ++y) {
            std::int64_t px = opts.swap_xy ? y : x;
            std::int64_t py = opts.swap_xy ? x : y;
            HalfSums h;
            h.lin_x = px;
            h.lin_y = py;
            h.q4x = px * px * px * px;
            h.q4y = py * py * py * py;
            h.q22 = px * px * py * py;
            pts.push_back(h);
        }

    // group by the exact linear sums
    const std::int64_t span = 4 * n + 1;  // sums range over [4n, 8n]
    const std::size_t ngroups = static_cast<std::size_t>(span) * static_cast<std::size_t>(span);
    auto group_of = [&](const HalfSums& h) {
        return static_cast<std::size_t>(h.lin_x - 4 * n) * static_cast<std::size_t>(span) +
               static_cast<std::size_t>(h.lin_y - 4 * n);
    };

    std::vector<std::uint64_t> group_size(ngroups, 0);
    enumerate_half_tuples(pts, [&](const HalfSums& h) { ++group_size[group_of(h)]; });

    const double window = window_c * static_cast<double>(n) * static_cast<double>(n);
    u128 count = 0;

    // sweep group-id ranges so only one batch of tuples is in memory
    std::size_t gstart = 0;
    std::vector<std::vector<StoredTuple>> batch;
    while (gstart < ngroups) {
        std::size_t gend = gstart;
        std::uint64_t total = 0;
        while (gend < ngroups && (gend == gstart || total + group_size[gend] <= opts.batch_entries)) {
            total += group_size[gend];
            ++gend;
        }
        batch.assign(gend - gstart, {});
        for (std::size_t g = gstart; g < gend; ++g) batch[g - gstart].reserve(group_size[g]);
        enumerate_half_tuples(pts, [&](const HalfSums& h) {
            std::size_t g = group_of(h);
            if (g >= gstart && g < gend) batch[g - gstart].push_back({h.q4x, h.q4y, h.q22});
        });

        const std::size_t nlocal = gend - gstart;
        std::vector<u128> tallies(nlocal, 0);
        parallel_chunks(nlocal, opts.threads, [&](std::size_t gi) {
            const auto& tuples = batch[gi];
            if (tuples.empty()) return;
            std::unordered_map<TripleKey, std::vector<std::uint32_t>, TripleKeyHash> buckets;
            buckets.reserve(tuples.size());
            auto key_of = [&](const StoredTuple& t) {
                TripleKey k;
                k.q[0] = static_cast<std::int64_t>(std::floor(static_cast<double>(t.q4x) / window));
                k.q[1] = static_cast<std::int64_t>(std::floor(static_cast<double>(t.q4y) / window));
                k.q[2] = static_cast<std::int64_t>(std::floor(static_cast<double>(t.q22) / window));
                return k;
            };
            for (std::uint32_t i = 0; i < tuples.size(); ++i) buckets[key_of(tuples[i])].push_back(i);
            u128 local = 0;
            for (const auto& a : tuples) {
                TripleKey base = key_of(a);
                TripleKey nb = base;
                for (int d0 = -1; d0 <= 1; ++d0)
                    for (int d1 = -1; d1 <= 1; ++d1)
                        for (int d2 = -1; d2 <= 1; ++d2) {
                            nb.q[0] = base.q[0] + d0;
                            nb.q[1] = base.q[1] + d1;
                            nb.q[2] = base.q[2] + d2;
                            auto it = buckets.find(nb);
                            if (it == buckets.end()) continue;
                            for (std::uint32_t u : it->second) {
                                const auto& b = tuples[u];
                                if (std::abs(static_cast<double>(a.q4x - b.q4x)) <= window &&
                                    std::abs(static_cast<double>(a.q4y - b.q4y)) <= window &&
                                    std::abs(static_cast<double>(a.q22 - b.q22)) <= window)
                                    ++local;
                            }
                        }
            }
            tallies[gi] = local;
        });
        for (u128 t : tallies) count += t;
        gstart = gend;
    }

    auto t1 = std::chrono::steady_clock::now();
    CountRecord rec;
    rec.k = 2;
    rec.s = 4;
    rec.n = n;
    rec.method = Method::quartic;
    rec.count = count;
    rec.seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.threads = opts.threads;
    return rec;
}

}  // namespace pv
