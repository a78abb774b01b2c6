#include "pv/relaxed.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "pv/errors.hpp"
#include "pv/rng.hpp"

namespace pv {

namespace {

constexpr double kSiteGrid = 4096.0;  // 12 fractional bits

void validate_sites(const std::vector<double>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        double lo = static_cast<double>(i);
        if (!(s[i] > lo && s[i] <= lo + 1.0)) throw ValidationError("site outside its unit window");
    }
}

}  // namespace

RelaxedSites::RelaxedSites(std::vector<double> x, std::vector<double> y) : sx(std::move(x)), sy(std::move(y)) {
    if (sx.size() != sy.size() || sx.empty()) throw ValidationError("site lists must be nonempty and equal length");
    if (sx.size() > 256) throw ValidationError("relaxed counting supports at most 256 sites");
    validate_sites(sx);
    validate_sites(sy);
}

RelaxedSites RelaxedSites::integer_sites(std::int64_t n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
    return RelaxedSites(v, v);
}

RelaxedSites RelaxedSites::sample(std::int64_t n, std::uint64_t seed) {
    Rng rx = Rng::stream(seed, 0);
    Rng ry = Rng::stream(seed, 1);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<double>(i) + static_cast<double>(rx.below(4096) + 1) / kSiteGrid;
        y[static_cast<std::size_t>(i)] = static_cast<double>(i) + static_cast<double>(ry.below(4096) + 1) / kSiteGrid;
    }
    return RelaxedSites(std::move(x), std::move(y));
}

namespace {

struct BucketKey {
    std::array<std::int64_t, 5> q;
    bool operator==(const BucketKey&) const = default;
};

struct BucketKeyHash {
    std::size_t operator()(const BucketKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int64_t v : k.q) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

CountRecord relaxed_count(int s, const RelaxedSites& sites, const RelaxedOptions& opts) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    if (s > 16) throw ValidationError("relaxed counting supports s <= 16");
    const std::int64_t n = sites.n();
    auto t0 = std::chrono::steady_clock::now();

    double half_tuples = std::pow(static_cast<double>(n) * static_cast<double>(n), static_cast<double>(s));
    if (half_tuples > opts.max_half_tuples)
        throw BudgetError("memory budget exceeded; " + std::to_string(half_tuples) + " half-tuples");

    const std::size_t npairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    const std::size_t ntuples = static_cast<std::size_t>(half_tuples);

    const double wlin = 1.0 / static_cast<double>(n);
    const std::array<double, 5> width = {wlin, wlin, 1.0, 1.0, 1.0};

    // 5 window sums for every half-tuple, odometer order over s point slots
    std::vector<std::array<double, 5>> sums(ntuples);
    {
        std::vector<std::size_t> pick(static_cast<std::size_t>(s), 0);
        std::vector<std::array<double, 5>> partial(static_cast<std::size_t>(s + 1));
        partial[0] = {0, 0, 0, 0, 0};
        std::size_t depth = 0;
        std::size_t out = 0;
        for (;;) {
            while (depth < static_cast<std::size_t>(s)) {
                std::size_t p = pick[depth];
                double x = sites.sx[p / static_cast<std::size_t>(n)];
                double y = sites.sy[p % static_cast<std::size_t>(n)];
                auto& nx = partial[depth + 1];
                const auto& pr = partial[depth];
                nx[0] = pr[0] + x;
                nx[1] = pr[1] + y;
                nx[2] = pr[2] + x * x;
                nx[3] = pr[3] + y * y;
                nx[4] = pr[4] + x * y;
                ++depth;
            }
            sums[out++] = partial[static_cast<std::size_t>(s)];
            std::size_t d = static_cast<std::size_t>(s);
            while (d > 0) {
                if (++pick[d - 1] < npairs) break;
                pick[d - 1] = 0;
                --d;
            }
            if (d == 0) break;
            depth = d - 1;  // recompute partial sums from the advanced slot
        }
    }

    std::unordered_map<BucketKey, std::vector<std::uint32_t>, BucketKeyHash> buckets;
    buckets.reserve(ntuples);
    auto bucket_of = [&](const std::array<double, 5>& v) {
        BucketKey k;
        for (int c = 0; c < 5; ++c) k.q[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::floor(v[static_cast<std::size_t>(c)] / width[static_cast<std::size_t>(c)]));
        return k;
    };
    for (std::uint32_t t = 0; t < ntuples; ++t) buckets[bucket_of(sums[t])].push_back(t);

    // ordered pairs; scanning all tuples against neighbor buckets counts both
    // orders, and the diagonal pair (t, t) always matches
    const std::size_t chunk = 4096;
    const std::size_t nchunks = (ntuples + chunk - 1) / chunk;
    std::vector<u128> tallies(nchunks, 0);
    parallel_chunks(nchunks, opts.threads, [&](std::size_t ci) {
        u128 local = 0;
        std::size_t lo = ci * chunk;
        std::size_t hi = std::min(ntuples, lo + chunk);
        for (std::size_t t = lo; t < hi; ++t) {
            const auto& a = sums[t];
            BucketKey base = bucket_of(a);
            BucketKey nb = base;
            for (int d0 = -1; d0 <= 1; ++d0)
                for (int d1 = -1; d1 <= 1; ++d1)
                    for (int d2 = -1; d2 <= 1; ++d2)
                        for (int d3 = -1; d3 <= 1; ++d3)
                            for (int d4 = -1; d4 <= 1; ++d4) {
                                nb.q[0] = base.q[0] + d0;
                                nb.q[1] = base.q[1] + d1;
                                nb.q[2] = base.q[2] + d2;
                                nb.q[3] = base.q[3] + d3;
                                nb.q[4] = base.q[4] + d4;
                                auto it = buckets.find(nb);
                                if (it == buckets.end()) continue;
                                for (std::uint32_t u : it->second) {
                                    const auto& b = sums[u];
                                    bool ok = true;
                                    for (int c = 0; c < 5 && ok; ++c)
                                        ok = std::fabs(a[static_cast<std::size_t>(c)] - b[static_cast<std::size_t>(c)]) <=
                                             width[static_cast<std::size_t>(c)];
                                    if (ok) ++local;
                                }
                            }
        }
        tallies[ci] = local;
    });

    u128 count = 0;
    for (u128 t : tallies) count += t;
    auto t1 = std::chrono::steady_clock::now();

    CountRecord rec;
    rec.k = 2;
    rec.s = s;
    rec.n = n;
    rec.method = Method::relaxed;
    rec.count = count;
    rec.seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.threads = opts.threads;
    return rec;
}

}  // namespace pv
