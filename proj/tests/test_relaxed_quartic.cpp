#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "pv/errors.hpp"
#include "pv/quartic.hpp"
#include "pv/relaxed.hpp"

using namespace pv;

namespace {

// Direct O(((n^2)^s)^2) double loop over the inequality system; independent
// of the bucketed join path.
std::uint64_t relaxed_oracle(int s, const RelaxedSites& sites) {
    const std::int64_t n = sites.n();
    const std::size_t npairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::size_t ntuples = 1;
    for (int i = 0; i < s; ++i) ntuples *= npairs;
    std::vector<std::array<double, 5>> sums(ntuples);
    for (std::size_t t = 0; t < ntuples; ++t) {
        std::array<double, 5> a = {0, 0, 0, 0, 0};
        std::size_t rem = t;
        for (int f = 0; f < s; ++f) {
            std::size_t p = rem % npairs;
            rem /= npairs;
            double x = sites.sx[p / static_cast<std::size_t>(n)];
            double y = sites.sy[p % static_cast<std::size_t>(n)];
            a[0] += x;
            a[1] += y;
            a[2] += x * x;
            a[3] += y * y;
            a[4] += x * y;
        }
        sums[t] = a;
    }
    const double w = 1.0 / static_cast<double>(n);
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < ntuples; ++i)
        for (std::size_t j = 0; j < ntuples; ++j) {
            const auto& a = sums[i];
            const auto& b = sums[j];
            if (std::fabs(a[0] - b[0]) <= w && std::fabs(a[1] - b[1]) <= w && std::fabs(a[2] - b[2]) <= 1.0 &&
                std::fabs(a[3] - b[3]) <= 1.0 && std::fabs(a[4] - b[4]) <= 1.0)
                ++c;
        }
    return c;
}

std::uint64_t quartic_oracle(std::int64_t n, double c) {
    std::vector<std::array<long long, 5>> pts;
    for (long long x = n; x <= 2 * n; ++x)
        for (long long y = n; y <= 2 * n; ++y)
            pts.push_back({x, y, x * x * x * x, y * y * y * y, x * x * y * y});
    const std::size_t m = pts.size();
    std::vector<std::array<long long, 5>> half;
    half.reserve(m * m * m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t e = 0; e < m; ++e)
                for (std::size_t d = 0; d < m; ++d) {
                    std::array<long long, 5> s{};
                    for (int i = 0; i < 5; ++i) s[i] = pts[a][i] + pts[b][i] + pts[e][i] + pts[d][i];
                    half.push_back(s);
                }
    const double w = c * static_cast<double>(n) * static_cast<double>(n);
    std::uint64_t cnt = 0;
    for (std::size_t i = 0; i < half.size(); ++i)
        for (std::size_t j = 0; j < half.size(); ++j) {
            const auto& a = half[i];
            const auto& b = half[j];
            if (a[0] == b[0] && a[1] == b[1] && std::llabs(a[2] - b[2]) <= w && std::llabs(a[3] - b[3]) <= w &&
                std::llabs(a[4] - b[4]) <= w)
                ++cnt;
        }
    return cnt;
}

}  // namespace

TEST_CASE("site validation") {
    CHECK_THROWS_AS(RelaxedSites({0.5, 1.0}, {0.5, 2.5}), ValidationError);  // 2.5 outside (1,2]
    CHECK_THROWS_AS(RelaxedSites({0.0}, {0.5}), ValidationError);            // left endpoint open
    RelaxedSites ok({1.0, 1.5}, {0.25, 2.0});
    CHECK(ok.n() == 2);
}

TEST_CASE("sampled sites are dyadic and inside their windows") {
    RelaxedSites sites = RelaxedSites::sample(32, 9);
    for (std::size_t i = 0; i < sites.sx.size(); ++i) {
        CHECK(sites.sx[i] > static_cast<double>(i));
        CHECK(sites.sx[i] <= static_cast<double>(i + 1));
        CHECK(sites.sx[i] * 4096.0 == std::floor(sites.sx[i] * 4096.0));
    }
}

TEST_CASE("integer sites, s=1: windows force equality") {
    for (std::int64_t n : {2, 5, 12}) {
        RelaxedSites sites = RelaxedSites::integer_sites(n);
        CHECK(relaxed_count(1, sites).count == static_cast<u128>(n * n));
        if (n <= 5) CHECK(relaxed_oracle(1, sites) == static_cast<std::uint64_t>(n * n));
    }
}

TEST_CASE("relaxed count dominates the exact-equality count") {
    RelaxedSites sites = RelaxedSites::sample(5, 3);
    // exactly equal pairs: each half-tuple matches at least itself
    const std::size_t ntuples = 5 * 5 * 5 * 5;  // s=2
    u128 relaxed = relaxed_count(2, sites).count;
    CHECK(relaxed >= static_cast<u128>(ntuples));
}

TEST_CASE("relaxed count equals the direct oracle (seed 7, s=2, n=6)") {
    RelaxedSites sites = RelaxedSites::sample(6, 7);
    CHECK(relaxed_count(2, sites).count == static_cast<u128>(relaxed_oracle(2, sites)));
}

TEST_CASE("relaxed count matches the frozen oracle value (seed 42, s=2, n=10)") {
    // frozen from the O(n^{4s}) double-loop oracle above
    RelaxedSites sites = RelaxedSites::sample(10, 42);
    CHECK(relaxed_count(2, sites).count == static_cast<u128>(20628));
}

TEST_CASE("relaxed budget guard") {
    RelaxedSites sites = RelaxedSites::sample(10, 1);
    RelaxedOptions tiny;
    tiny.max_half_tuples = 100;
    CHECK_THROWS_AS(relaxed_count(3, sites, tiny), BudgetError);
}

TEST_CASE("relaxed count is thread-count independent") {
    RelaxedSites sites = RelaxedSites::sample(8, 11);
    RelaxedOptions a, b;
    a.threads = 1;
    b.threads = 4;
    CHECK(relaxed_count(2, sites, a).count == relaxed_count(2, sites, b).count);
}

TEST_CASE("quartic count equals the direct oracle at n=2") {
    CHECK(quartic_count(2, 1.0).count == static_cast<u128>(quartic_oracle(2, 1.0)));
}

TEST_CASE("quartic frozen oracle values") {
    CHECK(quartic_count(2, 1.0).count == static_cast<u128>(118233));
    CHECK(quartic_count(3, 1.0).count == static_cast<u128>(1402096));
    CHECK(quartic_count(3, 0.5).count == static_cast<u128>(1396336));
}

TEST_CASE("quartic count dominates the permutation lower bound") {
    for (std::int64_t n : {2, 3}) {
        u128 points = static_cast<u128>((n + 1) * (n + 1));
        u128 bound = 24;  // 4!
        for (int i = 0; i < 4; ++i) bound *= points - static_cast<u128>(i);
        CHECK(quartic_count(n, 1.0).count >= bound);
    }
}

TEST_CASE("quartic count is invariant under swapping the coordinate roles") {
    for (std::int64_t n : {2, 3}) {
        QuarticOptions swapped;
        swapped.swap_xy = true;
        CHECK(quartic_count(n, 1.0, swapped).count == quartic_count(n, 1.0).count);
    }
}

TEST_CASE("quartic batching does not change the count") {
    QuarticOptions tiny_batches;
    tiny_batches.batch_entries = 64;
    CHECK(quartic_count(2, 1.0, tiny_batches).count == quartic_count(2, 1.0).count);
}

TEST_CASE("quartic guards") {
    CHECK_THROWS_AS(quartic_count(13, 1.0), BudgetError);
    CHECK_THROWS_AS(quartic_count(2, 0.0), ValidationError);
}

TEST_CASE("quartic count is thread-count independent") {
    QuarticOptions one, four;
    one.threads = 1;
    four.threads = 4;
    CHECK(quartic_count(3, 1.0, one).count == quartic_count(3, 1.0, four).count);
}
