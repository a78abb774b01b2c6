#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "pv/errors.hpp"
#include "pv/nu.hpp"
#include "pv/zeroset.hpp"

using namespace pv;

namespace {

BivariatePolynomial poly(int degree, std::vector<std::tuple<int, int, double>> terms) {
    BivariatePolynomial q(degree);
    for (auto [a, b, v] : terms) q.at(a, b) = v;
    q.refresh_norm();
    return q;
}

// squares within 10/K of a sampled curve, a lower bound on the true band
std::uint64_t band_oracle(const std::function<std::pair<double, double>(double)>& curve, int K, int samples) {
    std::set<std::pair<int, int>> marked;
    const double reach = 10.0 / K;
    for (int i = 0; i <= samples; ++i) {
        auto [x, y] = curve(static_cast<double>(i) / samples);
        if (x < 0 || x > 1 || y < 0 || y > 1) continue;
        int a_lo = std::max(0, static_cast<int>(std::floor((x - reach) * K)) - 1);
        int a_hi = std::min(K - 1, static_cast<int>(std::floor((x + reach) * K)) + 1);
        int b_lo = std::max(0, static_cast<int>(std::floor((y - reach) * K)) - 1);
        int b_hi = std::min(K - 1, static_cast<int>(std::floor((y + reach) * K)) + 1);
        for (int a = a_lo; a <= a_hi; ++a)
            for (int b = b_lo; b <= b_hi; ++b) {
                double dx = std::max({a / static_cast<double>(K) - x, x - (a + 1) / static_cast<double>(K), 0.0});
                double dy = std::max({b / static_cast<double>(K) - y, y - (b + 1) / static_cast<double>(K), 0.0});
                if (std::hypot(dx, dy) <= reach) marked.insert({a, b});
            }
    }
    return marked.size();
}

}  // namespace

TEST_CASE("norm bookkeeping") {
    BivariatePolynomial q = poly(2, {{2, 0, 1.0}, {0, 1, -1.0}});
    CHECK(std::fabs(q.norm - q.computed_norm()) <= 1e-12);
    CHECK(q.computed_norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("constant polynomial has no zero squares") {
    BivariatePolynomial one = poly(0, {{0, 0, 1.0}});
    for (int k : {8, 16, 32, 64}) CHECK(zero_set_square_count(one, k) == 0);
}

TEST_CASE("zero polynomial and bad square counts are rejected") {
    BivariatePolynomial z(2);
    z.refresh_norm();
    CHECK_THROWS_AS(zero_set_square_count(z, 8), ValidationError);
    BivariatePolynomial one = poly(0, {{0, 0, 1.0}});
    CHECK_THROWS_AS(zero_set_square_count(one, 12), ValidationError);
}

TEST_CASE("band counts stay linear in K and dominate the curve oracle") {
    struct Case {
        BivariatePolynomial q;
        std::function<std::pair<double, double>(double)> curve;
    };
    std::vector<Case> cases;
    cases.push_back({poly(1, {{1, 0, 1.0}, {0, 1, -1.0}}), [](double u) { return std::make_pair(u, u); }});
    cases.push_back({poly(1, {{1, 0, 1.0}, {0, 0, -0.5}}), [](double u) { return std::make_pair(0.5, u); }});
    cases.push_back({poly(2, {{2, 0, 1.0}, {0, 1, -1.0}}), [](double u) { return std::make_pair(u, u * u); }});
    cases.push_back({poly(2, {{1, 1, 1.0}, {0, 0, -0.25}}),
                     [](double u) { return std::make_pair(0.25 + 0.75 * u, 0.25 / (0.25 + 0.75 * u)); }});

    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        for (int K : {8, 16, 32, 64}) {
            CAPTURE(ci);
            CAPTURE(K);
            std::uint64_t got = zero_set_square_count(cases[ci].q, K);
            std::uint64_t oracle = band_oracle(cases[ci].curve, K, 40000);
            CHECK(got >= oracle);  // never undercounts
            CHECK(got <= static_cast<std::uint64_t>(40 * K));
        }
    }
}

TEST_CASE("vertical band at K=16 lands in the expected range") {
    BivariatePolynomial q = poly(1, {{1, 0, 1.0}, {0, 0, -0.5}});
    std::uint64_t c = zero_set_square_count(q, 16);
    CHECK(c >= 16);
    CHECK(c <= 25 * 16);
}

TEST_CASE("certified single-polynomial brackets shrink under grid refinement") {
    // squares sharing the corner (1/2, 1/2); witness vanishing there
    std::vector<Square> squares = {{0.25, 0.25, 0.25}, {0.5, 0.5, 0.25}, {0.25, 0.5, 0.25}};
    BivariatePolynomial witness = poly(1, {{1, 0, 1.0 / std::sqrt(2.0)}, {0, 0, -0.5 / std::sqrt(2.0)}});
    double prev = 1e9;
    for (int grid : {4, 16, 64, 256}) {
        NuValue v = nu_value(squares, witness, grid);
        CHECK(v.upper <= prev);
        CHECK(v.lower <= v.upper);
        prev = v.upper;
    }
    CHECK(nu_value(squares, witness, 256).upper <= 0.005);
}

TEST_CASE("degree zero forces estimate 1") {
    MonomialSystem sys = build_system(2);
    std::vector<Square> squares = {{0.0, 0.0, 0.25}, {0.5, 0.5, 0.25}, {0.75, 0.25, 0.25}};
    NuOptions o;
    o.degree_override = 0;
    NuReport rep = nu_estimate(sys, squares, 10, 8, 4, 1, o);
    CHECK(rep.upper_bound == doctest::Approx(1.0));
    CHECK(rep.lower_at_best == doctest::Approx(1.0));
}

TEST_CASE("shared-corner squares drive the estimate toward zero") {
    MonomialSystem sys = build_system(2);
    std::vector<Square> squares = {{0.25, 0.25, 0.25}, {0.5, 0.5, 0.25}, {0.25, 0.5, 0.25}};
    NuReport coarse = nu_estimate(sys, squares, 10, 8, 24, 7);
    NuReport fine = nu_estimate(sys, squares, 10, 48, 24, 7);
    CHECK(coarse.upper_bound < 0.05);
    CHECK(fine.upper_bound < 0.05);
}

TEST_CASE("estimates decrease monotonically with more restarts") {
    MonomialSystem sys = build_system(2);
    // three disjoint dyadic squares of side 1/8
    std::vector<Square> squares = {{0.0, 0.0, 0.125}, {0.5, 0.25, 0.125}, {0.25, 0.75, 0.125}};
    double prev = 1e300;
    for (int restarts : {2, 8, 32}) {
        NuReport rep = nu_estimate(sys, squares, 10, 16, restarts, 7);
        CHECK(rep.upper_bound <= prev);
        CHECK(rep.upper_bound >= rep.lower_at_best);
        CHECK(rep.upper_bound >= 0.0);
        prev = rep.upper_bound;
    }
}

TEST_CASE("nu estimate input validation") {
    MonomialSystem sys = build_system(2);
    std::vector<Square> squares = {{0.0, 0.0, 0.0}, {0.5, 0.25, 0.125}, {0.25, 0.75, 0.125}};
    CHECK_THROWS_AS(nu_estimate(sys, squares, 10, 16, 4, 1), ValidationError);  // degenerate square
    std::vector<Square> wrong_count = {{0.0, 0.0, 0.125}, {0.5, 0.25, 0.125}};
    CHECK_THROWS_AS(nu_estimate(sys, wrong_count, 10, 16, 4, 1), ValidationError);
    std::vector<Square> outside = {{0.95, 0.0, 0.125}, {0.5, 0.25, 0.125}, {0.25, 0.75, 0.125}};
    CHECK_THROWS_AS(nu_estimate(sys, outside, 10, 16, 4, 1), ValidationError);
    std::vector<Square> ok = {{0.0, 0.0, 0.125}, {0.5, 0.25, 0.125}, {0.25, 0.75, 0.125}};
    CHECK_THROWS_AS(nu_estimate(sys, ok, 3, 16, 4, 1), ValidationError);  // m below ambient dimension
}

TEST_CASE("nu estimate is deterministic across thread counts") {
    MonomialSystem sys = build_system(2);
    std::vector<Square> squares = {{0.0, 0.0, 0.125}, {0.5, 0.25, 0.125}, {0.25, 0.75, 0.125}};
    NuOptions one, four;
    one.threads = 1;
    four.threads = 4;
    NuReport a = nu_estimate(sys, squares, 10, 16, 8, 3, one);
    NuReport b = nu_estimate(sys, squares, 10, 16, 8, 3, four);
    CHECK(a.upper_bound == b.upper_bound);
}
