#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pv/counting.hpp"
#include "pv/errors.hpp"
#include "pv/gauss_legendre.hpp"
#include "pv/oscillatory.hpp"
#include "pv/rng.hpp"

using namespace pv;

namespace {

std::vector<double> random_x(int n, double scale, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = scale * (2.0 * rng.unit() - 1.0);
    return x;
}

}  // namespace

TEST_CASE("gauss-legendre nodes and exactness") {
    GaussLegendre g2 = gauss_legendre(2);
    CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(g2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

    // order 8 integrates x^14 over [-1,1] exactly
    GaussLegendre g8 = gauss_legendre(8);
    double acc = 0;
    for (std::size_t i = 0; i < g8.nodes.size(); ++i) acc += g8.weights[i] * std::pow(g8.nodes[i], 14);
    CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("weyl sum examples") {
    MonomialSystem sys = build_system(2);
    const int n = 4;
    NodeSet nodes = NodeSet::midpoints(n);
    Rng rng(3);

    CoefficientGrid single = CoefficientGrid::single(n, 1, 1, cplx(1.0, 0.0));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x = random_x(sys.n, 50.0, rng);
        CHECK(std::abs(weyl_sum(sys, single, nodes, x)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    CoefficientGrid grid = CoefficientGrid::random_unimodular(n, 11);
    std::vector<double> zero(static_cast<std::size_t>(sys.n), 0.0);
    cplx at_zero = weyl_sum(sys, grid, nodes, zero);
    cplx coeff_sum(0, 0);
    for (const cplx& v : grid.a) coeff_sum += v;
    CHECK(std::abs(at_zero - coeff_sum) <= 1e-12);

    // real coefficients: conjugate symmetry under x -> -x
    CoefficientGrid real_grid = CoefficientGrid::ones(n);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x = random_x(sys.n, 10.0, rng);
        std::vector<double> nx(x.size());
        for (std::size_t c = 0; c < x.size(); ++c) nx[c] = -x[c];
        cplx a = weyl_sum(sys, real_grid, nodes, x);
        cplx b = weyl_sum(sys, real_grid, nodes, nx);
        CHECK(std::abs(a - std::conj(b)) <= 1e-9);
    }
}

TEST_CASE("weyl sum rejects nodes outside their windows") {
    MonomialSystem sys = build_system(2);
    NodeSet nodes = NodeSet::midpoints(4);
    nodes.u[2] = 0.9;  // slot 3 window is (0.5, 0.75]
    CoefficientGrid grid = CoefficientGrid::ones(4);
    std::vector<double> x(static_cast<std::size_t>(sys.n), 0.0);
    CHECK_THROWS_AS(weyl_sum(sys, grid, nodes, x), ValidationError);
}

TEST_CASE("k=3 weyl sum uses all nine phases") {
    MonomialSystem sys = build_system(3);
    NodeSet nodes = NodeSet::midpoints(2);
    CoefficientGrid grid = CoefficientGrid::ones(2);
    std::vector<double> x(9, 0.0);
    x[8] = 1.0;  // phase t s^2 only
    cplx v = weyl_sum(sys, grid, nodes, x);
    cplx want(0, 0);
    for (double u : nodes.u)
        for (double w : nodes.v) {
            double ph = 6.283185307179586 * (u * w * w);
            want += cplx(std::cos(ph), std::sin(ph));
        }
    CHECK(std::abs(v - want) <= 1e-12);
}

TEST_CASE("torus mean matches exact counts on the six-case bank") {
    struct Case {
        int s, k;
        std::int64_t n;
    };
    const Case bank[] = {{1, 2, 5}, {2, 2, 2}, {2, 2, 3}, {1, 3, 4}, {2, 3, 2}, {3, 2, 2}};
    for (const Case& c : bank) {
        CAPTURE(c.s);
        CAPTURE(c.k);
        CAPTURE(c.n);
        MonomialSystem sys = build_system(c.k);
        double exact = static_cast<double>(to_long_double(mitm_count(c.k, c.s, c.n).count));
        SamplePlan plan;
        plan.samples = 100000;
        plan.seed = 5;
        MeanReport rep = torus_mean_mc(sys, c.s, c.n, plan);
        CHECK(std::fabs(rep.estimate - exact) <= 3.0 * rep.stderr_mean);
    }
}

TEST_CASE("torus mean 3-sigma coverage over 100 seeded runs") {
    struct Case {
        int s, k;
        std::int64_t n;
    };
    const Case bank[] = {{1, 2, 5}, {2, 2, 2}, {2, 2, 3}, {1, 3, 4}, {2, 3, 2}, {3, 2, 2}};
    int total = 0, within = 0;
    for (const Case& c : bank) {
        MonomialSystem sys = build_system(c.k);
        double exact = static_cast<double>(to_long_double(mitm_count(c.k, c.s, c.n).count));
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            SamplePlan plan;
            plan.samples = 20000;
            plan.seed = seed;
            MeanReport rep = torus_mean_mc(sys, c.s, c.n, plan);
            ++total;
            if (std::fabs(rep.estimate - exact) <= 3.0 * rep.stderr_mean) ++within;
        }
    }
    CHECK(within * 100 >= total * 95);
}

TEST_CASE("single point torus mean is exact") {
    MonomialSystem sys = build_system(2);
    SamplePlan plan;
    plan.samples = 1000;
    for (int s : {1, 3, 6}) {
        MeanReport rep = torus_mean_mc(sys, s, 1, plan);
        CHECK(rep.estimate == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.stderr_mean <= 1e-12);
    }
}

TEST_CASE("torus mean is identical for any thread count") {
    MonomialSystem sys = build_system(2);
    SamplePlan one, four;
    one.samples = four.samples = 30000;
    one.seed = four.seed = 9;
    one.threads = 1;
    four.threads = 4;
    MeanReport a = torus_mean_mc(sys, 2, 3, one);
    MeanReport b = torus_mean_mc(sys, 2, 3, four);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_mean == b.stderr_mean);
}

TEST_CASE("restriction ratio: single coefficient gives 1") {
    MonomialSystem sys = build_system(2);
    const int n = 4;
    CoefficientGrid g = CoefficientGrid::single(n, 2, 3, cplx(0.7, -0.4));
    SamplePlan plan;
    plan.samples = 2000;
    RatioReport rep = restriction_ratio(sys, g, NodeSet::midpoints(n), 4.0, 256.0, plan);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("restriction ratio near 1 for a == 1 at p = 2, against the torus mean") {
    MonomialSystem sys = build_system(2);
    const int n = 4;
    CoefficientGrid g = CoefficientGrid::ones(n);
    SamplePlan plan;
    plan.samples = 60000;
    plan.seed = 2;
    RatioReport rep = restriction_ratio(sys, g, NodeSet::midpoints(n), 2.0, 300.0, plan);
    CHECK(rep.ratio > 0.8);
    CHECK(rep.ratio < 1.25);
    // numerator^2 estimates the L2 mass, which orthogonality puts near n^2
    SamplePlan tplan;
    tplan.samples = 60000;
    tplan.seed = 3;
    MeanReport tm = torus_mean_mc(sys, 1, n, tplan);
    CHECK(std::fabs(rep.numerator * rep.numerator - tm.estimate) / tm.estimate < 0.25);
}

TEST_CASE("restriction ratio invariances and trivial bound") {
    MonomialSystem sys = build_system(2);
    const int n = 3;
    SamplePlan plan;
    plan.samples = 4000;
    plan.seed = 17;
    CoefficientGrid g = CoefficientGrid::random_unimodular(n, 23);
    NodeSet nodes = NodeSet::midpoints(n);
    RatioReport base = restriction_ratio(sys, g, nodes, 3.0, 81.0, plan);

    CoefficientGrid rotated = g;
    cplx phase(std::cos(0.7), std::sin(0.7));
    for (auto& v : rotated.a) v *= phase;
    RatioReport rot = restriction_ratio(sys, rotated, nodes, 3.0, 81.0, plan);
    CHECK(rot.ratio == doctest::Approx(base.ratio).epsilon(1e-9));

    CoefficientGrid scaled = g;
    for (auto& v : scaled.a) v *= 2.0;
    RatioReport sc = restriction_ratio(sys, scaled, nodes, 3.0, 81.0, plan);
    CHECK(sc.ratio == doctest::Approx(base.ratio).epsilon(1e-9));

    CHECK(base.ratio <= g.norm_l1() / g.norm_lp(3.0) * (1.0 + 1e-9));
}

TEST_CASE("restriction ratio rejects small balls") {
    MonomialSystem sys = build_system(2);
    CoefficientGrid g = CoefficientGrid::ones(4);
    SamplePlan plan;
    CHECK_THROWS_AS(restriction_ratio(sys, g, NodeSet::midpoints(4), 2.0, 15.9, plan), ValidationError);
}

TEST_CASE("probe cell integrals agree with dense midpoint quadrature") {
    MonomialSystem sys = build_system(2);
    Rng rng(77);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> x = random_x(sys.n, 12.0, rng);
        cplx fast = extension_cell_integral(sys, 4, 1, 2, x);
        // 600x600 midpoint rule over the same cell
        const int m = 600;
        const double side = 0.25, t0 = 0.25, s0 = 0.5;
        cplx acc(0, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double t = t0 + side * (i + 0.5) / m;
                double s = s0 + side * (j + 0.5) / m;
                double ph = 6.283185307179586 *
                            (x[0] * t + x[1] * s + x[2] * t * t + x[3] * s * s + x[4] * t * s);
                acc += cplx(std::cos(ph), std::sin(ph));
            }
        acc *= side * side / (static_cast<double>(m) * static_cast<double>(m));
        // the midpoint rule itself carries ~1e-7 error at this resolution
        CHECK(std::abs(fast - acc) <= 1e-6);
    }
}

TEST_CASE("single-cell input gives probe ratio exactly 1") {
    MonomialSystem sys = build_system(2);
    CellFunction g = CellFunction::single_cell(4, 2, 1, cplx(0.3, 0.8));
    SamplePlan plan;
    plan.samples = 500;
    ProbeReport rep = decoupling_probe(sys, g, 16, 4.0, plan);
    CHECK(rep.ratio == 1.0);
}

TEST_CASE("random unimodular probe at p=2 sits near 1") {
    MonomialSystem sys = build_system(2);
    CellFunction g = CellFunction::random_unimodular(4, 5);
    SamplePlan plan;
    plan.samples = 4000;
    plan.seed = 8;
    ProbeReport rep = decoupling_probe(sys, g, 16, 2.0, plan);
    CHECK(rep.ratio > 0.5);
    CHECK(rep.ratio < 2.0);
}

TEST_CASE("probe respects the interpolation upper bound across a seeded bank") {
    // number of cells to the power (1 - 1/p), with slack 10
    for (int k : {2, 3}) {
        MonomialSystem sys = build_system(k);
        const std::int64_t n = k == 2 ? 16 : 8;
        const int cells = k == 2 ? 4 : 2;
        for (double p : {2.0, 4.0, 8.0}) {
            for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
                CellFunction g = CellFunction::random_unimodular(cells, seed);
                SamplePlan plan;
                plan.samples = 1500;
                plan.seed = seed;
                ProbeReport rep = decoupling_probe(sys, g, n, p, plan);
                double bound = std::pow(static_cast<double>(cells) * cells, 1.0 - 1.0 / p);
                CAPTURE(k);
                CAPTURE(p);
                CAPTURE(seed);
                CHECK(rep.ratio <= 10.0 * bound);
            }
        }
    }
}

TEST_CASE("modulating the input equals translating the ball") {
    MonomialSystem sys = build_system(2);
    CellFunction g = CellFunction::random_unimodular(4, 9);
    SamplePlan plan;
    plan.samples = 2000;
    plan.seed = 4;
    ProbeOptions modulated;
    modulated.modulation_u = 3.25;
    modulated.modulation_v = -1.5;
    ProbeOptions recentered;
    recentered.center.assign(static_cast<std::size_t>(sys.n), 0.0);
    recentered.center[0] = 3.25;
    recentered.center[1] = -1.5;
    ProbeReport a = decoupling_probe(sys, g, 16, 4.0, plan, modulated);
    ProbeReport b = decoupling_probe(sys, g, 16, 4.0, plan, recentered);
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-12));
}

TEST_CASE("probe validation and quadrature refusal") {
    MonomialSystem sys = build_system(2);
    CellFunction g = CellFunction::random_unimodular(4, 1);
    SamplePlan plan;
    plan.samples = 100;
    CHECK_THROWS_AS(decoupling_probe(sys, g, 17, 2.0, plan), ValidationError);  // 17 is not 4^2
    ProbeOptions starved;
    starved.max_panels_per_axis = 1;
    starved.center.assign(static_cast<std::size_t>(sys.n), 0.0);
    starved.center[0] = 5000.0;
    CHECK_THROWS_AS(decoupling_probe(sys, g, 16, 2.0, plan, starved), BudgetError);
}

TEST_CASE("probe ascent improves or matches the random start") {
    MonomialSystem sys = build_system(2);
    SamplePlan plan;
    plan.samples = 400;
    plan.seed = 6;
    AscentReport rep = probe_maximize(sys, 4, 4.0, plan, 2, 1);
    CHECK(rep.best.ratio > 0.0);
    CellFunction g0 = CellFunction::random_unimodular(2, plan.seed ^ 0x85ebca6bULL);
    ProbeReport base = decoupling_probe(sys, g0, 4, 4.0, plan);
    CHECK(rep.best.ratio >= base.ratio - 1e-12);
}

TEST_CASE("sample plans declare their domain") {
    MonomialSystem sys = build_system(2);
    SamplePlan wrong;
    wrong.samples = 100;
    wrong.domain = SampleDomain::ball;
    CHECK_THROWS_AS(torus_mean_mc(sys, 1, 2, wrong), ValidationError);
    SamplePlan torus_plan;
    torus_plan.samples = 100;
    torus_plan.domain = SampleDomain::torus;
    CHECK_NOTHROW(torus_mean_mc(sys, 1, 2, torus_plan));
    CHECK_THROWS_AS(
        restriction_ratio(sys, CoefficientGrid::ones(2), NodeSet::midpoints(2), 2.0, 4.0, torus_plan),
        ValidationError);
    CHECK_THROWS_AS(decoupling_probe(sys, CellFunction::random_unimodular(2, 1), 4, 2.0, torus_plan),
                    ValidationError);
}

TEST_CASE("k=3 restriction ratio: single coefficient gives 1") {
    MonomialSystem sys = build_system(3);
    CoefficientGrid g = CoefficientGrid::single(3, 1, 2, cplx(0.0, 1.5));
    SamplePlan plan;
    plan.samples = 500;
    RatioReport rep = restriction_ratio(sys, g, NodeSet::midpoints(3), 2.0, 9.0, plan);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
}
