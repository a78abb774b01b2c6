#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pv/errors.hpp"
#include "pv/qpoly.hpp"
#include "pv/rng.hpp"
#include "pv/transversality.hpp"

using namespace pv;

namespace {

std::vector<Rational> runit(int n, int idx) {
    std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
    v[static_cast<std::size_t>(idx)] = Rational(1);
    return v;
}

std::vector<Rational> random_rational_vec(int n, Rng& rng) {
    std::vector<Rational> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = Rational(static_cast<i128>(rng.below(21)) - 10, static_cast<i128>(rng.below(4)) + 1);
    return v;
}

// exact tangent rows at a rational point, by the same derivative formulas
std::vector<Rational> rational_n1(const MonomialSystem& sys, const Rational& t, const Rational& s) {
    std::vector<Rational> v(static_cast<std::size_t>(sys.n), Rational(0));
    for (int c = 0; c < sys.n; ++c) {
        const Monomial& m = sys.at(c);
        if (m.i < 1) continue;
        Rational r(m.i);
        for (int p = 0; p < m.i - 1; ++p) r *= t;
        for (int p = 0; p < m.j; ++p) r *= s;
        v[static_cast<std::size_t>(c)] = r;
    }
    return v;
}

std::vector<Rational> rational_n2(const MonomialSystem& sys, const Rational& t, const Rational& s) {
    std::vector<Rational> v(static_cast<std::size_t>(sys.n), Rational(0));
    for (int c = 0; c < sys.n; ++c) {
        const Monomial& m = sys.at(c);
        if (m.j < 1) continue;
        Rational r(m.j);
        for (int p = 0; p < m.i; ++p) r *= t;
        for (int p = 0; p < m.j - 1; ++p) r *= s;
        v[static_cast<std::size_t>(c)] = r;
    }
    return v;
}

// rank by brute-force largest nonvanishing minor; independent of elimination
std::size_t minor_rank(const Mat<Rational>& m) {
    std::size_t best = 0;
    std::size_t maxr = std::min(m.rows, m.cols);
    std::vector<std::size_t> rows_sel, cols_sel;
    // enumerate all square submatrices up to size maxr
    for (std::size_t size = 1; size <= maxr; ++size) {
        std::vector<std::size_t> ri(size), ci(size);
        // enumerate row combinations
        std::vector<std::size_t> rcomb(size);
        for (std::size_t i = 0; i < size; ++i) rcomb[i] = i;
        bool more_rows = true;
        while (more_rows) {
            std::vector<std::size_t> ccomb(size);
            for (std::size_t i = 0; i < size; ++i) ccomb[i] = i;
            bool more_cols = true;
            while (more_cols) {
                // determinant by expansion via rational elimination
                Mat<Rational> sub(size, size);
                for (std::size_t i = 0; i < size; ++i)
                    for (std::size_t j = 0; j < size; ++j) sub(i, j) = m(rcomb[i], ccomb[j]);
                if (rank_rational(sub) == size) best = std::max(best, size);
                // next column combination
                std::size_t p = size;
                while (p > 0 && ccomb[p - 1] == m.cols - size + p - 1) --p;
                if (p == 0)
                    more_cols = false;
                else {
                    ++ccomb[p - 1];
                    for (std::size_t q = p; q < size; ++q) ccomb[q] = ccomb[q - 1] + 1;
                }
            }
            std::size_t p = size;
            while (p > 0 && rcomb[p - 1] == m.rows - size + p - 1) --p;
            if (p == 0)
                more_rows = false;
            else {
                ++rcomb[p - 1];
                for (std::size_t q = p; q < size; ++q) rcomb[q] = rcomb[q - 1] + 1;
            }
        }
        if (best < size) break;  // no nonvanishing minor of this size, stop
    }
    return best;
}

}  // namespace

TEST_CASE("rational arithmetic detects overflow instead of wrapping") {
    Rational huge(static_cast<i128>(1) << 100);
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational(-4, -6) == Rational(2, 3));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("tangent frames at sample points") {
    MonomialSystem s2 = build_system(2);
    TangentFrame f0 = tangent_frame(s2, 0.0, 0.0);
    CHECK(f0.n1 == std::vector<double>{1, 0, 0, 0, 0});
    CHECK(f0.n2 == std::vector<double>{0, 1, 0, 0, 0});

    TangentFrame f1 = tangent_frame(s2, 1.0, 1.0);
    CHECK(f1.n1 == std::vector<double>{1, 0, 2, 0, 1});
    CHECK(f1.n2 == std::vector<double>{0, 1, 0, 2, 1});

    MonomialSystem s3 = build_system(3);
    TangentFrame f3 = tangent_frame(s3, 1.0, 0.0);
    CHECK(f3.n1 == std::vector<double>{1, 0, 2, 0, 0, 3, 0, 0, 0});
    CHECK(f3.n2 == std::vector<double>{0, 1, 0, 0, 1, 0, 0, 1, 0});

    CHECK_THROWS_AS(tangent_frame(s2, 1.5, 0.0), ValidationError);
}

TEST_CASE("q polynomial worked examples") {
    MonomialSystem s2 = build_system(2);
    RationalPoly q12 = q_polynomial<Rational>(s2, runit(5, 0), runit(5, 1));
    CHECK(q12.at(0, 0) == Rational(1));
    CHECK(q12.actual_degree() == 0);

    RationalPoly q35 = q_polynomial<Rational>(s2, runit(5, 2), runit(5, 4));
    CHECK(q35.at(2, 0) == Rational(2));
    CHECK(q35.actual_degree() == 2);
    int nonzero = 0;
    for (const auto& c : q35.coeff)
        if (!c.is_zero()) ++nonzero;
    CHECK(nonzero == 1);

    Rng rng(5);
    std::vector<Rational> v = random_rational_vec(5, rng);
    RationalPoly qvv = q_polynomial<Rational>(s2, v, v);
    CHECK(qvv.is_zero());
}

TEST_CASE("q polynomial is antisymmetric, bilinear, and degree bounded") {
    for (int k : {2, 3}) {
        MonomialSystem sys = build_system(k);
        Rng rng(k == 2 ? 17 : 23);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<Rational> u = random_rational_vec(sys.n, rng);
            std::vector<Rational> v = random_rational_vec(sys.n, rng);
            std::vector<Rational> w = random_rational_vec(sys.n, rng);
            Rational alpha(static_cast<i128>(rng.below(9)) - 4, 1 + static_cast<i128>(rng.below(3)));
            Rational beta(static_cast<i128>(rng.below(9)) - 4, 1 + static_cast<i128>(rng.below(3)));

            RationalPoly qvw = q_polynomial<Rational>(sys, v, w);
            RationalPoly qwv = q_polynomial<Rational>(sys, w, v);
            CHECK(qvw.actual_degree() <= 2 * k - 2);
            for (std::size_t i = 0; i < qvw.coeff.size(); ++i) CHECK(qvw.coeff[i] == -qwv.coeff[i]);

            std::vector<Rational> comb(static_cast<std::size_t>(sys.n));
            for (std::size_t c = 0; c < comb.size(); ++c) comb[c] = alpha * u[c] + beta * v[c];
            RationalPoly lhs = q_polynomial<Rational>(sys, comb, w);
            RationalPoly quw = q_polynomial<Rational>(sys, u, w);
            for (std::size_t i = 0; i < lhs.coeff.size(); ++i)
                CHECK(lhs.coeff[i] == alpha * quw.coeff[i] + beta * qvw.coeff[i]);
        }
    }
}

TEST_CASE("order <= 1 coefficients reproduce the displayed bilinear relations") {
    MonomialSystem s2 = build_system(2);
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> v = random_rational_vec(5, rng);
        std::vector<Rational> w = random_rational_vec(5, rng);
        RationalPoly q = q_polynomial<Rational>(s2, v, w);
        CHECK(q.at(0, 0) == v[0] * w[1] - v[1] * w[0]);
        CHECK(q.at(1, 0) == v[0] * w[4] - v[4] * w[0] + Rational(2) * v[2] * w[1] - Rational(2) * v[1] * w[2]);
        CHECK(q.at(0, 1) == v[4] * w[1] - v[1] * w[4] + Rational(2) * v[0] * w[3] - Rational(2) * v[3] * w[0]);
    }
}

TEST_CASE("kernel verification for k=2 and k=3") {
    for (int k : {2, 3}) {
        KernelReport rep = verify_operator_kernels(k);
        CAPTURE(k);
        CHECK(rep.passed);
        CHECK(rep.rank == static_cast<std::size_t>(rep.n - 1));
        CHECK(rep.operator_matches_sum_of_constraints);
        CHECK(rep.constraints_match_q_coefficients);
        CHECK(rep.kernel_matches);
        REQUIRE(rep.kernel_basis.size() == static_cast<std::size_t>(rep.n));
    }
    CHECK_THROWS_AS(verify_operator_kernels(4), ValidationError);
}

TEST_CASE("dimension condition: full space and trivial space") {
    const int n = 5;
    Rng rng(7);
    std::vector<SubspaceBasis> planes;
    for (int j = 0; j < 3; ++j) {
        Mat<Rational> p(2, n);
        do {
            for (auto& x : p.a) x = Rational(static_cast<i128>(rng.below(11)) - 5);
        } while (rank_rational(p) != 2);
        planes.emplace_back(p);
    }

    Mat<Rational> full(n, n);
    for (int i = 0; i < n; ++i) full(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = Rational(1);
    BlReport rep = bl_dimension_check(planes, SubspaceBasis(full), n);
    CHECK(rep.holds);
    CHECK(rep.lhs == doctest::Approx(5.0));
    CHECK(rep.rhs == doctest::Approx(5.0));  // all projections have rank 2

    Mat<Rational> trivial(0, n);
    BlReport rep0 = bl_dimension_check(planes, SubspaceBasis(trivial), n);
    CHECK(rep0.holds);
    CHECK(rep0.lhs == doctest::Approx(0.0));
    CHECK(rep0.rhs == doctest::Approx(0.0));
}

TEST_CASE("dimension condition agrees with a brute-force minor-rank oracle") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(7));   // up to 9
        const int m = 1 + static_cast<int>(rng.below(6));   // up to 6
        const int dim = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        std::vector<SubspaceBasis> planes;
        for (int j = 0; j < m; ++j) {
            Mat<Rational> p(2, static_cast<std::size_t>(n));
            do {
                for (auto& x : p.a) x = Rational(static_cast<i128>(rng.below(7)) - 3);
            } while (rank_rational(p) != 2);
            planes.emplace_back(p);
        }
        Mat<Rational> v(static_cast<std::size_t>(dim), static_cast<std::size_t>(n));
        do {
            for (auto& x : v.a) x = Rational(static_cast<i128>(rng.below(7)) - 3);
        } while (rank_rational(v) != static_cast<std::size_t>(dim));
        SubspaceBasis sv(v);
        BlReport rep = bl_dimension_check(planes, sv, n);

        std::size_t total = 0;
        for (int j = 0; j < m; ++j) {
            Mat<Rational> prod(2, static_cast<std::size_t>(dim));
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < static_cast<std::size_t>(dim); ++c) {
                    Rational acc(0);
                    for (std::size_t t = 0; t < static_cast<std::size_t>(n); ++t)
                        acc += planes[static_cast<std::size_t>(j)].basis(r, t) * v(c, t);
                    prod(r, c) = acc;
                }
            std::size_t oracle = minor_rank(prod);
            CHECK(oracle == rep.projected_dims[static_cast<std::size_t>(j)]);
            total += oracle;
        }
        bool oracle_holds = static_cast<std::size_t>(2 * m * dim) <= static_cast<std::size_t>(n) * total;
        CHECK(oracle_holds == rep.holds);
    }
}

TEST_CASE("tangent planes at distinct points satisfy the condition strictly") {
    MonomialSystem sys = build_system(2);
    std::vector<std::pair<Rational, Rational>> points = {
        {Rational(0), Rational(0)},        {Rational(1, 2), Rational(1, 3)}, {Rational(1, 5), Rational(3, 4)},
        {Rational(2, 3), Rational(1, 7)},  {Rational(1), Rational(1)},       {Rational(3, 8), Rational(5, 6)},
    };
    std::vector<SubspaceBasis> planes;
    for (auto& [t, s] : points) {
        Mat<Rational> p(2, static_cast<std::size_t>(sys.n));
        auto n1 = rational_n1(sys, t, s);
        auto n2 = rational_n2(sys, t, s);
        for (int c = 0; c < sys.n; ++c) {
            p(0, static_cast<std::size_t>(c)) = n1[static_cast<std::size_t>(c)];
            p(1, static_cast<std::size_t>(c)) = n2[static_cast<std::size_t>(c)];
        }
        planes.emplace_back(p);
    }
    BlReport rep = bl_dimension_check(planes, planes[0], sys.n);
    CHECK(rep.holds);
    CHECK(rep.lhs < rep.rhs);
}

TEST_CASE("float path matches the exact path on rational inputs") {
    Rng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5;
        const int m = 4;
        const int dim = 1 + static_cast<int>(rng.below(4));
        std::vector<SubspaceBasis> planes;
        std::vector<Mat<double>> dplanes;
        for (int j = 0; j < m; ++j) {
            Mat<Rational> p(2, n);
            do {
                for (auto& x : p.a) x = Rational(static_cast<i128>(rng.below(9)) - 4);
            } while (rank_rational(p) != 2);
            planes.emplace_back(p);
            Mat<double> dp(2, n);
            for (std::size_t i = 0; i < p.a.size(); ++i) dp.a[i] = p.a[i].to_double();
            dplanes.push_back(dp);
        }
        Mat<Rational> v(static_cast<std::size_t>(dim), n);
        do {
            for (auto& x : v.a) x = Rational(static_cast<i128>(rng.below(9)) - 4);
        } while (rank_rational(v) != static_cast<std::size_t>(dim));
        Mat<double> dv(static_cast<std::size_t>(dim), n);
        for (std::size_t i = 0; i < v.a.size(); ++i) dv.a[i] = v.a[i].to_double();

        BlReport exact = bl_dimension_check(planes, SubspaceBasis(v), n);
        BlReport fl = bl_dimension_check_double(dplanes, dv, n);
        CHECK(exact.holds == fl.holds);
        CHECK(exact.projected_dims == fl.projected_dims);
    }
}

TEST_CASE("plane validation") {
    Mat<Rational> degenerate(2, 5);
    degenerate(0, 0) = Rational(1);
    degenerate(1, 0) = Rational(2);  // rank 1
    CHECK_THROWS_AS(SubspaceBasis{degenerate}, ValidationError);

    Mat<Rational> line(1, 5);
    line(0, 0) = Rational(1);
    std::vector<SubspaceBasis> planes;
    planes.emplace_back(line);
    Mat<Rational> v(1, 5);
    v(0, 1) = Rational(1);
    CHECK_THROWS_AS(bl_dimension_check(planes, SubspaceBasis(v), 5), ValidationError);
}

TEST_CASE("isotropic search: every line is isotropic") {
    MonomialSystem sys = build_system(2);
    SearchReport rep = isotropic_search(sys, 1, 5, 1);
    CHECK(rep.violation_found);
    CHECK(rep.violation_trial == 0);
    CHECK(rep.basis.size() == 1);
}

TEST_CASE("the kernel vector spans an isotropic plane with (1,-1,0,0,0)") {
    // the two-dimensional endpoint of the kernel argument: both Q forms vanish
    MonomialSystem sys = build_system(2);
    std::vector<Rational> v = {Rational(1), Rational(-1), Rational(0), Rational(0), Rational(0)};
    std::vector<Rational> w = {Rational(0), Rational(0), Rational(1), Rational(1), Rational(-2)};
    CHECK(q_polynomial<Rational>(sys, v, w).is_zero());
}

TEST_CASE("isotropic search finds nothing at the conjectured dimensions") {
    MonomialSystem s2 = build_system(2);
    SearchReport r2 = isotropic_search(s2, 3, 400, 1);
    CHECK_FALSE(r2.violation_found);
    CHECK(r2.best_residual > 0.0);

    MonomialSystem s3 = build_system(3);
    SearchReport r3 = isotropic_search(s3, 5, 150, 1);
    CHECK_FALSE(r3.violation_found);
    CHECK(r3.best_residual > 0.0);
}

TEST_CASE("isotropic search is deterministic for a fixed seed") {
    MonomialSystem sys = build_system(2);
    SearchOptions one, four;
    one.threads = 1;
    four.threads = 4;
    SearchReport a = isotropic_search(sys, 3, 64, 9, one);
    SearchReport b = isotropic_search(sys, 3, 64, 9, four);
    CHECK(a.best_residual == b.best_residual);
    CHECK(a.violation_found == b.violation_found);
}

TEST_CASE("isotropic search input validation") {
    MonomialSystem sys = build_system(2);
    CHECK_THROWS_AS(isotropic_search(sys, 0, 10, 1), ValidationError);
    CHECK_THROWS_AS(isotropic_search(sys, 6, 10, 1), ValidationError);
}

TEST_CASE("exploratory k=4 search runs") {
    MonomialSystem s4 = build_exploratory_system(4);
    SearchReport rep = isotropic_search(s4, (s4.n - 1) / 2 + 1, 20, 3);
    CHECK(rep.n == 14);
    CHECK(rep.dim == 7);
    // no claim about the outcome; the run must only complete and report
    CHECK(rep.trials == 20);
}
