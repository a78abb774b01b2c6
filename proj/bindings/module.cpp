#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pv/counting.hpp"
#include "pv/nu.hpp"
#include "pv/oscillatory.hpp"
#include "pv/quartic.hpp"
#include "pv/relaxed.hpp"
#include "pv/transversality.hpp"
#include "pv/zeroset.hpp"

namespace py = pybind11;
using namespace pv;

namespace {

py::int_ big_int(u128 v) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(to_string_u128(v).c_str(), nullptr, 10));
}

MonomialSystem system_for(int k) { return k == 4 ? build_exploratory_system(k) : build_system(k); }

py::dict record_dict(const CountRecord& r) {
    py::dict d;
    d["k"] = r.k;
    d["s"] = r.s;
    d["n"] = r.n;
    d["method"] = method_name(r.method);
    d["count"] = big_int(r.count);
    d["seconds"] = r.seconds;
    d["threads"] = r.threads;
    if (r.seed)
        d["seed"] = *r.seed;
    else
        d["seed"] = py::none();
    return d;
}

CountOptions count_opts(int threads) {
    CountOptions o;
    if (threads > 0) o.threads = threads;
    return o;
}

BivariatePolynomial poly_from_rows(const std::vector<std::vector<double>>& rows) {
    int degree = static_cast<int>(rows.size()) - 1;
    for (const auto& row : rows) degree = std::max<int>(degree, static_cast<int>(row.size()) - 1);
    if (degree < 0) throw ValidationError("empty polynomial");
    BivariatePolynomial q(degree);
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows[a].size(); ++b) q.at(static_cast<int>(a), static_cast<int>(b)) = rows[a][b];
    q.refresh_norm();
    return q;
}

Mat<Rational> matrix_from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
    Mat<Rational> m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw ValidationError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = Rational(rows[r][c]);
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact Parsell-Vinogradov solution counting with transversality and Weyl-sum probes";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    m.def(
        "system_info",
        [](int k) {
            MonomialSystem sys = system_for(k);
            py::dict d;
            d["k"] = sys.k;
            d["n"] = sys.n;
            d["gamma"] = sys.gamma;
            py::list monos;
            for (const auto& mo : sys.monomials) monos.append(py::make_tuple(mo.i, mo.j));
            d["monomials"] = monos;
            return d;
        },
        py::arg("k"), "Monomial system summary: ambient dimension, degree sum, ordered exponents.");

    m.def(
        "moment_map",
        [](int k, std::int64_t x, std::int64_t y) {
            MomentVector v = moment_map(system_for(k), x, y);
            py::list out;
            for (i128 c : v) out.append(py::reinterpret_steal<py::int_>(
                PyLong_FromString(to_string_i128(c).c_str(), nullptr, 10)));
            return out;
        },
        py::arg("k"), py::arg("x"), py::arg("y"));

    m.def(
        "predicted_exponent",
        [](int k, int s) { return predicted_exponent(system_for(k), s); }, py::arg("k"), py::arg("s"));

    m.def(
        "brute_force_count",
        [](int k, int s, std::int64_t n) { return big_int(brute_force_count(k, s, n)); }, py::arg("k"),
        py::arg("s"), py::arg("n"), "Exact oracle count by full enumeration; guarded to small instances.");

    m.def(
        "mitm_count",
        [](int k, int s, std::int64_t n, int threads) { return record_dict(mitm_count(k, s, n, count_opts(threads))); },
        py::arg("k"), py::arg("s"), py::arg("n"), py::arg("threads") = 0,
        "Exact count via the representation-table join; returns the full record.");

    m.def(
        "sample_sites",
        [](std::int64_t n, std::uint64_t seed) {
            RelaxedSites s = RelaxedSites::sample(n, seed);
            return py::make_tuple(s.sx, s.sy);
        },
        py::arg("n"), py::arg("seed"));

    m.def(
        "relaxed_count",
        [](int s, const std::vector<double>& sx, const std::vector<double>& sy, int threads) {
            RelaxedOptions o;
            if (threads > 0) o.threads = threads;
            return record_dict(relaxed_count(s, RelaxedSites(sx, sy), o));
        },
        py::arg("s"), py::arg("sx"), py::arg("sy"), py::arg("threads") = 0);

    m.def(
        "quartic_count",
        [](std::int64_t n, double window_c, bool swap_xy, int threads) {
            QuarticOptions o;
            if (threads > 0) o.threads = threads;
            o.swap_xy = swap_xy;
            return record_dict(quartic_count(n, window_c, o));
        },
        py::arg("n"), py::arg("window_c") = 1.0, py::arg("swap_xy") = false, py::arg("threads") = 0);

    m.def(
        "exponent_fit",
        [](int k, int s, const std::vector<std::pair<std::int64_t, py::int_>>& points) {
            std::vector<CountRecord> recs;
            for (const auto& [n, count] : points) {
                CountRecord r;
                r.k = k;
                r.s = s;
                r.n = n;
                r.method = Method::mitm;
                r.count = parse_u128(py::str(count).cast<std::string>());
                recs.push_back(r);
            }
            FitResult f = exponent_fit(recs);
            return py::make_tuple(f.slope, f.stderr_slope);
        },
        py::arg("k"), py::arg("s"), py::arg("points"),
        "Least-squares slope and standard error of log(count) vs log(n).");

    m.def(
        "tangent_frame",
        [](int k, double t, double s) {
            TangentFrame f = tangent_frame(system_for(k), t, s);
            return py::make_tuple(f.n1, f.n2);
        },
        py::arg("k"), py::arg("t"), py::arg("s"));

    m.def(
        "q_polynomial",
        [](int k, const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& w) {
            MonomialSystem sys = system_for(k);
            std::vector<Rational> rv, rw;
            for (std::int64_t x : v) rv.emplace_back(x);
            for (std::int64_t x : w) rw.emplace_back(x);
            RationalPoly q = q_polynomial<Rational>(sys, rv, rw);
            py::list rows;
            for (int a = 0; a <= q.degree; ++a) {
                py::list row;
                for (int b = 0; a + b <= q.degree; ++b) row.append(q.at(a, b).str());
                rows.append(row);
            }
            return rows;
        },
        py::arg("k"), py::arg("v"), py::arg("w"),
        "Exact coefficient rows (as rational strings) of the pairing determinant polynomial.");

    m.def(
        "verify_operator_kernels",
        [](int k) {
            KernelReport rep = verify_operator_kernels(k);
            py::dict d;
            d["k"] = rep.k;
            d["n"] = rep.n;
            d["rank"] = rep.rank;
            d["expected_rank"] = rep.expected_rank;
            d["operator_matches_sum_of_constraints"] = rep.operator_matches_sum_of_constraints;
            d["constraints_match_q_coefficients"] = rep.constraints_match_q_coefficients;
            d["kernel_matches"] = rep.kernel_matches;
            d["kernel"] = rep.kernel_basis;
            d["passed"] = rep.passed;
            return d;
        },
        py::arg("k"));

    m.def(
        "isotropic_search",
        [](int k, int dim, std::uint64_t trials, std::uint64_t seed, int threads) {
            SearchOptions o;
            if (threads > 0) o.threads = threads;
            SearchReport rep = isotropic_search(system_for(k), dim, trials, seed, o);
            py::dict d;
            d["k"] = rep.k;
            d["n"] = rep.n;
            d["dim"] = rep.dim;
            d["trials"] = rep.trials;
            d["seed"] = rep.seed;
            d["violation_found"] = rep.violation_found;
            d["best_residual"] = rep.best_residual;
            if (rep.violation_found) {
                d["violation_trial"] = rep.violation_trial;
                d["basis"] = rep.basis;
            }
            return d;
        },
        py::arg("k"), py::arg("dim"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 0);

    m.def(
        "bl_dimension_check",
        [](const std::vector<std::vector<std::vector<std::int64_t>>>& planes,
           const std::vector<std::vector<std::int64_t>>& v, int n) {
            std::vector<SubspaceBasis> ps;
            for (const auto& p : planes) ps.emplace_back(matrix_from_rows(p, static_cast<std::size_t>(n)));
            Mat<Rational> vm = v.empty() ? Mat<Rational>(0, static_cast<std::size_t>(n))
                                         : matrix_from_rows(v, static_cast<std::size_t>(n));
            BlReport rep = bl_dimension_check(ps, SubspaceBasis(vm), n);
            py::dict d;
            d["holds"] = rep.holds;
            d["lhs"] = rep.lhs;
            d["rhs"] = rep.rhs;
            d["projected_dims"] = rep.projected_dims;
            return d;
        },
        py::arg("planes"), py::arg("v"), py::arg("n"));

    m.def(
        "nu_estimate",
        [](int k, const std::vector<std::tuple<double, double, double>>& squares, int m_declared, int grid,
           int restarts, std::uint64_t seed, int degree, int threads) {
            std::vector<Square> sq;
            for (const auto& [x, y, side] : squares) sq.push_back({x, y, side});
            NuOptions o;
            if (threads > 0) o.threads = threads;
            o.degree_override = degree;
            NuReport rep = nu_estimate(system_for(k), sq, m_declared, grid, restarts, seed, o);
            py::dict d;
            d["upper_bound"] = rep.upper_bound;
            d["lower_at_best"] = rep.lower_at_best;
            d["grid"] = rep.grid;
            d["restarts"] = rep.restarts;
            d["seed"] = rep.seed;
            d["degree"] = rep.degree;
            return d;
        },
        py::arg("k"), py::arg("squares"), py::arg("m"), py::arg("grid"), py::arg("restarts"), py::arg("seed"),
        py::arg("degree") = -1, py::arg("threads") = 0);

    m.def(
        "zero_set_square_count",
        [](const std::vector<std::vector<double>>& rows, int K) {
            return zero_set_square_count(poly_from_rows(rows), K);
        },
        py::arg("poly"), py::arg("K"),
        "Dyadic squares within 10/K of the zero set; conservative, never undercounts.");

    m.def(
        "weyl_sum",
        [](int k, const std::vector<std::vector<cplx>>& a, const std::vector<double>& u,
           const std::vector<double>& v, const std::vector<double>& x) {
            int n = static_cast<int>(a.size());
            CoefficientGrid grid;
            grid.n = n;
            grid.a.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
            for (int i = 1; i <= n; ++i) {
                if (static_cast<int>(a[static_cast<std::size_t>(i - 1)].size()) != n)
                    throw ValidationError("coefficient grid must be square");
                for (int j = 1; j <= n; ++j) grid.at(i, j) = a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            }
            NodeSet nodes;
            nodes.u = u;
            nodes.v = v;
            return weyl_sum(system_for(k), grid, nodes, x);
        },
        py::arg("k"), py::arg("a"), py::arg("u"), py::arg("v"), py::arg("x"));

    m.def(
        "torus_mean",
        [](int k, int s, std::int64_t n, std::uint64_t samples, std::uint64_t seed, int threads) {
            SamplePlan plan;
            plan.samples = samples;
            plan.seed = seed;
            if (threads > 0) plan.threads = threads;
            MeanReport rep = torus_mean_mc(system_for(k), s, n, plan);
            return py::make_tuple(rep.estimate, rep.stderr_mean);
        },
        py::arg("k"), py::arg("s"), py::arg("n"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 0,
        "Monte Carlo torus mean of |full Weyl sum|^(2s); expectation is the exact count.");

    m.def(
        "restriction_ratio",
        [](int k, int n, double p, double radius, std::uint64_t samples, std::uint64_t seed, int threads) {
            SamplePlan plan;
            plan.samples = samples;
            plan.seed = seed;
            if (threads > 0) plan.threads = threads;
            RatioReport rep = restriction_ratio(system_for(k), CoefficientGrid::ones(n), NodeSet::midpoints(n),
                                                p, radius, plan);
            py::dict d;
            d["ratio"] = rep.ratio;
            d["numerator"] = rep.numerator;
            d["denominator"] = rep.denominator;
            return d;
        },
        py::arg("k"), py::arg("n"), py::arg("p"), py::arg("radius"), py::arg("samples"), py::arg("seed"),
        py::arg("threads") = 0);

    m.def(
        "decoupling_probe",
        [](int k, std::int64_t n, double p, std::uint64_t g_seed, std::uint64_t samples, std::uint64_t seed,
           int threads) {
            MonomialSystem sys = system_for(k);
            int cells = static_cast<int>(std::llround(std::pow(static_cast<double>(n), 1.0 / k)));
            SamplePlan plan;
            plan.samples = samples;
            plan.seed = seed;
            if (threads > 0) plan.threads = threads;
            ProbeReport rep = decoupling_probe(sys, CellFunction::random_unimodular(cells, g_seed), n, p, plan);
            py::dict d;
            d["ratio"] = rep.ratio;
            d["lhs"] = rep.lhs;
            d["rhs"] = rep.rhs;
            return d;
        },
        py::arg("k"), py::arg("n"), py::arg("p"), py::arg("g_seed"), py::arg("samples"), py::arg("seed"),
        py::arg("threads") = 0);
}
