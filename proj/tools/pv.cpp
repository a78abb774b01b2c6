#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pv/counting.hpp"
#include "pv/errors.hpp"
#include "pv/nu.hpp"
#include "pv/oscillatory.hpp"
#include "pv/quartic.hpp"
#include "pv/records_io.hpp"
#include "pv/relaxed.hpp"
#include "pv/transversality.hpp"
#include "pv/zeroset.hpp"

using nlohmann::json;

namespace {

struct GlobalOpts {
    int threads = pv::default_threads();
    std::string out;
    std::string format = "csv";
    bool no_timestamp = false;
};

void write_output(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw pv::ValidationError("cannot open output file: " + g.out);
    f << text;
}

void emit_records(const GlobalOpts& g, const std::vector<pv::CountRecord>& records) {
    if (g.format == "csv")
        write_output(g, pv::records_to_csv(records, !g.no_timestamp));
    else
        write_output(g, pv::records_to_json(records, !g.no_timestamp));
}

void emit_json(const GlobalOpts& g, json j) {
    if (g.no_timestamp && j.contains("seconds")) j["seconds"] = 0.0;
    write_output(g, j.dump(2) + "\n");
}

std::vector<pv::Rational> parse_rational_vector(const std::string& text, int expect) {
    std::vector<pv::Rational> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw pv::ValidationError("empty vector entry");
        auto slash = cur.find('/');
        if (slash == std::string::npos) {
            out.emplace_back(pv::parse_i128(cur));
        } else {
            out.emplace_back(pv::parse_i128(cur.substr(0, slash)), pv::parse_i128(cur.substr(slash + 1)));
        }
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(c)))
            cur.push_back(c);
    }
    flush();
    if (expect >= 0 && static_cast<int>(out.size()) != expect)
        throw pv::ValidationError("expected " + std::to_string(expect) + " vector entries");
    return out;
}

std::vector<double> parse_double_vector(const std::string& text, int expect) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw pv::ValidationError("empty vector entry");
        out.push_back(std::stod(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(c)))
            cur.push_back(c);
    }
    flush();
    if (expect >= 0 && static_cast<int>(out.size()) != expect)
        throw pv::ValidationError("expected " + std::to_string(expect) + " vector entries");
    return out;
}

pv::CoefficientGrid parse_grid_spec(const std::string& spec, int n) {
    if (spec == "ones") return pv::CoefficientGrid::ones(n);
    if (spec.rfind("random:", 0) == 0)
        return pv::CoefficientGrid::random_unimodular(n, std::stoull(spec.substr(7)));
    if (spec.rfind("single:", 0) == 0) {
        auto body = spec.substr(7);
        auto comma = body.find(',');
        if (comma == std::string::npos) throw pv::ValidationError("single coefficient spec needs i,j");
        int i = std::stoi(body.substr(0, comma));
        int j = std::stoi(body.substr(comma + 1));
        if (i < 1 || j < 1 || i > n || j > n) throw pv::ValidationError("coefficient index out of range");
        return pv::CoefficientGrid::single(n, i, j, pv::cplx(1.0, 0.0));
    }
    throw pv::ValidationError("unknown coefficient spec: " + spec);
}

pv::NodeSet parse_nodes_spec(const std::string& spec, int n) {
    if (spec == "mid") return pv::NodeSet::midpoints(n);
    if (spec == "right") return pv::NodeSet::right_endpoints(n);
    throw pv::ValidationError("unknown node spec: " + spec);
}

pv::MonomialSystem system_for(int k, bool allow_exploratory = false) {
    if (allow_exploratory && k == 4) return pv::build_exploratory_system(k);
    return pv::build_system(k);
}

json kernel_report_json(const pv::KernelReport& rep) {
    json j;
    j["k"] = rep.k;
    j["n"] = rep.n;
    j["rank"] = rep.rank;
    j["expected_rank"] = rep.expected_rank;
    j["operator_matches_sum_of_constraints"] = rep.operator_matches_sum_of_constraints;
    j["constraints_match_q_coefficients"] = rep.constraints_match_q_coefficients;
    j["kernel_matches"] = rep.kernel_matches;
    j["kernel"] = rep.kernel_basis;
    j["passed"] = rep.passed;
    return j;
}

pv::Mat<pv::Rational> rational_matrix_from_json(const json& rows, int n) {
    if (!rows.is_array()) throw pv::ValidationError("matrix must be an array of rows");
    pv::Mat<pv::Rational> m(rows.size(), static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw pv::ValidationError("matrix row length must equal n");
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& cell = row[c];
            if (cell.is_number_integer())
                m(r, c) = pv::Rational(cell.get<std::int64_t>());
            else if (cell.is_string()) {
                auto vec = parse_rational_vector(cell.get<std::string>(), 1);
                m(r, c) = vec[0];
            } else {
                throw pv::ValidationError("matrix entries must be integers or rational strings");
            }
        }
    }
    return m;
}

int run(int argc, char** argv) {
    CLI::App app{"exact counting, transversality checks, and oscillatory probes for two dimensional translation-dilation invariant systems"};
    app.set_config("--config", "", "INI key=value configuration file");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads (default: PV_THREADS or hardware)");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_option("--format", g.format, "output format for count records")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--no-timestamp", g.no_timestamp, "zero the seconds column for byte-identical reruns");

    // ---------------------------------------------------------------- count
    auto* count = app.add_subcommand("count", "exact and windowed solution counting")->fallthrough();
    count->require_subcommand(1);

    auto* exact = count->add_subcommand("exact", "exact counts over [1,N]^2")->fallthrough();
    int ex_k = 2, ex_s = 1;
    std::string ex_n, ex_n_geom, ex_method = "mitm";
    exact->add_option("--k", ex_k, "degree bound (2 or 3)")->required();
    exact->add_option("--s", ex_s, "fold count")->required();
    exact->add_option("--n", ex_n, "box sizes, e.g. 7 or 8..48 or 8..48:4");
    exact->add_option("--n-geom", ex_n_geom, "geometric box sizes start:ratio:terms");
    exact->add_option("--method", ex_method, "mitm (join) or brute (oracle)")
        ->check(CLI::IsMember({"mitm", "brute"}));
    exact->callback([&] {
        if (ex_n.empty() == ex_n_geom.empty())
            throw pv::ValidationError("provide exactly one of --n and --n-geom");
        auto sizes = ex_n.empty() ? pv::parse_geometric(ex_n_geom) : pv::parse_range(ex_n);
        pv::CountOptions opts;
        opts.threads = g.threads;
        std::vector<pv::CountRecord> records;
        for (std::int64_t n : sizes) {
            if (ex_method == "mitm") {
                records.push_back(pv::mitm_count(ex_k, ex_s, n, opts));
            } else {
                auto t0 = std::chrono::steady_clock::now();
                pv::u128 c = pv::brute_force_count(ex_k, ex_s, n);
                auto t1 = std::chrono::steady_clock::now();
                pv::CountRecord r;
                r.k = ex_k;
                r.s = ex_s;
                r.n = n;
                r.method = pv::Method::brute;
                r.count = c;
                r.seconds = std::chrono::duration<double>(t1 - t0).count();
                r.threads = 1;
                records.push_back(r);
            }
        }
        emit_records(g, records);
    });

    auto* relaxed = count->add_subcommand("relaxed", "windowed counts over sampled sites")->fallthrough();
    int rx_s = 1;
    std::int64_t rx_n = 4;
    std::uint64_t rx_seed = 42;
    bool rx_integer = false;
    relaxed->add_option("--s", rx_s, "fold count")->required();
    relaxed->add_option("--n", rx_n, "number of sites per axis")->required();
    relaxed->add_option("--seed", rx_seed, "site sampler seed");
    relaxed->add_flag("--integer-sites", rx_integer, "use the integer sites instead of sampling");
    relaxed->callback([&] {
        pv::RelaxedSites sites =
            rx_integer ? pv::RelaxedSites::integer_sites(rx_n) : pv::RelaxedSites::sample(rx_n, rx_seed);
        pv::RelaxedOptions opts;
        opts.threads = g.threads;
        pv::CountRecord rec = pv::relaxed_count(rx_s, sites, opts);
        if (!rx_integer) rec.seed = rx_seed;
        emit_records(g, {rec});
    });

    auto* quartic = count->add_subcommand("quartic", "perturbed quartic system counts")->fallthrough();
    std::string qu_n = "2";
    double qu_c = 1.0;
    bool qu_swap = false;
    quartic->add_option("--n", qu_n, "box scale N (variables in [N, 2N]), range allowed")->required();
    quartic->add_option("--window-c", qu_c, "window constant c in c*N^2 (default 1)");
    quartic->add_flag("--swap-xy", qu_swap, "swap the coordinate roles");
    quartic->callback([&] {
        pv::QuarticOptions opts;
        opts.threads = g.threads;
        opts.swap_xy = qu_swap;
        std::vector<pv::CountRecord> records;
        for (std::int64_t n : pv::parse_range(qu_n)) records.push_back(pv::quartic_count(n, qu_c, opts));
        emit_records(g, records);
    });

    // ------------------------------------------------------------------ fit
    auto* fit = app.add_subcommand("fit", "least-squares exponent fit of count records")->fallthrough();
    std::string fit_in;
    int fit_k = 0, fit_s = 0;
    std::string fit_method;
    fit->add_option("--in", fit_in, "CSV or JSON records file")->required();
    fit->add_option("--k", fit_k, "filter records by k");
    fit->add_option("--s", fit_s, "filter records by s");
    fit->add_option("--method", fit_method, "filter records by method");
    fit->callback([&] {
        std::ifstream f(fit_in, std::ios::binary);
        if (!f) throw pv::ValidationError("cannot open records file: " + fit_in);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        std::vector<pv::CountRecord> records;
        if (!text.empty() && (text[0] == '[' || text[0] == '{'))
            records = pv::records_from_json(text);
        else
            records = pv::records_from_csv(text);
        std::vector<pv::CountRecord> kept;
        for (const auto& r : records) {
            if (fit_k && r.k != fit_k) continue;
            if (fit_s && r.s != fit_s) continue;
            if (!fit_method.empty() && pv::method_name(r.method) != fit_method) continue;
            kept.push_back(r);
        }
        pv::FitResult res = pv::exponent_fit(kept);
        pv::MonomialSystem sys = pv::build_system(kept[0].k);
        double predicted = static_cast<double>(pv::predicted_exponent(sys, kept[0].s));
        double diff = res.slope - predicted;
        bool diverges = std::fabs(diff) > 0.2;
        std::ostringstream out;
        char line[128];
        std::snprintf(line, sizeof(line), "slope=%.6f\n", res.slope);
        out << line;
        std::snprintf(line, sizeof(line), "stderr=%.6f\n", res.stderr_slope);
        out << line;
        std::snprintf(line, sizeof(line), "predicted=%.6f\n", predicted);
        out << line;
        std::snprintf(line, sizeof(line), "difference=%.6f\n", diff);
        out << line;
        out << "diverges=" << (diverges ? "yes" : "no") << "\n";
        write_output(g, out.str());
    });

    // ---------------------------------------------------------------- trans
    auto* trans = app.add_subcommand("trans", "tangent-frame and subspace machinery")->fallthrough();
    trans->require_subcommand(1);

    auto* qpoly = trans->add_subcommand("qpoly", "pairing determinant polynomial of two vectors")->fallthrough();
    int qp_k = 2;
    std::string qp_v, qp_w;
    qpoly->add_option("--k", qp_k, "degree bound")->required();
    qpoly->add_option("--v", qp_v, "first vector, comma separated integers or rationals p/q")->required();
    qpoly->add_option("--w", qp_w, "second vector")->required();
    qpoly->callback([&] {
        pv::MonomialSystem sys = system_for(qp_k, true);
        auto v = parse_rational_vector(qp_v, sys.n);
        auto w = parse_rational_vector(qp_w, sys.n);
        pv::RationalPoly q = pv::q_polynomial<pv::Rational>(sys, v, w);
        json coeffs = json::array();
        for (int a = 0; a <= q.degree; ++a) {
            json row = json::array();
            for (int b = 0; a + b <= q.degree; ++b) row.push_back(q.at(a, b).str());
            coeffs.push_back(row);
        }
        json j;
        j["k"] = qp_k;
        j["degree_bound"] = q.degree;
        j["degree"] = q.actual_degree();
        j["coefficients"] = coeffs;
        j["norm"] = pv::to_double_poly(q).computed_norm();
        emit_json(g, j);
    });

    auto* kernel = trans->add_subcommand("kernel", "verify the displayed operator kernels")->fallthrough();
    int ke_k = 2;
    bool kernel_failed = false;
    kernel->add_option("--k", ke_k, "degree bound (2 or 3)")->required();
    kernel->callback([&] {
        pv::KernelReport rep = pv::verify_operator_kernels(ke_k);
        emit_json(g, kernel_report_json(rep));
        kernel_failed = !rep.passed;
    });

    auto* search = trans->add_subcommand("search", "randomized isotropic-subspace search")->fallthrough();
    int se_k = 2, se_dim = 3;
    std::uint64_t se_trials = 1000, se_seed = 1;
    search->add_option("--k", se_k, "degree bound (2, 3, or exploratory 4)")->required();
    search->add_option("--dim", se_dim, "subspace dimension")->required();
    search->add_option("--trials", se_trials, "random restarts");
    search->add_option("--seed", se_seed, "search seed");
    search->callback([&] {
        pv::MonomialSystem sys = system_for(se_k, true);
        pv::SearchOptions opts;
        opts.threads = g.threads;
        pv::SearchReport rep = pv::isotropic_search(sys, se_dim, se_trials, se_seed, opts);
        json j;
        j["k"] = rep.k;
        j["n"] = rep.n;
        j["dim"] = rep.dim;
        j["trials"] = rep.trials;
        j["seed"] = rep.seed;
        j["violation_found"] = rep.violation_found;
        j["best_residual"] = rep.best_residual;
        if (rep.violation_found) {
            j["violation_trial"] = rep.violation_trial;
            j["basis"] = rep.basis;
        }
        emit_json(g, j);
    });

    auto* bl = trans->add_subcommand("bl", "projection dimension condition for plane families")->fallthrough();
    std::string bl_in;
    bl->add_option("--in", bl_in, "JSON file {n, planes: [2xn matrices], v: matrix}")->required();
    bl->callback([&] {
        std::ifstream f(bl_in, std::ios::binary);
        if (!f) throw pv::ValidationError("cannot open input file: " + bl_in);
        json spec;
        try {
            f >> spec;
        } catch (const json::exception& e) {
            throw pv::ValidationError(std::string("malformed JSON: ") + e.what());
        }
        int n = spec.at("n").get<int>();
        std::vector<pv::SubspaceBasis> planes;
        for (const auto& p : spec.at("planes")) planes.emplace_back(rational_matrix_from_json(p, n));
        pv::SubspaceBasis v(rational_matrix_from_json(spec.at("v"), n));
        pv::BlReport rep = pv::bl_dimension_check(planes, v, n);
        json j;
        j["holds"] = rep.holds;
        j["lhs"] = rep.lhs;
        j["rhs"] = rep.rhs;
        j["projected_dims"] = rep.projected_dims;
        emit_json(g, j);
    });

    auto* nu = trans->add_subcommand("nu", "upper bound for the family transversality constant")->fallthrough();
    int nu_k = 2, nu_m = 10, nu_grid = 24, nu_restarts = 16, nu_degree = -1;
    std::uint64_t nu_seed = 1;
    std::string nu_squares;
    nu->add_option("--k", nu_k, "degree bound")->required();
    nu->add_option("--m", nu_m, "declared family size m (uses [m/n]+1 squares)")->required();
    nu->add_option("--squares", nu_squares, "x,y,side;x,y,side;... lower-left corners")->required();
    nu->add_option("--grid", nu_grid, "grid points per square axis");
    nu->add_option("--restarts", nu_restarts, "random restarts");
    nu->add_option("--seed", nu_seed, "seed");
    nu->add_option("--degree", nu_degree, "override the polynomial degree bound");
    nu->callback([&] {
        pv::MonomialSystem sys = system_for(nu_k, true);
        std::vector<pv::Square> squares;
        std::string cur;
        auto flush = [&] {
            auto vals = parse_double_vector(cur, 3);
            squares.push_back({vals[0], vals[1], vals[2]});
            cur.clear();
        };
        for (char c : nu_squares) {
            if (c == ';')
                flush();
            else
                cur.push_back(c);
        }
        if (!cur.empty()) flush();
        pv::NuOptions opts;
        opts.threads = g.threads;
        opts.degree_override = nu_degree;
        pv::NuReport rep = pv::nu_estimate(sys, squares, nu_m, nu_grid, nu_restarts, nu_seed, opts);
        json j;
        j["upper_bound"] = rep.upper_bound;
        j["lower_at_best"] = rep.lower_at_best;
        j["grid"] = rep.grid;
        j["restarts"] = rep.restarts;
        j["seed"] = rep.seed;
        j["degree"] = rep.degree;
        emit_json(g, j);
    });

    auto* zeroset = trans->add_subcommand("zeroset", "dyadic squares near a polynomial zero set")->fallthrough();
    std::string zs_poly;
    int zs_K = 16;
    zeroset->add_option("--poly", zs_poly, "JSON coefficient rows, e.g. [[0,-1],[1,0]] for t-s")->required();
    zeroset->add_option("--K", zs_K, "dyadic scale, a power of two")->required();
    zeroset->callback([&] {
        json rows;
        try {
            rows = json::parse(zs_poly);
        } catch (const json::exception& e) {
            throw pv::ValidationError(std::string("malformed polynomial JSON: ") + e.what());
        }
        if (!rows.is_array() || rows.empty()) throw pv::ValidationError("polynomial must be an array of rows");
        int degree = 0;
        for (const auto& row : rows) degree = std::max<int>(degree, static_cast<int>(row.size()) - 1);
        degree = std::max<int>(degree, static_cast<int>(rows.size()) - 1);
        pv::BivariatePolynomial q(degree);
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows[a].size(); ++b)
                q.at(static_cast<int>(a), static_cast<int>(b)) = rows[a][b].get<double>();
        q.refresh_norm();
        std::uint64_t count = pv::zero_set_square_count(q, zs_K);
        json j;
        j["K"] = zs_K;
        j["count"] = count;
        j["count_over_K"] = static_cast<double>(count) / zs_K;
        emit_json(g, j);
    });

    // ------------------------------------------------------------------ osc
    auto* osc = app.add_subcommand("osc", "oscillatory sums and Monte Carlo probes")->fallthrough();
    osc->require_subcommand(1);

    auto* sum = osc->add_subcommand("sum", "evaluate one Weyl sum")->fallthrough();
    int su_k = 2, su_n = 4;
    std::string su_x, su_a = "ones", su_nodes = "mid";
    sum->add_option("--k", su_k, "degree bound")->required();
    sum->add_option("--n", su_n, "grid size")->required();
    sum->add_option("--x", su_x, "frequency vector, comma separated")->required();
    sum->add_option("--a", su_a, "coefficients: ones | single:i,j | random:seed");
    sum->add_option("--nodes", su_nodes, "node placement: mid | right");
    sum->callback([&] {
        pv::MonomialSystem sys = system_for(su_k);
        auto x = parse_double_vector(su_x, sys.n);
        pv::CoefficientGrid grid = parse_grid_spec(su_a, su_n);
        pv::cplx v = pv::weyl_sum(sys, grid, parse_nodes_spec(su_nodes, su_n), x);
        json j;
        j["re"] = v.real();
        j["im"] = v.imag();
        j["abs"] = std::abs(v);
        emit_json(g, j);
    });

    auto* mean = osc->add_subcommand("mean", "Monte Carlo torus mean of the full Weyl sum power")->fallthrough();
    int me_k = 2, me_s = 1;
    std::int64_t me_n = 4;
    std::uint64_t me_samples = 100000, me_seed = 1;
    mean->add_option("--k", me_k, "degree bound")->required();
    mean->add_option("--s", me_s, "half the moment exponent")->required();
    mean->add_option("--n", me_n, "box size")->required();
    mean->add_option("--samples", me_samples, "Monte Carlo samples");
    mean->add_option("--seed", me_seed, "seed");
    mean->callback([&] {
        pv::MonomialSystem sys = system_for(me_k);
        pv::SamplePlan plan;
        plan.samples = me_samples;
        plan.seed = me_seed;
        plan.threads = g.threads;
        pv::MeanReport rep = pv::torus_mean_mc(sys, me_s, me_n, plan);
        json j;
        j["op"] = "mean";
        j["k"] = me_k;
        j["s"] = me_s;
        j["N"] = me_n;
        j["estimate"] = rep.estimate;
        j["stderr"] = rep.stderr_mean;
        j["samples"] = rep.samples;
        j["seed"] = rep.seed;
        j["seconds"] = rep.seconds;
        emit_json(g, j);
    });

    auto* restrict_cmd = osc->add_subcommand("restrict", "ball-average restriction ratio")->fallthrough();
    int re_k = 2, re_n = 4;
    double re_p = 2.0, re_radius = -1.0;
    std::uint64_t re_samples = 20000, re_seed = 1;
    std::string re_a = "ones", re_nodes = "mid";
    restrict_cmd->add_option("--k", re_k, "degree bound")->required();
    restrict_cmd->add_option("--n", re_n, "grid size")->required();
    restrict_cmd->add_option("--p", re_p, "exponent p >= 2")->required();
    restrict_cmd->add_option("--radius", re_radius, "ball radius, >= N^2 (default N^2)");
    restrict_cmd->add_option("--samples", re_samples, "Monte Carlo samples");
    restrict_cmd->add_option("--seed", re_seed, "seed");
    restrict_cmd->add_option("--a", re_a, "coefficients: ones | single:i,j | random:seed");
    restrict_cmd->add_option("--nodes", re_nodes, "node placement: mid | right");
    restrict_cmd->callback([&] {
        pv::MonomialSystem sys = system_for(re_k);
        double radius = re_radius > 0 ? re_radius : static_cast<double>(re_n) * static_cast<double>(re_n);
        pv::SamplePlan plan;
        plan.samples = re_samples;
        plan.seed = re_seed;
        plan.threads = g.threads;
        pv::CoefficientGrid grid = parse_grid_spec(re_a, re_n);
        pv::RatioReport rep =
            pv::restriction_ratio(sys, grid, parse_nodes_spec(re_nodes, re_n), re_p, radius, plan);
        json j;
        j["op"] = "restrict";
        j["k"] = re_k;
        j["N"] = re_n;
        j["p"] = re_p;
        j["radius"] = radius;
        j["ratio"] = rep.ratio;
        j["numerator"] = rep.numerator;
        j["denominator"] = rep.denominator;
        j["samples"] = rep.samples;
        j["seed"] = rep.seed;
        j["seconds"] = rep.seconds;
        emit_json(g, j);
    });

    auto* probe = osc->add_subcommand("probe", "decoupling-constant lower-bound probe")->fallthrough();
    int pr_k = 2;
    std::int64_t pr_n = 16;
    double pr_p = 2.0, pr_mod_u = 0.0, pr_mod_v = 0.0;
    std::uint64_t pr_samples = 4000, pr_seed = 1;
    std::string pr_g = "random:1", pr_maximize;
    probe->add_option("--k", pr_k, "degree bound")->required();
    probe->add_option("--n", pr_n, "frequency scale N (a perfect k-th power)")->required();
    probe->add_option("--p", pr_p, "exponent p")->required();
    probe->add_option("--samples", pr_samples, "Monte Carlo samples");
    probe->add_option("--seed", pr_seed, "seed");
    probe->add_option("--g", pr_g, "cell values: random:seed | single:a,b");
    probe->add_option("--mod-u", pr_mod_u, "modulation of the first linear frequency");
    probe->add_option("--mod-v", pr_mod_v, "modulation of the second linear frequency");
    probe->add_option("--maximize", pr_maximize, "restarts:sweeps random-restart ascent over g");
    probe->callback([&] {
        pv::MonomialSystem sys = system_for(pr_k);
        pv::SamplePlan plan;
        plan.samples = pr_samples;
        plan.seed = pr_seed;
        plan.threads = g.threads;
        pv::ProbeOptions opts;
        opts.modulation_u = pr_mod_u;
        opts.modulation_v = pr_mod_v;
        json j;
        j["op"] = "probe";
        j["k"] = pr_k;
        j["N"] = pr_n;
        j["p"] = pr_p;
        if (!pr_maximize.empty()) {
            auto colon = pr_maximize.find(':');
            if (colon == std::string::npos) throw pv::ValidationError("--maximize needs restarts:sweeps");
            int restarts = std::stoi(pr_maximize.substr(0, colon));
            int sweeps = std::stoi(pr_maximize.substr(colon + 1));
            pv::AscentReport rep = pv::probe_maximize(sys, pr_n, pr_p, plan, restarts, sweeps, opts);
            j["ratio"] = rep.best.ratio;
            j["lhs"] = rep.best.lhs;
            j["rhs"] = rep.best.rhs;
            j["samples"] = rep.best.samples;
            j["seed"] = rep.best.seed;
            j["seconds"] = rep.best.seconds;
            j["restarts"] = rep.restarts;
        } else {
            int cells = static_cast<int>(std::llround(std::pow(static_cast<double>(pr_n), 1.0 / pr_k)));
            pv::CellFunction cf;
            if (pr_g.rfind("random:", 0) == 0) {
                cf = pv::CellFunction::random_unimodular(cells, std::stoull(pr_g.substr(7)));
            } else if (pr_g.rfind("single:", 0) == 0) {
                auto body = pr_g.substr(7);
                auto comma = body.find(',');
                if (comma == std::string::npos) throw pv::ValidationError("single cell spec needs a,b");
                cf = pv::CellFunction::single_cell(cells, std::stoi(body.substr(0, comma)),
                                                   std::stoi(body.substr(comma + 1)), pv::cplx(1.0, 0.0));
            } else {
                throw pv::ValidationError("unknown cell spec: " + pr_g);
            }
            pv::ProbeReport rep = pv::decoupling_probe(sys, cf, pr_n, pr_p, plan, opts);
            j["ratio"] = rep.ratio;
            j["lhs"] = rep.lhs;
            j["rhs"] = rep.rhs;
            j["samples"] = rep.samples;
            j["seed"] = rep.seed;
            j["seconds"] = rep.seconds;
        }
        emit_json(g, j);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 2;
    }
    return kernel_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pv::BudgetError& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 3;
    } catch (const pv::ValidationError& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 2;
    }
}
