#include "pv/counting.hpp"

#include <chrono>
#include <cmath>

#include "pv/errors.hpp"

namespace pv {

std::string method_name(Method m) {
    switch (m) {
        case Method::brute: return "brute";
        case Method::mitm: return "mitm";
        case Method::relaxed: return "relaxed";
        case Method::quartic: return "quartic";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "brute") return Method::brute;
    if (name == "mitm") return Method::mitm;
    if (name == "relaxed") return Method::relaxed;
    if (name == "quartic") return Method::quartic;
    throw ValidationError("unknown method: " + name);
}

u128 brute_force_count(int k, int s, std::int64_t n) {
    MonomialSystem sys = build_system(k);
    if (s < 1) throw ValidationError("fold count must be >= 1");
    if (n < 1) throw ValidationError("box size must be >= 1");

    const double tuples = std::pow(static_cast<double>(n) * static_cast<double>(n), 2.0 * s);
    if (tuples > 1e10) throw BudgetError("oracle scale exceeded");

    const std::size_t ncomp = sys.monomials.size();
    const std::size_t npoints = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    // per-point moment rows, X-major then Y
    std::vector<std::int64_t> moments(npoints * ncomp);
    for (std::int64_t x = 1; x <= n; ++x)
        for (std::int64_t y = 1; y <= n; ++y) {
            MomentVector v = moment_map(sys, x, y);
            std::size_t p = static_cast<std::size_t>((x - 1) * n + (y - 1));
            for (std::size_t c = 0; c < ncomp; ++c) moments[p * ncomp + c] = static_cast<std::int64_t>(v[c]);
        }

    const int slots = 2 * s;
    std::vector<std::size_t> pick(static_cast<std::size_t>(slots), 0);
    // running sums per depth; slot < s adds, slot >= s subtracts
    std::vector<std::int64_t> sums(static_cast<std::size_t>(slots + 1) * ncomp, 0);
    u128 count = 0;
    int depth = 0;
    for (;;) {
        if (depth == slots) {
            const std::int64_t* f = &sums[static_cast<std::size_t>(depth) * ncomp];
            bool ok = true;
            for (std::size_t c = 0; c < ncomp; ++c)
                if (f[c] != 0) {
                    ok = false;
                    break;
                }
            if (ok) ++count;
            --depth;
            while (depth >= 0 && ++pick[static_cast<std::size_t>(depth)] == npoints) {
                pick[static_cast<std::size_t>(depth)] = 0;
                --depth;
            }
            if (depth < 0) break;
            continue;  // recompute partial sums from the advanced slot
        }
        const std::int64_t* prev = &sums[static_cast<std::size_t>(depth) * ncomp];
        std::int64_t* next = &sums[static_cast<std::size_t>(depth + 1) * ncomp];
        const std::int64_t* row = &moments[pick[static_cast<std::size_t>(depth)] * ncomp];
        const std::int64_t sign = depth < s ? 1 : -1;
        for (std::size_t c = 0; c < ncomp; ++c) next[c] = prev[c] + sign * row[c];
        ++depth;
    }
    return count;
}

RepTable build_rep_table(int k, int s, std::int64_t n, const CountOptions& opts) {
    return build_rep_table_box(build_system(k), s, PointBox::square(n), opts);
}

namespace {

u128 sum_sq_over_box(int s, const RepTable& points, const CountOptions& opts) {
    if (s == 1) {
        u128 total = 0;
        for (std::uint64_t m : points.mults) total += static_cast<u128>(m) * m;
        return total;
    }
    RepTable prev;
    if (s == 2) {
        prev = points;
    } else {
        prev = points;
        for (int level = 2; level < s; ++level) {
            RepTable next;
            JoinResult r = convolve_step(prev, points, opts, &next);
            if (r.support > opts.max_table_entries)
                throw BudgetError("memory budget exceeded; support " + std::to_string(r.support));
            prev = std::move(next);
        }
    }
    JoinResult last = convolve_step(prev, points, opts, nullptr);
    return last.sum_sq;
}

}  // namespace

u128 mitm_count_points(const MonomialSystem& sys, int s, const PointBox& box,
                       const std::vector<std::pair<std::int64_t, std::int64_t>>& points,
                       const CountOptions& opts) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    RepTable pts = point_table_from(sys, box, s, points);
    return sum_sq_over_box(s, pts, opts);
}

CountRecord mitm_count_box(int k, int s, const PointBox& box, const CountOptions& opts) {
    MonomialSystem sys = build_system(k);
    if (s < 1) throw ValidationError("fold count must be >= 1");
    auto t0 = std::chrono::steady_clock::now();
    RepTable pts = point_table(sys, box, s);
    u128 count = sum_sq_over_box(s, pts, opts);
    auto t1 = std::chrono::steady_clock::now();

    CountRecord rec;
    rec.k = k;
    rec.s = s;
    rec.n = box.x_hi - box.x_lo + 1;
    rec.method = Method::mitm;
    rec.count = count;
    rec.seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.threads = opts.threads;
    return rec;
}

CountRecord mitm_count(int k, int s, std::int64_t n, const CountOptions& opts) {
    if (n < 1) throw ValidationError("box size must be >= 1");
    return mitm_count_box(k, s, PointBox::square(n), opts);
}

FitResult exponent_fit(const std::vector<CountRecord>& records) {
    if (records.size() < 3) throw ValidationError("exponent fit needs at least 3 records");
    for (const auto& r : records) {
        if (r.k != records[0].k || r.s != records[0].s || r.method != records[0].method)
            throw ValidationError("exponent fit requires records with matching (k, s, method)");
        if (r.count == 0) throw ValidationError("exponent fit requires positive counts");
    }
    for (std::size_t i = 0; i < records.size(); ++i)
        for (std::size_t j = i + 1; j < records.size(); ++j)
            if (records[i].n == records[j].n) throw ValidationError("exponent fit requires distinct n");

    const std::size_t m = records.size();
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log(static_cast<double>(records[i].n));
        ys[i] = static_cast<double>(std::log(to_long_double(records[i].count)));
    }
    double xbar = 0, ybar = 0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    double ss_res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ys[i] - ybar - fit.slope * (xs[i] - xbar);
        ss_res += r * r;
    }
    fit.stderr_slope = std::sqrt(std::max(0.0, ss_res / static_cast<double>(m - 2)) / sxx);
    return fit;
}

}  // namespace pv
