#include "pv/nu.hpp"

#include <cmath>
#include <limits>

#include "pv/errors.hpp"
#include "pv/rng.hpp"

namespace pv {

double lipschitz_factor(int degree) {
    double sq = 0.0;
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b) sq += static_cast<double>(a * a + b * b);
    return std::sqrt(sq);
}

NuValue nu_value(const std::vector<Square>& squares, const BivariatePolynomial& q, int grid) {
    if (grid < 2) throw ValidationError("grid must be >= 2");
    if (squares.empty()) throw ValidationError("need at least one square");
    const double lip = q.computed_norm() * lipschitz_factor(q.degree);
    NuValue out;
    out.upper = 0.0;
    out.lower = 0.0;
    for (const Square& sq : squares) {
        if (!(sq.side > 0.0)) throw ValidationError("degenerate square");
        if (sq.x < 0.0 || sq.y < 0.0 || sq.x + sq.side > 1.0 || sq.y + sq.side > 1.0)
            throw ValidationError("squares must lie inside the unit square");
        const double h = sq.side / static_cast<double>(grid - 1);
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double v = std::fabs(q.eval(sq.x + h * i, sq.y + h * j));
                if (v < mn) mn = v;
            }
        const double margin = lip * h * 0.70710678118654752440;
        out.upper = std::max(out.upper, mn);
        out.lower = std::max(out.lower, std::max(0.0, mn - margin));
    }
    return out;
}

namespace {

struct CoeffSlots {
    int degree;
    std::vector<std::pair<int, int>> slots;  // (a, b) with a+b <= degree
};

CoeffSlots slots_for(int degree) {
    CoeffSlots s;
    s.degree = degree;
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b) s.slots.emplace_back(a, b);
    return s;
}

BivariatePolynomial poly_from(const CoeffSlots& slots, const std::vector<double>& coeffs) {
    BivariatePolynomial q(slots.degree);
    for (std::size_t i = 0; i < slots.slots.size(); ++i) {
        auto [a, b] = slots.slots[i];
        q.at(a, b) = coeffs[i];
    }
    q.refresh_norm();
    return q;
}

void normalize(std::vector<double>& v) {
    double nrm = 0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0) {
        v[0] = 1.0;
        return;
    }
    for (double& x : v) x /= nrm;
}

}  // namespace

NuReport nu_estimate(const MonomialSystem& sys, const std::vector<Square>& squares, int declared_m, int grid,
                     int restarts, std::uint64_t seed, const NuOptions& opts) {
    const int degree = opts.degree_override >= 0 ? opts.degree_override : 2 * sys.k - 2;
    if (declared_m < sys.n) throw ValidationError("declared m must be at least the ambient dimension");
    const std::size_t want = static_cast<std::size_t>(declared_m / sys.n) + 1;
    if (squares.size() != want)
        throw ValidationError("need exactly [m/n]+1 squares, got " + std::to_string(squares.size()));
    for (const Square& sq : squares)
        if (!(sq.side > 0.0)) throw ValidationError("degenerate square");
    if (restarts < 1) throw ValidationError("need at least one restart");

    CoeffSlots slots = slots_for(degree);
    auto value_of = [&](const std::vector<double>& coeffs) {
        return nu_value(squares, poly_from(slots, coeffs), grid);
    };

    std::vector<double> uppers(static_cast<std::size_t>(restarts));
    std::vector<double> lowers(static_cast<std::size_t>(restarts));
    parallel_chunks(static_cast<std::size_t>(restarts), opts.threads, [&](std::size_t r) {
        Rng rng = Rng::stream(seed, r);
        std::vector<double> coeffs(slots.slots.size());
        for (double& c : coeffs) c = rng.gaussian();
        normalize(coeffs);
        NuValue best = value_of(coeffs);

        double step = 0.5;
        for (int it = 0; it < opts.descent_steps && step > 1e-6; ++it) {
            bool improved = false;
            for (int d = 0; d < opts.directions; ++d) {
                std::vector<double> dir(coeffs.size());
                for (double& x : dir) x = rng.gaussian();
                std::vector<double> cand(coeffs.size());
                for (std::size_t i = 0; i < coeffs.size(); ++i) cand[i] = coeffs[i] + step * dir[i];
                normalize(cand);
                NuValue v = value_of(cand);
                if (v.upper < best.upper) {
                    best = v;
                    coeffs = std::move(cand);
                    improved = true;
                    break;
                }
            }
            step *= improved ? 1.2 : 0.6;
        }
        uppers[r] = best.upper;
        lowers[r] = best.lower;
    });

    NuReport rep;
    rep.grid = grid;
    rep.restarts = restarts;
    rep.seed = seed;
    rep.degree = degree;
    rep.upper_bound = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        if (uppers[static_cast<std::size_t>(r)] < rep.upper_bound) {
            rep.upper_bound = uppers[static_cast<std::size_t>(r)];
            rep.lower_at_best = lowers[static_cast<std::size_t>(r)];
        }
    }
    return rep;
}

}  // namespace pv
