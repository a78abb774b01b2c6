#pragma once

#include <cstdint>
#include <vector>

#include "pv/bivariate_poly.hpp"
#include "pv/monomial.hpp"
#include "pv/parallel.hpp"

namespace pv {

struct Square {
    double x = 0.0;  // lower-left corner
    double y = 0.0;
    double side = 0.0;
};

// sqrt of the summed squared monomial gradient sups on the unit square;
// |grad Q| <= ||Q|| * lipschitz_factor(deg Q) there.
double lipschitz_factor(int degree);

struct NuValue {
    double upper = 0.0;  // max_j (grid minimum of |Q| over square j)
    double lower = 0.0;  // max_j (grid minimum - Lipschitz margin), clamped at 0
};

// Certified bracket of max_j inf_{S_j} |Q| for one polynomial: the grid
// minimum bounds the inner infimum from above, and subtracting the Lipschitz
// safety margin ||Q|| * lipschitz_factor * h * sqrt(2)/2 bounds it from below.
NuValue nu_value(const std::vector<Square>& squares, const BivariatePolynomial& q, int grid);

struct NuOptions {
    int threads = default_threads();
    int descent_steps = 40;
    int directions = 6;
    int degree_override = -1;  // -1 means 2k-2
};

struct NuReport {
    double upper_bound = 0.0;  // valid upper bound for the transversality constant
    double lower_at_best = 0.0;
    int grid = 0;
    int restarts = 0;
    std::uint64_t seed = 0;
    int degree = 0;
};

// Upper bound on the transversality constant of the square family: minimizes
// the certified single-Q value over random unit-norm coefficient vectors with
// pattern-search descent. Every candidate evaluation is itself an upper
// bound, so the reported minimum is one too.
NuReport nu_estimate(const MonomialSystem& sys, const std::vector<Square>& squares, int declared_m, int grid,
                     int restarts, std::uint64_t seed, const NuOptions& opts = {});

}  // namespace pv
