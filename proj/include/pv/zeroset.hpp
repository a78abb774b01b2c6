#pragma once

#include <cstdint>

#include "pv/bivariate_poly.hpp"

namespace pv {

// Number of dyadic 1/K squares of the unit square whose distance to the zero
// set of Q inside [0,1]^2 is at most 10/K. A square is counted unless its
// expanded box is certified zero-free by interval/Lipschitz bounds on a
// recursively refined subgrid; sign changes certify a zero. Conservative:
// may overcount, never undercounts. K must be a power of two.
std::uint64_t zero_set_square_count(const BivariatePolynomial& q, int k_squares, int max_depth = 5);

}  // namespace pv
