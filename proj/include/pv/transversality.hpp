#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pv/matrix.hpp"
#include "pv/monomial.hpp"
#include "pv/parallel.hpp"
#include "pv/qpoly.hpp"

namespace pv {

// ---------------------------------------------------------------------------
// Kernel verification for the two displayed averaging operators

struct KernelReport {
    int k = 0;
    int n = 0;
    std::size_t rank = 0;
    std::size_t expected_rank = 0;
    bool operator_matches_sum_of_constraints = false;
    bool constraints_match_q_coefficients = false;
    bool kernel_matches = false;
    std::vector<std::string> kernel_basis;  // exact rational entries
    bool passed = false;
};

// Builds the displayed operator exactly, re-derives it from the order-<=1
// (and, for k=3, the t^4/s^4) coefficient forms of Q_{v,w}, and verifies
// rank n-1 with the displayed kernel vector, all over the rationals.
KernelReport verify_operator_kernels(int k);

// ---------------------------------------------------------------------------
// Dimension condition dim(V) <= (n/2m) * sum_j dim(pi_j(V))

struct SubspaceBasis {
    Mat<Rational> basis;  // rows x n, full row rank (validated exactly)

    explicit SubspaceBasis(Mat<Rational> b);
    std::size_t dimension() const { return basis.rows; }
    std::size_t ambient() const { return basis.cols; }
};

struct BlReport {
    bool holds = false;
    double lhs = 0.0;  // dim(V)
    double rhs = 0.0;  // (n/2m) * sum of projected dimensions
    std::vector<std::size_t> projected_dims;
};

// Exact path. dim(pi_j(V)) = rank(A_j * B^T), evaluated over the rationals;
// the inequality itself is compared in integers.
BlReport bl_dimension_check(const std::vector<SubspaceBasis>& planes, const SubspaceBasis& v, int n);

// Floating path with singular-value rank decisions at the given tolerance.
BlReport bl_dimension_check_double(const std::vector<Mat<double>>& planes, const Mat<double>& v, int n,
                                   double tol = 1e-9);

// ---------------------------------------------------------------------------
// Randomized search for isotropic subspaces (Q_{v,w} == 0 on all of V)

struct SearchOptions {
    int threads = default_threads();
    int descent_steps = 24;
    std::int64_t round_den = 64;  // denominator cap when lifting to rationals
};

struct SearchReport {
    int k = 0;
    int n = 0;
    int dim = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool violation_found = false;
    std::uint64_t violation_trial = 0;
    double best_residual = 0.0;
    std::vector<std::vector<std::string>> basis;  // exact rational entries when found
};

// Randomized basis sampling plus projected gradient descent on the summed
// squared coefficient forms. A candidate only counts as a violation after its
// rounded basis passes the exact rational isotropy and rank checks.
SearchReport isotropic_search(const MonomialSystem& sys, int dim, std::uint64_t trials, std::uint64_t seed,
                              const SearchOptions& opts = {});

}  // namespace pv
