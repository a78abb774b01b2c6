#include "pv/zeroset.hpp"

#include <algorithm>
#include <cmath>

#include "pv/errors.hpp"

namespace pv {

namespace {

enum class Cell { free_of_zeros, has_zero, unknown };

struct Region {
    double x0, x1, y0, y1;
};

// Lipschitz constant of Q on the unit square from per-coefficient gradient
// sups; tighter than the norm-based aggregate.
double lipschitz_of(const BivariatePolynomial& q) {
    double lip = 0.0;
    for (int a = 0; a <= q.degree; ++a)
        for (int b = 0; a + b <= q.degree; ++b)
            lip += std::fabs(q.at(a, b)) * std::hypot(static_cast<double>(a), static_cast<double>(b));
    return lip;
}

Cell classify(const BivariatePolynomial& q, double lip, const Region& r, int depth) {
    const double cx = 0.5 * (r.x0 + r.x1);
    const double cy = 0.5 * (r.y0 + r.y1);
    const double radius = 0.5 * std::hypot(r.x1 - r.x0, r.y1 - r.y0);
    const double center = q.eval(cx, cy);
    if (std::fabs(center) > lip * radius) return Cell::free_of_zeros;

    const double c00 = q.eval(r.x0, r.y0);
    const double c01 = q.eval(r.x0, r.y1);
    const double c10 = q.eval(r.x1, r.y0);
    const double c11 = q.eval(r.x1, r.y1);
    if (c00 == 0.0 || c01 == 0.0 || c10 == 0.0 || c11 == 0.0 || center == 0.0) return Cell::has_zero;
    const bool pos = c00 > 0.0;
    if ((c01 > 0.0) != pos || (c10 > 0.0) != pos || (c11 > 0.0) != pos || (center > 0.0) != pos)
        return Cell::has_zero;

    if (depth == 0) return Cell::unknown;
    Cell acc = Cell::free_of_zeros;
    const Region subs[4] = {{r.x0, cx, r.y0, cy}, {cx, r.x1, r.y0, cy}, {r.x0, cx, cy, r.y1}, {cx, r.x1, cy, r.y1}};
    for (const Region& sub : subs) {
        Cell c = classify(q, lip, sub, depth - 1);
        if (c == Cell::has_zero) return Cell::has_zero;
        if (c == Cell::unknown) acc = Cell::unknown;
    }
    return acc;
}

}  // namespace

std::uint64_t zero_set_square_count(const BivariatePolynomial& q, int k_squares, int max_depth) {
    if (k_squares < 1 || (k_squares & (k_squares - 1)) != 0)
        throw ValidationError("square count parameter must be a power of two");
    if (q.is_zero()) throw ValidationError("zero polynomial");

    const double lip = lipschitz_of(q);
    const double inv_k = 1.0 / static_cast<double>(k_squares);
    const double reach = 10.0 * inv_k;

    std::uint64_t count = 0;
    for (int a = 0; a < k_squares; ++a)
        for (int b = 0; b < k_squares; ++b) {
            Region reg;
            reg.x0 = std::max(0.0, a * inv_k - reach);
            reg.x1 = std::min(1.0, (a + 1) * inv_k + reach);
            reg.y0 = std::max(0.0, b * inv_k - reach);
            reg.y1 = std::min(1.0, (b + 1) * inv_k + reach);
            if (classify(q, lip, reg, max_depth) != Cell::free_of_zeros) ++count;
        }
    return count;
}

}  // namespace pv
