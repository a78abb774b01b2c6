#pragma once

#include <cstdint>
#include <vector>

#include "pv/int128.hpp"
#include "pv/monomial.hpp"

namespace pv {

// Inclusive integer box of points (X,Y). Coordinates start at 1 so monomials
// are monotone over the box.
struct PointBox {
    std::int64_t x_lo = 1, x_hi = 1;
    std::int64_t y_lo = 1, y_hi = 1;

    static PointBox square(std::int64_t n, std::int64_t x_shift = 0, std::int64_t y_shift = 0) {
        return {x_shift + 1, x_shift + n, y_shift + 1, y_shift + n};
    }
    std::uint64_t npoints() const {
        return static_cast<std::uint64_t>(x_hi - x_lo + 1) * static_cast<std::uint64_t>(y_hi - y_lo + 1);
    }
    bool operator==(const PointBox&) const = default;
};

// Fixed-width bit packing of moment vectors of s-fold sums over a box.
// Component order is the canonical monomial order with the first component in
// the most significant bits, so packing is strictly monotone with respect to
// lexicographic component order. Field widths are sized so that keys of
// m-fold and (s-m)-fold vectors add without carries across fields.
struct KeyLayout {
    struct Slot {
        i128 lo;    // componentwise minimum of the 1-fold moment over the box
        i128 span;  // hi - lo for one fold
        int width;
        int shift;
    };

    int k = 0;
    int s = 0;
    PointBox box;
    std::vector<Slot> slots;
    int total_bits = 0;

    // Throws BudgetError when the widths exceed 128 bits in total.
    static KeyLayout create(const MonomialSystem& sys, int s, const PointBox& box);

    u128 pack(const MomentVector& v) const { return pack_folds(v, s); }
    MomentVector unpack(u128 key) const { return unpack_folds(key, s); }

    u128 pack_folds(const MomentVector& v, int folds) const;
    MomentVector unpack_folds(u128 key, int folds) const;
};

}  // namespace pv
