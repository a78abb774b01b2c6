#include "pv/packed_key.hpp"

#include "pv/errors.hpp"

namespace pv {

KeyLayout KeyLayout::create(const MonomialSystem& sys, int s, const PointBox& box) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    if (box.x_lo < 1 || box.y_lo < 1 || box.x_hi < box.x_lo || box.y_hi < box.y_lo)
        throw ValidationError("point box must satisfy 1 <= lo <= hi on both axes");

    KeyLayout layout;
    layout.k = sys.k;
    layout.s = s;
    layout.box = box;
    layout.slots.resize(sys.monomials.size());

    MomentVector lo = moment_map(sys, box.x_lo, box.y_lo);
    MomentVector hi = moment_map(sys, box.x_hi, box.y_hi);

    int bits = 0;
    for (std::size_t c = 0; c < sys.monomials.size(); ++c) {
        Slot& slot = layout.slots[c];
        slot.lo = lo[c];
        slot.span = hi[c] - lo[c];
        u128 max_field = static_cast<u128>(s) * static_cast<u128>(slot.span);
        slot.width = bit_width_u128(max_field);
        bits += slot.width;
    }
    if (bits > 128)
        throw BudgetError("key layout exceeds the 128-bit budget: needs " + std::to_string(bits) + " bits");
    layout.total_bits = bits;

    int shift = bits;
    for (auto& slot : layout.slots) {
        shift -= slot.width;
        slot.shift = shift;
    }
    return layout;
}

u128 KeyLayout::pack_folds(const MomentVector& v, int folds) const {
    if (v.size() != slots.size()) throw ValidationError("moment vector length does not match layout");
    u128 key = 0;
    for (std::size_t c = 0; c < slots.size(); ++c) {
        const Slot& slot = slots[c];
        i128 field = v[c] - static_cast<i128>(folds) * slot.lo;
        if (field < 0 || field > static_cast<i128>(folds) * slot.span)
            throw ValidationError("moment component out of range for layout");
        key |= static_cast<u128>(field) << slot.shift;
    }
    return key;
}

MomentVector KeyLayout::unpack_folds(u128 key, int folds) const {
    MomentVector v(slots.size());
    for (std::size_t c = 0; c < slots.size(); ++c) {
        const Slot& slot = slots[c];
        u128 mask = slot.width == 128 ? ~static_cast<u128>(0) : ((static_cast<u128>(1) << slot.width) - 1);
        u128 field = (key >> slot.shift) & mask;
        v[c] = static_cast<i128>(field) + static_cast<i128>(folds) * slot.lo;
    }
    return v;
}

}  // namespace pv
