#include "pv/monomial.hpp"

#include <algorithm>

#include "pv/errors.hpp"

namespace pv {

namespace {

MonomialSystem finish(int k, std::vector<Monomial> monomials) {
    MonomialSystem sys;
    sys.k = k;
    sys.monomials = std::move(monomials);
    sys.n = static_cast<int>(sys.monomials.size());
    sys.gamma = 0;
    for (const auto& m : sys.monomials) sys.gamma += m.degree();
    return sys;
}

std::vector<Monomial> canonical_monomials(int k) {
    // Order fixed by the phase list of the extension operator:
    // t, s, t^2, s^2, ts, then t^3, s^3, t^2 s, t s^2.
    std::vector<Monomial> m = {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}};
    if (k == 3) {
        m.push_back({3, 0});
        m.push_back({0, 3});
        m.push_back({2, 1});
        m.push_back({1, 2});
    }
    return m;
}

}  // namespace

MonomialSystem build_system(int k) {
    if (k != 2 && k != 3) throw ValidationError("unsupported degree");
    return finish(k, canonical_monomials(k));
}

MonomialSystem build_exploratory_system(int k) {
    if (k == 2 || k == 3) return build_system(k);
    if (k != 4) throw ValidationError("unsupported degree");
    // No fixed order exists for k=4 upstream of this artifact; we order by
    // total degree, then by decreasing first exponent. Convention only.
    std::vector<Monomial> m;
    for (int d = 1; d <= k; ++d)
        for (int i = d; i >= 0; --i) m.push_back({i, d - i});
    return finish(k, std::move(m));
}

MomentVector moment_map(const MonomialSystem& sys, i128 x, i128 y) {
    auto checked_pow = [](i128 base, int e) {
        i128 r = 1;
        for (int t = 0; t < e; ++t) {
            if (__builtin_mul_overflow(r, base, &r)) throw ValidationError("moment component exceeds 128 bits");
        }
        return r;
    };
    MomentVector v;
    v.reserve(sys.monomials.size());
    for (const auto& m : sys.monomials) {
        i128 c;
        if (__builtin_mul_overflow(checked_pow(x, m.i), checked_pow(y, m.j), &c))
            throw ValidationError("moment component exceeds 128 bits");
        v.push_back(c);
    }
    return v;
}

std::int64_t predicted_exponent(const MonomialSystem& sys, int s) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    return std::max<std::int64_t>(2LL * s, 4LL * s - sys.gamma);
}

}  // namespace pv
