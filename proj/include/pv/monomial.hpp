#pragma once

#include <cstdint>
#include <vector>

#include "pv/int128.hpp"

namespace pv {

struct Monomial {
    int i;  // exponent of the first variable
    int j;  // exponent of the second variable

    int degree() const { return i + j; }
    bool operator==(const Monomial&) const = default;
};

// The moment system of degree bound k: all monomials t^i s^j with
// 1 <= i+j <= k, in the fixed order (t, s, t^2, s^2, ts, t^3, s^3, t^2 s,
// t s^2) that every key, CSV column and phase vector uses.
struct MonomialSystem {
    int k = 0;
    std::vector<Monomial> monomials;
    int n = 0;       // ambient dimension, k(k+3)/2
    int gamma = 0;   // total degree sum, k(k+1)(k+2)/3

    const Monomial& at(int c) const { return monomials[static_cast<std::size_t>(c)]; }
};

using MomentVector = std::vector<i128>;

// Counting-grade systems; rejects k outside {2,3} with "unsupported degree".
MonomialSystem build_system(int k);

// Also accepts k=4 for the exploratory subspace search. For k=4 the order is
// by total degree, then by decreasing first exponent; for k in {2,3} it is
// identical to build_system.
MonomialSystem build_exploratory_system(int k);

// Component for monomial (i,j) is X^i * Y^j. Throws on 128-bit overflow.
MomentVector moment_map(const MonomialSystem& sys, i128 x, i128 y);

// max(2s, 4s - gamma), the predicted growth exponent of the solution count.
std::int64_t predicted_exponent(const MonomialSystem& sys, int s);

}  // namespace pv
