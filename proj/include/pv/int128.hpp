#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pv/errors.hpp"

namespace pv {

using i128 = __int128;
using u128 = unsigned __int128;

inline int bit_width_u128(u128 v) {
    int w = 0;
    while (v != 0) {
        ++w;
        v >>= 1;
    }
    return w;
}

inline std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    char buf[40];
    int pos = 40;
    while (v != 0) {
        buf[--pos] = static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    return std::string(buf + pos, buf + 40);
}

inline std::string to_string_i128(i128 v) {
    // negate in the unsigned domain so the minimum value is well-defined
    if (v < 0) return "-" + to_string_u128(~static_cast<u128>(v) + 1);
    return to_string_u128(static_cast<u128>(v));
}

inline u128 parse_u128(std::string_view s) {
    if (s.empty()) throw ValidationError("empty integer literal");
    u128 v = 0;
    constexpr u128 max = ~static_cast<u128>(0);
    for (char c : s) {
        if (c < '0' || c > '9') throw ValidationError("bad digit in integer literal");
        unsigned d = static_cast<unsigned>(c - '0');
        if (v > (max - d) / 10) throw ValidationError("integer literal exceeds 128 bits");
        v = v * 10 + d;
    }
    return v;
}

inline i128 parse_i128(std::string_view s) {
    if (!s.empty() && s[0] == '-') {
        u128 mag = parse_u128(s.substr(1));
        if (mag > (static_cast<u128>(1) << 127)) throw ValidationError("integer literal exceeds 128 bits");
        return static_cast<i128>(~mag + 1);  // two's complement; covers the minimum value
    }
    u128 mag = parse_u128(s);
    if (mag >= (static_cast<u128>(1) << 127)) throw ValidationError("integer literal exceeds 128 bits");
    return static_cast<i128>(mag);
}

// Exact conversion for logarithms and ratio work; |error| <= 1 ulp of long double.
inline long double to_long_double(u128 v) {
    return static_cast<long double>(static_cast<std::uint64_t>(v >> 64)) * 18446744073709551616.0L +
           static_cast<long double>(static_cast<std::uint64_t>(v));
}

}  // namespace pv
