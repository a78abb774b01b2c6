#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "pv/int128.hpp"

namespace pv {

// Exact rational over checked 128-bit integers. Inputs in this project are
// tiny (kernel matrices, denominator-64 roundings), but every operation still
// detects overflow rather than wrapping.
struct Rational {
    i128 num = 0;
    i128 den = 1;  // > 0, gcd(num, den) == 1

    Rational() = default;
    Rational(i128 n) : num(n), den(1) {}
    Rational(i128 n, i128 d) : num(n), den(d) { normalize(); }

    static i128 checked_neg(i128 a) {
        i128 r;
        if (__builtin_sub_overflow(static_cast<i128>(0), a, &r)) throw std::overflow_error("rational overflow");
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        // run in the unsigned domain so the minimum value cannot trap
        u128 ua = a < 0 ? ~static_cast<u128>(a) + 1 : static_cast<u128>(a);
        u128 ub = b < 0 ? ~static_cast<u128>(b) + 1 : static_cast<u128>(b);
        while (ub != 0) {
            u128 t = ua % ub;
            ua = ub;
            ub = t;
        }
        if (ua >= (static_cast<u128>(1) << 127)) throw std::overflow_error("rational overflow");
        return static_cast<i128>(ua);
    }

    void normalize() {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) {
            num = checked_neg(num);
            den = checked_neg(den);
        }
        if (num == 0) {
            den = 1;
            return;
        }
        i128 g = gcd128(num, den);
        num /= g;
        den /= g;
    }

    static i128 checked_mul(i128 a, i128 b) {
        i128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }
    static i128 checked_add(i128 a, i128 b) {
        i128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                        checked_mul(a.den, b.den));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num, b.den), checked_neg(checked_mul(b.num, a.den))),
                        checked_mul(a.den, b.den));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::domain_error("rational division by zero");
        return Rational(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
    }
    Rational operator-() const {
        Rational r = *this;
        r.num = checked_neg(r.num);
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool is_zero() const { return num == 0; }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
    }
    std::string str() const {
        if (den == 1) return to_string_i128(num);
        return to_string_i128(num) + "/" + to_string_i128(den);
    }
};

// Best rational approximation of x with denominator <= max_den, by continued
// fractions (used to lift promising float subspaces to exact candidates).
inline Rational rationalize(double x, std::int64_t max_den) {
    bool neg = x < 0;
    if (neg) x = -x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        std::int64_t a = static_cast<std::int64_t>(fl);
        std::int64_t p2 = a * p1 + p0;
        std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-12) break;
        frac = 1.0 / rem;
    }
    Rational r(p1, q1 == 0 ? 1 : q1);
    if (neg) r.num = -r.num;
    return r;
}

}  // namespace pv
