#pragma once

namespace pv {

// Compensated accumulator. Plain summation of ~1e6 unimodular terms loses
// roughly three digits; this keeps the error at a few ulps.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

}  // namespace pv
