// Compensated (Kahan) accumulators for real and complex sums.
//
// Oscillatory tail sums of alpha_j e^{i j eta} lose 3-4 digits at n ~ 1e5
// under naive accumulation; the compensated form keeps the error at O(eps)
// independent of the term count.

#pragma once

#include <complex>

namespace opuc {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

struct KahanComplexSum {
    KahanSum re;
    KahanSum im;

    void add(std::complex<double> value) {
        re.add(value.real());
        im.add(value.imag());
    }

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace opuc
