// 2x2 complex matrices, row-major [[a, b], [c, d]].
//
// The operator 2-norm uses the closed form for 2x2 matrices:
//   sigma_max^2 = (F2 + sqrt(F2^2 - 4 |det|^2)) / 2,   F2 = ||M||_F^2,
// which is branch-free and needs no iterative SVD.

#pragma once

#include <cmath>
#include <complex>

namespace opuc {

using cd = std::complex<double>;

// std::complex operator* routes through __muldc3 for NaN handling; the
// evolution loops use these raw kernels instead.
inline cd cmul(cd x, cd y) {
    return {x.real() * y.real() - x.imag() * y.imag(),
            x.real() * y.imag() + x.imag() * y.real()};
}

inline double cnorm2(cd x) { return x.real() * x.real() + x.imag() * x.imag(); }

struct Mat2 {
    cd a{1.0, 0.0};
    cd b{0.0, 0.0};
    cd c{0.0, 0.0};
    cd d{1.0, 0.0};

    static Mat2 identity() { return Mat2{}; }

    cd det() const { return cmul(a, d) - cmul(b, c); }

    double frobenius2() const { return cnorm2(a) + cnorm2(b) + cnorm2(c) + cnorm2(d); }

    double frobenius() const { return std::sqrt(frobenius2()); }

    // sigma_1^2 - sigma_2^2 via the Gram matrix M*M = [[p, r], [conj(r), q]];
    // stays accurate when the singular values coincide, where the
    // F^4 - 4|det|^2 form cancels catastrophically.
    double singular_gap() const {
        const double p = cnorm2(a) + cnorm2(c);
        const double q = cnorm2(b) + cnorm2(d);
        const cd r = cmul(std::conj(a), b) + cmul(std::conj(c), d);
        return std::sqrt((p - q) * (p - q) + 4.0 * cnorm2(r));
    }

    // Largest singular value.
    double op_norm() const { return std::sqrt(0.5 * (frobenius2() + singular_gap())); }

    Mat2 operator*(const Mat2& rhs) const {
        return Mat2{cmul(a, rhs.a) + cmul(b, rhs.c), cmul(a, rhs.b) + cmul(b, rhs.d),
                    cmul(c, rhs.a) + cmul(d, rhs.c), cmul(c, rhs.b) + cmul(d, rhs.d)};
    }

    Mat2 scaled(double s) const { return Mat2{a * s, b * s, c * s, d * s}; }
};

}  // namespace opuc
