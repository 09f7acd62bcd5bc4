// Szego recurrence at a fixed point z = e^{i eta} on the unit circle.
//
// One-step factor (orthonormal form), rho = (1 - |alpha|^2)^{1/2}:
//
//   A(alpha, z) = (1/rho) [ z        -conj(alpha) ]
//                         [ -alpha z  1           ]
//
//   (phi_{n+1}, phi*_{n+1})^T = A(alpha_n, z) (phi_n, phi*_n)^T,  phi_0 = phi*_0 = 1.
//
// Second-kind polynomials evolve the vector (psi_n, -psi*_n) with the same
// factors from (1, -1); equivalently they are first-kind polynomials of the
// flipped coefficients -alpha_n.
//
// The transfer matrix
//
//   T_n(z) = 1/2 [ phi_n + psi_n    phi_n - psi_n  ]
//                [ phi*_n - psi*_n  phi*_n + psi*_n ]
//
// equals the ordered product A(alpha_{n-1}, z) ... A(alpha_0, z), T_0 = I,
// with det T_n = z^n.  Exponential norm growth overflows doubles near
// n ~ 1e3, so the streaming evolutions below renormalize each step and
// carry a log scale; determinants are accumulated factor by factor, where
// they stay O(1).
//
// Evaluation is pointwise in z; coefficient vectors of the polynomials are
// never formed (the scanner only needs values on the circle, O(n) a point).

#pragma once

#include <complex>
#include <cstdint>

#include "opuc/mat2.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

struct UnitCirclePoint {
    double eta = 0.0;  // z = e^{i eta}, eta reduced to [0, 2pi)

    explicit UnitCirclePoint(double angle);
    UnitCirclePoint() = default;

    cd value() const { return {std::cos(eta), std::sin(eta)}; }
};

// Reduce an angle to [0, 2pi).
double reduce_angle(double angle);

enum class PolynomialKind { First, Second };

struct PolynomialPairState {
    PolynomialKind kind = PolynomialKind::First;
    cd value{1.0, 0.0};       // phi_n(z) or psi_n(z)
    cd star_value{1.0, 0.0};  // phi*_n(z) or psi*_n(z), sign convention resolved
    std::int64_t n = 0;
};

// Requires |alpha| < 1; det equals z in exact arithmetic.
Mat2 one_step_matrix(cd alpha, UnitCirclePoint z);

// Plain evolution; entries overflow for strongly coupled long horizons,
// use ScaledPairEvolution there.
PolynomialPairState evolve_pair(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t n,
                                PolynomialKind kind);

// T_n(z) assembled from the evolved (phi, psi) pairs per the definition; the
// ordered one-step product is the independent route (TransferEvolution).
Mat2 transfer_matrix(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t n);

// (value, star) pair with per-step renormalization and accumulated log scale.
// monic = true drops the 1/rho factor (monic recurrence).
class ScaledPairEvolution {
  public:
    ScaledPairEvolution(UnitCirclePoint z, PolynomialKind kind, bool monic = false);

    void step(cd alpha);

    std::int64_t n() const { return n_; }
    double log_scale() const { return log_scale_; }
    // Normalized representatives; true values carry the factor exp(log_scale).
    cd scaled_value() const { return p_; }
    cd scaled_star() const { return kind_ == PolynomialKind::Second ? -q_ : q_; }

    double log_abs_value() const { return log_scale_ + 0.5 * std::log(cnorm2(p_)); }
    double log_abs_star() const { return log_scale_ + 0.5 * std::log(cnorm2(q_)); }

  private:
    cd z_;
    PolynomialKind kind_;
    bool monic_;
    cd p_{1.0, 0.0};
    cd q_{1.0, 0.0};  // internally -psi* for the second kind
    double log_scale_ = 0.0;
    std::int64_t n_ = 0;
};

// Ordered product of one-step factors, renormalized to unit Frobenius norm
// every step; log_scale accumulates the scales.  The determinant is
// accumulated from the entrywise one-step determinants, which keeps its
// modulus O(1) no matter how the norms grow.
class TransferEvolution {
  public:
    explicit TransferEvolution(UnitCirclePoint z);

    void step(cd alpha);

    std::int64_t n() const { return n_; }

    // log ||T_n|| (operator 2-norm).
    double log_norm() const;

    // det T_n; modulus stays near 1, no overflow.
    cd det() const { return det_acc_; }

    // Running sup over 0 <= m <= n of ||T_m||, and the first m attaining it.
    double sup_log_norm() const { return sup_log_; }
    std::int64_t argmax() const { return argmax_; }

    double log_scale() const { return log_scale_; }
    const Mat2& normalized() const { return m_; }

  private:
    cd z_;
    Mat2 m_;
    double log_scale_;
    cd det_acc_{1.0, 0.0};
    std::int64_t n_ = 0;
    double sup_log_ = 0.0;
    std::int64_t argmax_ = 0;
};

struct SupNormResult {
    double sup_norm = 1.0;      // exp(sup_log_norm); +inf when past double range
    double sup_log_norm = 0.0;  // always finite
    std::int64_t argmax_n = 0;
};

// max_{0 <= n <= N} ||T_n(z)|| in one streaming pass.
SupNormResult sup_norm_up_to(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t N);

}  // namespace opuc
