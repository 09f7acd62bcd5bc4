// Oscillatory tail transforms and s-energies.
//
// Tail transform (truncated):   hat_alpha_N(eta, n) = sum_{j=n}^{N} alpha_j e^{i j eta},
// with the exact telescoping     alpha_j e^{i j eta} = hat_alpha_N(j) - hat_alpha_N(j+1),
// which turns A(n, eta, beta) into a summation-by-parts form whose agreement
// with the direct sum is an algebraic identity (zero up to roundoff).
//
// s-energy of a cell measure nu (uniform mass on intervals):
//
//   E_s(nu) = integral integral (1 + |x-y|^{-s}) dnu dnu,   s in [0, 1).
//
// Same-cell and overlapping pairs use the closed-form double integral of
// |x-y|^{-s} over rectangles (second antiderivative |t|^{2-s}/((1-s)(2-s))),
// separated pairs use midpoint cubature with adaptive refinement.
//
// All oscillatory sums use compensated accumulation.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "opuc/prufer.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

struct TailRecord {
    double eta = 0.0;
    std::int64_t n = 0;
    std::int64_t N_trunc = -1;
    std::complex<double> value{0.0, 0.0};
};

// sum_{j=n}^{N_trunc} alpha_j e^{i j eta}; empty (zero) when N_trunc = n-1.
TailRecord fourier_tail(const CoefficientSequence& seq, double eta, std::int64_t n,
                        std::int64_t N_trunc);

// All suffix tails at once: entry j holds hat_alpha_N(eta, j) for j = 0..N+1
// (entry N+1 is zero), accumulated backward in one compensated pass.
std::vector<std::complex<double>> suffix_tails(const CoefficientSequence& seq, double eta,
                                               std::int64_t N);

// |direct A(n) - summation-by-parts rearrangement| at truncation N_trunc >= n.
double abel_identity_check(const CoefficientSequence& seq, const RotationParams& params,
                           std::int64_t n, std::int64_t N_trunc);

// max over 1 <= j <= N of |e^{i gamma_j} - e^{i (gamma_{j-1}+eta)}| / |alpha_{j-1}|,
// 0/0 counted as 0.  The numerator is 2 |sin(theta_j - theta_{j-1})|.
double phase_increment_bound_check(const CoefficientSequence& seq, const RotationParams& params,
                                   std::int64_t N);

struct MeasureCell {
    double center = 0.0;  // in [0, 2pi)
    double width = 0.0;   // > 0; atoms are not representable (infinite s-energy)
    double mass = 0.0;    // >= 0
};

struct DiscreteMeasure {
    std::vector<MeasureCell> cells;

    // Throws unless widths > 0, masses >= 0, and total mass is positive.
    void validate() const;
    double total_mass() const;
};

// E_s(nu) for s in [0, 1).
double s_energy(const DiscreteMeasure& nu, double s);

// LHS^2 / RHS for the s-energy inequality, with
//   LHS = integral |sum_{n=0}^{m(eta)} c_n e^{-i n eta}| dnu(eta)
//   RHS = E_s(nu) * sum (n+1)^{1-s} |c_n|^2,
// m piecewise constant per cell (m.size() == nu.cells.size()).
// Returns 0 when both sides vanish.
double sz_inequality_ratio(std::span<const std::complex<double>> c,
                           std::span<const std::int64_t> m, const DiscreteMeasure& nu, double s);

}  // namespace opuc
