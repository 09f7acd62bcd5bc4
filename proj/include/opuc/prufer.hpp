// Prufer variables (R_n, theta_n) for the monic polynomials of the rotated
// coefficient family e^{i beta} alpha_n, evaluated at z = e^{i eta}:
//
//   Phi_n(e^{i eta}, beta) = R_n exp[i (n eta + theta_n)],  R_0 = 1, theta_0 = 0.
//
// With the phase argument g_n = (n+1) eta + beta + 2 theta_n the update reads
//
//   R_{n+1}^2 / R_n^2 = 1 + |alpha_n|^2 - 2 Re(alpha_n e^{i g_n}) = |1 - alpha_n e^{i g_n}|^2
//   theta_{n+1} - theta_n = -arg(1 - alpha_n e^{i g_n}),
//
// and Re(1 - alpha_n e^{i g_n}) > 0 forces the branch |theta_{n+1} - theta_n| < pi/2.
// theta is kept unwrapped (no mod-2pi reduction): the recursion sees 2 theta_n
// only through exponentials where unwrapping is harmless, and phase-drift
// diagnostics need the unwrapped value.
//
// The oscillatory sum
//
//   A(n, eta, beta) = sum_{j<n} alpha_j e^{i g_j}
//
// accumulates alongside; residual_n = log R_n + Re A(n) stays bounded for
// square-summable coefficients, with increments O(|alpha_n|^2).

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "opuc/verblunsky.hpp"

namespace opuc {

struct RotationParams {
    double eta = 0.0;
    double beta = 0.0;

    RotationParams(double eta_angle, double beta_angle);
    RotationParams() = default;
};

struct PruferState {
    double log_radius = 0.0;  // log R_n
    double theta = 0.0;       // unwrapped
    std::int64_t n = 0;
};

// One update with the phase argument supplied directly; prufer_step derives
// g from the state, tests can force g at will.
PruferState prufer_step_with_phase(const PruferState& state, std::complex<double> alpha, double g);

PruferState prufer_step(const PruferState& state, std::complex<double> alpha_n,
                        const RotationParams& params);

// States n = 0..N.
std::vector<PruferState> evolve_prufer(const CoefficientSequence& seq, const RotationParams& params,
                                       std::int64_t N);

struct PruferFinal {
    PruferState state;
    double max_log_radius = 0.0;
    double min_log_radius = 0.0;
};

// Streaming: final state plus running extrema of log R_n, O(1) memory.
PruferFinal evolve_prufer_final(const CoefficientSequence& seq, const RotationParams& params,
                                std::int64_t N);

// A(n, eta, beta); empty sum for n = 0.
std::complex<double> accumulate_A(const CoefficientSequence& seq, const RotationParams& params,
                                  std::int64_t n);

// residual_n = log R_n + Re A(n, eta, beta) for n = 0..N.
std::vector<double> asymptotic_residual(const CoefficientSequence& seq,
                                        const RotationParams& params, std::int64_t N);

struct PruferTrajectoryRow {
    std::int64_t n = 0;
    double log_radius = 0.0;
    double theta = 0.0;
    std::complex<double> A{0.0, 0.0};
    double residual = 0.0;
};

// Everything at once for CSV emission and the identity suite.
std::vector<PruferTrajectoryRow> prufer_trajectory(const CoefficientSequence& seq,
                                                   const RotationParams& params, std::int64_t N);

struct LogRadiusExtrema {
    double final_log_radius = 0.0;
    double max_log_radius = 0.0;
    double min_log_radius = 0.0;
};

// Scan inner loop: log-radius evolution over a materialized coefficient
// block, phases tracked by incremental rotation (no per-step sincos/atan2).
// Agrees with evolve_prufer on log R to roundoff-accumulation accuracy.
LogRadiusExtrema log_radius_extrema(std::span<const std::complex<double>> alphas,
                                    const RotationParams& params);

}  // namespace opuc
