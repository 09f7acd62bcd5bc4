#include "opuc/prufer.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "opuc/kahan.hpp"
#include "opuc/mat2.hpp"
#include "opuc/szego.hpp"

namespace opuc {

RotationParams::RotationParams(double eta_angle, double beta_angle)
    : eta(reduce_angle(eta_angle)), beta(reduce_angle(beta_angle)) {}

namespace {

constexpr double kPi = std::numbers::pi;

// (n+1) eta reduced mod 2pi without the O(n eta) magnitude loss.
double eta_phase(std::int64_t n_plus_1, double eta) {
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    return static_cast<double>(
        std::fmod(static_cast<long double>(n_plus_1) * static_cast<long double>(eta), two_pi));
}

// Evolution state with the phase kept reduced: theta = theta_red + 2pi*winding.
// Keeping |theta_red| <= pi bounds the per-step phase rounding at O(eps)
// instead of O(|theta| eps); the unwrapped value is reconstructed on output.
struct Cursor {
    double log_radius = 0.0;
    double theta_red = 0.0;
    std::int64_t winding = 0;
    std::int64_t n = 0;

    double theta() const { return theta_red + 2.0 * kPi * static_cast<double>(winding); }

    // Returns the phase g_n used, so callers can accumulate A(n) consistently.
    double step(cd alpha, const RotationParams& params) {
        const double g = eta_phase(n + 1, params.eta) + params.beta + 2.0 * theta_red;
        if (alpha.real() != 0.0 || alpha.imag() != 0.0) {
            const cd w = cd{1.0, 0.0} - cmul(alpha, cd{std::cos(g), std::sin(g)});
            const double q = cnorm2(w);
            assert(q > 0.0);
            log_radius += 0.5 * std::log(q);
            theta_red -= std::atan2(w.imag(), w.real());
            if (theta_red > kPi) {
                theta_red -= 2.0 * kPi;
                ++winding;
            } else if (theta_red < -kPi) {
                theta_red += 2.0 * kPi;
                --winding;
            }
        }
        ++n;
        return g;
    }
};

}  // namespace

PruferState prufer_step_with_phase(const PruferState& state, cd alpha, double g) {
    if (!(cnorm2(alpha) < 1.0)) throw std::invalid_argument("coefficient modulus must be < 1");
    const cd w = cd{1.0, 0.0} - cmul(alpha, cd{std::cos(g), std::sin(g)});
    const double q = cnorm2(w);  // = |1 - alpha e^{ig}|^2 > 0 for |alpha| < 1
    assert(q > 0.0);
    PruferState next;
    next.log_radius = state.log_radius + 0.5 * std::log(q);
    next.theta = state.theta - std::atan2(w.imag(), w.real());
    next.n = state.n + 1;
    return next;
}

PruferState prufer_step(const PruferState& state, cd alpha_n, const RotationParams& params) {
    // g = (n+1) eta + beta + 2 theta, reduced in extended precision so the
    // O(n) magnitude does not eat the phase accuracy of long evolutions.
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    const long double g_full = static_cast<long double>(state.n + 1) * params.eta + params.beta +
                               2.0L * static_cast<long double>(state.theta);
    const double g = static_cast<double>(std::fmod(g_full, two_pi));
    return prufer_step_with_phase(state, alpha_n, g);
}

std::vector<PruferState> evolve_prufer(const CoefficientSequence& seq,
                                       const RotationParams& params, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    std::vector<PruferState> states;
    states.reserve(static_cast<std::size_t>(N) + 1);
    states.push_back(PruferState{});
    Cursor cursor;
    for (std::int64_t n = 0; n < N; ++n) {
        cursor.step(seq.at(n), params);
        states.push_back(PruferState{cursor.log_radius, cursor.theta(), cursor.n});
    }
    return states;
}

PruferFinal evolve_prufer_final(const CoefficientSequence& seq, const RotationParams& params,
                                std::int64_t N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    PruferFinal out;
    Cursor cursor;
    for (std::int64_t n = 0; n < N; ++n) {
        cursor.step(seq.at(n), params);
        out.max_log_radius = std::max(out.max_log_radius, cursor.log_radius);
        out.min_log_radius = std::min(out.min_log_radius, cursor.log_radius);
    }
    out.state = PruferState{cursor.log_radius, cursor.theta(), cursor.n};
    return out;
}

cd accumulate_A(const CoefficientSequence& seq, const RotationParams& params, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    KahanComplexSum sum;
    Cursor cursor;
    for (std::int64_t j = 0; j < n; ++j) {
        const cd alpha = seq.at(j);
        const double g = cursor.step(alpha, params);
        sum.add(cmul(alpha, cd{std::cos(g), std::sin(g)}));
    }
    return sum.value();
}

std::vector<double> asymptotic_residual(const CoefficientSequence& seq,
                                        const RotationParams& params, std::int64_t N) {
    std::vector<double> residuals;
    residuals.reserve(static_cast<std::size_t>(N) + 1);
    for (const auto& row : prufer_trajectory(seq, params, N)) residuals.push_back(row.residual);
    return residuals;
}

std::vector<PruferTrajectoryRow> prufer_trajectory(const CoefficientSequence& seq,
                                                   const RotationParams& params, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    std::vector<PruferTrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(N) + 1);
    Cursor cursor;
    KahanComplexSum A;
    rows.push_back(PruferTrajectoryRow{});
    for (std::int64_t n = 0; n < N; ++n) {
        const cd alpha = seq.at(n);
        const double g = cursor.step(alpha, params);
        A.add(cmul(alpha, cd{std::cos(g), std::sin(g)}));
        const cd An = A.value();
        rows.push_back(
            {cursor.n, cursor.log_radius, cursor.theta(), An, cursor.log_radius + An.real()});
    }
    return rows;
}

LogRadiusExtrema log_radius_extrema(std::span<const cd> alphas, const RotationParams& params) {
    LogRadiusExtrema out;
    // u tracks e^{i theta_n} up to a positive real factor; v tracks
    // e^{i (n+1) eta}; cb = e^{i beta}.  e^{i g_n} = v cb u^2 / |u|^2.
    cd u{1.0, 0.0};
    cd v{std::cos(params.eta), std::sin(params.eta)};
    const cd z_eta = v;
    const cd cb{std::cos(params.beta), std::sin(params.beta)};
    double log_r = 0.0;
    std::int64_t since_renorm = 0;

    for (const cd alpha : alphas) {
        if (alpha.real() != 0.0 || alpha.imag() != 0.0) {
            double nu = cnorm2(u);
            if (nu < 1e-120 || nu > 1e120) {  // |u| drifts by |w| each step
                u = u * (1.0 / std::sqrt(nu));
                nu = 1.0;
            }
            const cd u2 = cmul(u, u);
            const cd e_ig = cmul(cmul(v, cb), u2) * (1.0 / nu);
            const cd w = cd{1.0, 0.0} - cmul(alpha, e_ig);
            const double q = cnorm2(w);
            log_r += 0.5 * std::log(q);
            u = cmul(u, cd{w.real(), -w.imag()});
            if (log_r > out.max_log_radius) out.max_log_radius = log_r;
            else if (log_r < out.min_log_radius) out.min_log_radius = log_r;
        }
        v = cmul(v, z_eta);
        if (++since_renorm == 4096) {
            since_renorm = 0;
            v = v * (1.0 / std::sqrt(cnorm2(v)));
        }
    }
    out.final_log_radius = log_r;
    return out;
}

}  // namespace opuc
