#include "opuc/tails.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "opuc/kahan.hpp"
#include "opuc/mat2.hpp"

namespace opuc {

namespace {

cd unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// ---- adaptive quadrature helpers -------------------------------------------

// Midpoint cubature over an m x m uniform grid.
template <typename F>
double midpoint_grid(const F& f, double x0, double x1, double y0, double y1, int m) {
    const double hx = (x1 - x0) / m;
    const double hy = (y1 - y0) / m;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = x0 + (i + 0.5) * hx;
        double row = 0.0;
        for (int j = 0; j < m; ++j) row += f(x, y0 + (j + 0.5) * hy);
        sum += row;
    }
    return sum * hx * hy;
}

// Doubling midpoint refinement with Richardson extrapolation; stops once the
// extrapolated value moves by less than rel_tol.  Intended for integrands
// that are smooth on the box (separated cell pairs).
template <typename F>
double adaptive_midpoint_2d(const F& f, double x0, double x1, double y0, double y1,
                            double rel_tol) {
    double prev = midpoint_grid(f, x0, x1, y0, y1, 2);
    double prev_extrap = prev;
    for (int m = 4; m <= 512; m *= 2) {
        const double value = midpoint_grid(f, x0, x1, y0, y1, m);
        const double extrap = value + (value - prev) / 3.0;
        if (std::abs(extrap - prev_extrap) <= rel_tol * std::abs(extrap)) return extrap;
        prev = value;
        prev_extrap = extrap;
    }
    return prev_extrap;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

// ---- s-energy cell pair integrals -------------------------------------------

// Second antiderivative of |t|^{-s} for s in [0,1).
double second_antiderivative(double t, double s) {
    return std::pow(std::abs(t), 2.0 - s) / ((1.0 - s) * (2.0 - s));
}

// (1/(w_i w_j)) * double integral of |x-y|^{-s} over the two intervals,
// closed form; valid for any overlap configuration when s < 1.
double pair_integral_closed(const MeasureCell& ci, const MeasureCell& cj, double s) {
    const double a1 = ci.center - 0.5 * ci.width, b1 = ci.center + 0.5 * ci.width;
    const double a2 = cj.center - 0.5 * cj.width, b2 = cj.center + 0.5 * cj.width;
    const double v = second_antiderivative(b1 - a2, s) + second_antiderivative(a1 - b2, s) -
                     second_antiderivative(b1 - b2, s) - second_antiderivative(a1 - a2, s);
    return v / (ci.width * cj.width);
}

double pair_integral_midpoint(const MeasureCell& ci, const MeasureCell& cj, double s) {
    const double a1 = ci.center - 0.5 * ci.width, b1 = ci.center + 0.5 * ci.width;
    const double a2 = cj.center - 0.5 * cj.width, b2 = cj.center + 0.5 * cj.width;
    double v;
    if (s == 0.5) {
        v = adaptive_midpoint_2d(
            [](double x, double y) { return 1.0 / std::sqrt(std::abs(x - y)); }, a1, b1, a2, b2,
            1e-8);
    } else {
        v = adaptive_midpoint_2d(
            [s](double x, double y) { return std::pow(std::abs(x - y), -s); }, a1, b1, a2, b2,
            1e-8);
    }
    return v / (ci.width * cj.width);
}

// Gap between the two intervals; <= 0 means overlap or touching.
double cell_gap(const MeasureCell& ci, const MeasureCell& cj) {
    return std::abs(ci.center - cj.center) - 0.5 * (ci.width + cj.width);
}

// Midpoint refinement is reserved for pairs whose gap exceeds the summed
// widths; anything closer counts as not well-separated and takes the exact
// closed form, which also bounds the refinement depth.
bool well_separated(const MeasureCell& ci, const MeasureCell& cj) {
    return cell_gap(ci, cj) > ci.width + cj.width;
}

}  // namespace

TailRecord fourier_tail(const CoefficientSequence& seq, double eta, std::int64_t n,
                        std::int64_t N_trunc) {
    if (n < 0) throw std::invalid_argument("tail start must be nonnegative");
    if (N_trunc < n - 1) throw std::invalid_argument("truncation must be >= n-1");
    KahanComplexSum sum;
    for (std::int64_t j = n; j <= N_trunc; ++j)
        sum.add(cmul(seq.at(j), unit_phase(static_cast<double>(j) * eta)));
    return TailRecord{eta, n, N_trunc, sum.value()};
}

std::vector<cd> suffix_tails(const CoefficientSequence& seq, double eta, std::int64_t N) {
    if (N < -1) throw std::invalid_argument("N must be >= -1");
    std::vector<cd> tails(static_cast<std::size_t>(N) + 2);
    KahanComplexSum sum;
    for (std::int64_t j = N; j >= 0; --j) {
        sum.add(cmul(seq.at(j), unit_phase(static_cast<double>(j) * eta)));
        tails[static_cast<std::size_t>(j)] = sum.value();
    }
    return tails;
}

double abel_identity_check(const CoefficientSequence& seq, const RotationParams& params,
                           std::int64_t n, std::int64_t N_trunc) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (N_trunc < n) throw std::invalid_argument("truncation must be >= n");

    const cd direct = accumulate_A(seq, params, n);

    const auto tails = suffix_tails(seq, params.eta, N_trunc);
    const auto states = evolve_prufer(seq, params, std::max<std::int64_t>(n - 1, 0));
    KahanComplexSum rearranged;
    for (std::int64_t j = 0; j < n; ++j) {
        const cd diff = tails[static_cast<std::size_t>(j)] - tails[static_cast<std::size_t>(j) + 1];
        // gamma_j - j eta = eta + beta + 2 theta_j
        const double phase = params.eta + params.beta + 2.0 * states[static_cast<std::size_t>(j)].theta;
        rearranged.add(cmul(diff, unit_phase(phase)));
    }
    return std::abs(direct - rearranged.value());
}

double phase_increment_bound_check(const CoefficientSequence& seq, const RotationParams& params,
                                   std::int64_t N) {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    const auto states = evolve_prufer(seq, params, N);
    double max_ratio = 0.0;
    for (std::int64_t j = 1; j <= N; ++j) {
        const double den = std::abs(seq.at(j - 1));
        if (den == 0.0) continue;  // theta unchanged, numerator vanishes too
        const double dtheta = states[static_cast<std::size_t>(j)].theta -
                              states[static_cast<std::size_t>(j - 1)].theta;
        const double num = 2.0 * std::abs(std::sin(dtheta));
        max_ratio = std::max(max_ratio, num / den);
    }
    return max_ratio;
}

void DiscreteMeasure::validate() const {
    double total = 0.0;
    for (const auto& cell : cells) {
        if (!(cell.width > 0.0)) throw std::invalid_argument("cell width must be positive");
        if (!(cell.mass >= 0.0)) throw std::invalid_argument("cell mass must be nonnegative");
        total += cell.mass;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::invalid_argument("total mass must be positive and finite");
}

double DiscreteMeasure::total_mass() const {
    KahanSum total;
    for (const auto& cell : cells) total.add(cell.mass);
    return total.value();
}

double s_energy(const DiscreteMeasure& nu, double s) {
    if (!(s >= 0.0 && s < 1.0))
        throw std::invalid_argument("s must lie in [0,1) for cell measures");
    nu.validate();

    const double mass = nu.total_mass();
    KahanSum kernel_part;  // double integral of |x-y|^{-s}
    const std::size_t count = nu.cells.size();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& ci = nu.cells[i];
        if (ci.mass == 0.0) continue;
        if (s > 0.0) kernel_part.add(ci.mass * ci.mass * pair_integral_closed(ci, ci, s));
        else kernel_part.add(ci.mass * ci.mass);
        for (std::size_t j = i + 1; j < count; ++j) {
            const auto& cj = nu.cells[j];
            if (cj.mass == 0.0) continue;
            double integral;
            if (s == 0.0) integral = 1.0;
            else if (well_separated(ci, cj)) integral = pair_integral_midpoint(ci, cj, s);
            else integral = pair_integral_closed(ci, cj, s);
            kernel_part.add(2.0 * ci.mass * cj.mass * integral);
        }
    }
    return mass * mass + kernel_part.value();
}

double sz_inequality_ratio(std::span<const cd> c, std::span<const std::int64_t> m,
                           const DiscreteMeasure& nu, double s) {
    if (m.size() != nu.cells.size())
        throw std::invalid_argument("need one cutoff per measure cell");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    nu.validate();

    // LHS: cellwise quadrature of |sum_{n<=m_i} c_n e^{-i n eta}|.
    KahanSum lhs_sum;
    for (std::size_t i = 0; i < nu.cells.size(); ++i) {
        const auto& cell = nu.cells[i];
        if (cell.mass == 0.0) continue;
        const std::int64_t cutoff =
            std::min<std::int64_t>(m[i], static_cast<std::int64_t>(c.size()) - 1);
        if (cutoff < 0) continue;
        auto partial_modulus = [&c, cutoff](double eta) {
            KahanComplexSum p;
            const cd step = unit_phase(-eta);
            cd rot{1.0, 0.0};
            for (std::int64_t k = 0; k <= cutoff; ++k) {
                p.add(cmul(c[static_cast<std::size_t>(k)], rot));
                rot = cmul(rot, step);
            }
            return std::abs(p.value());
        };
        const double a = cell.center - 0.5 * cell.width;
        const double b = cell.center + 0.5 * cell.width;
        lhs_sum.add(cell.mass / cell.width * adaptive_simpson(partial_modulus, a, b, 1e-9));
    }
    const double lhs = lhs_sum.value();

    KahanSum weight;
    for (std::size_t k = 0; k < c.size(); ++k)
        weight.add(std::pow(static_cast<double>(k) + 1.0, 1.0 - s) * cnorm2(c[k]));
    const double rhs = s_energy(nu, s) * weight.value();

    if (rhs == 0.0) {
        if (lhs > 0.0)
            throw std::logic_error("zero RHS with nonzero LHS: energy of a positive measure is positive");
        return 0.0;
    }
    return lhs * lhs / rhs;
}

}  // namespace opuc
