// Test-only oracles, kept independent of the library code paths they check.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "opuc/verblunsky.hpp"

namespace oracles {

// Extended-precision plain-loop weighted energy, independent of the
// compensated double-precision production path.
inline long double weighted_energy_ld(const opuc::CoefficientSequence& seq, long double gamma,
                                      std::int64_t N) {
    long double sum = 0.0L;
    for (std::int64_t n = 1; n <= N; ++n) {
        const auto a = seq.at(n);
        const long double re = a.real(), im = a.imag();
        sum += std::pow(static_cast<long double>(n), gamma) * (re * re + im * im);
    }
    return sum;
}

// iid coefficients, modulus uniform in [0, max_modulus), phase uniform.
inline std::vector<std::complex<double>> random_coefficients(std::mt19937_64& rng, std::int64_t count,
                                                             double max_modulus) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::complex<double>> values;
    values.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const double r = max_modulus * unit(rng);
        const double phi = 2.0 * M_PI * unit(rng);
        values.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
    return values;
}

// Bernstein-Szego density 1/(2pi |phi_K(e^{i theta})|^2) for a finitely
// supported sequence, via an independent direct recurrence in long double.
inline std::complex<long double> orthonormal_value_ld(
    const std::vector<std::complex<double>>& alphas, long double theta, std::size_t degree) {
    std::complex<long double> p{1.0L, 0.0L}, q{1.0L, 0.0L};
    const std::complex<long double> z{std::cos(theta), std::sin(theta)};
    for (std::size_t j = 0; j < degree; ++j) {
        const std::complex<long double> a{alphas[j].real(), alphas[j].imag()};
        const long double rho = std::sqrt(1.0L - std::norm(a));
        const auto p1 = (z * p - std::conj(a) * q) / rho;
        const auto q1 = (q - a * z * p) / rho;
        p = p1;
        q = q1;
    }
    return p;
}

// 2D fine midpoint rule for the pair integral of |x-y|^{-s} over two
// rectangles, averaged (divided by the two widths); for separated cells.
inline double pair_integral_fine_midpoint(double c1, double w1, double c2, double w2, double s,
                                          int points) {
    const double a1 = c1 - 0.5 * w1, a2 = c2 - 0.5 * w2;
    const double hx = w1 / points, hy = w2 / points;
    long double sum = 0.0L;
    for (int i = 0; i < points; ++i) {
        const double x = a1 + (i + 0.5) * hx;
        for (int j = 0; j < points; ++j) {
            const double y = a2 + (j + 0.5) * hy;
            sum += std::pow(std::abs(x - y), -s);
        }
    }
    return static_cast<double>(sum * hx * hy / (static_cast<long double>(w1) * w2));
}

// Same-cell average of |x-y|^{-s} via the distance distribution
//   (1/w^2) int int |x-y|^{-s} = (2/w^2) int_0^w (w-t) t^{-s} dt,
// integrated on a graded mesh that resolves the t -> 0 singularity.
inline double same_cell_average_graded(double w, double s, int points) {
    long double sum = 0.0L;
    // t = w u^4 concentrates nodes near zero; dt = 4 w u^3 du.
    const double du = 1.0 / points;
    for (int i = 0; i < points; ++i) {
        const double u = (i + 0.5) * du;
        const double t = w * u * u * u * u;
        sum += (w - t) * std::pow(t, -s) * 4.0 * w * u * u * u * du;
    }
    return static_cast<double>(2.0L * sum / (static_cast<long double>(w) * w));
}

// Middle-thirds Cantor construction: the 2^depth surviving intervals of
// [0,1), returned as (start, end) pairs.
inline std::vector<std::pair<double, double>> cantor_intervals(int depth) {
    std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
    for (int level = 0; level < depth; ++level) {
        std::vector<std::pair<double, double>> next;
        next.reserve(intervals.size() * 2);
        for (const auto& [a, b] : intervals) {
            const double third = (b - a) / 3.0;
            next.emplace_back(a, a + third);
            next.emplace_back(b - third, b);
        }
        intervals = std::move(next);
    }
    return intervals;
}

}  // namespace oracles
