// Verblunsky coefficient sequences {alpha_n} in the open unit disk, plus
// the summability diagnostics used by the dimension-bound machinery:
//
//   weighted energy      E_gamma(N) = sum_{n=1}^{N} n^gamma |alpha_n|^2
//   dyadic l1 sums       sum over blocks [2^k, 2^{k+1}) of n^{-(d/2+eps/4)} |alpha_n|,
//                        d = 1 - gamma, each block paired with its
//                        Cauchy-Schwarz majorant
//   log-divergence check sum n^tau |alpha_n|^2 against the blockwise
//                        majorants 2^{-(gamma-tau) k} * (block gamma-energy)
//
// Convention: the n = 0 term of the weighted energy carries weight
// 0^gamma := 0, so it never contributes.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace opuc {

enum class SequenceKind {
    Zero,
    Constant,
    PowerDecay,
    RandomPhasePowerDecay,
    Sparse,
    ExplicitList,
};

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& name);

// Largest modulus a coefficient may take; keeps rho_n = sqrt(1 - |alpha_n|^2)
// strictly positive in floating point.
inline constexpr double kAmplitudeCap = 1.0 - 1e-12;

// Immutable after construction; at(n) is a pure function of (sequence, n)
// and safe to call concurrently.
class CoefficientSequence {
  public:
    // Generator kinds. amplitude in [0, 1-1e-12); exponent > 0 is the decay
    // power p in |alpha_n| = amplitude * (n+1)^{-p}; gamma_target records the
    // intended decay class gamma; seed keys the counter-based random phases.
    CoefficientSequence(SequenceKind kind, double amplitude, double exponent,
                        double gamma_target, std::uint64_t seed);

    // Explicit finite list; every value must have modulus < 1-1e-12.
    explicit CoefficientSequence(std::vector<std::complex<double>> values,
                                 double gamma_target = 0.0);

    static CoefficientSequence zero() { return {SequenceKind::Zero, 0.0, 1.0, 0.0, 0}; }

    std::complex<double> at(std::int64_t n) const;

    SequenceKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double exponent() const { return exponent_; }
    double gamma_target() const { return gamma_target_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::complex<double>>& explicit_values() const { return explicit_; }

    // Number of addressable indices; -1 when unbounded.
    std::int64_t length() const;

    // Flat key=value form (kind, amplitude, exponent, gamma_target, seed,
    // explicit values as re,im pairs).
    std::map<std::string, std::string> to_config() const;
    static CoefficientSequence from_config(const std::map<std::string, std::string>& config);

  private:
    SequenceKind kind_;
    double amplitude_ = 0.0;
    double exponent_ = 1.0;
    double gamma_target_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<std::complex<double>> explicit_;
};

// alpha_0 .. alpha_{n_max}; deterministic per (kind, amplitude, exponent, seed).
std::vector<std::complex<double>> materialize(const CoefficientSequence& seq, std::int64_t n_max);

// sum_{n=1}^{N} n^gamma |alpha_n|^2 (n = 0 contributes 0). gamma in (0,1), N >= 1.
double weighted_energy(const CoefficientSequence& seq, double gamma, std::int64_t N);

struct DyadicBlock {
    int k = 0;            // block [2^k, 2^{k+1})
    double l1_sum = 0.0;  // sum over the block of n^{-(d/2+eps/4)} |alpha_n|
    double majorant = 0.0;  // (sum n^{-(1+eps/2)})^{1/2} (sum n^gamma |alpha_n|^2)^{1/2}
};

struct DecayDiagnostics {
    double gamma = 0.0;
    double epsilon = 0.0;
    // (N, weighted gamma-energy up to N) at the block boundaries N = 2^k.
    std::vector<std::pair<std::int64_t, double>> partial_sums;
    // (K, sum_{n<=2^K} n^{-(d/2+eps/4)} |alpha_n|), cumulative and nondecreasing.
    std::vector<std::pair<int, double>> dyadic_l1;
    std::vector<DyadicBlock> blocks;
};

// Blockwise Cauchy-Schwarz data over blocks k = 0 .. K-1.
DecayDiagnostics dyadic_l1_sum(const CoefficientSequence& seq, double gamma, double epsilon,
                               int K);

struct LogDivergenceCheck {
    double lhs = 0.0;                // sum_{n=1}^{N} n^tau |alpha_n|^2
    std::vector<double> majorants;   // 2^{-(gamma-tau) k} * (block gamma-energy), per block
};

// Requires tau < gamma; blocks cover [1, N].
LogDivergenceCheck check_log_divergence(const CoefficientSequence& seq, double gamma, double tau,
                                        std::int64_t N);

}  // namespace opuc
