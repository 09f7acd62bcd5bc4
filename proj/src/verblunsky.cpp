#include "opuc/verblunsky.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "opuc/kahan.hpp"
#include "opuc/rng.hpp"

namespace opuc {

namespace {

bool is_power_of_two_minus_one(std::int64_t n) {
    // n = 2^k - 1  <=>  (n+1) & n == 0
    return ((n + 1) & n) == 0;
}

int log2_floor(std::int64_t n) {
    int k = 0;
    while (n >>= 1) ++k;
    return k;
}

}  // namespace

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::Zero: return "zero";
        case SequenceKind::Constant: return "constant";
        case SequenceKind::PowerDecay: return "power-decay";
        case SequenceKind::RandomPhasePowerDecay: return "random-phase-power-decay";
        case SequenceKind::Sparse: return "sparse";
        case SequenceKind::ExplicitList: return "explicit-list";
    }
    throw std::logic_error("unhandled SequenceKind");
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    if (name == "zero") return SequenceKind::Zero;
    if (name == "constant") return SequenceKind::Constant;
    if (name == "power-decay") return SequenceKind::PowerDecay;
    if (name == "random-phase-power-decay") return SequenceKind::RandomPhasePowerDecay;
    if (name == "sparse") return SequenceKind::Sparse;
    if (name == "explicit-list") return SequenceKind::ExplicitList;
    throw std::invalid_argument("unknown sequence kind: " + name);
}

CoefficientSequence::CoefficientSequence(SequenceKind kind, double amplitude, double exponent,
                                         double gamma_target, std::uint64_t seed)
    : kind_(kind),
      amplitude_(amplitude),
      exponent_(exponent),
      gamma_target_(gamma_target),
      seed_(seed) {
    if (kind == SequenceKind::ExplicitList)
        throw std::invalid_argument("explicit-list requires the value-list constructor");
    if (!(amplitude >= 0.0) || amplitude >= kAmplitudeCap)
        throw std::invalid_argument("amplitude must lie in [0, 1-1e-12)");
    if (!(exponent > 0.0)) throw std::invalid_argument("exponent must be positive");
}

CoefficientSequence::CoefficientSequence(std::vector<std::complex<double>> values,
                                         double gamma_target)
    : kind_(SequenceKind::ExplicitList), gamma_target_(gamma_target), explicit_(std::move(values)) {
    for (const auto& v : explicit_) {
        if (!(std::abs(v) < kAmplitudeCap))
            throw std::invalid_argument("explicit coefficient with modulus >= 1-1e-12");
    }
}

std::complex<double> CoefficientSequence::at(std::int64_t n) const {
    if (n < 0) throw std::out_of_range("coefficient index must be nonnegative");
    switch (kind_) {
        case SequenceKind::Zero:
            return {0.0, 0.0};
        case SequenceKind::Constant:
            return {amplitude_, 0.0};
        case SequenceKind::PowerDecay:
            return {amplitude_ * std::pow(static_cast<double>(n) + 1.0, -exponent_), 0.0};
        case SequenceKind::RandomPhasePowerDecay: {
            const double r = amplitude_ * std::pow(static_cast<double>(n) + 1.0, -exponent_);
            const double phase =
                2.0 * std::numbers::pi * uniform_unit(seed_, static_cast<std::uint64_t>(n));
            return {r * std::cos(phase), r * std::sin(phase)};
        }
        case SequenceKind::Sparse: {
            // Support on n = 2^k - 1, modulus amplitude * (k+1)^{-exponent}.
            if (!is_power_of_two_minus_one(n)) return {0.0, 0.0};
            const int k = log2_floor(n + 1);
            return {amplitude_ * std::pow(static_cast<double>(k) + 1.0, -exponent_), 0.0};
        }
        case SequenceKind::ExplicitList:
            if (static_cast<std::size_t>(n) >= explicit_.size())
                throw std::out_of_range("explicit-list index past end of list");
            return explicit_[static_cast<std::size_t>(n)];
    }
    throw std::logic_error("unhandled SequenceKind");
}

std::int64_t CoefficientSequence::length() const {
    return kind_ == SequenceKind::ExplicitList ? static_cast<std::int64_t>(explicit_.size()) : -1;
}

std::map<std::string, std::string> CoefficientSequence::to_config() const {
    std::map<std::string, std::string> config;
    config["seq-kind"] = to_string(kind_);
    std::ostringstream num;
    num.precision(17);
    auto put = [&num, &config](const std::string& key, double v) {
        num.str("");
        num << v;
        config[key] = num.str();
    };
    put("amplitude", amplitude_);
    put("exponent", exponent_);
    put("gamma-target", gamma_target_);
    config["seed"] = std::to_string(seed_);
    if (kind_ == SequenceKind::ExplicitList) {
        num.str("");
        for (std::size_t i = 0; i < explicit_.size(); ++i) {
            if (i) num << ';';
            num << explicit_[i].real() << ',' << explicit_[i].imag();
        }
        config["explicit"] = num.str();
    }
    return config;
}

CoefficientSequence CoefficientSequence::from_config(
    const std::map<std::string, std::string>& config) {
    auto get = [&config](const std::string& key, const std::string& fallback) {
        auto it = config.find(key);
        return it == config.end() ? fallback : it->second;
    };
    const SequenceKind kind = sequence_kind_from_string(get("seq-kind", "zero"));
    if (kind == SequenceKind::ExplicitList) {
        std::vector<std::complex<double>> values;
        std::istringstream in(get("explicit", ""));
        std::string pair;
        while (std::getline(in, pair, ';')) {
            const auto comma = pair.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("explicit values must be re,im pairs");
            values.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
        }
        return CoefficientSequence(std::move(values), std::stod(get("gamma-target", "0")));
    }
    return CoefficientSequence(kind, std::stod(get("amplitude", "0")),
                               std::stod(get("exponent", "1")),
                               std::stod(get("gamma-target", "0")),
                               std::stoull(get("seed", "0")));
}

std::vector<std::complex<double>> materialize(const CoefficientSequence& seq, std::int64_t n_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    if (seq.length() >= 0 && n_max >= seq.length())
        throw std::out_of_range("n_max past end of explicit list");
    std::vector<std::complex<double>> values(static_cast<std::size_t>(n_max) + 1);
    for (std::int64_t n = 0; n <= n_max; ++n) values[static_cast<std::size_t>(n)] = seq.at(n);
    return values;
}

double weighted_energy(const CoefficientSequence& seq, double gamma, std::int64_t N) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    KahanSum sum;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double a2 = std::norm(seq.at(n));
        if (a2 != 0.0) sum.add(std::pow(static_cast<double>(n), gamma) * a2);
    }
    return sum.value();
}

DecayDiagnostics dyadic_l1_sum(const CoefficientSequence& seq, double gamma, double epsilon,
                               int K) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (K < 1) throw std::invalid_argument("K must be >= 1");

    const double d = 1.0 - gamma;
    const double l1_exp = -(d / 2.0 + epsilon / 4.0);
    const double weight_exp = -(1.0 + epsilon / 2.0);

    DecayDiagnostics diag;
    diag.gamma = gamma;
    diag.epsilon = epsilon;

    KahanSum cumulative_l1;
    KahanSum cumulative_energy;

    for (int k = 0; k < K; ++k) {
        const std::int64_t lo = std::int64_t{1} << k;
        const std::int64_t hi = std::int64_t{1} << (k + 1);
        KahanSum block_l1, block_weight, block_energy;
        for (std::int64_t n = lo; n < hi; ++n) {
            const double nn = static_cast<double>(n);
            const double mod = std::abs(seq.at(n));
            block_weight.add(std::pow(nn, weight_exp));
            if (mod != 0.0) {
                block_l1.add(std::pow(nn, l1_exp) * mod);
                block_energy.add(std::pow(nn, gamma) * mod * mod);
            }
        }
        cumulative_l1.add(block_l1.value());
        cumulative_energy.add(block_energy.value());
        diag.blocks.push_back(
            {k, block_l1.value(), std::sqrt(block_weight.value() * block_energy.value())});
        // Block ends: N = 2^{k+1} - 1 covers all of blocks 0..k.
        diag.partial_sums.emplace_back(hi - 1, cumulative_energy.value());
        diag.dyadic_l1.emplace_back(k + 1, cumulative_l1.value());
    }
    return diag;
}

LogDivergenceCheck check_log_divergence(const CoefficientSequence& seq, double gamma, double tau,
                                        std::int64_t N) {
    if (!(tau < gamma)) throw std::invalid_argument("tau must be < gamma");
    if (N < 2) throw std::invalid_argument("N must be >= 2");

    const double delta = gamma - tau;
    LogDivergenceCheck check;
    KahanSum lhs;
    for (int k = 0; (std::int64_t{1} << k) <= N; ++k) {
        const std::int64_t lo = std::int64_t{1} << k;
        const std::int64_t hi = std::min(N + 1, std::int64_t{1} << (k + 1));
        KahanSum block_energy;
        for (std::int64_t n = lo; n < hi; ++n) {
            const double nn = static_cast<double>(n);
            const double a2 = std::norm(seq.at(n));
            if (a2 == 0.0) continue;
            lhs.add(std::pow(nn, tau) * a2);
            block_energy.add(std::pow(nn, gamma) * a2);
        }
        check.majorants.push_back(std::exp2(-delta * k) * block_energy.value());
    }
    check.lhs = lhs.value();
    return check;
}

}  // namespace opuc
