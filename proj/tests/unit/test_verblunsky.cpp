#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "opuc/verblunsky.hpp"
#include "support/oracles.hpp"

using opuc::CoefficientSequence;
using opuc::SequenceKind;
using cd = std::complex<double>;

TEST_CASE("materialize: zero generator") {
    const auto values = opuc::materialize(CoefficientSequence::zero(), 3);
    REQUIRE(values.size() == 4);
    for (const auto& v : values) CHECK(v == cd{0.0, 0.0});
}

TEST_CASE("materialize: power decay is amplitude * (n+1)^-p") {
    const CoefficientSequence seq(SequenceKind::PowerDecay, 0.5, 1.0, 0.0, 0);
    const auto values = opuc::materialize(seq, 2);
    CHECK(values[0].real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(values[1].real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(values[2].real() == doctest::Approx(0.5 / 3.0).epsilon(1e-15));
}

TEST_CASE("materialize: explicit list passes through and bounds-checks") {
    const CoefficientSequence seq(std::vector<cd>{{0.3, 0.4}});
    const auto values = opuc::materialize(seq, 0);
    CHECK(values[0] == cd{0.3, 0.4});
    CHECK_THROWS_AS(opuc::materialize(seq, 1), std::out_of_range);
}

TEST_CASE("construction rejects amplitudes and moduli at or above the cap") {
    CHECK_THROWS_AS(CoefficientSequence(SequenceKind::PowerDecay, 1.0, 1.0, 0.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoefficientSequence(SequenceKind::Constant, 1.0 - 1e-13, 1.0, 0.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoefficientSequence(std::vector<cd>{{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientSequence(SequenceKind::PowerDecay, 0.5, -1.0, 0.0, 0),
                    std::invalid_argument);
}

TEST_CASE("every generated coefficient stays strictly inside the cap") {
    const CoefficientSequence seqs[] = {
        CoefficientSequence(SequenceKind::Constant, 0.99, 1.0, 0.0, 0),
        CoefficientSequence(SequenceKind::PowerDecay, 0.9, 0.3, 0.5, 0),
        CoefficientSequence(SequenceKind::RandomPhasePowerDecay, 0.95, 0.2, 0.5, 1234),
        CoefficientSequence(SequenceKind::Sparse, 0.8, 0.5, 0.5, 0),
    };
    for (const auto& seq : seqs)
        for (std::int64_t n = 0; n < 2000; ++n) CHECK(std::abs(seq.at(n)) < 1.0 - 1e-12);
}

TEST_CASE("materialization is deterministic and bit-identical") {
    const CoefficientSequence a(SequenceKind::RandomPhasePowerDecay, 0.7, 0.6, 0.9, 42);
    const CoefficientSequence b(SequenceKind::RandomPhasePowerDecay, 0.7, 0.6, 0.9, 42);
    const auto va = opuc::materialize(a, 5000);
    const auto vb = opuc::materialize(b, 5000);
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        CHECK(va[i].real() == vb[i].real());
        CHECK(va[i].imag() == vb[i].imag());
    }
    // different seed must actually change the phases
    const CoefficientSequence c(SequenceKind::RandomPhasePowerDecay, 0.7, 0.6, 0.9, 43);
    CHECK(c.at(1) != a.at(1));
}

TEST_CASE("sparse generator lives on n = 2^k - 1 only") {
    const CoefficientSequence seq(SequenceKind::Sparse, 0.5, 1.0, 0.5, 0);
    for (std::int64_t n = 0; n < 130; ++n) {
        const bool on_support = ((n + 1) & n) == 0;
        if (on_support) CHECK(std::abs(seq.at(n)) > 0.0);
        else CHECK(std::abs(seq.at(n)) == 0.0);
    }
    // k = 2 at n = 3: amplitude * 3^-1
    CHECK(seq.at(3).real() == doctest::Approx(0.5 / 3.0).epsilon(1e-15));
}

TEST_CASE("weighted_energy: zero sequence and zero-weight n=0 term") {
    CHECK(opuc::weighted_energy(CoefficientSequence::zero(), 0.5, 1000) == 0.0);
    // mass only at n = 0 contributes nothing under the 0^gamma = 0 convention
    std::vector<cd> values(11, cd{0.0, 0.0});
    values[0] = {0.9, 0.0};
    const CoefficientSequence seq{std::move(values)};
    CHECK(opuc::weighted_energy(seq, 0.7, 10) == 0.0);
}

TEST_CASE("weighted_energy matches the extended-precision oracle") {
    const CoefficientSequence seq(SequenceKind::PowerDecay, 1.0 - 2e-12, 1.0, 0.5, 0);
    for (const std::int64_t N : {10LL, 1000LL, 100000LL}) {
        const double produced = opuc::weighted_energy(seq, 0.5, N);
        const long double expected = oracles::weighted_energy_ld(seq, 0.5L, N);
        CHECK(std::abs(produced - static_cast<double>(expected)) <=
              1e-12 * static_cast<double>(expected));
    }
}

TEST_CASE("weighted_energy is monotone in N and in gamma") {
    const CoefficientSequence seq(SequenceKind::RandomPhasePowerDecay, 0.9, 0.7, 0.5, 7);
    double prev = 0.0;
    for (std::int64_t N = 1; N <= 64; N *= 2) {
        const double value = opuc::weighted_energy(seq, 0.4, N);
        CHECK(value >= prev);
        prev = value;
    }
    double prev_gamma = 0.0;
    for (const double gamma : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double value = opuc::weighted_energy(seq, gamma, 512);
        CHECK(value >= prev_gamma);
        prev_gamma = value;
    }
}

TEST_CASE("dyadic_l1_sum: zero sequence gives all-zero blocks") {
    const auto diag = opuc::dyadic_l1_sum(CoefficientSequence::zero(), 0.5, 0.2, 6);
    for (const auto& block : diag.blocks) {
        CHECK(block.l1_sum == 0.0);
        CHECK(block.majorant == 0.0);
    }
}

TEST_CASE("dyadic_l1_sum: blockwise Cauchy-Schwarz inequality") {
    const CoefficientSequence harmonic(SequenceKind::PowerDecay, 1.0 - 2e-12, 1.0, 0.8, 0);
    const auto diag = opuc::dyadic_l1_sum(harmonic, 0.8, 0.1, 12);
    REQUIRE(diag.blocks.size() == 12);
    for (const auto& block : diag.blocks)
        CHECK(block.l1_sum <= block.majorant * (1.0 + 1e-12));

    // cumulative lists are nondecreasing
    for (std::size_t i = 1; i < diag.dyadic_l1.size(); ++i)
        CHECK(diag.dyadic_l1[i].second >= diag.dyadic_l1[i - 1].second);
    for (std::size_t i = 1; i < diag.partial_sums.size(); ++i)
        CHECK(diag.partial_sums[i].second >= diag.partial_sums[i - 1].second);
}

TEST_CASE("dyadic_l1_sum: single spike lands in its block with the stated value") {
    std::vector<cd> values(16, cd{0.0, 0.0});
    values[8] = {0.5, 0.0};
    const CoefficientSequence seq{std::move(values)};
    const auto diag = opuc::dyadic_l1_sum(seq, 0.5, 0.2, 4);
    // d/2 + eps/4 = 0.25 + 0.05
    const double expected = std::pow(8.0, -0.3) * 0.5;
    for (const auto& block : diag.blocks) {
        if (block.k == 3) {
            CHECK(block.l1_sum == doctest::Approx(expected).epsilon(1e-14));
            CHECK(block.l1_sum <= block.majorant * (1.0 + 1e-12));
        } else {
            CHECK(block.l1_sum == 0.0);
        }
    }
}

TEST_CASE("check_log_divergence: zero, spike arithmetic, and blockwise bound") {
    const auto zero = opuc::check_log_divergence(CoefficientSequence::zero(), 0.5, 0.3, 64);
    CHECK(zero.lhs == 0.0);
    for (const double m : zero.majorants) CHECK(m == 0.0);

    std::vector<cd> values(5, cd{0.0, 0.0});
    values[2] = {0.5, 0.0};
    const CoefficientSequence spike{std::move(values)};
    const auto check = opuc::check_log_divergence(spike, 0.9, 0.5, 4);
    CHECK(check.lhs == doctest::Approx(std::pow(2.0, 0.5) * 0.25).epsilon(1e-14));
    double total = 0.0;
    for (const double m : check.majorants) total += m;
    CHECK(total == doctest::Approx(std::pow(2.0, -0.4) * std::pow(2.0, 0.9) * 0.25).epsilon(1e-14));
    CHECK(check.lhs <= total * (1.0 + 1e-12));

    const CoefficientSequence decay(SequenceKind::PowerDecay, 1.0 - 2e-12, 0.6, 0.5, 0);
    const auto big = opuc::check_log_divergence(decay, 0.5, 0.3, 4096);
    double majorant_total = 0.0;
    for (const double m : big.majorants) majorant_total += m;
    CHECK(big.lhs <= majorant_total * (1.0 + 1e-12));

    CHECK_THROWS_AS(opuc::check_log_divergence(spike, 0.5, 0.5, 16), std::invalid_argument);
}

TEST_CASE("sequence config round-trips through the flat key=value form") {
    const CoefficientSequence seq(SequenceKind::RandomPhasePowerDecay, 0.65, 1.25, 0.9, 99);
    const auto restored = CoefficientSequence::from_config(seq.to_config());
    for (std::int64_t n = 0; n < 200; ++n) {
        CHECK(restored.at(n).real() == seq.at(n).real());
        CHECK(restored.at(n).imag() == seq.at(n).imag());
    }

    const CoefficientSequence list(std::vector<cd>{{0.25, -0.5}, {0.0, 0.125}});
    const auto list_restored = CoefficientSequence::from_config(list.to_config());
    REQUIRE(list_restored.length() == 2);
    CHECK(list_restored.at(0) == list.at(0));
    CHECK(list_restored.at(1) == list.at(1));
}
