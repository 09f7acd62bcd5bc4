#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "opuc/dimension.hpp"
#include <nlohmann/json.hpp>

#include "support/oracles.hpp"

using opuc::CoefficientSequence;
using opuc::ScanConfig;
using opuc::SequenceKind;

namespace {

std::vector<std::uint8_t> cantor_flags(int depth, int grid_bits) {
    const std::int64_t grid = std::int64_t{1} << grid_bits;
    std::vector<std::uint8_t> flagged(static_cast<std::size_t>(grid), 0);
    for (const auto& [a, b] : oracles::cantor_intervals(depth)) {
        auto lo = static_cast<std::int64_t>(std::floor(a * static_cast<double>(grid)));
        auto hi = static_cast<std::int64_t>(std::floor(b * static_cast<double>(grid)));
        hi = std::min(hi, grid - 1);
        for (std::int64_t i = lo; i <= hi; ++i) flagged[static_cast<std::size_t>(i)] = 1;
    }
    return flagged;
}

}  // namespace

TEST_CASE("box counting: empty set gives dimension 0 by convention") {
    const std::vector<std::uint8_t> empty(1 << 10, 0);
    const auto result = opuc::box_counting_dimension(empty, 2, 8);
    CHECK(result.dim_estimate == 0.0);
    for (const auto& c : result.counts) CHECK(c.count == 0);
}

TEST_CASE("box counting: full grid gives slope exactly 1") {
    const std::vector<std::uint8_t> full(1 << 12, 1);
    const auto result = opuc::box_counting_dimension(full, 4, 12);
    CHECK(result.dim_estimate == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& c : result.counts) CHECK(c.count == (std::int64_t{1} << c.k));
}

TEST_CASE("box counting: middle-thirds Cantor sample at depth 8") {
    const auto flagged = cantor_flags(8, 13);
    const auto result = opuc::box_counting_dimension(flagged, 4, 12);
    const double target = std::log(2.0) / std::log(3.0);
    CHECK(std::abs(result.dim_estimate - target) <= 0.05);
    CHECK(result.ci_low <= result.dim_estimate);
    CHECK(result.ci_high >= result.dim_estimate);
}

TEST_CASE("box counting: adjacent-scale consistency on random masks") {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double density : {0.01, 0.2, 0.9}) {
        std::vector<std::uint8_t> flagged(1 << 11);
        for (auto& f : flagged) f = unit(rng) < density ? 1 : 0;
        const auto result = opuc::box_counting_dimension(flagged, 0, 11);
        for (std::size_t i = 1; i < result.counts.size(); ++i) {
            CHECK(result.counts[i - 1].count <= result.counts[i].count);
            CHECK(result.counts[i].count <= 2 * result.counts[i - 1].count);
        }
    }
}

TEST_CASE("box counting rejects bad scale ranges") {
    const std::vector<std::uint8_t> flagged(64, 1);
    CHECK_THROWS_AS(opuc::box_counting_dimension(flagged, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(opuc::box_counting_dimension(flagged, 2, 9), std::invalid_argument);
    std::vector<std::uint8_t> not_pow2(100, 1);
    CHECK_THROWS_AS(opuc::box_counting_dimension(not_pow2, 2, 5), std::invalid_argument);
}

TEST_CASE("scan: zero sequence flags nothing and reports unit norms") {
    ScanConfig cfg;
    cfg.grid_size = 256;
    cfg.N_max = 500;
    cfg.norm_threshold = 1.5;
    cfg.beta_samples = 3;
    cfg.workers = 2;
    const auto report = opuc::scan_exceptional_set(CoefficientSequence::zero(), cfg);
    for (const auto f : report.flagged) CHECK(f == 0);
    for (const auto& stat : report.per_eta) {
        CHECK(std::abs(stat.sup_log_norm) <= 1e-9);
        CHECK(stat.argmax_n == 0);
    }
    CHECK(report.dim_estimate == 0.0);
}

TEST_CASE("scan: single coefficient 0.5 stays below threshold 1.8 everywhere") {
    std::vector<std::complex<double>> values(600, {0.0, 0.0});
    values[0] = {0.5, 0.0};
    const CoefficientSequence seq{std::move(values)};
    ScanConfig cfg;
    cfg.grid_size = 128;
    cfg.N_max = 600;
    cfg.norm_threshold = 1.8;
    cfg.beta_samples = 8;
    cfg.workers = 1;
    const auto report = opuc::scan_exceptional_set(seq, cfg);
    for (const auto f : report.flagged) CHECK(f == 0);
    // sup ||T_n|| = sqrt(3) at n = 1, independent of eta
    for (const auto& stat : report.per_eta) {
        CHECK(stat.sup_log_norm == doctest::Approx(std::log(std::sqrt(3.0))).epsilon(1e-9));
        CHECK(stat.argmax_n == 1);
    }
}

TEST_CASE("scan: deterministic across worker counts") {
    const CoefficientSequence seq(SequenceKind::RandomPhasePowerDecay, 0.6, 0.55, 0.9, 2718);
    ScanConfig cfg;
    cfg.grid_size = 128;
    cfg.N_max = 2000;
    cfg.norm_threshold = 5.0;
    cfg.beta_samples = 4;

    cfg.workers = 1;
    const auto one = opuc::scan_exceptional_set(seq, cfg);
    cfg.workers = 2;
    const auto two = opuc::scan_exceptional_set(seq, cfg);

    REQUIRE(one.per_eta.size() == two.per_eta.size());
    for (std::size_t i = 0; i < one.per_eta.size(); ++i) {
        CHECK(one.flagged[i] == two.flagged[i]);
        CHECK(one.per_eta[i].sup_log_norm == two.per_eta[i].sup_log_norm);
        CHECK(one.per_eta[i].argmax_n == two.per_eta[i].argmax_n);
    }
    CHECK(one.dim_estimate == two.dim_estimate);
    CHECK(opuc::report_to_json(one) == opuc::report_to_json(two));
}

TEST_CASE("scan: raising the threshold shrinks the flagged set, raising N_max grows sups") {
    const CoefficientSequence seq(SequenceKind::RandomPhasePowerDecay, 0.6, 0.55, 0.9, 2718);
    ScanConfig cfg;
    cfg.grid_size = 256;
    cfg.N_max = 4000;
    cfg.beta_samples = 4;
    cfg.workers = 2;

    cfg.norm_threshold = 4.0;
    const auto low = opuc::scan_exceptional_set(seq, cfg);
    cfg.norm_threshold = 12.0;
    const auto high = opuc::scan_exceptional_set(seq, cfg);
    std::int64_t low_count = 0, high_count = 0;
    for (std::size_t i = 0; i < low.flagged.size(); ++i) {
        if (high.flagged[i]) CHECK(low.flagged[i] == 1);  // set inclusion
        low_count += low.flagged[i];
        high_count += high.flagged[i];
    }
    CHECK(low_count >= high_count);
    CHECK(low_count > 0);  // the borderline ensemble does flag points here

    cfg.N_max = 8000;
    const auto longer = opuc::scan_exceptional_set(seq, cfg);
    for (std::size_t i = 0; i < longer.per_eta.size(); ++i)
        CHECK(longer.per_eta[i].sup_log_norm >= high.per_eta[i].sup_log_norm - 1e-12);
}

TEST_CASE("scan smoke: borderline ensemble yields a nonempty flagged set and a report") {
    const CoefficientSequence seq(SequenceKind::RandomPhasePowerDecay, 0.6, 0.55, 0.9, 2718);
    ScanConfig cfg;
    cfg.grid_size = 512;
    cfg.N_max = 10000;
    cfg.norm_threshold = 10.0;
    cfg.beta_samples = 4;
    cfg.gamma = 0.9;
    cfg.workers = 2;
    const auto report = opuc::scan_exceptional_set(seq, cfg);
    std::int64_t count = 0;
    for (const auto f : report.flagged) count += f;
    CHECK(count > 0);
    CHECK(count < 512);
    REQUIRE(!report.flagged_count_by_beta.empty());
    CHECK(report.flagged_count_by_beta.back() == count);
    // budgets only grow the flag count
    for (std::size_t m = 1; m < report.flagged_count_by_beta.size(); ++m)
        CHECK(report.flagged_count_by_beta[m] >= report.flagged_count_by_beta[m - 1]);

    const auto verdict_pass = opuc::bound_check(report, 0.9, 0.3);
    CHECK(verdict_pass.margin == doctest::Approx(0.5 - report.dim_estimate));
}

TEST_CASE("bound_check arithmetic") {
    opuc::ScanReport report;
    report.dim_estimate = 0.0;
    const auto pass = opuc::bound_check(report, 0.9, 0.0);
    CHECK(pass.pass);
    CHECK(pass.margin == doctest::Approx(0.2));

    report.dim_estimate = 1.0;
    const auto fail = opuc::bound_check(report, 0.9, 0.1);
    CHECK(!fail.pass);
    CHECK(fail.margin == doctest::Approx(0.3 - 1.0));
}

TEST_CASE("report serialization carries the flag runs and counts") {
    opuc::ScanReport report;
    report.config.grid_size = 16;
    report.config.N_max = 10;
    report.config.norm_threshold = 2.0;
    report.config.beta_samples = 1;
    report.config.gamma = 0.5;
    report.flagged = {0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0};
    report.per_eta.resize(16);
    report.flagged_count_by_beta = {6};
    report.boxcount = {{2, 3}, {3, 4}, {4, 6}};
    report.dim_estimate = 0.55;

    const auto json = nlohmann::json::parse(opuc::report_to_json(report));
    const auto& rle = json.at("flagged-rle");
    REQUIRE(rle.size() == 3);
    CHECK(rle[0] == nlohmann::json::array({1, 2}));
    CHECK(rle[1] == nlohmann::json::array({5, 1}));
    CHECK(rle[2] == nlohmann::json::array({8, 3}));
    CHECK(json.at("dim-estimate").get<double>() == doctest::Approx(0.55));
    CHECK(json.at("flagged-total").get<int>() == 6);

    std::ostringstream csv;
    opuc::write_report_csv(csv, report);
    CHECK(csv.str().find("eta,sup_log_norm,argmax_n,flagged") == 0);
}
