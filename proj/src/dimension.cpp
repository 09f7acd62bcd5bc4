#include "opuc/dimension.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "opuc/prufer.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(std::int64_t v) {
    int k = 0;
    while ((std::int64_t{1} << k) < v) ++k;
    return k;
}

}  // namespace

void ScanConfig::validate() const {
    if (!is_power_of_two(grid_size) || grid_size < 8)
        throw std::invalid_argument("grid_size must be a power of two >= 8");
    if (N_max < 0) throw std::invalid_argument("N_max must be nonnegative");
    if (!(norm_threshold > 1.0)) throw std::invalid_argument("norm_threshold must exceed 1");
    if (beta_samples < 1 || beta_samples > 64)
        throw std::invalid_argument("beta_samples must lie in [1, 64]");
}

ScanReport scan_exceptional_set(const CoefficientSequence& seq, const ScanConfig& cfg) {
    cfg.validate();

    const std::int64_t grid = cfg.grid_size;
    const std::int64_t betas = cfg.beta_samples;
    const double log_threshold = std::log(cfg.norm_threshold);
    const double eta_step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    const double beta_step = 2.0 * std::numbers::pi / static_cast<double>(betas);

    std::vector<std::complex<double>> alphas;
    if (cfg.N_max > 0) alphas = materialize(seq, cfg.N_max - 1);

    ScanReport report;
    report.config = cfg;
    report.flagged.assign(static_cast<std::size_t>(grid), 0);
    report.per_eta.resize(static_cast<std::size_t>(grid));
    std::vector<std::uint64_t> exceed_masks(static_cast<std::size_t>(grid), 0);

    auto run_point = [&](std::int64_t i) {
        const double eta = static_cast<double>(i) * eta_step;
        const UnitCirclePoint z(eta);

        TransferEvolution evo(z);
        for (const auto& alpha : alphas) evo.step(alpha);
        EtaStat stat;
        stat.eta = eta;
        stat.sup_log_norm = evo.sup_log_norm();
        stat.argmax_n = evo.argmax();
        report.per_eta[static_cast<std::size_t>(i)] = stat;

        std::uint64_t mask = 0;
        for (std::int64_t m = 0; m < betas; ++m) {
            const RotationParams params(eta, static_cast<double>(m) * beta_step);
            const auto extrema = log_radius_extrema(alphas, params);
            if (extrema.max_log_radius > log_threshold) mask |= std::uint64_t{1} << m;
        }
        exceed_masks[static_cast<std::size_t>(i)] = mask;
        report.flagged[static_cast<std::size_t>(i)] = mask != 0 ? 1 : 0;
    };

    int workers = cfg.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    if (workers == 1) {
        for (std::int64_t i = 0; i < grid; ++i) run_point(i);
    } else {
        std::atomic<std::int64_t> next{0};
        auto drain = [&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= grid) return;
                run_point(i);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(drain);
        drain();
        for (auto& th : pool) th.join();
    }

    // Flag counts as the beta budget grows; exposes sensitivity to the
    // finite beta sample.
    report.flagged_count_by_beta.assign(static_cast<std::size_t>(betas), 0);
    for (std::int64_t m = 0; m < betas; ++m) {
        const std::uint64_t budget = (m == 63) ? ~std::uint64_t{0}
                                               : ((std::uint64_t{1} << (m + 1)) - 1);
        std::int64_t count = 0;
        for (const auto mask : exceed_masks)
            if (mask & budget) ++count;
        report.flagged_count_by_beta[static_cast<std::size_t>(m)] = count;
    }

    // Default regression scales: drop the two finest levels (finite-grid
    // saturation), start at k = 2; tiny grids fall back to the full range.
    const int k_max = log2_exact(grid);
    const int lo = k_max >= 6 ? 2 : 0;
    const int hi = k_max >= 6 ? k_max - 2 : k_max;
    const auto boxes = box_counting_dimension(report.flagged, lo, hi);
    report.boxcount = boxes.counts;
    report.dim_estimate = boxes.dim_estimate;
    report.dim_ci_low = boxes.ci_low;
    report.dim_ci_high = boxes.ci_high;
    return report;
}

BoxCountResult box_counting_dimension(const std::vector<std::uint8_t>& flagged, int k_min,
                                      int k_max) {
    const auto grid = static_cast<std::int64_t>(flagged.size());
    if (!is_power_of_two(grid)) throw std::invalid_argument("grid size must be a power of two");
    const int k_grid = log2_exact(grid);
    if (k_min < 0 || k_max > k_grid || k_max - k_min + 1 < 3)
        throw std::invalid_argument("need at least 3 scales within [0, log2(grid)]");

    BoxCountResult result;
    bool any = false;
    for (int k = k_min; k <= k_max; ++k) {
        const int shift = k_grid - k;
        std::int64_t count = 0;
        std::int64_t current = -1;
        for (std::int64_t i = 0; i < grid; ++i) {
            if (!flagged[static_cast<std::size_t>(i)]) continue;
            any = true;
            const std::int64_t box = i >> shift;
            if (box != current) {
                current = box;
                ++count;
            }
        }
        result.counts.push_back({k, count});
    }
    if (!any) return result;  // dimension 0 by convention

    // Least-squares slope of log2 N_k against k, CI from the residuals.
    const auto scales = static_cast<double>(result.counts.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& c : result.counts) {
        sx += c.k;
        sy += std::log2(static_cast<double>(c.count));
    }
    const double mx = sx / scales, my = sy / scales;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& c : result.counts) {
        const double dx = c.k - mx;
        sxx += dx * dx;
        sxy += dx * (std::log2(static_cast<double>(c.count)) - my);
    }
    const double slope = sxy / sxx;
    result.dim_estimate = slope;

    double ss_res = 0.0;
    for (const auto& c : result.counts) {
        const double fit = my + slope * (c.k - mx);
        const double r = std::log2(static_cast<double>(c.count)) - fit;
        ss_res += r * r;
    }
    if (result.counts.size() > 2) {
        const double se = std::sqrt(ss_res / (scales - 2.0) / sxx);
        result.ci_low = slope - 2.0 * se;
        result.ci_high = slope + 2.0 * se;
    } else {
        result.ci_low = result.ci_high = slope;
    }
    return result;
}

BoundVerdict bound_check(const ScanReport& report, double gamma, double slack) {
    BoundVerdict verdict;
    verdict.margin = 2.0 * (1.0 - gamma) + slack - report.dim_estimate;
    verdict.pass = verdict.margin >= 0.0;
    return verdict;
}

std::string report_to_json(const ScanReport& report) {
    nlohmann::json j;
    j["config"] = {{"grid", report.config.grid_size},
                   {"n-max", report.config.N_max},
                   {"threshold", report.config.norm_threshold},
                   {"beta-samples", report.config.beta_samples},
                   {"gamma", report.config.gamma}};
    nlohmann::json rle = nlohmann::json::array();
    std::int64_t i = 0;
    const auto grid = static_cast<std::int64_t>(report.flagged.size());
    while (i < grid) {
        if (report.flagged[static_cast<std::size_t>(i)]) {
            std::int64_t start = i;
            while (i < grid && report.flagged[static_cast<std::size_t>(i)]) ++i;
            rle.push_back({start, i - start});
        } else {
            ++i;
        }
    }
    j["flagged-rle"] = rle;
    j["flagged-total"] =
        report.flagged_count_by_beta.empty() ? 0 : report.flagged_count_by_beta.back();
    j["flagged-count-by-beta"] = report.flagged_count_by_beta;
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& c : report.boxcount) counts.push_back({c.k, c.count});
    j["box-counts"] = counts;
    j["dim-estimate"] = report.dim_estimate;
    j["dim-ci"] = {report.dim_ci_low, report.dim_ci_high};
    return j.dump(2);
}

void write_report_csv(std::ostream& out, const ScanReport& report) {
    out << "eta,sup_log_norm,argmax_n,flagged\n";
    char buf[128];
    for (std::size_t i = 0; i < report.per_eta.size(); ++i) {
        const auto& stat = report.per_eta[i];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%lld,%d\n", stat.eta, stat.sup_log_norm,
                      static_cast<long long>(stat.argmax_n), report.flagged[i] ? 1 : 0);
        out << buf;
    }
}

}  // namespace opuc
