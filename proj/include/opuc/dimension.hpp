// Exceptional-set scanner and box-counting dimension estimate.
//
// For each eta on a uniform power-of-two grid over [0, 2pi) and each of
// beta_samples equispaced rotations, the Prufer log-radius is evolved to
// N_max; a grid point is flagged when the largest log R_n over the sampled
// betas exceeds log(norm_threshold).  The beta-free transfer-matrix view
// sup_n ||T_n(e^{i eta})|| is recorded alongside.
//
// The flagged set is summarized by dyadic box counts N_k (boxes of length
// 2pi 2^{-k} containing a flagged point) and the least-squares slope of
// log2 N_k against k.  Box-counting (upper Minkowski) dimension upper-bounds
// Hausdorff dimension, so "estimate <= bound" remains a meaningful check;
// no claim of computing Hausdorff dimension is made.  Finite beta sampling
// and finite horizon under-approximate the exceptional set; the report
// carries a flag count per beta-sample budget so the sensitivity is visible.
//
// Per-eta work items are independent; the merge is index-ordered, so reports
// are bit-identical for any worker count.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opuc/verblunsky.hpp"

namespace opuc {

struct ScanConfig {
    std::int64_t grid_size = 4096;     // power of two >= 8
    std::int64_t N_max = 100000;       // evolution horizon
    double norm_threshold = 1e3;       // flag when sup R exceeds this
    std::int64_t beta_samples = 8;     // equispaced betas in [0, 2pi)
    double gamma = 0.9;                // declared decay class of the sequence
    int workers = 0;                   // <= 0: hardware concurrency

    void validate() const;
};

struct EtaStat {
    double eta = 0.0;
    double sup_log_norm = 0.0;  // log sup_n ||T_n||
    std::int64_t argmax_n = 0;
};

struct BoxCount {
    int k = 0;
    std::int64_t count = 0;  // occupied boxes of length 2pi 2^{-k}
};

struct BoxCountResult {
    double dim_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<BoxCount> counts;
};

struct ScanReport {
    ScanConfig config;
    std::vector<std::uint8_t> flagged;         // 0/1 per grid point
    std::vector<EtaStat> per_eta;
    std::vector<BoxCount> boxcount;
    double dim_estimate = 0.0;
    double dim_ci_low = 0.0;
    double dim_ci_high = 0.0;
    // Entry m: flags present using only the first m+1 beta samples.
    std::vector<std::int64_t> flagged_count_by_beta;
};

ScanReport scan_exceptional_set(const CoefficientSequence& seq, const ScanConfig& cfg);

// N_k over scales k_min..k_max and the least-squares slope of log2 N_k vs k.
// Empty set gives dimension 0 by convention.  Requires at least 3 scales and
// flagged.size() a power of two.
BoxCountResult box_counting_dimension(const std::vector<std::uint8_t>& flagged, int k_min,
                                      int k_max);

struct BoundVerdict {
    bool pass = false;
    double margin = 0.0;  // 2(1-gamma) + slack - dim_estimate
};

// Heuristic diagnostic against the dimension bound 2(1-gamma).
BoundVerdict bound_check(const ScanReport& report, double gamma, double slack);

// JSON body: config echo, flagged-set run-length encoding, per-scale counts,
// dimension estimate.  CSV body: eta,sup_log_norm,argmax_n,flagged rows.
std::string report_to_json(const ScanReport& report);
void write_report_csv(std::ostream& out, const ScanReport& report);

}  // namespace opuc
