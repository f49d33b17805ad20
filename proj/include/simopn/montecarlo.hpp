#pragma once

// Seeded Monte Carlo estimation of symbol error rates.
//
// Reproducibility contract: every trial derives its own random stream from
// (master_seed, snr_index, trial_index), so a given configuration produces
// byte-identical error counts no matter how many worker threads run the
// trials or how they are scheduled.  Sweeps sort their SNR grid ascending
// and key each point by its sorted position, making results independent of
// the order the points were listed in.

#include <cstdint>
#include <utility>
#include <vector>

#include "simopn/channel.hpp"
#include "simopn/detectors.hpp"

namespace simopn {

enum class DetectorKind {
    exact_ml,  // full likelihood maximization
    high_snr   // asymptotic phase-only detector
};

struct SimConfig {
    OperationMode mode = OperationMode::synchronous;
    DetectorKind detector = DetectorKind::exact_ml;
    int constellation_order = 2;
    int antennas = 1;
    PhaseNoiseModel phase_model = PhaseNoiseModel::von_mises(0.0);
    std::vector<double> snr_db_points;
    std::uint64_t trials = 10000;  // per SNR point, upper budget
    std::uint64_t master_seed = 1;
    int truncation = kDefaultTruncation;

    // 0 selects the SIMOPN_WORKERS environment variable when set, otherwise
    // the hardware concurrency.
    unsigned workers = 0;

    // When enabled, a point stops at the first 8192-trial batch boundary
    // where at least min_trials trials ran and at least target_errors errors
    // were seen.  Stopping points are batch-aligned so they do not depend on
    // the worker count.
    bool early_stop = false;
    std::uint64_t min_trials = 100000;
    std::uint64_t target_errors = 1000;
};

struct SerEstimate {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double ser = 0.0;
    double ci_low = 0.0;   // 95% Wilson score interval
    double ci_high = 1.0;
};

// 95% Wilson score interval for a binomial proportion.  Returns {0, 1} for
// zero trials.
std::pair<double, double> wilson_interval(std::uint64_t errors,
                                          std::uint64_t trials);

// Runs one SNR point.  snr_index keys the random streams; callers running
// several points must give each a distinct index (sweep uses the sorted
// position).
SerEstimate estimate_ser(const SimConfig& config, double snr_db,
                         std::uint64_t snr_index);

// Runs all configured SNR points, ascending.  Returns one row per point.
std::vector<SerEstimate> sweep(const SimConfig& config);

}  // namespace simopn
