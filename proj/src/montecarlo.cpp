#include "simopn/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "simopn/constellation.hpp"
#include "simopn/detectors.hpp"

namespace simopn {

namespace {

constexpr std::uint64_t kBatchTrials = 8192;
constexpr double kZ95 = 1.959963984540054;

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SIMOPN_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::uint64_t count_errors(const SimConfig& cfg, const ChannelParams& params,
                           const PskConstellation& cons,
                           std::uint64_t snr_index, std::uint64_t begin,
                           std::uint64_t end) {
    std::uint64_t errors = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
        RandomStream rng = RandomStream::keyed(cfg.master_seed, snr_index, t);
        const int sent = static_cast<int>(
            rng.next_below(static_cast<std::uint64_t>(cons.size())));
        const Frame f = simulate_frame(params, cons.symbol(sent), rng);
        int decided;
        if (cfg.detector == DetectorKind::exact_ml) {
            decided = detect_ml(f, cons, params, cfg.truncation).decided_index;
        } else if (params.mode == OperationMode::synchronous) {
            decided = detect_high_snr_sync(f, cons.size()).decided_index;
        } else {
            decided = detect_high_snr_nonsync(f, cons.size()).decided_index;
        }
        if (decided != sent) ++errors;
    }
    return errors;
}

std::uint64_t run_segment(const SimConfig& cfg, const ChannelParams& params,
                          const PskConstellation& cons,
                          std::uint64_t snr_index, std::uint64_t begin,
                          std::uint64_t end, unsigned workers) {
    const std::uint64_t count = end - begin;
    if (workers <= 1 || count < 2)
        return count_errors(cfg, params, cons, snr_index, begin, end);

    const unsigned active =
        static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    std::vector<std::uint64_t> partial(active, 0);
    std::vector<std::thread> pool;
    pool.reserve(active);
    for (unsigned w = 0; w < active; ++w) {
        const std::uint64_t lo = begin + count * w / active;
        const std::uint64_t hi = begin + count * (w + 1) / active;
        pool.emplace_back([&, w, lo, hi] {
            partial[w] = count_errors(cfg, params, cons, snr_index, lo, hi);
        });
    }
    for (auto& th : pool) th.join();
    std::uint64_t errors = 0;
    for (std::uint64_t e : partial) errors += e;
    return errors;
}

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t errors,
                                          std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    if (errors > trials)
        throw std::invalid_argument("error count exceeds trial count");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SerEstimate estimate_ser(const SimConfig& cfg, double snr_db,
                         std::uint64_t snr_index) {
    if (!std::isfinite(snr_db))
        throw std::domain_error("SNR must be finite");

    ChannelParams params;
    params.rho = std::pow(10.0, snr_db / 10.0);
    params.antennas = cfg.antennas;
    params.mode = cfg.mode;
    params.phase_model = cfg.phase_model;
    const PskConstellation cons(cfg.constellation_order);

    const unsigned workers = resolve_workers(cfg.workers);

    std::uint64_t done = 0;
    std::uint64_t errors = 0;
    while (done < cfg.trials) {
        const std::uint64_t segment =
            cfg.early_stop ? std::min(kBatchTrials, cfg.trials - done)
                           : cfg.trials - done;
        errors += run_segment(cfg, params, cons, snr_index, done,
                              done + segment, workers);
        done += segment;
        if (cfg.early_stop && done >= cfg.min_trials &&
            errors >= cfg.target_errors)
            break;
    }

    SerEstimate est;
    est.snr_db = snr_db;
    est.trials = done;
    est.errors = errors;
    est.ser = done > 0 ? static_cast<double>(errors) / done : 0.0;
    std::tie(est.ci_low, est.ci_high) = wilson_interval(errors, done);
    return est;
}

std::vector<SerEstimate> sweep(const SimConfig& cfg) {
    std::vector<double> points = cfg.snr_db_points;
    std::sort(points.begin(), points.end());
    std::vector<SerEstimate> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        rows.push_back(estimate_ser(cfg, points[i], i));
    return rows;
}

}  // namespace simopn
