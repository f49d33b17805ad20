#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "simopn/analysis.hpp"
#include "simopn/montecarlo.hpp"

using namespace simopn;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.mode = OperationMode::non_synchronous;
    cfg.detector = DetectorKind::exact_ml;
    cfg.constellation_order = 4;
    cfg.antennas = 2;
    cfg.phase_model = PhaseNoiseModel::von_mises(2.0);
    cfg.trials = 4000;
    cfg.master_seed = 12345;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("Wilson interval against frozen references") {
    auto [l0, h0] = wilson_interval(0, 100);
    CHECK(l0 <= 1e-15);
    CHECK(h0 == doctest::Approx(0.036993498206985678).epsilon(1e-12));

    auto [l5, h5] = wilson_interval(5, 100);
    CHECK(l5 == doctest::Approx(0.021543679154367959).epsilon(1e-12));
    CHECK(h5 == doctest::Approx(0.11175046923191913).epsilon(1e-12));

    auto [lh, hh] = wilson_interval(50, 100);
    CHECK(lh == doctest::Approx(0.40383153036599562).epsilon(1e-12));
    CHECK(hh == doctest::Approx(0.59616846963400438).epsilon(1e-12));

    auto [lm, hm] = wilson_interval(1000, 1000000);
    CHECK(lm == doctest::Approx(0.00093993884374364177).epsilon(1e-12));
    CHECK(hm == doctest::Approx(0.0010638949174321755).epsilon(1e-12));

    auto [ze_lo, ze_hi] = wilson_interval(0, 0);
    CHECK(ze_lo == 0.0);
    CHECK(ze_hi == 1.0);
    CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
}

TEST_CASE("identical configurations give identical counts") {
    const SimConfig cfg = base_config();
    const SerEstimate a = estimate_ser(cfg, 8.0, 0);
    const SerEstimate b = estimate_ser(cfg, 8.0, 0);
    CHECK(a.errors == b.errors);
    CHECK(a.trials == b.trials);
    CHECK(a.ser == b.ser);
    CHECK(a.trials == cfg.trials);
    CHECK(a.errors > 0);  // 8 dB QPSK with strong phase noise must err
}

TEST_CASE("results do not depend on the worker count") {
    SimConfig cfg = base_config();
    cfg.workers = 1;
    const SerEstimate one = estimate_ser(cfg, 8.0, 0);
    cfg.workers = 4;
    const SerEstimate four = estimate_ser(cfg, 8.0, 0);
    CHECK(one.errors == four.errors);
    CHECK(one.trials == four.trials);

    cfg.workers = 3;
    const SerEstimate three = estimate_ser(cfg, 8.0, 0);
    CHECK(one.errors == three.errors);
}

TEST_CASE("early stopping is batch aligned and scheduler independent") {
    SimConfig cfg = base_config();
    cfg.trials = 60000;
    cfg.early_stop = true;
    cfg.min_trials = 8192;
    cfg.target_errors = 50;

    cfg.workers = 1;
    const SerEstimate a = estimate_ser(cfg, 8.0, 0);
    cfg.workers = 3;
    const SerEstimate b = estimate_ser(cfg, 8.0, 0);

    CHECK(a.trials == b.trials);
    CHECK(a.errors == b.errors);
    CHECK(a.trials % 8192 == 0);
    CHECK(a.trials < cfg.trials);  // stops early at this error rate
    CHECK(a.errors >= cfg.target_errors);

    // Without early stopping the full budget runs.
    cfg.early_stop = false;
    cfg.workers = 1;
    CHECK(estimate_ser(cfg, 8.0, 0).trials == cfg.trials);
}

TEST_CASE("single trial yields a zero-or-one rate") {
    SimConfig cfg = base_config();
    cfg.trials = 1;
    const SerEstimate e = estimate_ser(cfg, 0.0, 0);
    CHECK(e.trials == 1);
    CHECK((e.ser == 0.0 || e.ser == 1.0));

    cfg.trials = 0;
    const SerEstimate z = estimate_ser(cfg, 0.0, 0);
    CHECK(z.trials == 0);
    CHECK(z.ser == 0.0);
    CHECK(z.ci_low == 0.0);
    CHECK(z.ci_high == 1.0);
}

TEST_CASE("strong concentration at high SNR is error free in both modes") {
    SimConfig cfg = base_config();
    cfg.constellation_order = 2;
    cfg.phase_model = PhaseNoiseModel::von_mises(1000.0);
    cfg.trials = 200;
    for (OperationMode mode :
         {OperationMode::synchronous, OperationMode::non_synchronous}) {
        cfg.mode = mode;
        CHECK(estimate_ser(cfg, 60.0, 0).errors == 0);
    }
}

TEST_CASE("synchronous BPSK error rate sits on the analytic floor") {
    SimConfig cfg = base_config();
    cfg.mode = OperationMode::synchronous;
    cfg.constellation_order = 2;
    cfg.antennas = 4;
    cfg.phase_model = PhaseNoiseModel::von_mises(3.0);
    cfg.trials = 20000;

    const SerEstimate e = estimate_ser(cfg, 40.0, 0);
    const double floor = ser_floor_sync(2, cfg.phase_model);
    const double se = std::sqrt(floor * (1.0 - floor) / cfg.trials);
    CHECK(std::abs(e.ser - floor) < 5.0 * se);
    CHECK(e.ci_low < floor);
    CHECK(floor < e.ci_high + 5.0 * se);
}

TEST_CASE("non-synchronous mode beats the synchronous floor at high SNR") {
    SimConfig cfg = base_config();
    cfg.constellation_order = 2;
    cfg.antennas = 4;
    cfg.phase_model = PhaseNoiseModel::von_mises(3.0);
    cfg.trials = 20000;

    cfg.mode = OperationMode::synchronous;
    const SerEstimate sync = estimate_ser(cfg, 40.0, 0);
    cfg.mode = OperationMode::non_synchronous;
    const SerEstimate nonsync = estimate_ser(cfg, 40.0, 0);

    CHECK(nonsync.ser < sync.ser);
    CHECK(nonsync.ci_high < sync.ci_low);
}

TEST_CASE("sweeps sort their grid and key streams by sorted position") {
    SimConfig cfg = base_config();
    cfg.trials = 500;
    cfg.snr_db_points = {10.0, 0.0, 5.0};
    const auto rows = sweep(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].snr_db == 0.0);
    CHECK(rows[1].snr_db == 5.0);
    CHECK(rows[2].snr_db == 10.0);
    CHECK(rows[0].ser >= rows[2].ser);  // more SNR, fewer errors

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SerEstimate direct = estimate_ser(cfg, rows[i].snr_db, i);
        CHECK(direct.errors == rows[i].errors);
    }

    cfg.snr_db_points.clear();
    CHECK(sweep(cfg).empty());
}

TEST_CASE("invalid simulation parameters are rejected") {
    SimConfig cfg = base_config();
    CHECK_THROWS_AS(estimate_ser(cfg, std::nan(""), 0), std::domain_error);
    cfg.constellation_order = 1;
    CHECK_THROWS_AS(estimate_ser(cfg, 0.0, 0), std::invalid_argument);
    cfg = base_config();
    cfg.antennas = 0;
    CHECK_THROWS_AS(estimate_ser(cfg, 0.0, 0), std::invalid_argument);
    cfg = base_config();
    cfg.truncation = 0;
    CHECK_THROWS_AS(estimate_ser(cfg, 0.0, 0), std::invalid_argument);
}
