#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "simopn/channel.hpp"
#include "simopn/constellation.hpp"
#include "simopn/detectors.hpp"
#include "simopn/reference.hpp"

using namespace simopn;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double rel, double abs_tol = 0.0) {
    return std::abs(a - b) <= std::max(abs_tol, rel * std::max(std::abs(a), std::abs(b)));
}

ChannelParams make_params(double rho, int antennas, OperationMode mode,
                          PhaseNoiseModel model) {
    ChannelParams p;
    p.rho = rho;
    p.antennas = antennas;
    p.mode = mode;
    p.phase_model = std::move(model);
    return p;
}

Frame random_frame(const ChannelParams& p, std::complex<double> symbol,
                   std::uint64_t substream) {
    RandomStream rng = RandomStream::keyed(2024, 77, substream);
    return simulate_frame(p, symbol, rng);
}

}  // namespace

TEST_CASE("series likelihood matches direct quadrature") {
    const auto vm = PhaseNoiseModel::von_mises(3.0);
    const PskConstellation qpsk(4);

    const auto pn = make_params(4.0, 2, OperationMode::non_synchronous, vm);
    const auto ps = make_params(4.0, 2, OperationMode::synchronous, vm);

    for (std::uint64_t i = 0; i < 6; ++i) {
        const Frame fn = random_frame(pn, qpsk.symbol(i % 4), i);
        const Frame fs = random_frame(ps, qpsk.symbol(i % 4), 100 + i);
        for (int n : {0, 1, 3}) {
            const auto s = qpsk.symbol(n);
            const double series_n = loglik_nonsync(fn, s, vm, 4.0);
            const double quad_n =
                reference::loglik_nonsync_by_quadrature(fn, s, vm, 4.0, 1e-10);
            CHECK_MESSAGE(close(series_n, quad_n, 1e-7),
                          "nonsync i=", i, " n=", n, " series=", series_n,
                          " quad=", quad_n);

            const double series_s = loglik_sync(fs, s, vm, 4.0);
            const double quad_s =
                reference::loglik_sync_by_quadrature(fs, s, vm, 4.0, 1e-10);
            CHECK_MESSAGE(close(series_s, quad_s, 1e-7),
                          "sync i=", i, " n=", n);
        }
    }
}

TEST_CASE("quadrature agreement holds for a general Fourier model") {
    const auto gen = PhaseNoiseModel::from_fourier({1.0, 0.7, 0.35, 0.12, 0.03});
    const auto p = make_params(2.0, 2, OperationMode::non_synchronous, gen);
    const Frame f = random_frame(p, {0.0, 1.0}, 5);
    for (int n = 0; n < 4; ++n) {
        const auto s = PskConstellation(4).symbol(n);
        const double series = loglik_nonsync(f, s, gen, 2.0);
        const double quad =
            reference::loglik_nonsync_by_quadrature(f, s, gen, 2.0, 1e-10);
        CHECK_MESSAGE(close(series, quad, 1e-7), "n=", n);
    }
}

TEST_CASE("single antenna collapses both modes to one likelihood") {
    const auto vm = PhaseNoiseModel::von_mises(2.0);
    const auto p = make_params(3.0, 1, OperationMode::non_synchronous, vm);
    const PskConstellation c(8);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Frame f = random_frame(p, c.symbol(i % 8), i);
        for (int n : {0, 3, 7}) {
            const double a = loglik_nonsync(f, c.symbol(n), vm, 3.0);
            const double b = loglik_sync(f, c.symbol(n), vm, 3.0);
            CHECK(close(a, b, 0.0, 1e-10));
        }
    }
}

TEST_CASE("likelihoods are invariant to reference-phase rotations") {
    const auto vm = PhaseNoiseModel::von_mises(4.0);
    const PskConstellation c(4);
    const auto pn = make_params(5.0, 3, OperationMode::non_synchronous, vm);
    const Frame f = random_frame(pn, c.symbol(1), 9);

    // Per-antenna rotation of both slots, non-synchronous model.
    Frame g = f;
    const double gammas[3] = {0.3, -1.7, 2.9};
    for (int m = 0; m < 3; ++m) {
        g.x[m] *= std::polar(1.0, gammas[m]);
        g.y[m] *= std::polar(1.0, gammas[m]);
    }
    for (int n = 0; n < 4; ++n) {
        CHECK(close(loglik_nonsync(f, c.symbol(n), vm, 5.0),
                    loglik_nonsync(g, c.symbol(n), vm, 5.0), 0.0, 1e-10));
    }

    // Common rotation, synchronous model.
    const auto ps = make_params(5.0, 3, OperationMode::synchronous, vm);
    const Frame fs = random_frame(ps, c.symbol(2), 10);
    Frame gs = fs;
    for (int m = 0; m < 3; ++m) {
        gs.x[m] *= std::polar(1.0, 1.234);
        gs.y[m] *= std::polar(1.0, 1.234);
    }
    for (int n = 0; n < 4; ++n) {
        CHECK(close(loglik_sync(fs, c.symbol(n), vm, 5.0),
                    loglik_sync(gs, c.symbol(n), vm, 5.0), 0.0, 1e-10));
    }
}

TEST_CASE("PSK specialization agrees with the generic forms") {
    const auto vm = PhaseNoiseModel::von_mises(3.0);
    const PskConstellation c(8);
    const auto pn = make_params(4.0, 4, OperationMode::non_synchronous, vm);
    const auto ps = make_params(4.0, 4, OperationMode::synchronous, vm);

    int checked = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Frame fn = random_frame(pn, c.symbol(i % 8), i);
        const Frame fs = random_frame(ps, c.symbol(i % 8), 1000 + i);

        int best_gen = 0, best_psk = 0;
        double v_gen = -1e308, v_psk = -1e308;
        for (int n = 0; n < 8; ++n) {
            const double gen = loglik_nonsync(fn, c.symbol(n), vm, 4.0);
            const double psk = loglik_psk_nonsync(fn, n, 8, {&vm, 1}, 4.0);
            CHECK(close(gen, psk, 0.0, 1e-9));
            if (gen > v_gen) { v_gen = gen; best_gen = n; }
            if (psk > v_psk) { v_psk = psk; best_psk = n; }

            const double gen_s = loglik_sync(fs, c.symbol(n), vm, 4.0);
            const double psk_s = loglik_psk_sync(fs, n, 8, vm, 4.0);
            CHECK(close(gen_s, psk_s, 0.0, 1e-9));
        }
        CHECK(best_gen == best_psk);
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("rotating the data slot shifts PSK scores by the same index") {
    const auto vm = PhaseNoiseModel::von_mises(2.0);
    const auto p = make_params(3.0, 3, OperationMode::non_synchronous, vm);
    const Frame f = random_frame(p, {1.0, 0.0}, 21);
    const int N = 8;
    for (int k : {1, 3, 5}) {
        Frame g = f;
        for (auto& y : g.y) y *= std::polar(1.0, -2.0 * kPi * k / N);
        for (int n = 0; n + k < N; ++n) {
            const double shifted = loglik_psk_nonsync(g, n, N, {&vm, 1}, 3.0);
            const double original = loglik_psk_nonsync(f, n + k, N, {&vm, 1}, 3.0);
            CHECK_MESSAGE(close(shifted, original, 0.0, 1e-9),
                          "k=", k, " n=", n);
        }
    }
}

TEST_CASE("maximum likelihood detection in the near-noiseless limit") {
    const auto vm = PhaseNoiseModel::von_mises(1000.0);
    const PskConstellation c(8);
    for (OperationMode mode :
         {OperationMode::synchronous, OperationMode::non_synchronous}) {
        const auto p = make_params(1e6, 2, mode, vm);
        SeriesDiagnostics diag;
        int correct = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            RandomStream rng = RandomStream::keyed(31337, 0, t);
            const Frame f = simulate_frame(p, c.symbol(2), rng);
            const DetectionResult r = detect_ml(f, c, p, kDefaultTruncation, &diag);
            if (r.decided_index == 2) ++correct;
        }
        CHECK(correct == trials);
        // kappa = 1e3 needs more than kDefaultTruncation coefficients for
        // full convergence; the evaluation must flag that while still
        // deciding correctly above.
        CHECK_FALSE(diag.converged);
        CHECK(diag.max_term_index == kDefaultTruncation);
    }
}

TEST_CASE("diagnostics stay clean at moderate concentration") {
    const auto vm = PhaseNoiseModel::von_mises(2.0);
    const auto p = make_params(4.0, 3, OperationMode::non_synchronous, vm);
    const PskConstellation c(4);
    SeriesDiagnostics diag;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Frame f = random_frame(p, c.symbol(i % 4), i);
        detect_ml(f, c, p, kDefaultTruncation, &diag);
    }
    CHECK(diag.converged);
    CHECK(diag.max_term_index <= 32);
    CHECK(diag.clamped_brackets == 0);
}

TEST_CASE("a pure rotation between slots is decoded to that rotation") {
    const int N = 8;
    const PskConstellation c(N);
    const double sr = 100.0;
    for (int k = 0; k < N; ++k) {
        Frame f;
        const double thetas[3] = {0.4, -2.0, 1.1};
        for (double th : thetas) {
            const auto x = sr * std::polar(1.0, th);
            f.x.push_back(x);
            f.y.push_back(x * std::polar(1.0, 2.0 * kPi * k / N));
        }
        const auto vm = PhaseNoiseModel::von_mises(5.0);
        for (OperationMode mode :
             {OperationMode::synchronous, OperationMode::non_synchronous}) {
            const auto p = make_params(sr * sr, 3, mode, vm);
            CHECK(detect_ml(f, c, p).decided_index == k);
        }
        CHECK(detect_high_snr_sync(f, N).decided_index == k);
        CHECK(detect_high_snr_nonsync(f, N).decided_index == k);
    }
}

TEST_CASE("decision region boundaries follow the half-open convention") {
    const int N = 8;
    CHECK(nearest_psk_index(0.0, N) == 0);
    CHECK(nearest_psk_index(2.0 * kPi / N, N) == 1);
    CHECK(nearest_psk_index(kPi / N, N) == 1);     // upper edge of region 0
    CHECK(nearest_psk_index(-kPi / N, N) == 0);    // lower edge of region 0
    CHECK(nearest_psk_index(3.0 * kPi / N, N) == 2);
    CHECK(nearest_psk_index(-3.0 * kPi / N, N) == N - 1);
    CHECK(nearest_psk_index(-kPi, N) == N / 2);

    CHECK(nearest_psk_index(kPi / 2, 2) == 1);
    CHECK(nearest_psk_index(-kPi / 2, 2) == 0);
    CHECK(nearest_psk_index(std::nextafter(kPi / N, 0.0), N) == 0);
}

TEST_CASE("asymptotic detectors coincide for one antenna") {
    const auto vm = PhaseNoiseModel::von_mises(1.0);
    const auto p = make_params(50.0, 1, OperationMode::non_synchronous, vm);
    const PskConstellation c(8);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const Frame f = random_frame(p, c.symbol(i % 8), i);
        CHECK(detect_high_snr_sync(f, 8).decided_index ==
              detect_high_snr_nonsync(f, 8).decided_index);
    }
}

TEST_CASE("scaled pairwise log-likelihood ratio identities") {
    const int N = 8, M = 5;

    std::vector<double> zeros(M, 0.0);
    for (int n = 1; n < N; ++n) {
        const double s = std::sin(kPi * n / N);
        CHECK(close(llr_high_snr_nonsync(zeros, n, N), -s * s, 0.0, 1e-15));
    }

    for (int n = 1; n < N; ++n) {
        std::vector<double> at_n(M, 2.0 * kPi * n / N);
        const double s = std::sin(kPi * n / N);
        CHECK(close(llr_high_snr_nonsync(at_n, n, N), s * s, 0.0, 1e-14));
    }

    // Equivalent closed form via the cosine difference of the von Mises
    // exponents: LLR_n = (1 / 2M) sum_m [cos(psi_m - 2 pi n/N) - cos(psi_m)].
    RandomStream rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> psi(M);
        for (auto& v : psi) v = rng.next_angle();
        for (int n = 1; n < N; ++n) {
            double direct = 0.0;
            for (double v : psi)
                direct += std::cos(v - 2.0 * kPi * n / N) - std::cos(v);
            direct /= 2.0 * M;
            CHECK(close(llr_high_snr_nonsync(psi, n, N), direct, 0.0, 1e-12));
        }
    }
}

TEST_CASE("zero SNR produces uninformative ties resolved to index zero") {
    const auto vm = PhaseNoiseModel::von_mises(2.0);
    const auto p = make_params(0.0, 2, OperationMode::non_synchronous, vm);
    const Frame f = random_frame(p, {1.0, 0.0}, 3);
    const DetectionResult r = detect_ml(f, PskConstellation(4), p);
    CHECK(r.decided_index == 0);
    CHECK(r.tie_broken);
    for (double s : r.scores) CHECK(s == r.scores[0]);
}

TEST_CASE("per-antenna phase models are accepted and used") {
    const auto vm2 = PhaseNoiseModel::von_mises(2.0);
    const auto vm8 = PhaseNoiseModel::von_mises(8.0);
    const std::vector<PhaseNoiseModel> same{vm2, vm2};
    const std::vector<PhaseNoiseModel> mixed{vm2, vm8};

    const auto p = make_params(4.0, 2, OperationMode::non_synchronous, vm2);
    const Frame f = random_frame(p, {0.0, 1.0}, 8);

    const double shared = loglik_nonsync(f, {0.0, 1.0}, vm2, 4.0);
    CHECK(loglik_nonsync(f, {0.0, 1.0}, same, 4.0) == shared);
    CHECK(loglik_nonsync(f, {0.0, 1.0}, mixed, 4.0) != shared);

    const std::vector<PhaseNoiseModel> wrong{vm2, vm2, vm2};
    CHECK_THROWS_AS(loglik_nonsync(f, {0.0, 1.0}, wrong, 4.0),
                    std::invalid_argument);
}

TEST_CASE("sine-series comparator tracks the exact detector") {
    const auto vm = PhaseNoiseModel::von_mises(3.0);
    const PskConstellation c(8);
    const auto p = make_params(10.0, 3, OperationMode::synchronous, vm);

    int agree = 0;
    const int reps = 500;
    for (int i = 0; i < reps; ++i) {
        const Frame f = random_frame(p, c.symbol(i % 8), i);
        CHECK(sync_psk_score_sine_series(f, 0, 8, vm, 10.0) == 0.0);
        int best = 0;
        double bv = -1e308;
        for (int n = 0; n < 8; ++n) {
            const double v = sync_psk_score_sine_series(f, n, 8, vm, 10.0);
            if (v > bv) { bv = v; best = n; }
        }
        if (best == detect_ml(f, c, p).decided_index) ++agree;
    }
    MESSAGE("sine-series comparator agreement: ", agree, "/", reps);
    CHECK(agree >= 0);  // reported, not asserted
}

TEST_CASE("invalid detector arguments are rejected") {
    const auto vm = PhaseNoiseModel::von_mises(1.0);
    const auto p = make_params(1.0, 2, OperationMode::non_synchronous, vm);
    const Frame f = random_frame(p, {1.0, 0.0}, 1);

    CHECK_THROWS_AS(loglik_nonsync(f, {1.0, 0.0}, vm, -1.0), std::domain_error);
    CHECK_THROWS_AS(loglik_nonsync(f, {1.0, 0.0}, vm, 1.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(loglik_nonsync(f, {1.0, 0.0}, vm, 1.0, 500),
                    std::invalid_argument);
    CHECK_THROWS_AS(loglik_psk_nonsync(f, 9, 8, {&vm, 1}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(loglik_psk_sync(f, -1, 8, vm, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_psk_index(0.0, 1), std::invalid_argument);

    Frame bad;
    bad.x.resize(2);
    bad.y.resize(1);
    CHECK_THROWS_AS(loglik_sync(bad, {1.0, 0.0}, vm, 1.0),
                    std::invalid_argument);
}
