#pragma once

#include <complex>
#include <span>
#include <vector>

#include "simopn/channel.hpp"
#include "simopn/constellation.hpp"
#include "simopn/phase_noise.hpp"

namespace simopn {

// Hard cap on the likelihood series length. The adaptive stop rule ends
// most evaluations far earlier; the cap only matters at very large
// concentration where the coefficients decay slowly.
inline constexpr int kDefaultTruncation = 128;

// Relative size at which an additional series term is considered spent.
inline constexpr double kSeriesStopRel = 1e-12;

// If the series is cut at the hard cap while terms are still this large
// relative to the partial sum, the evaluation is flagged as unconverged.
inline constexpr double kSeriesUnconvergedRel = 1e-9;

// Positive floor applied to the cosine-series bracket before taking its
// logarithm. A mathematically positive quantity can round to zero or
// slightly below in fp; flooring keeps the log finite while preserving
// the ordering of scores that differ by more than the floor.
inline constexpr double kBracketFloor = 1e-300;

// Evaluation-quality report accumulated across all series in a call.
struct SeriesDiagnostics {
    int max_term_index = 0;    // largest series index actually summed
    int clamped_brackets = 0;  // brackets that hit kBracketFloor
    bool converged = true;     // false if any series hit the cap hot

    void merge(const SeriesDiagnostics& other) {
        if (other.max_term_index > max_term_index)
            max_term_index = other.max_term_index;
        clamped_brackets += other.clamped_brackets;
        converged = converged && other.converged;
    }
};

// Exact log likelihood ln p(x, y | s) for the per-antenna-oscillator
// model, evaluated in the log domain so it stays finite at any SNR.
// `models` holds either one shared phase-noise model or one per antenna.
double loglik_nonsync(const Frame& frame, std::complex<double> symbol,
                      std::span<const PhaseNoiseModel> models, double rho,
                      int truncation = kDefaultTruncation,
                      SeriesDiagnostics* diag = nullptr);
double loglik_nonsync(const Frame& frame, std::complex<double> symbol,
                      const PhaseNoiseModel& model, double rho,
                      int truncation = kDefaultTruncation,
                      SeriesDiagnostics* diag = nullptr);

// Exact log likelihood for the shared-oscillator model. Sufficient
// statistics are the antenna sums of x and y; the quadratic part is
// grouped around them so no catastrophic cancellation occurs at high SNR.
double loglik_sync(const Frame& frame, std::complex<double> symbol,
                   const PhaseNoiseModel& model, double rho,
                   int truncation = kDefaultTruncation,
                   SeriesDiagnostics* diag = nullptr);

// PSK specializations. For a unit-modulus alphabet the series amplitudes
// are symbol independent and only the angle shifts by 2 pi n / N, so one
// set of Bessel chains serves all N hypotheses. Values agree with the
// generic forms up to round-off and have identical argmax behaviour.
double loglik_psk_nonsync(const Frame& frame, int symbol_index,
                          int constellation_order,
                          std::span<const PhaseNoiseModel> models, double rho,
                          int truncation = kDefaultTruncation,
                          SeriesDiagnostics* diag = nullptr);
double loglik_psk_sync(const Frame& frame, int symbol_index,
                       int constellation_order, const PhaseNoiseModel& model,
                       double rho, int truncation = kDefaultTruncation,
                       SeriesDiagnostics* diag = nullptr);

struct DetectionResult {
    int decided_index = 0;
    std::vector<double> scores;  // one per constellation symbol
    bool tie_broken = false;     // a score tie was resolved to the
                                 // smallest index
};

// Exact maximum-likelihood detection over a PSK alphabet under the mode
// and phase model in `params`. Ties resolve to the smallest index.
DetectionResult detect_ml(const Frame& frame,
                          const PskConstellation& constellation,
                          const ChannelParams& params,
                          int truncation = kDefaultTruncation,
                          SeriesDiagnostics* diag = nullptr);

// Index of the PSK decision region containing the angle psi. Regions are
// half open: region n is [2 pi n/N - pi/N, 2 pi n/N + pi/N), so an angle
// exactly on the upper edge belongs to the next region.
int nearest_psk_index(double psi, int order);

// Asymptotic (rho -> inf) detectors. The synchronous one quantizes
// arg(x^H y); the non-synchronous one maximizes sum_m cos(psi_m - phase_n)
// over the per-antenna pairwise phases psi_m = arg(x_m^* y_m). Neither
// depends on the phase-noise law.
DetectionResult detect_high_snr_sync(const Frame& frame,
                                     int constellation_order);
DetectionResult detect_high_snr_nonsync(const Frame& frame,
                                        int constellation_order);

// psi_m = arg(x_m^* y_m) for every antenna.
std::vector<double> pairwise_phases(const Frame& frame);

// Scaled high-SNR log-likelihood ratio of symbol n against symbol 0 for
// the non-synchronous model,
//   (1/M) sum_m sin(pi n/N) sin(psi_m - pi n/N),
// equal to ln(p_n/p_0) / (2 kappa M) for von Mises phase noise.
double llr_high_snr_nonsync(std::span<const double> psi, int symbol_index,
                            int constellation_order);

// Experimental synchronous PSK comparator: the likelihood difference
// p_n - p_0 expressed as a sine series in the aggregate angle, rescaled
// by the order-zero series amplitude. Positive scaling preserves argmax,
// so argmax_n of this score is an ML decision in exact arithmetic, but
// its fixed-point behaviour at high SNR is less settled than the log
// form; it is provided for comparison and not used by detect_ml.
double sync_psk_score_sine_series(const Frame& frame, int symbol_index,
                                  int constellation_order,
                                  const PhaseNoiseModel& model, double rho,
                                  int truncation = kDefaultTruncation);

}  // namespace simopn
