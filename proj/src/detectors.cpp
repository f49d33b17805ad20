#include "simopn/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "simopn/bessel.hpp"

namespace simopn {
namespace {

constexpr double kLnPi = 1.1447298858494001741;  // ln(pi)

// Coefficients below round-off of any bracket value cannot influence a
// score; dropping them shortens both Bessel chains.
constexpr double kAlphaDropThreshold = 1e-15;

void trim_trailing(std::vector<double>& c) {
    std::size_t keep = c.size();
    while (keep > 1 && std::abs(c[keep - 1]) < kAlphaDropThreshold) --keep;
    c.resize(keep);
}

// Per-series data shared by every symbol hypothesis of one evaluation:
// the term amplitudes alpha_l r_l(a) r_l(b) and the scaled-Bessel part of
// the normalization.
struct SeriesAmplitudes {
    double log_i0_pair = 0.0;
    std::vector<double> terms;  // index l-1 holds the order-l amplitude
    bool at_cap = false;        // true model series extends past the cap
};

SeriesAmplitudes make_amplitudes(double a, double b,
                                 const std::vector<double>& alphas,
                                 int truncation, bool model_extends) {
    const int order = static_cast<int>(alphas.size()) - 1;
    SeriesAmplitudes s;
    s.log_i0_pair = std::log(bessel_i0_scaled(a)) + std::log(bessel_i0_scaled(b));
    s.at_cap = model_extends && order == truncation;
    if (order < 1) return s;

    const auto ra = bessel_i_ratio_sequence(order, a);
    const auto rb = bessel_i_ratio_sequence(order, b);
    s.terms.resize(order);
    for (int l = 1; l <= order; ++l)
        s.terms[l - 1] = alphas[l] * ra[l] * rb[l];
    return s;
}

// ln of  1 + 2 sum_l term_l cos(l zeta), floored at kBracketFloor.
// cos(l zeta) advances through a Chebyshev two-term recurrence.
double eval_log_bracket(const SeriesAmplitudes& s, double zeta,
                        SeriesDiagnostics* diag) {
    double bracket = 1.0;
    const double c1 = std::cos(zeta);
    const double twoc = 2.0 * c1;
    double c_prev = 1.0, c_cur = c1;
    std::size_t used = 0;
    bool stopped = false;
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        bracket += 2.0 * s.terms[i] * c_cur;
        const double c_next = twoc * c_cur - c_prev;
        c_prev = c_cur;
        c_cur = c_next;
        used = i + 1;
        if (s.terms[i] < kSeriesStopRel * std::abs(bracket)) {
            stopped = true;
            break;
        }
    }
    if (diag) {
        diag->max_term_index =
            std::max(diag->max_term_index, static_cast<int>(used));
        if (!stopped && s.at_cap && !s.terms.empty() &&
            s.terms.back() >= kSeriesUnconvergedRel * std::abs(bracket))
            diag->converged = false;
        if (bracket < kBracketFloor) ++diag->clamped_brackets;
    }
    return std::log(std::max(bracket, kBracketFloor));
}

void check_frame(const Frame& frame) {
    if (frame.x.empty() || frame.x.size() != frame.y.size())
        throw std::invalid_argument("likelihood: malformed frame");
}

void check_rho_trunc(double rho, int truncation) {
    if (!(rho >= 0.0))
        throw std::domain_error("likelihood: rho must be >= 0");
    if (truncation < 1 || truncation > kMaxBesselOrder)
        throw std::invalid_argument("likelihood: truncation out of range");
}

std::vector<double> detector_coefficients(const PhaseNoiseModel& model,
                                          int truncation) {
    auto alphas = model.coefficients(truncation);
    trim_trailing(alphas);
    return alphas;
}

bool extends_past(const PhaseNoiseModel& model, int truncation) {
    // A von Mises series never terminates; a general model is complete
    // once all its stored coefficients are in.
    return model.kind() == PhaseNoiseModel::Kind::von_mises ||
           model.truncation_order() > truncation;
}

struct NonsyncWorkspace {
    double base = 0.0;               // symbol-independent log terms
    std::vector<double> omega;       // arg(y_m) - arg(x_m), wrapped
    std::vector<SeriesAmplitudes> amps;
};

// Precomputation valid for every unit-modulus symbol hypothesis.
NonsyncWorkspace prepare_nonsync_unit(const Frame& frame,
                                      std::span<const PhaseNoiseModel> models,
                                      double rho, int truncation) {
    const int m_count = static_cast<int>(frame.x.size());
    if (!(models.size() == 1 ||
          models.size() == static_cast<std::size_t>(m_count)))
        throw std::invalid_argument(
            "likelihood: need one phase model, or one per antenna");

    const double sr = std::sqrt(rho);
    NonsyncWorkspace w;
    w.omega.resize(m_count);
    w.amps.reserve(m_count);
    w.base = -2.0 * m_count * kLnPi;

    std::vector<double> shared_alphas;
    bool shared_extends = false;
    if (models.size() == 1) {
        shared_alphas = detector_coefficients(models[0], truncation);
        shared_extends = extends_past(models[0], truncation);
    }

    for (int m = 0; m < m_count; ++m) {
        const double ax = std::abs(frame.x[m]);
        const double ay = std::abs(frame.y[m]);
        const double a = 2.0 * sr * ay;
        const double b = 2.0 * sr * ax;

        const PhaseNoiseModel& model = models.size() == 1 ? models[0] : models[m];
        SeriesAmplitudes amp =
            models.size() == 1
                ? make_amplitudes(a, b, shared_alphas, truncation, shared_extends)
                : make_amplitudes(a, b, detector_coefficients(model, truncation),
                                  truncation, extends_past(model, truncation));

        w.base += -(ax - sr) * (ax - sr) - (ay - sr) * (ay - sr) + amp.log_i0_pair;
        w.omega[m] = wrap_angle(std::arg(frame.y[m]) - std::arg(frame.x[m]));
        w.amps.push_back(std::move(amp));
    }
    return w;
}

struct SyncWorkspace {
    double base = 0.0;
    double omega = 0.0;  // arg(sum y) - arg(sum x), wrapped
    SeriesAmplitudes amp;
};

SyncWorkspace prepare_sync_unit(const Frame& frame,
                                const PhaseNoiseModel& model, double rho,
                                int truncation) {
    const int m_count = static_cast<int>(frame.x.size());
    const double sr = std::sqrt(rho);

    std::complex<double> u{0.0, 0.0}, v{0.0, 0.0};
    for (const auto& c : frame.x) u += c;
    for (const auto& c : frame.y) v += c;

    // ||x||^2 split into the centered part and |1^T x|^2 / M, so that the
    // large signal term cancels against the Bessel argument analytically
    // instead of numerically.
    double centered = 0.0;
    const std::complex<double> xbar = u / static_cast<double>(m_count);
    const std::complex<double> ybar = v / static_cast<double>(m_count);
    for (const auto& c : frame.x) centered += std::norm(c - xbar);
    for (const auto& c : frame.y) centered += std::norm(c - ybar);

    const double au = std::abs(u), av = std::abs(v);
    const double sqrt_m = std::sqrt(static_cast<double>(m_count));
    const double a = 2.0 * sr * av;
    const double b = 2.0 * sr * au;

    SyncWorkspace w;
    w.amp = make_amplitudes(a, b, detector_coefficients(model, truncation),
                            truncation, extends_past(model, truncation));
    const double dx = au / sqrt_m - sr * sqrt_m;
    const double dy = av / sqrt_m - sr * sqrt_m;
    w.base = -centered - dx * dx - dy * dy + w.amp.log_i0_pair -
             2.0 * m_count * kLnPi;
    w.omega = wrap_angle(std::arg(v) - std::arg(u));
    return w;
}

int argmax_with_ties(const std::vector<double>& scores, bool* tie_broken) {
    int best = 0;
    bool tie = false;
    for (int n = 1; n < static_cast<int>(scores.size()); ++n) {
        if (scores[n] > scores[best]) {
            best = n;
            tie = false;
        } else if (scores[n] == scores[best]) {
            tie = true;
        }
    }
    if (tie_broken) *tie_broken = tie;
    return best;
}

}  // namespace

double loglik_nonsync(const Frame& frame, std::complex<double> symbol,
                      std::span<const PhaseNoiseModel> models, double rho,
                      int truncation, SeriesDiagnostics* diag) {
    check_frame(frame);
    check_rho_trunc(rho, truncation);
    const int m_count = static_cast<int>(frame.x.size());
    if (!(models.size() == 1 ||
          models.size() == static_cast<std::size_t>(m_count)))
        throw std::invalid_argument(
            "likelihood: need one phase model, or one per antenna");

    const double sr = std::sqrt(rho);
    const double s_abs = std::abs(symbol);
    const double s_arg = std::arg(symbol);

    std::vector<double> shared_alphas;
    bool shared_extends = false;
    if (models.size() == 1) {
        shared_alphas = detector_coefficients(models[0], truncation);
        shared_extends = extends_past(models[0], truncation);
    }

    double total = -2.0 * m_count * kLnPi;
    for (int m = 0; m < m_count; ++m) {
        const double ax = std::abs(frame.x[m]);
        const double ay = std::abs(frame.y[m]);
        const double a = 2.0 * sr * s_abs * ay;
        const double b = 2.0 * sr * ax;

        const PhaseNoiseModel& model = models.size() == 1 ? models[0] : models[m];
        const SeriesAmplitudes amp =
            models.size() == 1
                ? make_amplitudes(a, b, shared_alphas, truncation, shared_extends)
                : make_amplitudes(a, b, detector_coefficients(model, truncation),
                                  truncation, extends_past(model, truncation));

        const double zeta =
            wrap_angle(std::arg(frame.y[m]) - std::arg(frame.x[m]) - s_arg);
        const double dx = ax - sr;
        const double dy = ay - sr * s_abs;
        total += -dx * dx - dy * dy + amp.log_i0_pair +
                 eval_log_bracket(amp, zeta, diag);
    }
    return total;
}

double loglik_nonsync(const Frame& frame, std::complex<double> symbol,
                      const PhaseNoiseModel& model, double rho, int truncation,
                      SeriesDiagnostics* diag) {
    return loglik_nonsync(frame, symbol, std::span<const PhaseNoiseModel>(&model, 1),
                          rho, truncation, diag);
}

double loglik_sync(const Frame& frame, std::complex<double> symbol,
                   const PhaseNoiseModel& model, double rho, int truncation,
                   SeriesDiagnostics* diag) {
    check_frame(frame);
    check_rho_trunc(rho, truncation);
    const int m_count = static_cast<int>(frame.x.size());
    const double sr = std::sqrt(rho);
    const double s_abs = std::abs(symbol);

    std::complex<double> u{0.0, 0.0}, v{0.0, 0.0};
    for (const auto& c : frame.x) u += c;
    for (const auto& c : frame.y) v += c;

    double centered = 0.0;
    const std::complex<double> xbar = u / static_cast<double>(m_count);
    const std::complex<double> ybar = v / static_cast<double>(m_count);
    for (const auto& c : frame.x) centered += std::norm(c - xbar);
    for (const auto& c : frame.y) centered += std::norm(c - ybar);

    const double au = std::abs(u), av = std::abs(v);
    const double sqrt_m = std::sqrt(static_cast<double>(m_count));
    const double a = 2.0 * sr * s_abs * av;
    const double b = 2.0 * sr * au;

    const SeriesAmplitudes amp =
        make_amplitudes(a, b, detector_coefficients(model, truncation),
                        truncation, extends_past(model, truncation));
    const double zeta =
        wrap_angle(std::arg(v) - std::arg(u) - std::arg(symbol));
    const double dx = au / sqrt_m - sr * sqrt_m;
    const double dy = av / sqrt_m - sr * sqrt_m * s_abs;
    return -centered - dx * dx - dy * dy + amp.log_i0_pair -
           2.0 * m_count * kLnPi + eval_log_bracket(amp, zeta, diag);
}

double loglik_psk_nonsync(const Frame& frame, int symbol_index,
                          int constellation_order,
                          std::span<const PhaseNoiseModel> models, double rho,
                          int truncation, SeriesDiagnostics* diag) {
    check_frame(frame);
    check_rho_trunc(rho, truncation);
    const PskConstellation c(constellation_order);
    if (symbol_index < 0 || symbol_index >= constellation_order)
        throw std::invalid_argument("likelihood: symbol index out of range");

    const NonsyncWorkspace w = prepare_nonsync_unit(frame, models, rho, truncation);
    double total = w.base;
    const double shift = c.phase(symbol_index);
    for (std::size_t m = 0; m < w.amps.size(); ++m)
        total += eval_log_bracket(w.amps[m], wrap_angle(w.omega[m] - shift), diag);
    return total;
}

double loglik_psk_sync(const Frame& frame, int symbol_index,
                       int constellation_order, const PhaseNoiseModel& model,
                       double rho, int truncation, SeriesDiagnostics* diag) {
    check_frame(frame);
    check_rho_trunc(rho, truncation);
    const PskConstellation c(constellation_order);
    if (symbol_index < 0 || symbol_index >= constellation_order)
        throw std::invalid_argument("likelihood: symbol index out of range");

    const SyncWorkspace w = prepare_sync_unit(frame, model, rho, truncation);
    return w.base +
           eval_log_bracket(w.amp, wrap_angle(w.omega - c.phase(symbol_index)),
                            diag);
}

DetectionResult detect_ml(const Frame& frame,
                          const PskConstellation& constellation,
                          const ChannelParams& params, int truncation,
                          SeriesDiagnostics* diag) {
    check_frame(frame);
    check_rho_trunc(params.rho, truncation);
    const int n_symbols = constellation.size();

    DetectionResult result;
    result.scores.resize(n_symbols);

    if (params.mode == OperationMode::synchronous) {
        const SyncWorkspace w =
            prepare_sync_unit(frame, params.phase_model, params.rho, truncation);
        for (int n = 0; n < n_symbols; ++n)
            result.scores[n] =
                w.base + eval_log_bracket(
                             w.amp, wrap_angle(w.omega - constellation.phase(n)),
                             diag);
    } else {
        const PhaseNoiseModel& model = params.phase_model;
        const NonsyncWorkspace w = prepare_nonsync_unit(
            frame, std::span<const PhaseNoiseModel>(&model, 1), params.rho,
            truncation);
        for (int n = 0; n < n_symbols; ++n) {
            double s = w.base;
            const double shift = constellation.phase(n);
            for (std::size_t m = 0; m < w.amps.size(); ++m)
                s += eval_log_bracket(w.amps[m],
                                      wrap_angle(w.omega[m] - shift), diag);
            result.scores[n] = s;
        }
    }
    result.decided_index = argmax_with_ties(result.scores, &result.tie_broken);
    return result;
}

int nearest_psk_index(double psi, int order) {
    if (order < 2)
        throw std::invalid_argument("nearest_psk_index: order must be >= 2");
    const double step = 2.0 * std::numbers::pi / order;
    const double half = std::numbers::pi / order;
    long k = static_cast<long>(std::floor(psi / step + 0.5));
    // Settle exact-boundary cases so the half-open region convention holds
    // even when the division above rounds the wrong way.
    const double d = psi - static_cast<double>(k) * step;
    if (d >= half)
        ++k;
    else if (d < -half)
        --k;
    k %= order;
    if (k < 0) k += order;
    return static_cast<int>(k);
}

DetectionResult detect_high_snr_sync(const Frame& frame,
                                     int constellation_order) {
    check_frame(frame);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < frame.x.size(); ++m)
        acc += std::conj(frame.x[m]) * frame.y[m];
    const double psi = std::arg(acc);

    DetectionResult result;
    result.decided_index = nearest_psk_index(psi, constellation_order);
    result.scores.resize(constellation_order);
    const PskConstellation c(constellation_order);
    for (int n = 0; n < constellation_order; ++n)
        result.scores[n] = std::cos(psi - c.phase(n));
    for (int n = 0; n < constellation_order; ++n) {
        if (n != result.decided_index &&
            result.scores[n] == result.scores[result.decided_index]) {
            result.tie_broken = true;
            break;
        }
    }
    return result;
}

std::vector<double> pairwise_phases(const Frame& frame) {
    check_frame(frame);
    std::vector<double> psi(frame.x.size());
    for (std::size_t m = 0; m < frame.x.size(); ++m)
        psi[m] = std::arg(std::conj(frame.x[m]) * frame.y[m]);
    return psi;
}

DetectionResult detect_high_snr_nonsync(const Frame& frame,
                                        int constellation_order) {
    const std::vector<double> psi = pairwise_phases(frame);
    const PskConstellation c(constellation_order);

    DetectionResult result;
    result.scores.resize(constellation_order);
    for (int n = 0; n < constellation_order; ++n) {
        double s = 0.0;
        for (double p : psi) s += std::cos(p - c.phase(n));
        result.scores[n] = s;
    }
    result.decided_index = argmax_with_ties(result.scores, &result.tie_broken);
    return result;
}

double llr_high_snr_nonsync(std::span<const double> psi, int symbol_index,
                            int constellation_order) {
    if (constellation_order < 2 || symbol_index < 0 ||
        symbol_index >= constellation_order)
        throw std::invalid_argument("llr_high_snr_nonsync: bad symbol index");
    if (psi.empty())
        throw std::invalid_argument("llr_high_snr_nonsync: no phases");
    const double half = std::numbers::pi * symbol_index / constellation_order;
    const double amp = std::sin(half);
    double s = 0.0;
    for (double p : psi) s += std::sin(p - half);
    return amp * s / static_cast<double>(psi.size());
}

double sync_psk_score_sine_series(const Frame& frame, int symbol_index,
                                  int constellation_order,
                                  const PhaseNoiseModel& model, double rho,
                                  int truncation) {
    check_frame(frame);
    check_rho_trunc(rho, truncation);
    const PskConstellation c(constellation_order);
    if (symbol_index < 0 || symbol_index >= constellation_order)
        throw std::invalid_argument("likelihood: symbol index out of range");

    const SyncWorkspace w = prepare_sync_unit(frame, model, rho, truncation);
    const double half = 0.5 * c.phase(symbol_index);
    double score = 0.0;
    for (std::size_t i = 0; i < w.amp.terms.size(); ++i) {
        const double l = static_cast<double>(i + 1);
        score += w.amp.terms[i] * std::sin(l * half) *
                 std::sin(l * (w.omega - half));
    }
    return score;
}

}  // namespace simopn
