#include "simopn/phase_noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "simopn/bessel.hpp"

namespace simopn {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Model-internal truncation: coefficients below this threshold contribute
// less than round-off to any density or probability evaluation.
constexpr double kCoeffDropThreshold = 1e-14;
constexpr int kPdfTruncationCap = 64;

// Interval probabilities extend the series further: at large
// concentration the coefficients decay slowly and order 64 would bias
// small tail probabilities.
constexpr double kIntervalDropThreshold = 1e-15;
constexpr int kIntervalTruncationCap = kMaxBesselOrder;

std::vector<double> trimmed(std::vector<double> c, double threshold) {
    std::size_t keep = c.size();
    while (keep > 1 && std::abs(c[keep - 1]) < threshold) --keep;
    c.resize(keep);
    return c;
}

}  // namespace

PhaseNoiseModel PhaseNoiseModel::von_mises(double kappa) {
    if (!(kappa >= 0.0))
        throw std::domain_error("PhaseNoiseModel: concentration must be >= 0");
    PhaseNoiseModel m;
    m.kind_ = Kind::von_mises;
    m.kappa_ = kappa;
    m.coeffs_ = trimmed(bessel_i_ratio_sequence(kPdfTruncationCap, kappa),
                        kCoeffDropThreshold);
    return m;
}

PhaseNoiseModel PhaseNoiseModel::from_fourier(std::vector<double> coefficients) {
    if (coefficients.empty())
        throw std::invalid_argument("PhaseNoiseModel: empty coefficient list");
    if (std::abs(coefficients[0] - 1.0) > 1e-12)
        throw std::invalid_argument("PhaseNoiseModel: alpha_0 must equal 1");
    coefficients[0] = 1.0;
    for (std::size_t l = 1; l < coefficients.size(); ++l) {
        if (!(std::abs(coefficients[l]) <= 1.0 + 1e-12))
            throw std::invalid_argument(
                "PhaseNoiseModel: |alpha_l| <= 1 is required");
    }

    PhaseNoiseModel m;
    m.kind_ = Kind::general_fourier;
    m.kappa_ = std::numeric_limits<double>::quiet_NaN();
    m.coeffs_ = trimmed(std::move(coefficients), kCoeffDropThreshold);

    // |alpha_l| <= 1 does not guarantee a nonnegative series; scan a grid
    // dense enough to catch any real violation of a band-limited density.
    const int grid = 512 * std::max<int>(1, m.truncation_order());
    for (int i = 0; i < grid; ++i) {
        const double phi = -std::numbers::pi + kTwoPi * i / grid;
        double s = 0.5;
        for (std::size_t l = 1; l < m.coeffs_.size(); ++l)
            s += m.coeffs_[l] * std::cos(l * phi);
        if (s < -1e-9 * static_cast<double>(m.coeffs_.size()))
            throw std::invalid_argument(
                "PhaseNoiseModel: coefficients give a negative density");
    }
    return m;
}

std::vector<double> PhaseNoiseModel::coefficients(int order_max) const {
    if (order_max < 0 || order_max > kMaxBesselOrder)
        throw std::invalid_argument("PhaseNoiseModel: order out of range");
    if (kind_ == Kind::von_mises)
        return bessel_i_ratio_sequence(order_max, kappa_);
    std::vector<double> out(static_cast<std::size_t>(order_max) + 1, 0.0);
    for (std::size_t l = 0; l < out.size() && l < coeffs_.size(); ++l)
        out[l] = coeffs_[l];
    return out;
}

double PhaseNoiseModel::pdf(double phi) const {
    if (kind_ == Kind::von_mises) {
        // exp(kappa (cos phi - 1)) / (2 pi e^{-kappa} I_0(kappa)), stable
        // for any concentration because both factors are scaled.
        return std::exp(kappa_ * (std::cos(phi) - 1.0)) /
               (kTwoPi * bessel_i0_scaled(kappa_));
    }
    double s = 0.5;
    for (std::size_t l = 1; l < coeffs_.size(); ++l)
        s += coeffs_[l] * std::cos(l * phi);
    // Truncation can leave tiny negative excursions; the density is
    // defined as the clamped series.
    return std::max(0.0, s / std::numbers::pi);
}

double PhaseNoiseModel::interval_probability(double half_width) const {
    if (!(half_width > 0.0 && half_width <= std::numbers::pi))
        throw std::domain_error(
            "interval_probability: half width must lie in (0, pi]");

    double p = half_width / std::numbers::pi;
    if (kind_ == Kind::von_mises) {
        const auto alpha = trimmed(
            bessel_i_ratio_sequence(kIntervalTruncationCap, kappa_),
            kIntervalDropThreshold);
        for (std::size_t l = 1; l < alpha.size(); ++l)
            p += 2.0 / std::numbers::pi * alpha[l] * std::sin(l * half_width) / l;
    } else {
        for (std::size_t l = 1; l < coeffs_.size(); ++l)
            p += 2.0 / std::numbers::pi * coeffs_[l] * std::sin(l * half_width) / l;
    }
    return std::min(1.0, std::max(0.0, p));
}

double PhaseNoiseModel::sample(RandomStream& rng) const {
    if (kind_ == Kind::von_mises) {
        if (kappa_ < 1e-10) return rng.next_angle();

        // Best-Fisher rejection from a wrapped Cauchy envelope.
        const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa_ * kappa_);
        const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa_);
        const double r = (1.0 + rho * rho) / (2.0 * rho);
        double f;
        for (;;) {
            const double z = std::cos(std::numbers::pi * rng.next_unit());
            f = (1.0 + r * z) / (r + z);
            const double c = kappa_ * (r - f);
            const double u = rng.next_unit_open();
            if (c * (2.0 - c) - u > 0.0) break;
            if (std::log(c / u) + 1.0 - c >= 0.0) break;
        }
        const double sign = (rng.next_unit() < 0.5) ? -1.0 : 1.0;
        return wrap_angle(sign * std::acos(std::clamp(f, -1.0, 1.0)));
    }

    // General model: invert F(phi) = (phi + pi)/2pi + (1/pi) sum alpha_l
    // sin(l phi)/l by bisection. 60 halvings pin the angle to below any
    // round-off scale that matters downstream.
    const double u = rng.next_unit();
    double lo = -std::numbers::pi, hi = std::numbers::pi;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        double cdf = (mid + std::numbers::pi) / kTwoPi;
        for (std::size_t l = 1; l < coeffs_.size(); ++l)
            cdf += coeffs_[l] * std::sin(l * mid) / (l * std::numbers::pi);
        if (cdf < u)
            lo = mid;
        else
            hi = mid;
    }
    return wrap_angle(0.5 * (lo + hi));
}

}  // namespace simopn
