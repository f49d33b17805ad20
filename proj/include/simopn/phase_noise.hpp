#pragma once

#include <vector>

#include "simopn/rng.hpp"

namespace simopn {

// Circular distribution of an oscillator phase error, represented by its
// cosine-series coefficients alpha_l = E[cos(l phi)] with alpha_0 = 1:
//
//   p(phi) = (1/2pi) * (1 + 2 sum_{l>=1} alpha_l cos(l phi)),  phi in [-pi, pi).
//
// Two constructions are supported: the von Mises family, where
// alpha_l = I_l(kappa)/I_0(kappa) and closed forms exist, and a general
// even density given directly by a finite coefficient list.
class PhaseNoiseModel {
public:
    enum class Kind { von_mises, general_fourier };

    // kappa >= 0; kappa = 0 is the uniform distribution.
    static PhaseNoiseModel von_mises(double kappa);

    // coefficients[l] = alpha_l, starting at alpha_0 = 1. Necessary
    // conditions (|alpha_l| <= 1) are checked exactly; nonnegativity of
    // the truncated density is checked on a dense grid, since a finite
    // cosine series can otherwise go negative.
    static PhaseNoiseModel from_fourier(std::vector<double> coefficients);

    Kind kind() const { return kind_; }

    // von Mises concentration; NaN for general_fourier models.
    double concentration() const { return kappa_; }

    // Stored coefficients alpha_0..alpha_L at the model's own truncation:
    // coefficients below 1e-14 are dropped and the order is capped at 64,
    // which bounds the cost of density evaluation without visible error.
    const std::vector<double>& coefficients() const { return coeffs_; }
    int truncation_order() const { return static_cast<int>(coeffs_.size()) - 1; }

    // alpha_0..alpha_order_max, recomputed exactly for von Mises models
    // (not truncated at 64) and zero-padded for general ones. Consumers
    // that need more terms than the density default, such as likelihood
    // series at large concentration, use this.
    std::vector<double> coefficients(int order_max) const;

    // Density at phi. phi may be any finite angle; the density is 2pi
    // periodic and even. Truncated general series are clamped at zero.
    double pdf(double phi) const;

    // P(|phi| <= half_width) for 0 < half_width <= pi, evaluated from the
    // coefficient series. For von Mises the series is extended adaptively
    // (up to order 256) so large concentrations keep full accuracy.
    double interval_probability(double half_width) const;

    // One draw in [-pi, pi). Von Mises sampling uses the Best-Fisher
    // wrapped-Cauchy rejection method; general models invert the CDF by
    // bisection. Consumption from the stream is deterministic given the
    // stream state.
    double sample(RandomStream& rng) const;

private:
    PhaseNoiseModel() = default;

    Kind kind_ = Kind::von_mises;
    double kappa_ = 0.0;
    std::vector<double> coeffs_;
};

}  // namespace simopn
