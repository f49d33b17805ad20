#pragma once

// Closed-form predictions for the high-SNR behaviour of the two receiver
// architectures: the residual symbol error floor of a synchronous
// (common-oscillator) receiver, and exponential upper bounds on the error
// floor of a non-synchronous (per-antenna oscillator) receiver.

#include "simopn/phase_noise.hpp"

namespace simopn {

// Residual symbol error probability of the synchronous-mode maximum
// likelihood detector as the SNR grows without bound.  The common phase
// increment is the only impairment left at that point, so the floor is the
// probability that the increment falls outside the half-open angular
// decision region of the transmitted PSK symbol, i.e.
// 1 - P(|phi| <= pi / constellation_order).  Independent of the antenna
// count.
double ser_floor_sync(int constellation_order, const PhaseNoiseModel& model);

// Variance of the centered per-antenna decision statistic that drives the
// high-SNR non-synchronous detector when it weighs wrong symbol
// `symbol_index` against the transmitted one.  `kappa` is the von Mises
// concentration of the per-antenna oscillator increments.  At kappa = 0 the
// closed form reduces to sin^2(pi n / N) / 2; that limit is evaluated
// explicitly to avoid a 0/0.
double pairwise_stat_variance(int constellation_order, int symbol_index,
                              double kappa);

struct PairwiseBound {
    double variance;        // variance of the centered statistic
    double bound_constant;  // almost-sure bound on its magnitude
    double log_bound;       // natural log of the probability bound (<= 0)
    double bound;           // exp(log_bound)
};

// Bernstein-type upper bound on the probability that the high-SNR
// non-synchronous detector prefers wrong PSK symbol `symbol_index` over the
// transmitted one, evaluated at the error floor (SNR -> infinity).  The
// bound decays as exp(-c * antennas) with c > 0 whenever kappa > 0; at
// kappa = 0 it degenerates to the trivial bound 1.
PairwiseBound bernstein_pairwise_bound(int constellation_order,
                                       int symbol_index, double kappa,
                                       int antennas);

// Union bound over all wrong symbols, clamped to 1.  Upper bounds the
// symbol error floor of the high-SNR non-synchronous detector.
double union_bound_ser(int constellation_order, double kappa, int antennas);

}  // namespace simopn
