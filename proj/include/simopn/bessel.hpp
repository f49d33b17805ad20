#pragma once

#include <span>
#include <vector>

namespace simopn {

// Largest supported order for the integer-order modified Bessel routines.
// Likelihood series and Fourier coefficient chains never need more.
inline constexpr int kMaxBesselOrder = 256;

// I_0(x) and I_1(x), and their exponentially scaled companions
// e^{-x} I_0(x), e^{-x} I_1(x). Accurate to near machine precision for
// x >= 0; the scaled forms stay finite for arbitrarily large x.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);

// I_1(x) / I_0(x), monotone from 0 at x = 0 toward 1 as x -> inf.
double bessel_i1_i0_ratio(double x);

// Ratio sequence r[l] = I_l(x) / I_0(x) for l = 0..order_max.
// Each r[l] lies in [0, 1] and the sequence is non-increasing in l.
// Likelihood evaluation consumes these ratios directly, which keeps all
// series arithmetic well scaled at large arguments where I_l itself
// overflows. Requires 0 <= order_max <= kMaxBesselOrder and x >= 0.
void bessel_i_ratio_sequence(int order_max, double x, std::span<double> out);
std::vector<double> bessel_i_ratio_sequence(int order_max, double x);

// I_order(x). Overflows to +inf for x beyond roughly 709; callers that
// need large arguments must use log_bessel_i instead.
double bessel_i(int order, double x);

// e^{-x} I_order(x); may underflow to 0 at large order.
double bessel_i_scaled(int order, double x);

// ln I_order(x). Returns -inf for order >= 1 at x = 0, and 0 at (0, 0).
// Finite and accurate over the full supported range, including arguments
// far past the overflow point of bessel_i.
double log_bessel_i(int order, double x);

// All representations of one evaluation in a single call.
struct BesselEval {
    int order = 0;
    double argument = 0.0;
    double value = 0.0;         // I_order(x), +inf on overflow
    double scaled_value = 0.0;  // e^{-x} I_order(x)
    double log_value = 0.0;     // ln I_order(x)
};
BesselEval evaluate_bessel(int order, double x);

}  // namespace simopn
