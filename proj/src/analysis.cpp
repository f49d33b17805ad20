#include "simopn/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "simopn/bessel.hpp"

namespace simopn {

namespace {

void check_order(int constellation_order) {
    if (constellation_order < 2)
        throw std::invalid_argument("constellation order must be at least 2");
}

void check_pair(int constellation_order, int symbol_index, double kappa) {
    check_order(constellation_order);
    if (symbol_index < 1 || symbol_index >= constellation_order)
        throw std::invalid_argument(
            "pairwise symbol index must lie in [1, order - 1]");
    if (!(kappa >= 0.0))
        throw std::domain_error("concentration must be non-negative");
}

// I_1(kappa) / (kappa I_0(kappa)) with its kappa -> 0 limit of 1/2.
double ratio_over_kappa(double kappa) {
    if (kappa < 1e-6) return 0.5 - kappa * kappa / 16.0;
    return bessel_i1_i0_ratio(kappa) / kappa;
}

}  // namespace

double ser_floor_sync(int constellation_order, const PhaseNoiseModel& model) {
    check_order(constellation_order);
    const double half_region = std::numbers::pi / constellation_order;
    return 1.0 - model.interval_probability(half_region);
}

double pairwise_stat_variance(int constellation_order, int symbol_index,
                              double kappa) {
    check_pair(constellation_order, symbol_index, kappa);
    const double a =
        std::numbers::pi * symbol_index / constellation_order;
    const double s2 = std::sin(a) * std::sin(a);
    const double r = kappa > 0.0 ? bessel_i1_i0_ratio(kappa) : 0.0;
    const double var =
        s2 * (ratio_over_kappa(kappa) * std::cos(2.0 * a) +
              s2 * (1.0 - r * r));
    if (!(var > 0.0))
        throw std::logic_error(
            "pairwise statistic variance evaluated non-positive; "
            "concentration is outside the supported range");
    return var;
}

PairwiseBound bernstein_pairwise_bound(int constellation_order,
                                       int symbol_index, double kappa,
                                       int antennas) {
    check_pair(constellation_order, symbol_index, kappa);
    if (antennas < 1)
        throw std::invalid_argument("antenna count must be positive");

    const double a =
        std::numbers::pi * symbol_index / constellation_order;
    const double s = std::sin(a);
    const double s2 = s * s;
    const double r = kappa > 0.0 ? bessel_i1_i0_ratio(kappa) : 0.0;

    PairwiseBound out;
    out.variance = pairwise_stat_variance(constellation_order, symbol_index,
                                          kappa);
    out.bound_constant = s + s2 * r;
    if (r == 0.0) {
        // Uniform phase increments carry no information about the symbol;
        // the deviation being bounded is zero and the bound is vacuous.
        out.log_bound = 0.0;
        out.bound = 1.0;
        return out;
    }
    const double dev = s2 * r;  // mean separation per antenna
    const double denom =
        2.0 + (2.0 / 3.0) * out.bound_constant * dev / out.variance;
    out.log_bound = -antennas * (dev * dev / out.variance) / denom;
    out.bound = std::exp(out.log_bound);
    return out;
}

double union_bound_ser(int constellation_order, double kappa, int antennas) {
    check_order(constellation_order);
    double sum = 0.0;
    for (int n = 1; n < constellation_order; ++n)
        sum += bernstein_pairwise_bound(constellation_order, n, kappa,
                                        antennas)
                   .bound;
    return std::min(sum, 1.0);
}

}  // namespace simopn
