#include "simopn/reference.hpp"

#include <cmath>
#include <numbers>

#include "simopn/quadrature.hpp"

namespace simopn::reference {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvPiSq = 1.0 / (std::numbers::pi * std::numbers::pi);

double gaussian_pair(std::complex<double> x, std::complex<double> y,
                     std::complex<double> mean_x, std::complex<double> mean_y) {
    return kInvPiSq * std::exp(-std::norm(x - mean_x) - std::norm(y - mean_y));
}

}  // namespace

double loglik_nonsync_by_quadrature(const Frame& frame,
                                    std::complex<double> symbol,
                                    const PhaseNoiseModel& model, double rho,
                                    double rel_tol) {
    const double sr = std::sqrt(rho);
    double total = 0.0;
    for (std::size_t m = 0; m < frame.x.size(); ++m) {
        const std::complex<double> x = frame.x[m];
        const std::complex<double> y = frame.y[m];
        const double p = integrate_periodic_2d(
            [&](double theta, double phi) {
                const std::complex<double> mx = sr * std::polar(1.0, theta);
                const std::complex<double> my =
                    sr * symbol * std::polar(1.0, theta + phi);
                return gaussian_pair(x, y, mx, my) * model.pdf(phi);
            },
            rel_tol);
        total += std::log(p / kTwoPi);
    }
    return total;
}

double loglik_sync_by_quadrature(const Frame& frame,
                                 std::complex<double> symbol,
                                 const PhaseNoiseModel& model, double rho,
                                 double rel_tol) {
    const double sr = std::sqrt(rho);
    const double p = integrate_periodic_2d(
        [&](double theta, double phi) {
            double prod = model.pdf(phi);
            const std::complex<double> rot_x = sr * std::polar(1.0, theta);
            const std::complex<double> rot_y =
                sr * symbol * std::polar(1.0, theta + phi);
            for (std::size_t m = 0; m < frame.x.size(); ++m)
                prod *= gaussian_pair(frame.x[m], frame.y[m], rot_x, rot_y);
            return prod;
        },
        rel_tol);
    return std::log(p / kTwoPi);
}

}  // namespace simopn::reference
