#pragma once

#include <complex>

#include "simopn/channel.hpp"
#include "simopn/phase_noise.hpp"

namespace simopn::reference {

// Brute-force log likelihoods evaluated by direct two-dimensional
// numerical integration of the defining marginalization over the carrier
// phase and the oscillator phase error. No series expansion, no Bessel
// functions: these exist solely to cross-check the fast evaluations and
// are practical only at moderate rho where the linear-domain integrand
// does not underflow.
double loglik_nonsync_by_quadrature(const Frame& frame,
                                    std::complex<double> symbol,
                                    const PhaseNoiseModel& model, double rho,
                                    double rel_tol = 1e-9);

double loglik_sync_by_quadrature(const Frame& frame,
                                 std::complex<double> symbol,
                                 const PhaseNoiseModel& model, double rho,
                                 double rel_tol = 1e-9);

}  // namespace simopn::reference
