#pragma once

#include <functional>

namespace simopn::reference {

// Numerical integration used by the cross-validation path. These routines
// deliberately share no code with the series evaluations they are meant
// to check.

// Adaptive Simpson on [a, b]. rel_tol is relative to the running whole
// integral; abs_floor stops refinement of subintervals whose contribution
// is below it.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_floor = 0.0);

// Trapezoid rule with grid doubling for smooth 2pi-periodic integrands
// over one period; converges geometrically for analytic integrands.
double integrate_periodic(const std::function<double(double)>& f,
                          double rel_tol = 1e-11);

// Tensor-product version over [-pi, pi)^2.
double integrate_periodic_2d(const std::function<double(double, double)>& f,
                             double rel_tol = 1e-9);

}  // namespace simopn::reference
