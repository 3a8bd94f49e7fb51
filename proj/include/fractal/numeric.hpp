#pragma once

#include <functional>

// Ordinary one-dimensional quadrature and differencing used for state-space
// quantities (potentials, slopes) and for tau-integrals of coefficients.
namespace fractal::numeric {

/// Composite 5-point Gauss-Legendre over [a, b]; panels scale with |b - a|.
double integrate(const std::function<double(double)>& f, double a, double b, int min_panels = 8);

/// Central difference with step cbrt(eps) * max(1, |x|). Throws
/// NumericalError when the step underflows or the result is not finite.
double central_difference(const std::function<double(double)>& f, double x);

}  // namespace fractal::numeric
