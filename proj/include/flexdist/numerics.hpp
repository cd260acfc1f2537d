#pragma once

#include <functional>

namespace flexdist {

using ScalarFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod quadrature of f over [a, b].
///
/// Either endpoint may be infinite; the interval is then mapped through
/// x = tan(t) onto a finite one. Throws NumericalFailure when the error
/// estimate is still above `tol` after the maximum number of bisections.
double integrate(const ScalarFunction& f, double a, double b, double tol = 1e-10);

/// Integral over the whole real line, split at `breakpoint` (kinks, modes).
double integrate_real_line(const ScalarFunction& f, double breakpoint = 0.0, double tol = 1e-10);

/// Bracketing root finder (TOMS 748). Requires g(lo) * g(hi) <= 0; the
/// returned point lies inside a final bracket no wider than `tol`.
double find_root(const ScalarFunction& g, double lo, double hi, double tol = 1e-12);

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
double golden_section_max(const ScalarFunction& f, double lo, double hi, double tol = 1e-9);

}  // namespace flexdist
