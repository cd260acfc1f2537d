#pragma once

// Special functions the densities are built on. Thin, thread-safe wrappers;
// erf/erfc come from <cmath>, the gamma family and the incomplete beta from
// Boost.Math.

#include <numbers>

namespace flexdist::special {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1 / sqrt(2 pi)

double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
/// log Phi(z), accurate far into the lower tail where Phi underflows.
double normal_log_cdf(double z);
double normal_quantile(double p);

/// Standard Student t (nu > 0) log-density, cdf, and quantile.
double student_t_log_pdf(double t, double nu);
double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

}  // namespace flexdist::special
