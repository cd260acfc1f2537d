#include "flexdist/special.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"

namespace flexdist::special {

double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidParameter("log_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("incomplete_beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

double normal_log_cdf(double z) {
  if (z > -37.0) return std::log(normal_cdf(z));
  // Asymptotic Mills-ratio series; the first omitted term is below 1e-15 here.
  const double r = 1.0 / (z * z);
  double series = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * r;
    series += term;
  }
  return -0.5 * z * z - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidParameter("normal_quantile: probability outside [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double student_t_log_pdf(double t, double nu) {
  return log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
         0.5 * (nu + 1.0) * std::log1p(t * t / nu);
}

double student_t_cdf(double t, double nu) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  double tail;
  if (nu > 2.0 * t2) {
    // Near the centre I_x(nu/2, 1/2) is close to 1; work with y = 1 - x directly.
    const double y = t2 / (nu + t2);
    tail = 0.5 * boost::math::ibetac(0.5, 0.5 * nu, y);
  } else {
    const double x = nu / (nu + t2);
    tail = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, x);
  }
  return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_quantile(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidParameter("student_t_quantile: probability outside [0, 1]");
  }
  if (p == 0.5) return 0.0;
  const auto g = [&](double t) { return student_t_cdf(t, nu) - p; };
  double lo = -1.0;
  double hi = 1.0;
  while (g(lo) > 0.0) lo *= 2.0;
  while (g(hi) < 0.0) hi *= 2.0;
  const double tol = 1e-14 * std::max(1.0, std::min(std::abs(lo), std::abs(hi)));
  return find_root(g, lo, hi, tol);
}

}  // namespace flexdist::special
