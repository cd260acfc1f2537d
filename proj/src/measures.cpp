#include "flexdist/measures.hpp"

#include <cmath>

#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"

namespace flexdist {

double ag_skewness(const Distribution& d) { return 1.0 - 2.0 * d.cdf(d.mode()); }

double quantile_kurtosis(const Distribution& d) {
  double q[8];
  for (int i = 1; i <= 7; ++i) q[i] = d.quantile(i / 8.0);
  const double spread = q[6] - q[2];
  if (!(spread > 0.0)) throw NumericalFailure("quantile_kurtosis: degenerate interquartile spread");
  return ((q[7] - q[5]) + (q[3] - q[1])) / spread;
}

MomentResult moment(const Distribution& d, int r) {
  if (r < 1) throw InvalidParameter("moment order must be >= 1");
  if (!(r < d.tail_index())) return {false, kInfinity};

  const LocationScale& loc = d.location_scale();
  const double tol = 1e-11 * std::pow(std::max(1.0, std::abs(loc.mu()) + loc.sigma()), r);
  if (d.has_density()) {
    return {true, integrate_real_line([&](double x) { return std::pow(x, r) * d.pdf(x); }, loc.mu(), tol)};
  }
  // No density: integrate over the base, E[(mu + sigma H^{-1}(Z))^r].
  const auto& t = std::get<TransformParams>(d.spec());
  const auto integrand = [&](double z) {
    const double f = t.base.pdf(z);
    return f == 0.0 ? 0.0 : std::pow(loc.mu() + loc.sigma() * t.tr.inverse(z), r) * f;
  };
  return {true, integrate_real_line(integrand, 0.0, tol)};
}

}  // namespace flexdist
