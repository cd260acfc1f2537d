#include "flexdist/sfa.hpp"

#include <algorithm>
#include <cmath>

#include "flexdist/error.hpp"

namespace flexdist {

SfaDemoResult sfa_composite_error_demo(std::size_t n, double sigma_v, double sigma_u, Rng& rng,
                                       const FitConfig& config) {
  if (!(sigma_v > 0.0) || !std::isfinite(sigma_v)) throw InvalidParameter("sigma_v must be positive");
  if (!(sigma_u >= 0.0) || !std::isfinite(sigma_u)) throw InvalidParameter("sigma_u must be non-negative");
  if (n < 8) throw InvalidParameter("the demo needs at least 8 observations");

  SfaDemoResult out;
  out.sample.resize(n);
  for (auto& e : out.sample) {
    const double v = sigma_v * rng.normal();
    const double u = sigma_u * std::abs(rng.normal());
    e = v - u;
  }
  out.normal_fit = fit_mle(Family::Normal, out.sample, config);
  out.skew_normal_fit = fit_mle(Family::SkewNormal, out.sample, config);
  out.lr_statistic = std::max(0.0, 2.0 * (out.skew_normal_fit.loglik - out.normal_fit.loglik));
  return out;
}

}  // namespace flexdist
