#include "flexdist/skewsym.hpp"

#include <boost/math/special_functions/owens_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"
#include "flexdist/special.hpp"

namespace flexdist {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidParameter(std::string("dimension mismatch: ") + what);
}

// Standardized density 2 f(z) Pi(z, delta).
double standard_density(double z, const SkewSymParams& p) {
  return 2.0 * p.base.pdf(z) * p.skewing(z, p.delta);
}

Eigen::VectorXd spherical_sample(const SymmetricBase& base, int k, Rng& rng) {
  Eigen::VectorXd z(k);
  for (int i = 0; i < k; ++i) z[i] = rng.normal();
  if (base.kind() == BaseKind::StudentT) {
    const double nu = base.nu();
    z /= std::sqrt(2.0 * rng.gamma(0.5 * nu) / nu);
  } else if (base.kind() == BaseKind::Logistic) {
    if (k != 1) throw Unsupported("the logistic base has no k-variate form");
    z[0] = base.sample(rng);
  }
  return z;
}

}  // namespace

SkewingFunction SkewingFunction::cdf_linear(const SymmetricBase& g) { return SkewingFunction(SkewingKind::CdfLinear, g, 0.0); }

SkewingFunction SkewingFunction::student_modulated(double nu) {
  return SkewingFunction(SkewingKind::StudentModulated, SymmetricBase::student_t(nu), nu);
}

double SkewingFunction::argument(double projection, double norm2, int k) const {
  if (kind_ == SkewingKind::CdfLinear) return projection;
  return projection * std::sqrt((nu_ + k) / (norm2 + nu_));
}

double SkewingFunction::log_value_k(double projection, double norm2, int k) const {
  const double arg = argument(projection, norm2, k);
  if (kind_ == SkewingKind::StudentModulated) return std::log(special::student_t_cdf(arg, nu_ + k));
  switch (g_.kind()) {
    case BaseKind::Normal:
      return special::normal_log_cdf(arg);
    case BaseKind::Logistic:
      return arg >= 0.0 ? -std::log1p(std::exp(-arg)) : arg - std::log1p(std::exp(arg));
    case BaseKind::StudentT:
      return std::log(g_.cdf(arg));
  }
  return 0.0;
}

double SkewingFunction::operator()(std::span<const double> y, std::span<const double> delta) const {
  require_same_size(y.size(), delta.size(), "skewing function y and delta");
  double projection = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    projection += delta[i] * y[i];
    norm2 += y[i] * y[i];
  }
  const int k = static_cast<int>(y.size());
  const double arg = argument(projection, norm2, k);
  return kind_ == SkewingKind::CdfLinear ? g_.cdf(arg) : special::student_t_cdf(arg, nu_ + k);
}

double SkewingFunction::operator()(double y, double delta) const {
  const double arg = argument(delta * y, y * y, 1);
  return kind_ == SkewingKind::CdfLinear ? g_.cdf(arg) : special::student_t_cdf(arg, nu_ + 1.0);
}

double SkewingFunction::log_value(double y, double delta) const { return log_value_k(delta * y, y * y, 1); }

SkewSymParams SkewSymParams::skew_normal(double mu, double sigma, double delta) {
  if (!std::isfinite(delta)) throw InvalidParameter("skewness delta must be finite");
  return {SymmetricBase::normal(), LocationScale(mu, sigma), delta, SkewingFunction::cdf_linear(SymmetricBase::normal())};
}

SkewSymParams SkewSymParams::skew_t(double mu, double sigma, double nu, double delta) {
  if (!std::isfinite(delta)) throw InvalidParameter("skewness delta must be finite");
  return {SymmetricBase::student_t(nu), LocationScale(mu, sigma), delta, SkewingFunction::student_modulated(nu)};
}

bool SkewSymParams::is_skew_normal() const {
  return base.kind() == BaseKind::Normal && skewing.kind() == SkewingKind::CdfLinear &&
         skewing.cdf_base().kind() == BaseKind::Normal;
}

double skew_symmetric_pdf(std::span<const double> x, const SkewSymParamsK& p, const SkewingFunction& pi) {
  require_same_size(static_cast<std::size_t>(p.delta.size()), static_cast<std::size_t>(p.mp.k()), "delta vs scatter");
  const Eigen::VectorXd y = p.mp.standardize(x);
  const double symmetric = std::exp(spherical_log_pdf(p.base, y) - 0.5 * p.mp.log_det());
  return 2.0 * symmetric *
         pi(std::span<const double>(y.data(), y.size()), std::span<const double>(p.delta.data(), p.delta.size()));
}

double skew_symmetric_pdf(double x, const SkewSymParams& p) {
  const double z = p.loc.standardize(x);
  return 2.0 * (p.base.pdf(z) / p.loc.sigma()) * p.skewing(z, p.delta);
}

double skew_symmetric_log_pdf(double x, const SkewSymParams& p) {
  const double z = p.loc.standardize(x);
  return std::numbers::ln2 - std::log(p.loc.sigma()) + p.base.log_pdf(z) + p.skewing.log_value(z, p.delta);
}

double skew_symmetric_cdf(double x, const SkewSymParams& p) {
  const double z = p.loc.standardize(x);
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  double value;
  if (p.is_skew_normal()) {
    value = special::normal_cdf(z) - 2.0 * boost::math::owens_t(z, p.delta);
  } else {
    const auto g = [&p](double t) { return standard_density(t, p); };
    value = z <= 0.0 ? integrate(g, -kInfinity, z, 1e-12) : 1.0 - integrate(g, z, kInfinity, 1e-12);
  }
  return std::clamp(value, 0.0, 1.0);
}

double skew_symmetric_quantile(double prob, const SkewSymParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidParameter("quantile: probability must lie in (0, 1)");
  const auto g = [&](double z) { return skew_symmetric_cdf(p.loc.mu() + p.loc.sigma() * z, p) - prob; };
  double lo = -1.0;
  double hi = 1.0;
  while (g(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -1e12) throw NumericalFailure("quantile: lower bracket not found");
  }
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalFailure("quantile: upper bracket not found");
  }
  return p.loc.mu() + p.loc.sigma() * find_root(g, lo, hi, 1e-12);
}

double skew_symmetric_mode(const SkewSymParams& p) {
  const double mu = p.loc.mu();
  const double sigma = p.loc.sigma();
  return golden_section_max([&p](double x) { return skew_symmetric_log_pdf(x, p); }, mu - 10.0 * sigma,
                            mu + 10.0 * sigma, 1e-10 * sigma);
}

double skew_normal_pdf(double x, double mu, double sigma, double delta) {
  return skew_symmetric_pdf(x, SkewSymParams::skew_normal(mu, sigma, delta));
}

Eigen::VectorXd skew_t_effective_skewness(const MatrixParams& mp, std::span<const double> delta) {
  require_same_size(delta.size(), static_cast<std::size_t>(mp.k()), "delta vs scatter");
  const Eigen::Map<const Eigen::VectorXd> d(delta.data(), static_cast<Eigen::Index>(delta.size()));
  const Eigen::VectorXd diag = mp.scatter_sqrt().diagonal();
  return mp.scatter_sqrt() * d.cwiseQuotient(diag);
}

double skew_t_pdf(std::span<const double> x, const MatrixParams& mp, double nu, std::span<const double> delta) {
  const SkewSymParamsK params{SymmetricBase::student_t(nu), mp, skew_t_effective_skewness(mp, delta)};
  return skew_symmetric_pdf(x, params, SkewingFunction::student_modulated(nu));
}

std::vector<double> sample_skew_symmetric(std::size_t n, const SkewSymParams& p, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = p.base.sample(rng);
    const double u = rng.uniform();
    const double signed_z = u < p.skewing(z, p.delta) ? z : -z;
    out.push_back(p.loc.mu() + p.loc.sigma() * signed_z);
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_skew_symmetric(std::size_t n, const SkewSymParamsK& p, const SkewingFunction& pi,
                                                   Rng& rng) {
  const int k = p.mp.k();
  require_same_size(static_cast<std::size_t>(p.delta.size()), static_cast<std::size_t>(k), "delta vs scatter");
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd z = spherical_sample(p.base, k, rng);
    const double u = rng.uniform();
    if (!(u < pi(std::span<const double>(z.data(), k), std::span<const double>(p.delta.data(), k)))) z = -z;
    out.push_back(p.mp.location() + p.mp.scatter_sqrt() * z);
  }
  return out;
}

}  // namespace flexdist
