#include "flexdist/transform.hpp"

#include <cmath>
#include <numbers>

#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"

namespace flexdist {
namespace {

constexpr double kGhLimitSwitch = 1e-8;

// log cosh(w) without overflow.
double log_cosh(double w) {
  const double a = std::abs(w);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Solves inverse(y) = target for y, for a strictly increasing inverse map.
// Targets outside the range of the map come back as +-infinity.
template <class F>
double invert_increasing(const F& inverse, double target) {
  if (std::isinf(target)) return target;
  double lo = -1.0;
  double hi = 1.0;
  while (inverse(lo) > target) {
    lo *= 2.0;
    if (lo < -1e300) return -kInfinity;
  }
  while (inverse(hi) < target) {
    hi *= 2.0;
    if (hi > 1e300) return kInfinity;
  }
  const double tol = 1e-14 * std::max(1.0, std::min(std::abs(lo), std::abs(hi)));
  return find_root([&](double y) { return inverse(y) - target; }, lo, hi, tol);
}

}  // namespace

namespace {
void check_sas(double delta, double eta) {
  if (!std::isfinite(delta)) throw InvalidParameter("SAS skewness delta must be finite");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("SAS tail weight eta must be positive");
}
}  // namespace

double sas_forward(double x, double delta, double eta) {
  check_sas(delta, eta);
  return std::sinh(eta * std::asinh(x) + delta);
}

double sas_inverse(double x, double delta, double eta) {
  check_sas(delta, eta);
  return std::sinh((std::asinh(x) - delta) / eta);
}

double sas_derivative(double x, double delta, double eta) {
  check_sas(delta, eta);
  return eta * std::cosh(eta * std::asinh(x) + delta) / std::sqrt(1.0 + x * x);
}

double gh_inverse(double x, double g, double h) {
  if (!(h >= 0.0) || !std::isfinite(g)) throw InvalidParameter("g-and-h needs finite g and h >= 0");
  const double skew_part = std::abs(g) < kGhLimitSwitch ? x : std::expm1(g * x) / g;
  return skew_part * std::exp(0.5 * h * x * x);
}

double k_inverse(double x, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidParameter("K transformation needs eta >= 0");
  return x * std::pow(1.0 + x * x, eta);
}

Transformation Transformation::sas(double delta, double eta) {
  check_sas(delta, eta);
  return Transformation(TransformKind::SinhArcsinh, delta, eta);
}

Transformation Transformation::gh(double g, double h) {
  if (!std::isfinite(g)) throw InvalidParameter("g-and-h skewness g must be finite");
  if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidParameter("g-and-h tail weight h must be >= 0");
  return Transformation(TransformKind::GH, g, h);
}

Transformation Transformation::k(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidParameter("K tail weight eta must be >= 0");
  return Transformation(TransformKind::K, 0.0, eta);
}

double Transformation::forward(double x) const {
  if (kind_ == TransformKind::SinhArcsinh) return sas_forward(x, skew_, tail_);
  return invert_increasing([this](double y) { return inverse(y); }, x);
}

double Transformation::inverse(double x) const {
  switch (kind_) {
    case TransformKind::SinhArcsinh:
      return sas_inverse(x, skew_, tail_);
    case TransformKind::GH:
      return gh_inverse(x, skew_, tail_);
    case TransformKind::K:
      return k_inverse(x, tail_);
  }
  return x;
}

double Transformation::log_jacobian(double x) const {
  if (kind_ != TransformKind::SinhArcsinh) {
    throw Unsupported("g-and-h and K transformations have no closed-form H, so no Jacobian");
  }
  return std::log(tail_) + log_cosh(tail_ * std::asinh(x) + skew_) - 0.5 * std::log1p(x * x);
}

bool Transformation::is_odd() const {
  switch (kind_) {
    case TransformKind::SinhArcsinh:
    case TransformKind::GH:
      return skew_ == 0.0;
    case TransformKind::K:
      return true;
  }
  return false;
}

double transform_log_pdf(double x, const TransformParams& p) {
  if (!p.tr.invertible_density()) {
    throw Unsupported("the density of a g-and-h or K transformation cannot be evaluated; use quantiles or sampling");
  }
  const double z = p.loc.standardize(x);
  return p.base.log_pdf(p.tr.forward(z)) + p.tr.log_jacobian(z) - std::log(p.loc.sigma());
}

double transform_pdf(double x, const TransformParams& p) {
  if (!p.tr.invertible_density()) {
    throw Unsupported("the density of a g-and-h or K transformation cannot be evaluated; use quantiles or sampling");
  }
  const double z = p.loc.standardize(x);
  const double delta = p.tr.skewness();
  const double eta = p.tr.tail();
  return p.base.pdf(sas_forward(z, delta, eta)) * sas_derivative(z, delta, eta) / p.loc.sigma();
}

double transform_cdf(double x, const TransformParams& p) {
  return p.base.cdf(p.tr.forward(p.loc.standardize(x)));
}

double transform_quantile(double prob, const TransformParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidParameter("quantile: probability must lie in (0, 1)");
  return p.loc.mu() + p.loc.sigma() * p.tr.inverse(p.base.quantile(prob));
}

double transform_mode(const TransformParams& p) {
  if (!p.tr.invertible_density()) throw Unsupported("mode requires an evaluatable density");
  const double lo = transform_quantile(1e-3, p);
  const double hi = transform_quantile(1.0 - 1e-3, p);
  return golden_section_max([&p](double x) { return transform_log_pdf(x, p); }, lo, hi, 1e-10 * p.loc.sigma());
}

std::vector<double> sample_transform(std::size_t n, const TransformParams& p, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(p.loc.mu() + p.loc.sigma() * p.tr.inverse(p.base.sample(rng)));
  return out;
}

double transform_pdf_k(std::span<const double> x, const SymmetricBase& base, const MatrixParams& mp,
                       std::span<const Transformation> marginals) {
  if (static_cast<int>(marginals.size()) != mp.k()) throw InvalidParameter("dimension mismatch: one transformation per coordinate");
  const Eigen::VectorXd y = mp.standardize(x);
  Eigen::VectorXd h(y.size());
  double log_jac = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Transformation& tr = marginals[static_cast<std::size_t>(i)];
    h[i] = tr.forward(y[i]);
    log_jac += tr.log_jacobian(y[i]);
  }
  return std::exp(spherical_log_pdf(base, h) + log_jac - 0.5 * mp.log_det());
}

}  // namespace flexdist
