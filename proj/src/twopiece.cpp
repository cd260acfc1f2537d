#include "flexdist/twopiece.hpp"

#include <algorithm>
#include <boost/math/differentiation/finite_difference.hpp>
#include <cmath>
#include <numbers>

#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"

namespace flexdist {
namespace {

constexpr double kEpsilonEdge = 1e-9;

}  // namespace

ScalingScheme ScalingScheme::epsilon(double delta) {
  if (!(std::abs(delta) < 1.0 - kEpsilonEdge)) {
    throw InvalidParameter("epsilon scaling requires |delta| < 1 - 1e-9");
  }
  return ScalingScheme(ScalingKind::Epsilon, delta);
}

ScalingScheme ScalingScheme::isf(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidParameter("ISF scaling requires delta > 0");
  return ScalingScheme(ScalingKind::Isf, delta);
}

double ScalingScheme::s_left() const { return kind_ == ScalingKind::Epsilon ? 1.0 / (1.0 - delta_) : delta_; }

double ScalingScheme::s_right() const { return kind_ == ScalingKind::Epsilon ? 1.0 / (1.0 + delta_) : 1.0 / delta_; }

double ScalingScheme::a() const {
  // 2 / ((1 - delta) + (1 + delta)) is identically 1 for the epsilon scheme.
  if (kind_ == ScalingKind::Epsilon) return 1.0;
  return 2.0 / (delta_ + 1.0 / delta_);
}

SideMasses side_masses(const ScalingScheme& scheme) {
  const double sl = scheme.s_left();
  const double sr = scheme.s_right();
  const double left = sr / (sl + sr);
  return {left, 1.0 - left};
}

double two_piece_pdf(double x, const TwoPieceParams& p) {
  const double z = p.loc.standardize(x);
  const double s = z < 0.0 ? p.scheme.s_left() : p.scheme.s_right();
  return p.scheme.a() * (p.base.pdf(s * z) / p.loc.sigma());
}

double two_piece_log_pdf(double x, const TwoPieceParams& p) {
  const double z = p.loc.standardize(x);
  const double s = z < 0.0 ? p.scheme.s_left() : p.scheme.s_right();
  return std::log(p.scheme.a()) - std::log(p.loc.sigma()) + p.base.log_pdf(s * z);
}

double two_piece_cdf(double x, const TwoPieceParams& p) {
  const double z = p.loc.standardize(x);
  const SideMasses m = side_masses(p.scheme);
  if (z == 0.0) return m.left;
  if (z < 0.0) return 2.0 * m.left * p.base.cdf(p.scheme.s_left() * z);
  return 1.0 - 2.0 * m.right * p.base.cdf(-p.scheme.s_right() * z);
}

double two_piece_quantile(double prob, const TwoPieceParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidParameter("quantile: probability must lie in (0, 1)");
  const SideMasses m = side_masses(p.scheme);
  double z = 0.0;
  if (prob < m.left) {
    z = p.base.quantile(prob / (2.0 * m.left)) / p.scheme.s_left();
  } else if (prob > m.left) {
    z = -p.base.quantile((1.0 - prob) / (2.0 * m.right)) / p.scheme.s_right();
  }
  return p.loc.mu() + p.loc.sigma() * z;
}

std::vector<double> sample_two_piece(std::size_t n, const TwoPieceParams& p, Rng& rng) {
  const SideMasses m = side_masses(p.scheme);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = rng.uniform() < m.left;
    const double magnitude = std::abs(p.base.sample(rng));
    const double z = left ? -magnitude / p.scheme.s_left() : magnitude / p.scheme.s_right();
    out.push_back(p.loc.mu() + p.loc.sigma() * z);
  }
  return out;
}

ScaleTransform::ScaleTransform(std::function<double(double)> h, std::function<double(double)> dh, std::string name,
                               bool exact_derivative)
    : h_(std::move(h)), dh_(std::move(dh)), name_(std::move(name)), exact_derivative_(exact_derivative) {
  if (!check_condition(default_grid())) {
    throw InvalidParameter("scale transform '" + name_ + "' violates H(x) - H(-x) = x or is not increasing");
  }
}

ScaleTransform ScaleTransform::half() {
  return ScaleTransform([](double x) { return 0.5 * x; }, [](double) { return 0.5; }, "half");
}

ScaleTransform ScaleTransform::hyperbolic(double c) {
  if (!(std::abs(c) < 0.5)) throw InvalidParameter("hyperbolic scale transform requires |c| < 1/2");
  return ScaleTransform([c](double x) { return 0.5 * x + c * std::hypot(1.0, x); },
                        [c](double x) { return 0.5 + c * x / std::hypot(1.0, x); }, "hyperbolic");
}

ScaleTransform ScaleTransform::arctan(double c) {
  if (!(std::abs(c) < 1.0 / std::numbers::pi)) throw InvalidParameter("arctan scale transform requires |c| < 1/pi");
  return ScaleTransform([c](double x) { return 0.5 * x + c * (x * std::atan(x) - 0.5 * std::log1p(x * x)); },
                        [c](double x) { return 0.5 + c * std::atan(x); }, "arctan");
}

ScaleTransform ScaleTransform::custom(std::function<double(double)> h, std::string name) {
  auto dh = [h](double x) { return boost::math::differentiation::finite_difference_derivative<decltype(h), double, 8>(h, x); };
  return ScaleTransform(h, dh, std::move(name), false);
}

double ScaleTransform::derivative(double x) const { return dh_(x); }

double ScaleTransform::inverse(double x) const {
  if (std::isinf(x)) return x;
  const auto g = [&](double y) { return h_(y) - x; };
  double lo = -1.0;
  double hi = 1.0;
  while (g(lo) > 0.0) lo *= 2.0;
  while (g(hi) < 0.0) hi *= 2.0;
  return find_root(g, lo, hi, 1e-14 * std::max(1.0, std::min(std::abs(lo), std::abs(hi))));
}

bool ScaleTransform::check_condition(std::span<const double> grid) const {
  std::vector<double> xs(grid.begin(), grid.end());
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (!(std::abs(h_(x) - h_(-x) - x) <= 1e-10)) return false;
    if (i > 0 && xs[i] > xs[i - 1] && !(h_(xs[i]) > h_(xs[i - 1]))) return false;
  }
  return true;
}

std::vector<double> ScaleTransform::default_grid() {
  std::vector<double> grid(41);
  for (int i = 0; i < 41; ++i) grid[static_cast<std::size_t>(i)] = -8.0 + 0.4 * i;
  return grid;
}

double scale_transformed_pdf(double x, const SymmetricBase& base, const ScaleTransform& st) {
  return 2.0 * base.pdf(st.inverse(x));
}

double scale_transformed_pdf(double x, const ScaleTransformParams& p) {
  return 2.0 * p.base.pdf(p.st.inverse(p.loc.standardize(x))) / p.loc.sigma();
}

double scale_transformed_log_pdf(double x, const ScaleTransformParams& p) {
  return std::numbers::ln2 + p.base.log_pdf(p.st.inverse(p.loc.standardize(x))) - std::log(p.loc.sigma());
}

double scale_transformed_cdf(double x, const ScaleTransformParams& p) {
  // With x = H(y): F(x) = int_{-inf}^{H^{-1}(x)} 2 f(y) H'(y) dy.
  const double y = p.st.inverse(p.loc.standardize(x));
  if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
  const auto g = [&p](double t) { return 2.0 * p.base.pdf(t) * p.st.derivative(t); };
  const double tol = p.st.exact_derivative() ? 1e-12 : 1e-10;
  const double value = y <= 0.0 ? integrate(g, -kInfinity, y, tol) : 1.0 - integrate(g, y, kInfinity, tol);
  return std::clamp(value, 0.0, 1.0);
}

double scale_transformed_quantile(double prob, const ScaleTransformParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidParameter("quantile: probability must lie in (0, 1)");
  const auto g = [&](double z) { return scale_transformed_cdf(p.loc.mu() + p.loc.sigma() * z, p) - prob; };
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

double scale_transformed_mode(const ScaleTransformParams& p) {
  const double lo = scale_transformed_quantile(1e-3, p);
  const double hi = scale_transformed_quantile(1.0 - 1e-3, p);
  return golden_section_max([&p](double x) { return scale_transformed_log_pdf(x, p); }, lo, hi,
                            1e-10 * p.loc.sigma());
}

std::vector<double> sample_scale_transformed(std::size_t n, const ScaleTransformParams& p, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = p.base.sample(rng);
    const double u = rng.uniform();
    const double y = u < p.st.derivative(z) ? z : -z;
    out.push_back(p.loc.mu() + p.loc.sigma() * p.st(y));
  }
  return out;
}

}  // namespace flexdist
