#include "flexdist/infer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "flexdist/error.hpp"
#include "flexdist/optimize.hpp"
#include "flexdist/special.hpp"

namespace flexdist {
namespace {

constexpr double kNuMin = 0.5;
constexpr double kNuMax = 200.0;
constexpr double kSkewClamp = 20.0;
constexpr double kSasSkewClamp = 50.0;
constexpr double kLogEtaClamp = 6.0;
constexpr double kLogSigmaClamp = 30.0;
constexpr double kEpsilonScale = 1.0 - 2e-9;
constexpr double kBoundaryGap = 1e-4;
constexpr double kStartNu = 10.0;

struct FamilyInfo {
  Family family;
  std::string_view name;
  int free_parameters;
};

constexpr std::array<FamilyInfo, 10> kFamilies{{
    {Family::Normal, "normal", 2},
    {Family::StudentT, "t", 3},
    {Family::SkewNormal, "skew-normal", 3},
    {Family::SkewT, "skew-t", 4},
    {Family::SasNormal, "sas-normal", 4},
    {Family::IsfNormal, "isf-normal", 3},
    {Family::EpsilonNormal, "epsilon-normal", 3},
    {Family::IsfT, "isf-t", 4},
    {Family::EpsilonT, "epsilon-t", 4},
    {Family::GH, "gh", 4},
}};

// Coordinates of the unconstrained vector: [mu, log sigma, skew?, tail?] on standardized data.
struct Layout {
  int dim = 2;
  int skew = -1;
  int nu = -1;
  int eta = -1;
};

Layout layout_of(Family f) {
  switch (f) {
    case Family::Normal:
      return {2, -1, -1, -1};
    case Family::StudentT:
      return {3, -1, 2, -1};
    case Family::SkewNormal:
    case Family::IsfNormal:
    case Family::EpsilonNormal:
      return {3, 2, -1, -1};
    case Family::SkewT:
    case Family::IsfT:
    case Family::EpsilonT:
      return {4, 2, 3, -1};
    case Family::SasNormal:
      return {4, 2, -1, 3};
    case Family::GH:
      break;
  }
  throw Unsupported("g-and-h has no likelihood; use fit_gh_quantile");
}

bool is_isf(Family f) { return f == Family::IsfNormal || f == Family::IsfT; }
bool is_epsilon(Family f) { return f == Family::EpsilonNormal || f == Family::EpsilonT; }
bool is_skew_symmetric(Family f) { return f == Family::SkewNormal || f == Family::SkewT; }

double nu_from(double u) { return kNuMin + (kNuMax - kNuMin) / (1.0 + std::exp(-u)); }
double nu_to(double nu) {
  const double t = std::clamp((nu - kNuMin) / (kNuMax - kNuMin), 1e-12, 1.0 - 1e-12);
  return std::log(t / (1.0 - t));
}

double skew_from(Family f, double u) {
  if (is_skew_symmetric(f)) return std::sinh(std::clamp(u, -kSkewClamp, kSkewClamp));
  if (is_isf(f)) return std::exp(std::clamp(u, -kSkewClamp, kSkewClamp));
  if (is_epsilon(f)) return kEpsilonScale * std::tanh(u);
  return std::clamp(u, -kSasSkewClamp, kSasSkewClamp);
}

double skew_to(Family f, double delta) {
  if (!std::isfinite(delta)) throw InvalidParameter("fixed skewness must be finite");
  if (is_skew_symmetric(f)) return std::asinh(delta);
  if (is_isf(f)) {
    if (!(delta > 0.0)) throw InvalidParameter("ISF skewness must be positive");
    return std::log(delta);
  }
  if (is_epsilon(f)) {
    if (!(std::abs(delta) < kEpsilonScale)) throw InvalidParameter("epsilon skewness must lie in (-1, 1)");
    return std::atanh(delta / kEpsilonScale);
  }
  return delta;
}

double neutral_skew(Family f) { return is_isf(f) ? 1.0 : 0.0; }

bool at_boundary(Family f, double delta) {
  if (is_skew_symmetric(f)) return std::abs(std::tanh(std::asinh(delta))) >= 1.0 - kBoundaryGap;
  if (is_isf(f)) {
    const double left = 1.0 / (1.0 + delta * delta);
    return left <= kBoundaryGap || left >= 1.0 - kBoundaryGap;
  }
  if (is_epsilon(f)) return std::abs(delta) >= 1.0 - kBoundaryGap;
  return false;
}

// Distribution in data units from the standardized-coordinate vector.
Distribution build(Family f, std::span<const double> th, double m, double s) {
  const Layout l = layout_of(f);
  const double mu = m + s * th[0];
  const double sigma = s * std::exp(std::clamp(th[1], -kLogSigmaClamp, kLogSigmaClamp));
  const LocationScale loc(mu, sigma);
  const double nu = l.nu >= 0 ? nu_from(th[static_cast<std::size_t>(l.nu)]) : 0.0;
  const double delta = l.skew >= 0 ? skew_from(f, th[static_cast<std::size_t>(l.skew)]) : 0.0;
  switch (f) {
    case Family::Normal:
      return SymmetricParams{SymmetricBase::normal(), loc};
    case Family::StudentT:
      return SymmetricParams{SymmetricBase::student_t(nu), loc};
    case Family::SkewNormal:
      return SkewSymParams::skew_normal(mu, sigma, delta);
    case Family::SkewT:
      return SkewSymParams::skew_t(mu, sigma, nu, delta);
    case Family::SasNormal: {
      const double eta = std::exp(std::clamp(th[static_cast<std::size_t>(l.eta)], -kLogEtaClamp, kLogEtaClamp));
      return TransformParams{SymmetricBase::normal(), loc, Transformation::sas(delta, eta)};
    }
    case Family::IsfNormal:
      return TwoPieceParams{SymmetricBase::normal(), loc, ScalingScheme::isf(delta)};
    case Family::EpsilonNormal:
      return TwoPieceParams{SymmetricBase::normal(), loc, ScalingScheme::epsilon(delta)};
    case Family::IsfT:
      return TwoPieceParams{SymmetricBase::student_t(nu), loc, ScalingScheme::isf(delta)};
    case Family::EpsilonT:
      return TwoPieceParams{SymmetricBase::student_t(nu), loc, ScalingScheme::epsilon(delta)};
    case Family::GH:
      break;
  }
  throw Unsupported("g-and-h has no likelihood");
}

double t_log_const(double nu) {
  return special::log_gamma(0.5 * (nu + 1.0)) - special::log_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
}

double log_cosh(double w) {
  const double a = std::abs(w);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Log-likelihood of standardized data with per-family constants hoisted out of the loop.
double kernel_loglik(Family f, std::span<const double> th, std::span<const double> z) {
  const Layout l = layout_of(f);
  const double mu = th[0];
  const double log_sigma = std::clamp(th[1], -kLogSigmaClamp, kLogSigmaClamp);
  const double inv_sigma = std::exp(-log_sigma);
  const double n = static_cast<double>(z.size());
  const double nu = l.nu >= 0 ? nu_from(th[static_cast<std::size_t>(l.nu)]) : 0.0;
  const double delta = l.skew >= 0 ? skew_from(f, th[static_cast<std::size_t>(l.skew)]) : 0.0;
  double sum = 0.0;
  switch (f) {
    case Family::Normal:
      for (double x : z) {
        const double t = (x - mu) * inv_sigma;
        sum -= 0.5 * t * t;
      }
      return sum - n * (log_sigma + special::kLogSqrt2Pi);
    case Family::StudentT: {
      const double half = 0.5 * (nu + 1.0);
      for (double x : z) {
        const double t = (x - mu) * inv_sigma;
        sum -= half * std::log1p(t * t / nu);
      }
      return sum + n * (t_log_const(nu) - log_sigma);
    }
    case Family::SkewNormal: {
      // Sum of log Phi taken as one log of a renormalized product; the hot loop of the bootstrap.
      double product = 1.0;
      int exponent = 0;
      for (double x : z) {
        const double t = (x - mu) * inv_sigma;
        const double w = delta * t;
        sum -= 0.5 * t * t;
        if (w > -37.0) {
          int e = 0;
          product = std::frexp(product * special::normal_cdf(w), &e);
          exponent += e;
        } else {
          sum += special::normal_log_cdf(w);
        }
      }
      sum += std::log(product) + exponent * std::numbers::ln2;
      return sum + n * (std::numbers::ln2 - log_sigma - special::kLogSqrt2Pi);
    }
    case Family::SkewT: {
      const double half = 0.5 * (nu + 1.0);
      for (double x : z) {
        const double t = (x - mu) * inv_sigma;
        const double arg = delta * t * std::sqrt((nu + 1.0) / (t * t + nu));
        sum += std::log(special::student_t_cdf(arg, nu + 1.0)) - half * std::log1p(t * t / nu);
      }
      return sum + n * (std::numbers::ln2 + t_log_const(nu) - log_sigma);
    }
    case Family::SasNormal: {
      const double eta = std::exp(std::clamp(th[static_cast<std::size_t>(l.eta)], -kLogEtaClamp, kLogEtaClamp));
      for (double x : z) {
        const double t = (x - mu) * inv_sigma;
        const double w = eta * std::asinh(t) + delta;
        const double h = std::sinh(w);
        sum += log_cosh(w) - 0.5 * std::log1p(t * t) - 0.5 * h * h;
      }
      return sum + n * (std::log(eta) - log_sigma - special::kLogSqrt2Pi);
    }
    case Family::IsfNormal:
    case Family::EpsilonNormal:
    case Family::IsfT:
    case Family::EpsilonT: {
      const ScalingScheme scheme = is_isf(f) ? ScalingScheme::isf(delta) : ScalingScheme::epsilon(delta);
      const double sl = scheme.s_left() * inv_sigma;
      const double sr = scheme.s_right() * inv_sigma;
      if (f == Family::IsfNormal || f == Family::EpsilonNormal) {
        for (double x : z) {
          const double t = (x - mu) * (x < mu ? sl : sr);
          sum -= 0.5 * t * t;
        }
        return sum + n * (std::log(scheme.a()) - log_sigma - special::kLogSqrt2Pi);
      }
      const double half = 0.5 * (nu + 1.0);
      for (double x : z) {
        const double t = (x - mu) * (x < mu ? sl : sr);
        sum -= half * std::log1p(t * t / nu);
      }
      return sum + n * (std::log(scheme.a()) + t_log_const(nu) - log_sigma);
    }
    case Family::GH:
      break;
  }
  throw Unsupported("g-and-h has no likelihood");
}

void validate_data(std::span<const double> data) {
  if (data.empty()) throw InvalidParameter("data set is empty");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) throw InvalidParameter("non-finite observation at index " + std::to_string(i));
  }
}

double sample_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Unconstrained coordinates of a null-model fit, used as an extra start for the nesting alternative.
std::vector<double> theta_from_null(Family alt, const Distribution& null_fit, double m, double s) {
  const Layout l = layout_of(alt);
  std::vector<double> th(static_cast<std::size_t>(l.dim), 0.0);
  const LocationScale& loc = null_fit.location_scale();
  th[0] = (loc.mu() - m) / s;
  th[1] = std::log(loc.sigma() / s);
  if (l.skew >= 0) th[static_cast<std::size_t>(l.skew)] = skew_to(alt, neutral_skew(alt));
  if (l.nu >= 0) {
    const double nu = null_fit.base().kind() == BaseKind::StudentT ? null_fit.base().nu() : kStartNu;
    th[static_cast<std::size_t>(l.nu)] = nu_to(nu);
  }
  return th;
}

FitResult fit_impl(Family family, std::span<const double> data, const FitConfig& config, bool penalized,
                   const Distribution* nested_start) {
  validate_data(data);
  const Layout l = layout_of(family);
  const bool fixed = config.fixed_skewness.has_value() && l.skew >= 0;
  const int p = free_parameter_count(family) - (fixed ? 1 : 0);
  if (data.size() <= static_cast<std::size_t>(p)) {
    throw InvalidParameter("need more observations than free parameters (" + std::to_string(p) + ")");
  }

  const double n = static_cast<double>(data.size());
  const double m = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : data) ss += (x - m) * (x - m);
  const double s = std::sqrt(ss / n);
  if (!(s > 0.0)) throw InvalidParameter("data have zero spread");
  std::vector<double> z(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) z[i] = (data[i] - m) / s;

  FitResult result;
  result.family = family;
  result.n = data.size();
  result.free_parameters = p;

  std::vector<double> best_full;
  if (family == Family::Normal) {
    // Closed form: the standardization itself is the MLE.
    best_full = {0.0, 0.0};
    result.converged = true;
  } else {
    std::vector<double> neutral(static_cast<std::size_t>(l.dim), 0.0);
    if (l.skew >= 0) neutral[static_cast<std::size_t>(l.skew)] = skew_to(family, neutral_skew(family));
    if (l.nu >= 0) neutral[static_cast<std::size_t>(l.nu)] = nu_to(kStartNu);
    if (fixed) neutral[static_cast<std::size_t>(l.skew)] = skew_to(family, *config.fixed_skewness);

    std::vector<std::size_t> free;
    for (int i = 0; i < l.dim; ++i) {
      if (!(fixed && i == l.skew)) free.push_back(static_cast<std::size_t>(i));
    }

    std::vector<double> full = neutral;
    const auto objective = [&](std::span<const double> x) {
      for (std::size_t i = 0; i < free.size(); ++i) full[free[i]] = x[i];
      double value = -kernel_loglik(family, full, z);
      if (penalized) {
        const double delta = skew_from(family, full[static_cast<std::size_t>(l.skew)]);
        value += config.penalty_c1 * std::log1p(config.penalty_c2 * delta * delta);
      }
      return value;
    };

    std::vector<std::vector<double>> starts{neutral};
    if (nested_start != nullptr) {
      std::vector<double> th = theta_from_null(family, *nested_start, m, s);
      if (fixed) th[static_cast<std::size_t>(l.skew)] = neutral[static_cast<std::size_t>(l.skew)];
      if (th != neutral) starts.push_back(std::move(th));
    }
    std::vector<double> sorted(z);
    std::sort(sorted.begin(), sorted.end());
    const std::array<double, 3> centres{sample_quantile(sorted, 0.25), sample_quantile(sorted, 0.5),
                                        sample_quantile(sorted, 0.75)};
    Rng rng(config.seed);
    for (int r = 0; r < config.restarts; ++r) {
      std::vector<double> th = neutral;
      th[0] = centres[static_cast<std::size_t>(r % 3)];
      th[1] = rng.uniform() - 0.5;
      if (l.skew >= 0 && !fixed) {
        const double u = 2.0 * rng.uniform() - 1.0;
        th[static_cast<std::size_t>(l.skew)] = is_skew_symmetric(family) ? 3.0 * u : 1.5 * u;
        // First two restarts probe the frontiers: all mass on one side of a sample extreme.
        if (r < 2 && family != Family::SasNormal) {
          const double sign = r == 0 ? -1.0 : 1.0;
          th[0] = r == 0 ? sorted.back() : sorted.front();
          th[static_cast<std::size_t>(l.skew)] = sign * (is_skew_symmetric(family) ? 4.0 : 2.0) * (1.0 + 0.25 * u);
        }
      }
      if (l.nu >= 0) th[static_cast<std::size_t>(l.nu)] = nu_to(2.0 + 28.0 * rng.uniform());
      if (l.eta >= 0) th[static_cast<std::size_t>(l.eta)] = 0.7 * (2.0 * rng.uniform() - 1.0);
      starts.push_back(std::move(th));
    }

    const auto project = [&](const std::vector<double>& th) {
      std::vector<double> x;
      for (std::size_t i : free) x.push_back(th[i]);
      return x;
    };
    SimplexOptions options{config.tolerance, config.max_evaluations};
    const std::vector<double> wide(free.size(), 0.4);
    const std::vector<double> narrow(free.size(), 0.05);

    SimplexResult best;
    best.value = kInfinity;
    for (const auto& start : starts) {
      SimplexResult run = nelder_mead(objective, project(start), wide, options);
      result.iterations += run.iterations;
      if (run.value < best.value) best = std::move(run);
    }
    if (!std::isfinite(best.value)) throw NumericalFailure("fit_mle: no start produced a finite likelihood");
    SimplexResult polish = nelder_mead(objective, best.x, narrow, options);
    result.iterations += polish.iterations;
    result.converged = polish.converged;
    if (polish.value <= best.value) best = std::move(polish);

    best_full = neutral;
    for (std::size_t i = 0; i < free.size(); ++i) best_full[free[i]] = best.x[i];
  }

  result.params = build(family, best_full, m, s);
  result.loglik = log_likelihood(result.params, data);
  result.aic = 2.0 * p - 2.0 * result.loglik;
  result.bic = p * std::log(n) - 2.0 * result.loglik;
  if (l.skew >= 0 && !fixed) {
    result.boundary_flag = at_boundary(family, skew_from(family, best_full[static_cast<std::size_t>(l.skew)]));
  }
  return result;
}

std::pair<FitResult, FitResult> fit_nested_pair(std::span<const double> data, Family null_family, Family alt_family,
                                                const FitConfig& config) {
  FitResult null_fit = fit_impl(null_family, data, config, false, nullptr);
  const Distribution* hint = null_family == Family::Normal ? nullptr : &null_fit.params;
  FitResult alt_fit = fit_impl(alt_family, data, config, false, hint);
  return {std::move(null_fit), std::move(alt_fit)};
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& info : kFamilies) {
    if (info.family == f) return info.name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& info : kFamilies) {
    if (info.name == name) return info.family;
  }
  return std::nullopt;
}

std::vector<Family> likelihood_families() {
  std::vector<Family> out;
  for (const auto& info : kFamilies) {
    if (info.family != Family::GH) out.push_back(info.family);
  }
  return out;
}

int free_parameter_count(Family f) {
  for (const auto& info : kFamilies) {
    if (info.family == f) return info.free_parameters;
  }
  return 0;
}

std::vector<std::pair<std::string, double>> FitResult::parameters() const {
  const LocationScale& loc = params.location_scale();
  std::vector<std::pair<std::string, double>> out{{"mu", loc.mu()}, {"sigma", loc.sigma()}};
  const DistributionSpec& spec = params.spec();
  if (const auto* sk = std::get_if<SkewSymParams>(&spec)) {
    out.emplace_back("delta", sk->delta);
  } else if (const auto* tr = std::get_if<TransformParams>(&spec)) {
    if (tr->tr.kind() == TransformKind::GH) {
      out.emplace_back("g", tr->tr.skewness());
      out.emplace_back("h", tr->tr.tail());
    } else {
      out.emplace_back("delta", tr->tr.skewness());
      out.emplace_back("eta", tr->tr.tail());
    }
  } else if (const auto* tp = std::get_if<TwoPieceParams>(&spec)) {
    out.emplace_back("delta", tp->scheme.delta());
  }
  if (params.base().kind() == BaseKind::StudentT) out.emplace_back("nu", params.base().nu());
  return out;
}

double log_likelihood(const Distribution& d, std::span<const double> data) {
  validate_data(data);
  if (!d.has_density()) throw Unsupported("log_likelihood: this family has no evaluatable density");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = d.log_pdf(data[i]);
    if (!std::isfinite(v)) {
      throw NumericalFailure("log_likelihood: density underflows to zero at observation " + std::to_string(i));
    }
    sum += v;
  }
  return sum;
}

FitResult fit_mle(Family family, std::span<const double> data, const FitConfig& config) {
  return fit_impl(family, data, config, false, nullptr);
}

FitResult fit_mle_penalized_skew_normal(std::span<const double> data, const FitConfig& config) {
  return fit_impl(Family::SkewNormal, data, config, true, nullptr);
}

TransformParams GhFit::params() const {
  return TransformParams{SymmetricBase::normal(), LocationScale(mu, sigma), Transformation::gh(g, h)};
}

GhFit fit_gh_quantile(std::span<const double> data) {
  validate_data(data);
  if (data.size() < 50) throw InvalidParameter("fit_gh_quantile needs at least 50 observations");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  constexpr std::array<double, 4> kDepths{0.75, 0.875, 0.9375, 0.96875};
  const double median = sample_quantile(sorted, 0.5);
  std::array<double, 4> zs{}, upper{}, lower{}, gs{};
  for (std::size_t i = 0; i < kDepths.size(); ++i) {
    const double p = kDepths[i];
    zs[i] = special::normal_quantile(p);
    upper[i] = sample_quantile(sorted, p) - median;
    lower[i] = median - sample_quantile(sorted, 1.0 - p);
    if (!(upper[i] > 0.0) || !(lower[i] > 0.0)) {
      throw InvalidParameter("fit_gh_quantile: sample quantiles are not strictly increasing around the median at depth " +
                             std::to_string(p) + " (ties?)");
    }
    // Upper/lower half-spread ratio is exp(g z_p) under a g-and-h law.
    gs[i] = std::log(upper[i] / lower[i]) / zs[i];
  }
  std::array<double, 4> gs_sorted = gs;
  std::sort(gs_sorted.begin(), gs_sorted.end());
  const double g = 0.5 * (gs_sorted[1] + gs_sorted[2]);

  // log(g (U + L) / (e^{gz} - e^{-gz})) = log sigma + h z^2 / 2.
  std::array<double, 4> xs{}, ys{};
  for (std::size_t i = 0; i < kDepths.size(); ++i) {
    const double spread = upper[i] + lower[i];
    const double corrected = std::abs(g) < 1e-8 ? spread / (2.0 * zs[i]) : g * spread / (2.0 * std::sinh(g * zs[i]));
    xs[i] = 0.5 * zs[i] * zs[i];
    ys[i] = std::log(corrected);
  }
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / 4.0;
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / 4.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
  }
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  return GhFit{g, std::max(0.0, slope), median, std::exp(intercept)};
}

std::vector<std::size_t> model_select(std::span<const FitResult> fits, Criterion criterion) {
  for (const auto& f : fits) {
    if (f.n != fits.front().n) throw InvalidParameter("model_select: fits were made on different sample sizes");
  }
  std::vector<std::size_t> order(fits.size());
  std::iota(order.begin(), order.end(), 0);
  const auto score = [&](std::size_t i) { return criterion == Criterion::Aic ? fits[i].aic : fits[i].bic; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score(a) != score(b)) return score(a) < score(b);
    if (fits[a].free_parameters != fits[b].free_parameters) return fits[a].free_parameters < fits[b].free_parameters;
    return static_cast<int>(fits[a].family) < static_cast<int>(fits[b].family);
  });
  return order;
}

bool is_nested(Family null_family, Family alt_family) {
  switch (null_family) {
    case Family::Normal:
      return alt_family == Family::SkewNormal || alt_family == Family::SasNormal || alt_family == Family::IsfNormal ||
             alt_family == Family::EpsilonNormal;
    case Family::StudentT:
      return alt_family == Family::SkewT || alt_family == Family::IsfT || alt_family == Family::EpsilonT;
    default:
      return false;
  }
}

TestResult lr_test(std::span<const double> data, Family null_family, Family alt_family, const LrTestOptions& options) {
  if (!is_nested(null_family, alt_family)) {
    throw InvalidParameter("lr_test: " + std::string(family_name(null_family)) + " is not nested in " +
                           std::string(family_name(alt_family)));
  }
  if (options.replicates < 99) throw InvalidParameter("lr_test: at least 99 bootstrap replicates are required");

  const auto [null_fit, alt_fit] = fit_nested_pair(data, null_family, alt_family, options.fit);
  const double observed = std::max(0.0, 2.0 * (alt_fit.loglik - null_fit.loglik));

  const auto replicates = static_cast<std::size_t>(options.replicates);
  std::vector<double> stats(replicates, 0.0);
  std::vector<char> ok(replicates, 0);
  const std::size_t n = data.size();
  const auto run_replicate = [&](std::size_t b) {
    Rng rng = Rng::for_stream(options.seed, b);
    const std::vector<double> sample = null_fit.params.sample(n, rng);
    FitConfig cfg = options.fit;
    cfg.seed = mix_seed(options.seed ^ mix_seed(b + 1));
    try {
      const auto [bn, ba] = fit_nested_pair(sample, null_family, alt_family, cfg);
      stats[b] = std::max(0.0, 2.0 * (ba.loglik - bn.loglik));
      ok[b] = bn.converged && ba.converged ? 1 : 0;
    } catch (const NumericalFailure&) {
      ok[b] = 0;
    } catch (const InvalidParameter&) {
      ok[b] = 0;
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, replicates));
  if (threads <= 1) {
    for (std::size_t b = 0; b < replicates; ++b) run_replicate(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < replicates; b = next++) run_replicate(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::size_t failures = 0;
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    if (!ok[b]) {
      ++failures;
    } else if (stats[b] >= observed) {
      ++exceed;
    }
  }
  if (static_cast<double>(failures) > 0.05 * static_cast<double>(replicates)) {
    throw NumericalFailure("lr_test: " + std::to_string(failures) + " of " + std::to_string(replicates) +
                           " bootstrap fits failed to converge");
  }

  TestResult result;
  result.statistic = observed;
  result.replicates = static_cast<int>(replicates - failures);
  result.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(result.replicates) + 1.0);
  result.null_family = null_family;
  result.alt_family = alt_family;
  return result;
}

}  // namespace flexdist
