#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flexdist/distribution.hpp"

namespace flexdist {

/// Families with a fitting procedure, in tie-break order for model selection.
enum class Family {
  Normal,
  StudentT,
  SkewNormal,
  SkewT,
  SasNormal,
  IsfNormal,
  EpsilonNormal,
  IsfT,
  EpsilonT,
  GH,
};

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);
/// Every family that fit_mle accepts (all but GH).
std::vector<Family> likelihood_families();
int free_parameter_count(Family f);

struct FitConfig {
  std::uint64_t seed = 20140101;
  int restarts = 5;
  double tolerance = 1e-8;
  int max_evaluations = 4000;
  /// Hold the skewness parameter at this value (in the family's own units).
  std::optional<double> fixed_skewness;
  /// Penalty c1 * log(1 + c2 delta^2) for the penalized skew-normal fit.
  double penalty_c1 = 1.0;
  double penalty_c2 = 1.0 / 3.0;
};

struct FitResult {
  Family family = Family::Normal;
  Distribution params = SymmetricParams{SymmetricBase::normal(), LocationScale{}};
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n = 0;
  int free_parameters = 0;
  bool converged = false;
  int iterations = 0;
  /// The skewness estimate sits within 1e-4 of the edge of its bounded parameterization.
  bool boundary_flag = false;

  /// Named parameter values for reporting.
  std::vector<std::pair<std::string, double>> parameters() const;
};

/// Sum of log-densities; throws Unsupported for g-and-h, InvalidParameter on
/// empty or non-finite data, NumericalFailure if a density underflows to 0.
double log_likelihood(const Distribution& d, std::span<const double> data);

FitResult fit_mle(Family family, std::span<const double> data, const FitConfig& config = {});

/// Skew-normal fit maximizing loglik - c1 log(1 + c2 delta^2).
FitResult fit_mle_penalized_skew_normal(std::span<const double> data, const FitConfig& config = {});

struct GhFit {
  double g = 0.0;
  double h = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  TransformParams params() const;
};

/// Letter-value estimates of a normal-based g-and-h law.
GhFit fit_gh_quantile(std::span<const double> data);

enum class Criterion { Aic, Bic };

/// Indices into `fits`, best first.
std::vector<std::size_t> model_select(std::span<const FitResult> fits, Criterion criterion = Criterion::Aic);

enum class TestMethod { ParametricBootstrap };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int replicates = 0;
  TestMethod method = TestMethod::ParametricBootstrap;
  Family null_family = Family::Normal;
  Family alt_family = Family::SkewNormal;
};

struct LrTestOptions {
  int replicates = 500;
  std::uint64_t seed = 20140101;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  FitConfig fit;
};

bool is_nested(Family null_family, Family alt_family);

/// Likelihood-ratio test of `null_family` inside `alt_family`, calibrated by
/// a parametric bootstrap from the fitted null.
TestResult lr_test(std::span<const double> data, Family null_family, Family alt_family, const LrTestOptions& options);

}  // namespace flexdist
