#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "flexdist/base.hpp"
#include "flexdist/skewsym.hpp"
#include "flexdist/transform.hpp"
#include "flexdist/twopiece.hpp"

namespace flexdist {

/// A located and scaled symmetric base, the common null model.
struct SymmetricParams {
  SymmetricBase base;
  LocationScale loc;
};

using DistributionSpec =
    std::variant<SymmetricParams, SkewSymParams, TransformParams, TwoPieceParams, ScaleTransformParams>;

/// Uniform evaluation interface over every univariate family.
class Distribution {
 public:
  Distribution(DistributionSpec spec) : spec_(std::move(spec)) {}  // NOLINT(google-explicit-constructor)
  template <typename T>
    requires std::is_constructible_v<DistributionSpec, T> && (!std::is_same_v<std::decay_t<T>, DistributionSpec>) &&
             (!std::is_same_v<std::decay_t<T>, Distribution>)
  Distribution(T&& params) : spec_(std::forward<T>(params)) {}  // NOLINT(google-explicit-constructor)

  const DistributionSpec& spec() const { return spec_; }
  const SymmetricBase& base() const;
  const LocationScale& location_scale() const;

  /// False for g-and-h and K transformations.
  bool has_density() const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  double mode() const;
  std::vector<double> sample(std::size_t n, Rng& rng) const;

  /// Moments of order r are finite iff r < tail_index().
  double tail_index() const;

  std::string describe() const;

 private:
  DistributionSpec spec_;
};

}  // namespace flexdist
