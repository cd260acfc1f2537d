#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flexdist/base.hpp"
#include "flexdist/rng.hpp"

namespace flexdist {

enum class TransformKind { SinhArcsinh, GH, K };

/// Monotone transformation H of the transformation approach: Y = H^{-1}(X)
/// with X from the base, so H(Y) follows the base. Only the sinh-arcsinh map
/// has a closed-form H and Jacobian; g-and-h and K are defined through H^{-1}.
class Transformation {
 public:
  static Transformation sas(double delta, double eta);
  static Transformation gh(double g, double h);
  static Transformation k(double eta);

  TransformKind kind() const { return kind_; }
  /// SAS: (delta, eta); GH: (g, h); K: (unused, eta).
  double skewness() const { return skew_; }
  double tail() const { return tail_; }

  double forward(double x) const;
  double inverse(double x) const;
  double log_jacobian(double x) const;
  bool invertible_density() const { return kind_ == TransformKind::SinhArcsinh; }
  bool is_odd() const;

 private:
  Transformation(TransformKind kind, double skew, double tail) : kind_(kind), skew_(skew), tail_(tail) {}

  TransformKind kind_;
  double skew_;
  double tail_;
};

double sas_forward(double x, double delta, double eta);
double sas_inverse(double x, double delta, double eta);
/// d/dx sas_forward.
double sas_derivative(double x, double delta, double eta);
double gh_inverse(double x, double g, double h);
double k_inverse(double x, double eta);

struct TransformParams {
  SymmetricBase base;
  LocationScale loc;
  Transformation tr;
};

/// sigma^{-1} f(H(z)) H'(z); throws Unsupported for g-and-h and K.
double transform_pdf(double x, const TransformParams& p);
double transform_log_pdf(double x, const TransformParams& p);
double transform_cdf(double x, const TransformParams& p);
double transform_quantile(double prob, const TransformParams& p);
double transform_mode(const TransformParams& p);
std::vector<double> sample_transform(std::size_t n, const TransformParams& p, Rng& rng);

/// k-variate density with a marginal-wise transformation of the
/// standardized vector Sigma^{-1/2}(x - mu); sinh-arcsinh marginals only.
double transform_pdf_k(std::span<const double> x, const SymmetricBase& base, const MatrixParams& mp,
                       std::span<const Transformation> marginals);

}  // namespace flexdist
