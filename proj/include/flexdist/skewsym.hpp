#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "flexdist/base.hpp"
#include "flexdist/rng.hpp"

namespace flexdist {

enum class SkewingKind {
  /// Pi(y, delta) = G(delta' y) for a symmetric univariate cdf G.
  CdfLinear,
  /// Pi(y, delta) = T_{nu+k}(delta' y * sqrt((nu + k) / (|y|^2 + nu))), the skew-t modulation.
  StudentModulated,
};

/// Skewing function Pi with Pi(y, delta) + Pi(-y, delta) = 1 and Pi(y, 0) = 1/2.
class SkewingFunction {
 public:
  static SkewingFunction cdf_linear(const SymmetricBase& g);
  static SkewingFunction student_modulated(double nu);

  SkewingKind kind() const { return kind_; }
  const SymmetricBase& cdf_base() const { return g_; }

  double operator()(std::span<const double> y, std::span<const double> delta) const;
  double operator()(double y, double delta) const;
  double log_value(double y, double delta) const;

 private:
  SkewingFunction(SkewingKind kind, SymmetricBase g, double nu) : kind_(kind), g_(g), nu_(nu) {}

  double argument(double projection, double norm2, int k) const;
  double log_value_k(double projection, double norm2, int k) const;

  SkewingKind kind_;
  SymmetricBase g_;
  double nu_ = 0.0;
};

/// Univariate skew-symmetric law 2/sigma f(z) Pi(z, delta), z = (x - mu)/sigma.
struct SkewSymParams {
  SymmetricBase base;
  LocationScale loc;
  double delta = 0.0;
  SkewingFunction skewing = SkewingFunction::cdf_linear(SymmetricBase::normal());

  static SkewSymParams skew_normal(double mu, double sigma, double delta);
  /// Univariate skew-t: t_nu base with the nu+1 modulation.
  static SkewSymParams skew_t(double mu, double sigma, double nu, double delta);

  bool is_skew_normal() const;
};

/// k-variate skew-symmetric parameters over a spherical normal or t base.
struct SkewSymParamsK {
  SymmetricBase base;
  MatrixParams mp;
  Eigen::VectorXd delta;
};

double skew_symmetric_pdf(std::span<const double> x, const SkewSymParamsK& p, const SkewingFunction& pi);

double skew_symmetric_pdf(double x, const SkewSymParams& p);
double skew_symmetric_log_pdf(double x, const SkewSymParams& p);
double skew_symmetric_cdf(double x, const SkewSymParams& p);
double skew_symmetric_quantile(double prob, const SkewSymParams& p);
double skew_symmetric_mode(const SkewSymParams& p);

double skew_normal_pdf(double x, double mu, double sigma, double delta);

/// Skew-t density with the diagonal matrix diag((Sigma^{1/2})_ii) in the
/// modulation argument.
double skew_t_pdf(std::span<const double> x, const MatrixParams& mp, double nu, std::span<const double> delta);

/// The vector alpha with alpha' Sigma^{-1/2}(x - mu) = delta' sigma^{-1}(x - mu).
Eigen::VectorXd skew_t_effective_skewness(const MatrixParams& mp, std::span<const double> delta);

/// Sign-flip sampling: Z from the symmetric part, kept with probability Pi(Z, delta), reflected otherwise.
std::vector<double> sample_skew_symmetric(std::size_t n, const SkewSymParams& p, Rng& rng);
std::vector<Eigen::VectorXd> sample_skew_symmetric(std::size_t n, const SkewSymParamsK& p, const SkewingFunction& pi,
                                                   Rng& rng);

}  // namespace flexdist
