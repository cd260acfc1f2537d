#pragma once

#include <Eigen/Dense>

#include <limits>
#include <span>
#include <string>

#include "flexdist/rng.hpp"

namespace flexdist {

/// Location mu and scale sigma > 0, in data units.
class LocationScale {
 public:
  LocationScale() = default;
  LocationScale(double mu, double sigma);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double standardize(double x) const { return (x - mu_) / sigma_; }

 private:
  double mu_ = 0.0;
  double sigma_ = 1.0;
};

enum class BaseKind { Normal, StudentT, Logistic };

/// A density symmetric about zero, with everything the families need from it.
class SymmetricBase {
 public:
  static SymmetricBase normal() { return SymmetricBase(BaseKind::Normal, 0.0); }
  static SymmetricBase student_t(double nu);
  static SymmetricBase logistic() { return SymmetricBase(BaseKind::Logistic, 0.0); }

  BaseKind kind() const { return kind_; }
  /// Degrees of freedom; infinity for non-t bases.
  double nu() const;

  double log_pdf(double z) const;
  double pdf(double z) const;
  double cdf(double z) const;
  double quantile(double p) const;
  double sample(Rng& rng) const;

  /// Absolute moments of order r exist iff r < tail_index().
  double tail_index() const;

  std::string name() const;

  friend bool operator==(const SymmetricBase&, const SymmetricBase&) = default;

 private:
  SymmetricBase(BaseKind kind, double nu) : kind_(kind), nu_(nu) {}

  BaseKind kind_ = BaseKind::Normal;
  double nu_ = 0.0;
};

/// Location vector and symmetric positive-definite scatter matrix for
/// k-variate density evaluation.
class MatrixParams {
 public:
  MatrixParams(Eigen::VectorXd location, Eigen::MatrixXd scatter);

  int k() const { return static_cast<int>(location_.size()); }
  const Eigen::VectorXd& location() const { return location_; }
  const Eigen::MatrixXd& scatter() const { return scatter_; }
  /// Symmetric square root and its inverse.
  const Eigen::MatrixXd& scatter_sqrt() const { return sqrt_; }
  const Eigen::MatrixXd& scatter_inv_sqrt() const { return inv_sqrt_; }
  double log_det() const { return log_det_; }

  /// Sigma^{-1/2} (x - mu); throws on dimension mismatch.
  Eigen::VectorXd standardize(std::span<const double> x) const;

 private:
  Eigen::VectorXd location_;
  Eigen::MatrixXd scatter_;
  Eigen::MatrixXd sqrt_;
  Eigen::MatrixXd inv_sqrt_;
  double log_det_ = 0.0;
};

double normal_pdf(double x, const LocationScale& ls);

/// Spherical k-variate log-density of the standardized vector y for a normal
/// or Student t base (logistic has no k-variate form here).
double spherical_log_pdf(const SymmetricBase& base, const Eigen::VectorXd& y);

/// Multivariate Student t density with location/scatter `mp` and nu > 0.
double student_pdf_k(std::span<const double> x, const MatrixParams& mp, double nu);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace flexdist
