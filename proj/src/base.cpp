#include "flexdist/base.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "flexdist/error.hpp"
#include "flexdist/special.hpp"

namespace flexdist {

LocationScale::LocationScale(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) throw InvalidParameter("location mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("scale sigma must be positive and finite");
}

SymmetricBase SymmetricBase::student_t(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidParameter("Student t degrees of freedom nu must be positive");
  return SymmetricBase(BaseKind::StudentT, nu);
}

double SymmetricBase::nu() const { return kind_ == BaseKind::StudentT ? nu_ : kInfinity; }

double SymmetricBase::log_pdf(double z) const {
  switch (kind_) {
    case BaseKind::Normal:
      return -0.5 * z * z - special::kLogSqrt2Pi;
    case BaseKind::StudentT:
      return special::student_t_log_pdf(z, nu_);
    case BaseKind::Logistic: {
      const double a = std::abs(z);
      return -a - 2.0 * std::log1p(std::exp(-a));
    }
  }
  return 0.0;
}

double SymmetricBase::pdf(double z) const {
  if (kind_ == BaseKind::Normal) return special::kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return std::exp(log_pdf(z));
}

double SymmetricBase::cdf(double z) const {
  switch (kind_) {
    case BaseKind::Normal:
      return special::normal_cdf(z);
    case BaseKind::StudentT:
      return special::student_t_cdf(z, nu_);
    case BaseKind::Logistic:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }
  return 0.0;
}

double SymmetricBase::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("quantile: probability outside [0, 1]");
  switch (kind_) {
    case BaseKind::Normal:
      return special::normal_quantile(p);
    case BaseKind::StudentT:
      return special::student_t_quantile(p, nu_);
    case BaseKind::Logistic:
      return std::log(p) - std::log1p(-p);
  }
  return 0.0;
}

double SymmetricBase::sample(Rng& rng) const {
  switch (kind_) {
    case BaseKind::Normal:
      return rng.normal();
    case BaseKind::StudentT:
      return rng.student_t(nu_);
    case BaseKind::Logistic:
      return quantile(rng.uniform());
  }
  return 0.0;
}

double SymmetricBase::tail_index() const { return kind_ == BaseKind::StudentT ? nu_ : kInfinity; }

std::string SymmetricBase::name() const {
  switch (kind_) {
    case BaseKind::Normal:
      return "normal";
    case BaseKind::StudentT: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "t(nu=%.17g)", nu_);
      return buf;
    }
    case BaseKind::Logistic:
      return "logistic";
  }
  return {};
}

MatrixParams::MatrixParams(Eigen::VectorXd location, Eigen::MatrixXd scatter)
    : location_(std::move(location)), scatter_(std::move(scatter)) {
  const auto k = location_.size();
  if (k < 1) throw InvalidParameter("MatrixParams: dimension must be positive");
  if (scatter_.rows() != k || scatter_.cols() != k) throw InvalidParameter("MatrixParams: scatter must be k x k");
  if (!location_.allFinite() || !scatter_.allFinite()) throw InvalidParameter("MatrixParams: non-finite entries");
  if ((scatter_ - scatter_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidParameter("MatrixParams: scatter must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter_);
  const Eigen::VectorXd& values = eig.eigenvalues();
  if (values.minCoeff() <= 0.0) throw InvalidParameter("MatrixParams: scatter must be positive definite");
  const Eigen::MatrixXd& vectors = eig.eigenvectors();
  sqrt_ = vectors * values.cwiseSqrt().asDiagonal() * vectors.transpose();
  inv_sqrt_ = vectors * values.cwiseSqrt().cwiseInverse().asDiagonal() * vectors.transpose();
  log_det_ = values.array().log().sum();
}

Eigen::VectorXd MatrixParams::standardize(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != location_.size()) {
    throw InvalidParameter("dimension mismatch: x has " + std::to_string(x.size()) + " entries, expected " +
                           std::to_string(location_.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return inv_sqrt_ * (xv - location_);
}

double normal_pdf(double x, const LocationScale& ls) {
  return SymmetricBase::normal().pdf(ls.standardize(x)) / ls.sigma();
}

double spherical_log_pdf(const SymmetricBase& base, const Eigen::VectorXd& y) {
  const double k = static_cast<double>(y.size());
  const double q = y.squaredNorm();
  switch (base.kind()) {
    case BaseKind::Normal:
      return -0.5 * q - k * special::kLogSqrt2Pi;
    case BaseKind::StudentT: {
      const double nu = base.nu();
      return special::log_gamma(0.5 * (nu + k)) - special::log_gamma(0.5 * nu) -
             0.5 * k * std::log(nu * std::numbers::pi) - 0.5 * (nu + k) * std::log1p(q / nu);
    }
    case BaseKind::Logistic:
      if (y.size() == 1) return base.log_pdf(y[0]);
      throw Unsupported("the logistic base has no k-variate form");
  }
  return 0.0;
}

double student_pdf_k(std::span<const double> x, const MatrixParams& mp, double nu) {
  const SymmetricBase base = SymmetricBase::student_t(nu);
  const Eigen::VectorXd y = mp.standardize(x);
  return std::exp(spherical_log_pdf(base, y) - 0.5 * mp.log_det());
}

}  // namespace flexdist
