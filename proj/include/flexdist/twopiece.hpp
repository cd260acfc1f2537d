#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flexdist/base.hpp"
#include "flexdist/rng.hpp"

namespace flexdist {

enum class ScalingKind { Epsilon, Isf };

/// Left/right scaling functions of a two-piece density and the resulting
/// normalizing constant a = 2 / (1/s_left + 1/s_right).
class ScalingScheme {
 public:
  /// s_left = 1/(1 - delta), s_right = 1/(1 + delta); |delta| < 1 - 1e-9.
  static ScalingScheme epsilon(double delta);
  /// s_left = delta, s_right = 1/delta; delta > 0.
  static ScalingScheme isf(double delta);

  ScalingKind kind() const { return kind_; }
  double delta() const { return delta_; }
  double s_left() const;
  double s_right() const;
  double a() const;

 private:
  ScalingScheme(ScalingKind kind, double delta) : kind_(kind), delta_(delta) {}

  ScalingKind kind_;
  double delta_;
};

struct SideMasses {
  double left;
  double right;
};

SideMasses side_masses(const ScalingScheme& scheme);

struct TwoPieceParams {
  SymmetricBase base;
  LocationScale loc;
  ScalingScheme scheme;
};

double two_piece_pdf(double x, const TwoPieceParams& p);
double two_piece_log_pdf(double x, const TwoPieceParams& p);
double two_piece_cdf(double x, const TwoPieceParams& p);
double two_piece_quantile(double prob, const TwoPieceParams& p);
std::vector<double> sample_two_piece(std::size_t n, const TwoPieceParams& p, Rng& rng);

/// Map H with H(x) - H(-x) = x, so that 2 f(H^{-1}(x)) is a density.
/// Every instance has passed check_condition on the default grid.
class ScaleTransform {
 public:
  /// H(x) = x / 2.
  static ScaleTransform half();
  /// H(x) = x/2 + c sqrt(1 + x^2), |c| < 1/2.
  static ScaleTransform hyperbolic(double c);
  /// H(x) = x/2 + c (x atan(x) - log(1 + x^2)/2), |c| < 1/pi; H'(x) = 1/2 + c atan(x).
  static ScaleTransform arctan(double c);
  /// Arbitrary H; the derivative is taken by central differences.
  static ScaleTransform custom(std::function<double(double)> h, std::string name = "custom");

  double operator()(double x) const { return h_(x); }
  double derivative(double x) const;
  double inverse(double x) const;
  const std::string& name() const { return name_; }
  /// False for user maps, whose derivative is a finite difference.
  bool exact_derivative() const { return exact_derivative_; }

  /// |H(x) - H(-x) - x| <= 1e-10 and H strictly increasing over the grid.
  bool check_condition(std::span<const double> grid) const;
  /// 41 points evenly spaced on [-8, 8].
  static std::vector<double> default_grid();

 private:
  ScaleTransform(std::function<double(double)> h, std::function<double(double)> dh, std::string name,
                 bool exact_derivative = true);

  std::function<double(double)> h_;
  std::function<double(double)> dh_;
  std::string name_;
  bool exact_derivative_ = true;
};

struct ScaleTransformParams {
  SymmetricBase base;
  LocationScale loc;
  ScaleTransform st;
};

/// Standard form 2 f(H^{-1}(x)).
double scale_transformed_pdf(double x, const SymmetricBase& base, const ScaleTransform& st);
/// Located/scaled form (2/sigma) f(H^{-1}((x - mu)/sigma)).
double scale_transformed_pdf(double x, const ScaleTransformParams& p);
double scale_transformed_log_pdf(double x, const ScaleTransformParams& p);
double scale_transformed_cdf(double x, const ScaleTransformParams& p);
double scale_transformed_quantile(double prob, const ScaleTransformParams& p);
double scale_transformed_mode(const ScaleTransformParams& p);
/// Y = +-Z kept with probability H'(Z), then X = mu + sigma H(Y).
std::vector<double> sample_scale_transformed(std::size_t n, const ScaleTransformParams& p, Rng& rng);

}  // namespace flexdist
