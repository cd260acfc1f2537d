#pragma once

#include <functional>
#include <span>
#include <vector>

namespace flexdist {

struct SimplexOptions {
  /// Stop when max_i |f_i - f_best| <= tolerance * (1 + |f_best|).
  double tolerance = 1e-8;
  int max_evaluations = 4000;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization starting from a simplex built around `start`
/// with per-coordinate offsets `steps`. Non-finite objective values are
/// treated as +infinity.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> start, std::span<const double> steps,
                          const SimplexOptions& options = {});

}  // namespace flexdist
