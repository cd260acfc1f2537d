#pragma once

#include <cstddef>
#include <vector>

#include "flexdist/infer.hpp"
#include "flexdist/rng.hpp"

namespace flexdist {

struct SfaDemoResult {
  std::vector<double> sample;
  FitResult normal_fit;
  FitResult skew_normal_fit;
  double lr_statistic = 0.0;
};

/// Simulates the composed error eps = V - U, V ~ N(0, sigma_v^2) and
/// U ~ |N(0, sigma_u^2)|, then fits normal and skew-normal laws to it.
SfaDemoResult sfa_composite_error_demo(std::size_t n, double sigma_v, double sigma_u, Rng& rng,
                                       const FitConfig& config = {});

}  // namespace flexdist
