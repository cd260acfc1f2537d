#pragma once

#include "flexdist/distribution.hpp"

namespace flexdist {

/// Arnold-Groeneveld skewness 1 - 2 F(mode), in [-1, 1].
double ag_skewness(const Distribution& d);

/// Octile kurtosis ((q7 - q5) + (q3 - q1)) / (q6 - q2), q_i = q(i/8).
double quantile_kurtosis(const Distribution& d);

struct MomentResult {
  bool finite = true;
  double value = 0.0;
};

/// Raw moment E[X^r]; reported as not finite (never NaN) when r >= tail index.
MomentResult moment(const Distribution& d, int r);

}  // namespace flexdist
