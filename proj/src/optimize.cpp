#include "flexdist/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flexdist/error.hpp"

namespace flexdist {

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> start, std::span<const double> steps, const SimplexOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0 || steps.size() != dim) throw InvalidParameter("nelder_mead: start and steps must have equal, nonzero size");

  SimplexResult result;
  const auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(dim + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];
  std::vector<double> f(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) f[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  const auto along = [&](std::vector<double>& out, const std::vector<double>& from, double t) {
    // out = centroid + t * (centroid - from)
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (centroid[j] - from[j]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    const double spread = f[worst] - f[best];
    if (std::isfinite(f[worst]) && spread <= options.tolerance * (1.0 + std::abs(f[best]))) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    along(trial, pts[worst], 1.0);
    const double fr = eval(trial);
    if (fr < f[best]) {
      along(trial2, pts[worst], 2.0);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        f[worst] = fe;
      } else {
        pts[worst] = trial;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      pts[worst] = trial;
      f[worst] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < f[worst]) {
      along(trial2, pts[worst], 0.5);
      const double fc = eval(trial2);
      if (fc <= fr) {
        pts[worst] = trial2;
        f[worst] = fc;
        accepted = true;
      }
    } else {
      along(trial2, pts[worst], -0.5);
      const double fc = eval(trial2);
      if (fc < f[worst]) {
        pts[worst] = trial2;
        f[worst] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t i = 0; i <= dim; ++i) {
        if (i == best) continue;
        for (std::size_t j = 0; j < dim; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
        f[i] = eval(pts[i]);
      }
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  result.x = pts[best];
  result.value = f[best];
  return result;
}

}  // namespace flexdist
