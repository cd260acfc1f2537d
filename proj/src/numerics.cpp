#include "flexdist/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "flexdist/error.hpp"

namespace flexdist {
namespace {

constexpr int kMaxPanels = 4000;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(const F& f, double lo, double hi) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 0, 0.0, &error);
  return {lo, hi, value, error};
}

// Globally adaptive bisection of the panel with the largest error estimate.
template <class F>
double adaptive_integrate(const F& f, double lo, double hi, double tol) {
  std::priority_queue<Panel> panels;
  Panel first = evaluate_panel(f, lo, hi);
  double total = first.value;
  double total_error = first.error;
  panels.push(first);
  int count = 1;
  while (total_error > tol && total_error > 1e-15 * std::abs(total)) {
    if (count >= kMaxPanels) {
      throw NumericalFailure("integrate: error estimate " + std::to_string(total_error) + " above tolerance after " +
                             std::to_string(kMaxPanels) + " panels");
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericalFailure("integrate: interval can no longer be bisected");
    }
    const Panel left = evaluate_panel(f, worst.lo, mid);
    const Panel right = evaluate_panel(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  if (!std::isfinite(total)) throw NumericalFailure("integrate: non-finite result");
  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

}  // namespace

double integrate(const ScalarFunction& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("integrate: tolerance must be positive");
  if (std::isnan(a) || std::isnan(b)) throw InvalidParameter("integrate: NaN endpoint");
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);
  if (std::isfinite(a) && std::isfinite(b)) return adaptive_integrate(f, a, b, tol);

  // x = tan(t) maps (-pi/2, pi/2) onto the real line; dx = dt / cos^2(t).
  const double lo = std::isinf(a) ? -std::numbers::pi / 2 : std::atan(a);
  const double hi = std::isinf(b) ? std::numbers::pi / 2 : std::atan(b);
  const auto mapped = [&f](double t) {
    const double c = std::cos(t);
    const double v = f(std::tan(t));
    return v == 0.0 ? 0.0 : v / (c * c);
  };
  return adaptive_integrate(mapped, lo, hi, tol);
}

double integrate_real_line(const ScalarFunction& f, double breakpoint, double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  return integrate(f, -inf, breakpoint, 0.5 * tol) + integrate(f, breakpoint, inf, 0.5 * tol);
}

double find_root(const ScalarFunction& g, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("find_root: tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  const double glo = g(lo);
  if (glo == 0.0) return lo;
  const double ghi = g(hi);
  if (ghi == 0.0) return hi;
  if (std::isnan(glo) || std::isnan(ghi)) throw NumericalFailure("find_root: NaN at bracket endpoint");
  if ((glo < 0.0) == (ghi < 0.0)) throw NumericalFailure("find_root: no sign change over the bracket");

  const auto done = [tol](double a, double b) {
    const double width = std::abs(b - a);
    return width <= tol || width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
  };
  std::uintmax_t max_iter = 500;
  const auto bracket = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, done, max_iter);
  if (!done(bracket.first, bracket.second)) throw NumericalFailure("find_root: bracket did not shrink to tolerance");
  return bracket.first + 0.5 * (bracket.second - bracket.first);
}

double golden_section_max(const ScalarFunction& f, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 300 && (hi - lo) > tol; ++iter) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace flexdist
