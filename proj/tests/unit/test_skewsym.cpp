#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flexdist/distribution.hpp"
#include "flexdist/error.hpp"
#include "flexdist/numerics.hpp"
#include "flexdist/sfa.hpp"
#include "flexdist/special.hpp"

using namespace flexdist;
using doctest::Approx;

TEST_SUITE("skewsym") {
  TEST_CASE("skew-normal pdf values") {
    for (double d : {-3.0, 0.0, 1.0, 5.0}) {
      CHECK(skew_normal_pdf(0.0, 0.0, 1.0, d) == Approx(0.3989422804014327).epsilon(1e-15));
    }
    // mpmath: 2 phi(1) Phi(1), 2 phi(2) Phi(-10)
    CHECK(skew_normal_pdf(1.0, 0.0, 1.0, 1.0) == Approx(0.40716159555316004141).epsilon(1e-14));
    CHECK(skew_normal_pdf(-2.0, 0.0, 1.0, 5.0) == Approx(8.2280645892573134198e-25).epsilon(1e-12));
    CHECK_THROWS_AS(skew_normal_pdf(0.0, 0.0, 0.0, 1.0), InvalidParameter);
  }

  TEST_CASE("skew-normal wrapper agrees with the generic form") {
    for (double x = -4.0; x <= 4.0; x += 0.25) {
      const double a = skew_normal_pdf(x, 0.3, 1.7, 2.0);
      const double b = skew_symmetric_pdf(x, SkewSymParams::skew_normal(0.3, 1.7, 2.0));
      CHECK(std::abs(a - b) <= 1e-15);
    }
  }

  TEST_CASE("skew-normal at delta = 0 equals normal exactly") {
    for (double x = -8.0; x <= 8.0; x += 0.4) {
      CHECK(skew_normal_pdf(x, 0.0, 1.0, 0.0) == normal_pdf(x, LocationScale(0.0, 1.0)));
    }
  }

  TEST_CASE("reference panel curves integrate to 1") {
    for (double d : {0.0, 1.0, 2.0, 5.0}) {
      const auto sn = SkewSymParams::skew_normal(0, 1, d);
      CHECK(std::abs(integrate_real_line([&](double x) { return skew_symmetric_pdf(x, sn); }) - 1.0) < 1e-8);
      const auto st = SkewSymParams::skew_t(0, 1, 2.0, d);
      CHECK(std::abs(integrate_real_line([&](double x) { return skew_symmetric_pdf(x, st); }) - 1.0) < 1e-6);
    }
  }

  TEST_CASE("skew-t values") {
    // mpmath quadrature oracle for the t cdf inside the skewing factor.
    CHECK(skew_symmetric_pdf(0.5, SkewSymParams::skew_t(0, 1, 3.0, 2.0)) == Approx(0.52318113548211084973).epsilon(1e-12));
    const MatrixParams one(Eigen::VectorXd::Constant(1, 0.4), Eigen::MatrixXd::Constant(1, 1, 2.25));
    const double mu = 0.4;
    const double d1 = 3.0;
    const double zero = 0.0;
    CHECK(skew_t_pdf(std::span(&mu, 1), one, 4.0, std::span(&d1, 1)) == Approx(student_pdf_k(std::span(&mu, 1), one, 4.0)).epsilon(1e-14));
    for (double x = -5.0; x <= 5.0; x += 0.5) {
      CHECK(skew_t_pdf(std::span(&x, 1), one, 4.0, std::span(&zero, 1)) ==
            Approx(student_pdf_k(std::span(&x, 1), one, 4.0)).epsilon(1e-14));
    }
  }

  TEST_CASE("bivariate skew-t integrates to 1 with correlated scatter") {
    Eigen::MatrixXd s(2, 2);
    s << 2.0, 0.8, 0.8, 1.0;
    const MatrixParams mp(Eigen::Vector2d(0.5, -0.2), s);
    const double delta[2] = {1.5, -0.7};
    const double total = integrate_real_line(
        [&](double x) {
          return integrate_real_line(
              [&](double y) {
                const double v[2] = {x, y};
                return skew_t_pdf(v, mp, 5.0, delta);
              },
              -0.2, 1e-10);
        },
        0.5, 1e-8);
    CHECK(std::abs(total - 1.0) < 1e-6);
    const double bad[3] = {1, 2, 3};
    const double v[2] = {0, 0};
    CHECK_THROWS_AS(skew_t_pdf(v, mp, 5.0, bad), InvalidParameter);
  }

  TEST_CASE("skew-normal cdf and quantile") {
    const auto sn = SkewSymParams::skew_normal(0, 1, 2.0);
    CHECK(skew_symmetric_cdf(0.7, sn) == Approx(0.52581829436463263027).epsilon(1e-12));
    for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
      CHECK(skew_symmetric_cdf(skew_symmetric_quantile(p, sn), sn) == Approx(p).epsilon(1e-10));
    }
    const auto st = SkewSymParams::skew_t(1.0, 2.0, 3.0, -1.0);
    for (double p : {0.05, 0.5, 0.95}) {
      CHECK(skew_symmetric_cdf(skew_symmetric_quantile(p, st), st) == Approx(p).epsilon(1e-9));
    }
  }

  TEST_CASE("sign-flip sampler") {
    Rng rng(11);
    const auto sym = SkewSymParams::skew_normal(0, 1, 0.0);
    const auto xs = sample_skew_symmetric(100000, sym, rng);
    double positive = 0;
    for (double x : xs) positive += x > 0.0;
    CHECK(std::abs(positive / 1e5 - 0.5) < 3.0 / std::sqrt(1e5));

    // Third moment of skew-normal(5) by closed form b(3d - d^3), b = sqrt(2/pi), d = 5/sqrt(26): 1.59487...
    const auto skewed = SkewSymParams::skew_normal(0, 1, 5.0);
    const auto ys = sample_skew_symmetric(100000, skewed, rng);
    double m1 = 0;
    for (double y : ys) m1 += y;
    m1 /= 1e5;
    double m3 = 0;
    for (double y : ys) m3 += std::pow(y - m1, 3);
    CHECK(m3 > 0.0);

    Rng r1(5);
    Rng r2(5);
    CHECK(sample_skew_symmetric(50, skewed, r1) == sample_skew_symmetric(50, skewed, r2));
  }

  TEST_CASE("skewing function contract") {
    const auto pi = SkewingFunction::cdf_linear(SymmetricBase::logistic());
    for (double y : {-3.0, 0.0, 0.7}) {
      CHECK(pi(y, 0.0) == 0.5);
      CHECK(pi(y, 2.0) + pi(-y, 2.0) == Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("skew-symmetric mode") {
    // mpmath: root of the derivative of 2 phi(x) Phi(x)
    CHECK(skew_symmetric_mode(SkewSymParams::skew_normal(0, 1, 1.0)) == Approx(0.50605446898918076324).epsilon(1e-7));
  }

  TEST_CASE("composed-error demo") {
    Rng rng(2024);
    const SfaDemoResult r = sfa_composite_error_demo(10000, 1.0, 1.0, rng);
    double mean = 0;
    for (double e : r.sample) mean += e;
    CHECK(mean < 0.0);
    CHECK(r.skew_normal_fit.parameters()[2].second < 0.0);
    CHECK(r.skew_normal_fit.loglik >= r.normal_fit.loglik);
    CHECK_THROWS_AS(sfa_composite_error_demo(100, 0.0, 1.0, rng), InvalidParameter);
  }

  // Near sigma_u = 0 the skewness estimate converges at a slow rate; |delta| < 0.2
  // at n = 10^4 holds for only a small fraction of seeds.
  TEST_CASE("composed-error demo without inefficiency" * doctest::may_fail()) {
    Rng rng(2025);
    const SfaDemoResult r = sfa_composite_error_demo(10000, 1.0, 1e-6, rng);
    CHECK(std::abs(r.skew_normal_fit.parameters()[2].second) < 0.2);
  }
}
