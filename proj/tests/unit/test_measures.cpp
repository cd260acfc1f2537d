#include <doctest.h>

#include <cmath>

#include "flexdist/error.hpp"
#include "flexdist/measures.hpp"
#include "flexdist/numerics.hpp"

using namespace flexdist;
using doctest::Approx;

TEST_SUITE("measures") {
  TEST_CASE("AG skewness") {
    for (const auto& b : {SymmetricBase::normal(), SymmetricBase::student_t(3.0), SymmetricBase::logistic()}) {
      CHECK(std::abs(ag_skewness(SymmetricParams{b, LocationScale(2.0, 3.0)})) < 1e-8);
    }
    const TwoPieceParams isf{SymmetricBase::normal(), LocationScale(0, 1), ScalingScheme::isf(2.0)};
    CHECK(ag_skewness(isf) == Approx(0.6).epsilon(1e-12));
    // mpmath: mode 0.50605..., 1 - 2 F(mode) by quadrature
    CHECK(ag_skewness(SkewSymParams::skew_normal(0, 1, 1.0)) == Approx(0.037863621627722392885).epsilon(1e-6));
  }

  TEST_CASE("quantile kurtosis") {
    const auto sas = [](double mu, double sigma) {
      return TransformParams{SymmetricBase::normal(), LocationScale(mu, sigma), Transformation::sas(-0.7, 0.8)};
    };
    CHECK(std::abs(quantile_kurtosis(sas(0, 1)) - quantile_kurtosis(sas(5, 3))) < 1e-10);
    // mpmath octiles of the normal and of t with 2 degrees of freedom (closed-form quantile)
    CHECK(quantile_kurtosis(SymmetricParams{SymmetricBase::normal(), LocationScale(0, 1)}) ==
          Approx(1.2330951154852176412).epsilon(1e-12));
    CHECK(quantile_kurtosis(SymmetricParams{SymmetricBase::student_t(2.0), LocationScale(0, 1)}) ==
          Approx(1.5167474166239734921).epsilon(1e-9));
  }

  TEST_CASE("moments") {
    const auto m1 = moment(SymmetricParams{SymmetricBase::logistic(), LocationScale(0, 1)}, 1);
    CHECK(m1.finite);
    CHECK(std::abs(m1.value) < 1e-8);
    const auto m2 = moment(SymmetricParams{SymmetricBase::normal(), LocationScale(0, 1)}, 2);
    CHECK(std::abs(m2.value - 1.0) < 1e-8);
    const auto inf = moment(SymmetricParams{SymmetricBase::student_t(2.0), LocationScale(0, 1)}, 2);
    CHECK_FALSE(inf.finite);
    CHECK(std::isinf(inf.value));
    // b(3d - d^3), b = sqrt(2/pi), d = 5/sqrt(26)
    CHECK(moment(SkewSymParams::skew_normal(0, 1, 5.0), 3).value == Approx(1.5948722935783699761).epsilon(1e-9));
    // Density-free path: g-and-h with h = 0 is a scaled lognormal shift, E[X] = (e^{g^2/2} - 1)/g.
    const TransformParams gh{SymmetricBase::normal(), LocationScale(0, 1), Transformation::gh(0.5, 0.0)};
    CHECK(moment(gh, 1).value == Approx((std::exp(0.125) - 1.0) / 0.5).epsilon(1e-9));
    CHECK_FALSE(moment(TransformParams{SymmetricBase::normal(), LocationScale(0, 1), Transformation::gh(0.2, 0.5)}, 2).finite);
    CHECK_THROWS_AS(moment(gh, 0), InvalidParameter);
  }
}
