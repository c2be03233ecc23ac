#include <gtest/gtest.h>

#include <cmath>

#include "starspec/bessel.hpp"
#include "support/bessel_oracle.hpp"

using namespace starspec;

TEST(BesselK, AgreesWithBoostAcrossTheDomain) {
  double worst = 0.0;
  for (double nu = -1.5; nu <= 1.5 + 1e-12; nu += 0.125)
    for (double lx = -3.0; lx <= std::log10(40.0); lx += 0.05) {
      const double x = std::pow(10.0, lx);
      const double ref = oracle::bessel_k(nu, x);
      worst = std::max(worst, std::abs(bessel_k(nu, x) - ref) / ref);
    }
  EXPECT_LT(worst, 1e-11);
}

TEST(BesselK, HalfIntegerClosedForms) {
  for (double x : {1e-3, 0.01, 0.3, 1.0, 1.99, 2.0, 2.01, 7.5, 30.0}) {
    const double k12 = std::sqrt(kPi / (2 * x)) * std::exp(-x);
    EXPECT_NEAR(bessel_k(0.5, x) / k12, 1.0, 1e-12);
    EXPECT_NEAR(bessel_k(-0.5, x) / k12, 1.0, 1e-12);
    EXPECT_NEAR(bessel_k(1.5, x) / (k12 * (1 + 1 / x)), 1.0, 1e-12);
  }
}

TEST(BesselK, EvenInOrder) {
  for (double nu : {0.1, 0.5, 0.99, 1.0, 1.37})
    for (double x : {0.02, 1.1, 2.0, 9.0}) EXPECT_EQ(bessel_k(-nu, x), bessel_k(nu, x));
}

TEST(BesselK, BranchesAgreeAtTheSeam) {
  for (double nu = 0.0; nu <= 1.5; nu += 0.05) {
    const double a = bessel_k_series(nu, kBesselSeam).value;
    const double b = bessel_k_integral(nu, kBesselSeam).value;
    EXPECT_NEAR(a / b, 1.0, 1e-12) << nu;
  }
}

TEST(BesselK, Recurrence) {
  // K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
  for (double nu : {-0.5, -0.2, 0.0, 0.3, 0.5})
    for (double x : {0.05, 0.8, 2.0, 5.0, 20.0}) {
      const double lhs = bessel_k(nu + 1, x), rhs = bessel_k(nu - 1, x) + 2 * nu / x * bessel_k(nu, x);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
    }
}

TEST(BesselK, DerivativeMatchesFiniteDifference) {
  for (double nu : {0.0, 0.4, 1.2})
    for (double x : {0.3, 1.9, 2.1, 6.0}) {
      const double h = 1e-5 * x;
      const double fd = (bessel_k(nu, x + h) - bessel_k(nu, x - h)) / (2 * h);
      EXPECT_NEAR(bessel_k_prime(nu, x) / fd, 1.0, 1e-7);
    }
}

TEST(BesselK, ErrorEstimateIsReported) {
  const auto e = bessel_k_eval(0.3, 5.0);
  EXPECT_GE(e.est_error, 0.0);
  EXPECT_LT(e.est_error, 1e-12 * e.value);
  EXPECT_EQ(e.nu, 0.3);
}

TEST(BesselK, DomainErrors) {
  for (auto [nu, x] : {std::pair{0.5, 0.0}, std::pair{0.5, -1.0}, std::pair{1.6, 1.0}, std::pair{-2.0, 1.0}}) {
    try {
      bessel_k(nu, x);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
  }
}
