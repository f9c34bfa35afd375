#include <gtest/gtest.h>

#include <cmath>

#include "rmt/quadrature.hpp"

TEST(GaussLegendre, WeightsSumToTwo) {
  for (std::size_t n : {2u, 5u, 16u, 64u}) {
    const rmt::GaussRule& r = rmt::gauss_legendre(n);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-14) << n;
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  const std::size_t n = 8;
  for (int k = 0; k <= 15; ++k) {
    const double got = rmt::gauss_integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0, n);
    EXPECT_NEAR(got, 1.0 / (k + 1), 1e-14) << k;
  }
}

TEST(GaussLegendre, NodesSymmetricAndSorted) {
  const rmt::GaussRule& r = rmt::gauss_legendre(64);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_NEAR(r.nodes[i], -r.nodes[63 - i], 1e-15);
    if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  }
}

TEST(GaussLegendre, SmoothIntegrand) {
  const double got = rmt::gauss_integrate([](double x) { return std::exp(x); }, 0.0, 2.0);
  EXPECT_NEAR(got, std::exp(2.0) - 1.0, 1e-13);
}
