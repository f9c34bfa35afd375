#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rmt/errors.hpp"
#include "rmt/functionals.hpp"

using rmt::Complex;
using rmt::WeightFunction;

namespace {

std::vector<Complex> z_grid() {
  std::vector<Complex> zs;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) zs.emplace_back(-0.5 + 3.0 * i, std::pow(10.0, 1.0 - j));
  }
  return zs;
}

}  // namespace

TEST(ThetaG, FlatWeightIsMF) {
  for (const auto& s : {fixtures::identity(), fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    for (const Complex z : z_grid()) {
      const Complex m = rmt::solve_mF(z, s, 2.0);
      const Complex t = rmt::theta_g(z, WeightFunction::constant(1.0), s, 2.0);
      // Differs from m only by the fixed-point residual.
      EXPECT_LE(std::abs(t - m), 1e-12 * std::max(1.0, std::abs(m)));
    }
  }
}

TEST(ThetaG, IdentityWeightMatchesClosedFormTheta1) {
  const auto s = fixtures::identity();
  const Complex z{1.0, 1e-3};
  const double gamma = 2.0;
  const Complex m = rmt::solve_mF(z, s, gamma);
  const Complex closed = gamma * gamma / (gamma - 1.0 - z * m) - gamma;
  EXPECT_LE(std::abs(rmt::theta_g(z, WeightFunction::power(1), s, gamma) - closed), 1e-9);
}

TEST(ThetaG, IndicatorTruncatesUniform) {
  const auto s = fixtures::uniform_5_6();
  const double gamma = 2.0;
  const Complex z{5.0, 0.5};
  const Complex m = rmt::solve_mF(z, s, gamma);
  const Complex a = 1.0 - 1.0 / gamma - z * m / gamma;
  // Half of the mass on [5, 5.5], integrated exactly with the same m.
  const Complex direct = 0.5 * rmt::PopulationSpectrum::validate({}, {{1.0, 5.0, 5.5}})
                                   .integrate([&](double t) { return 1.0 / (t * a - z); });
  EXPECT_LE(std::abs(rmt::theta_g(z, WeightFunction::below(5.5), s, gamma) - direct), 1e-13);
}

TEST(Theta1, LargeZDecay) {
  for (const auto& s : {fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    const Complex z{0.0, 1e6};
    EXPECT_LE(std::abs(rmt::theta_1(z, s, 2.0)), 2.0 * s.moment(1) / std::abs(z));
  }
}

TEST(Theta1, AgreesWithQuadrature) {
  const auto s = fixtures::identity();
  const Complex z{1.0, 1e-3};
  EXPECT_LE(std::abs(rmt::theta_1(z, s, 2.0) - rmt::theta_g(z, WeightFunction::power(1), s, 2.0)), 1e-9);
}

TEST(Theta1, InternalIdentity) {
  for (const auto& s : {fixtures::identity(), fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    for (double gamma : {0.5, 2.0, 10.0}) {
      for (const Complex z : z_grid()) {
        const Complex m = rmt::solve_mF(z, s, gamma);
        const Complex t = rmt::theta_1(z, s, gamma);
        EXPECT_LE(std::abs(1.0 + z * m - t / (1.0 + t / gamma)), 1e-10);
      }
    }
  }
}

TEST(ThetaK, OrderOneIsTheta1) {
  const auto s = fixtures::three_atoms();
  const Complex z{2.0, 0.1};
  EXPECT_EQ(rmt::theta_k(z, 1, s, 2.0), rmt::theta_1(z, s, 2.0));
}

TEST(ThetaK, RecursionMatchesQuadratureExamples) {
  const Complex z2{1.0, 1e-2};
  EXPECT_LE(std::abs(rmt::theta_k(z2, 2, fixtures::identity(), 2.0) -
                     rmt::theta_g(z2, WeightFunction::power(2), fixtures::identity(), 2.0)),
            1e-8);
  const Complex z3{2.0, 1e-2};
  EXPECT_LE(std::abs(rmt::theta_k(z3, 3, fixtures::three_atoms(), 2.0) -
                     rmt::theta_g(z3, WeightFunction::power(3), fixtures::three_atoms(), 2.0)),
            1e-8);
}

TEST(ThetaK, RecursionMatchesQuadratureOnGrid) {
  for (const auto& s : {fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    for (int k = 1; k <= 3; ++k) {
      for (const Complex z : z_grid()) {
        EXPECT_LE(std::abs(rmt::theta_k(z, k, s, 2.0) - rmt::theta_g(z, WeightFunction::power(k), s, 2.0)), 1e-8)
            << "k=" << k << " z=" << z;
      }
    }
  }
}

TEST(ThetaK, OrderBounds) {
  EXPECT_THROW(rmt::theta_k({1.0, 1.0}, 0, fixtures::identity(), 2.0), rmt::DomainError);
  EXPECT_THROW(rmt::theta_k({1.0, 1.0}, 13, fixtures::identity(), 2.0), rmt::DomainError);
  EXPECT_NO_THROW(rmt::theta_k({1.0, 1.0}, 12, fixtures::identity(), 2.0));
}

TEST(ThetaInv, PointMassAtOneIsMF) {
  const auto s = fixtures::identity();
  const Complex z{1.3, 0.05};
  const Complex m = rmt::solve_mF(z, s, 2.0);
  EXPECT_LE(std::abs(rmt::theta_inv(z, s, 2.0) - m), 1e-12);
}

TEST(ThetaInv, ClosedFormMatchesQuadrature) {
  const auto s = fixtures::point_mass(2.0);
  const Complex z{1.0, 1e-2};
  EXPECT_LE(std::abs(rmt::theta_inv(z, s, 2.0) - rmt::theta_g(z, WeightFunction::power(-1), s, 2.0)), 1e-9);
  for (const auto& t : {fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    for (const Complex zz : z_grid()) {
      EXPECT_LE(std::abs(rmt::theta_inv(zz, t, 2.0) - rmt::theta_g(zz, WeightFunction::power(-1), t, 2.0)), 1e-9);
    }
  }
}

TEST(ThetaInv, LargeZ) {
  const auto s = fixtures::three_atoms();
  double prev = std::numeric_limits<double>::infinity();
  for (double y : {1e2, 1e4, 1e6}) {
    const Complex z{0.0, y};
    const double gap = std::abs(rmt::theta_inv(z, s, 2.0) + s.moment(-1) / z);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(ThetaG, Linearity) {
  const auto s = fixtures::uniform_5_6();
  const WeightFunction g1 = WeightFunction::below(5.3);
  const WeightFunction g2 = WeightFunction::power(2);
  const auto combo = rmt::linear_combination(0.7, g1, -1.9, g2);
  for (const Complex z : z_grid()) {
    const Complex lhs = rmt::theta_g(z, combo, s, 2.0);
    const Complex rhs = 0.7 * rmt::theta_g(z, g1, s, 2.0) - 1.9 * rmt::theta_g(z, g2, s, 2.0);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(ThetaG, ImaginaryPartNonnegativeForNonnegativeWeights) {
  for (const auto& s : {fixtures::three_atoms(), fixtures::uniform_5_6()}) {
    for (const WeightFunction& g : {WeightFunction::power(1), WeightFunction::power(-1), WeightFunction::below(5.5)}) {
      for (double gamma : {0.5, 2.0}) {
        for (const Complex z : z_grid()) EXPECT_GE(rmt::theta_g(z, g, s, gamma).imag(), -1e-12);
      }
    }
  }
}
