#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "rmt/errors.hpp"
#include "rmt/spectrum.hpp"
#include "rmt/spectrum_io.hpp"

using rmt::PopulationSpectrum;

TEST(Validate, ThreeAtoms) {
  const auto s = fixtures::three_atoms();
  EXPECT_EQ(s.h1(), 1.0);
  EXPECT_EQ(s.h2(), 10.0);
  EXPECT_EQ(s.atoms().size(), 3u);
}

TEST(Validate, SinglePointMass) {
  const auto s = fixtures::identity();
  EXPECT_EQ(s.h1(), 1.0);
  EXPECT_EQ(s.h2(), 1.0);
  EXPECT_TRUE(s.is_point_mass());
}

TEST(Validate, NegativeLocationRejected) {
  EXPECT_THROW(PopulationSpectrum::validate({{0.5, 1.0}, {0.5, -2.0}}), rmt::NonPositiveSupport);
  EXPECT_THROW(PopulationSpectrum::validate({{1.0, 0.0}}), rmt::NonPositiveSupport);
  EXPECT_THROW(PopulationSpectrum::validate({}, {{1.0, 0.0, 1.0}}), rmt::NonPositiveSupport);
}

TEST(Validate, MassMustBeOne) {
  EXPECT_THROW(PopulationSpectrum::validate({{0.5, 1.0}, {0.4, 2.0}}), rmt::MassNotOne);
  EXPECT_THROW(PopulationSpectrum::validate({}), rmt::MassNotOne);
}

TEST(Validate, MalformedInput) {
  EXPECT_THROW(PopulationSpectrum::validate({{-0.5, 1.0}, {1.5, 2.0}}), rmt::InvalidSpectrum);
  EXPECT_THROW(PopulationSpectrum::validate({}, {{1.0, 3.0, 2.0}}), rmt::InvalidSpectrum);
  EXPECT_THROW(PopulationSpectrum::validate({{1.0, std::nan("")}}), rmt::InvalidSpectrum);
}

TEST(Validate, SortsAndMergesAtoms) {
  const auto s = PopulationSpectrum::validate({{0.25, 3.0}, {0.5, 1.0}, {0.25, 3.0}});
  ASSERT_EQ(s.atoms().size(), 2u);
  EXPECT_EQ(s.atoms()[0].location, 1.0);
  EXPECT_DOUBLE_EQ(s.atoms()[1].weight, 0.5);
}

TEST(Integrate, Examples) {
  auto id = [](double t) { return t; };
  EXPECT_DOUBLE_EQ(fixtures::identity().integrate(id), 1.0);
  EXPECT_NEAR(fixtures::uniform_5_6().integrate(id), 5.5, 1e-13);
  EXPECT_NEAR(fixtures::three_atoms().integrate(id), 0.2 * 1 + 0.4 * 3 + 0.4 * 10, 1e-13);
}

TEST(Integrate, ConstantOneGivesOne) {
  for (const auto& s : {fixtures::identity(), fixtures::three_atoms(), fixtures::uniform_5_6(),
                        PopulationSpectrum::validate({{0.3, 2.0}}, {{0.3, 1.0, 4.0}, {0.4, 6.0, 7.5}})}) {
    EXPECT_NEAR(s.integrate([](double) { return 1.0; }), 1.0, 1e-12);
  }
}

TEST(Integrate, Linearity) {
  const auto s = PopulationSpectrum::validate({{0.3, 2.0}}, {{0.7, 1.0, 4.0}});
  auto f = [](double t) { return std::sin(t); };
  auto g = [](double t) { return 1.0 / t; };
  const double alpha = 1.7, beta = -0.3;
  const double lhs = s.integrate([&](double t) { return alpha * f(t) + beta * g(t); });
  EXPECT_NEAR(lhs, alpha * s.integrate(f) + beta * s.integrate(g), 1e-12);
}

TEST(Integrate, ComplexIntegrand) {
  const auto s = fixtures::uniform_5_6();
  const std::complex<double> z{5.5, 0.5};
  const auto got = s.integrate([&](double t) { return 1.0 / (t - z); });
  const auto want = std::log((6.0 - z) / (5.0 - z));
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-12);
}

TEST(Integrate, SplitAtBreakpointHandlesIndicator) {
  const auto s = fixtures::uniform_5_6();
  const double cut[] = {5.5};
  const double half = s.integrate([](double t) { return t < 5.5 ? 1.0 : 0.0; }, cut);
  EXPECT_NEAR(half, 0.5, 1e-14);
}

TEST(MHAtZero, Examples) {
  EXPECT_DOUBLE_EQ(rmt::m_H_at_zero(fixtures::identity()), 1.0);
  EXPECT_DOUBLE_EQ(rmt::m_H_at_zero(fixtures::point_mass(2.0)), 0.5);
  EXPECT_NEAR(rmt::m_H_at_zero(fixtures::three_atoms()), 0.2 + 0.4 / 3 + 0.04, 1e-14);
  EXPECT_NEAR(rmt::m_H_at_zero(fixtures::uniform_5_6()), std::log(6.0 / 5.0), 1e-14);
}

TEST(Moment, MatchesQuadrature) {
  const auto s = PopulationSpectrum::validate({{0.3, 2.0}}, {{0.7, 1.0, 4.0}});
  for (int k = -1; k <= 4; ++k) {
    EXPECT_NEAR(s.moment(k), s.integrate([k](double t) { return std::pow(t, k); }), 1e-12) << k;
  }
}

TEST(PopulationEigenvalues, Examples) {
  EXPECT_EQ(rmt::population_eigenvalues(fixtures::identity(), 3), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(rmt::population_eigenvalues(fixtures::three_atoms(), 5), (std::vector<double>{1, 3, 3, 10, 10}));
  const auto u = rmt::population_eigenvalues(fixtures::uniform_5_6(), 2);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_NEAR(u[0], 5.25, 1e-14);
  EXPECT_NEAR(u[1], 5.75, 1e-14);
}

TEST(PopulationEigenvalues, ZeroDimensionRejected) {
  EXPECT_THROW(rmt::population_eigenvalues(fixtures::identity(), 0), rmt::DomainError);
}

TEST(PopulationEigenvalues, KolmogorovDistanceWithinOneOverN) {
  for (std::size_t n : {5u, 10u, 20u, 100u, 200u}) {
    const auto eig = rmt::population_eigenvalues(fixtures::three_atoms(), n);
    EXPECT_LE(rmt::kolmogorov_distance(fixtures::three_atoms(), eig), 1.0 / static_cast<double>(n)) << n;
  }
  const auto eig = rmt::population_eigenvalues(fixtures::uniform_5_6(), 50);
  EXPECT_LE(rmt::kolmogorov_distance(fixtures::uniform_5_6(), eig), 1.0 / 50);
}

TEST(Cdf, RightContinuous) {
  const auto s = fixtures::three_atoms();
  EXPECT_EQ(s.cdf(0.999), 0.0);
  EXPECT_DOUBLE_EQ(s.cdf(1.0), 0.2);
  EXPECT_DOUBLE_EQ(s.cdf(3.0), 0.6);
  EXPECT_DOUBLE_EQ(s.cdf(10.0), 1.0);
  EXPECT_NEAR(fixtures::uniform_5_6().cdf(5.25), 0.25, 1e-15);
}

TEST(SpectrumJson, RoundTrip) {
  const auto s = PopulationSpectrum::validate({{0.3, 2.0}}, {{0.7, 1.0, 4.0}});
  const auto back = rmt::spectrum_from_json(rmt::spectrum_to_json(s));
  ASSERT_EQ(back.atoms().size(), 1u);
  ASSERT_EQ(back.segments().size(), 1u);
  EXPECT_EQ(back.segments()[0].hi, 4.0);
  EXPECT_THROW(rmt::spectrum_from_json(nlohmann::json::parse(R"({"atoms": [[1.0]]})")), rmt::InvalidSpectrum);
  EXPECT_THROW(rmt::spectrum_from_json(nlohmann::json::parse(R"({"atoms": "x"})")), rmt::InvalidSpectrum);
}
