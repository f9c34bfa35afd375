#include "rmt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmt/errors.hpp"

namespace rmt {
namespace {

constexpr int kMaxOrder = 12;

Complex theta_1_given(Complex z, Complex m, double gamma) {
  const Complex den = gamma - 1.0 - z * m;
  if (std::abs(den) < 1e-14) {
    throw DegenerateDenominator("theta_1: gamma - 1 - z m_F(z) vanishes");
  }
  return gamma * gamma / den - gamma;
}

}  // namespace

WeightFunction WeightFunction::constant(double c) {
  return {[c](double) { return c; }, {}};
}

WeightFunction WeightFunction::power(int k) {
  return {[k](double tau) { return std::pow(tau, k); }, {}};
}

WeightFunction WeightFunction::below(double cut) {
  return {[cut](double tau) { return tau < cut ? 1.0 : 0.0; }, {cut}};
}

WeightFunction linear_combination(double alpha, const WeightFunction& g1, double beta,
                                  const WeightFunction& g2) {
  std::vector<double> jumps = g1.discontinuities;
  jumps.insert(jumps.end(), g2.discontinuities.begin(), g2.discontinuities.end());
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  return {[alpha, beta, f1 = g1.evaluator, f2 = g2.evaluator](double tau) {
            return alpha * f1(tau) + beta * f2(tau);
          },
          std::move(jumps)};
}

Complex theta_g_given(Complex z, Complex m, const WeightFunction& g,
                      const PopulationSpectrum& spec, double gamma) {
  const double ig = 1.0 / gamma;
  const Complex a = 1.0 - ig - ig * z * m;
  auto kernel = [&](double tau) { return g(tau) / (tau * a - z); };
  if (g.discontinuities.empty()) return spec.integrate(kernel);
  return spec.integrate(kernel, std::span<const double>(g.discontinuities));
}

Complex theta_g(Complex z, const WeightFunction& g, const PopulationSpectrum& spec,
                double gamma, const SolverOptions& options) {
  return theta_g_given(z, solve_mF(z, spec, gamma, options), g, spec, gamma);
}

Complex theta_1(Complex z, const PopulationSpectrum& spec, double gamma,
                const SolverOptions& options) {
  return theta_1_given(z, solve_mF(z, spec, gamma, options), gamma);
}

Complex theta_k(Complex z, int k, const PopulationSpectrum& spec, double gamma,
                const SolverOptions& options) {
  if (k < 1 || k > kMaxOrder) {
    throw DomainError("theta_k: order must lie in [1, " + std::to_string(kMaxOrder) + "]");
  }
  const Complex m = solve_mF(z, spec, gamma, options);
  const Complex t1 = theta_1_given(z, m, gamma);
  const Complex factor = 1.0 + t1 / gamma;
  Complex t = t1;
  for (int j = 1; j < k; ++j) t = (z * t + spec.moment(j)) * factor;
  return t;
}

Complex theta_inv(Complex z, const PopulationSpectrum& spec, double gamma,
                  const SolverOptions& options) {
  const Complex m = solve_mF(z, spec, gamma, options);
  const double ig = 1.0 / gamma;
  const Complex a = 1.0 - ig - ig * z * m;
  return m * a / z - m_H_at_zero(spec) / z;
}

}  // namespace rmt
