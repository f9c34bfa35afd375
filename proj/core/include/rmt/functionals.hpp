#pragma once

#include <functional>
#include <vector>

#include "rmt/spectrum.hpp"
#include "rmt/stieltjes.hpp"

namespace rmt {

/// Bounded weight g on [h1, h2] with finitely many jump points.
struct WeightFunction {
  std::function<double(double)> evaluator;
  std::vector<double> discontinuities;

  double operator()(double tau) const { return evaluator(tau); }

  static WeightFunction constant(double c);
  static WeightFunction power(int k);
  /// Indicator of tau < cut (jump at cut).
  static WeightFunction below(double cut);
};

/// alpha * g1 + beta * g2, with the union of both jump sets.
WeightFunction linear_combination(double alpha, const WeightFunction& g1, double beta,
                                  const WeightFunction& g2);

/// int g(tau) / (tau (1 - 1/gamma - z m / gamma) - z) dH(tau) for a given m.
/// Segment panels are split at the jumps of g.
Complex theta_g_given(Complex z, Complex m, const WeightFunction& g,
                      const PopulationSpectrum& spec, double gamma);

/// Theta^g(z) with m = m_F(z) from solve_mF.
Complex theta_g(Complex z, const WeightFunction& g, const PopulationSpectrum& spec,
                double gamma, const SolverOptions& options = {});

/// Closed form gamma^2 / (gamma - 1 - z m_F(z)) - gamma.
/// Throws DegenerateDenominator when |gamma - 1 - z m_F| < 1e-14.
Complex theta_1(Complex z, const PopulationSpectrum& spec, double gamma,
                const SolverOptions& options = {});

/// Theta^(k), 1 <= k <= 12, by the recursion
/// Theta^(k+1) = (z Theta^(k) + int tau^k dH) (1 + Theta^(1) / gamma).
Complex theta_k(Complex z, int k, const PopulationSpectrum& spec, double gamma,
                const SolverOptions& options = {});

/// Theta^(-1)(z) = m_F a / z - z^{-1} int tau^{-1} dH with
/// a = 1 - 1/gamma - z m_F / gamma.
Complex theta_inv(Complex z, const PopulationSpectrum& spec, double gamma,
                  const SolverOptions& options = {});

}  // namespace rmt
