#include "rmt/overlap.hpp"

#include <cmath>
#include <numbers>

#include "rmt/csv.hpp"
#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"

namespace rmt {
namespace {

void require_gamma(const StieltjesSolution& solution) {
  if (solution.gamma() == 1.0) throw GammaOne();
}

double phi_positive(double l, double t, double gamma, const KernelCoefficients& c) {
  const double d = c.a * t - l;
  return l * t / (gamma * (d * d + c.b * c.b * t * t));
}

double phi_zero(double t, const StieltjesSolution& solution) {
  const double gamma = solution.gamma();
  if (!(gamma < 1.0)) throw ZeroBranchUnavailable();
  return 1.0 / ((1.0 - gamma) * (1.0 + *solution.m_under_zero() * t));
}

// int_{t <= tau} f(t) dH(t), atoms at tau included.
template <class F>
double integrate_H_below(const PopulationSpectrum& spec, double tau, F&& f) {
  if (tau < spec.h1()) return 0.0;
  double sum = 0.0;
  if (tau >= spec.h2()) {
    for (const QuadNode& n : spec.nodes()) sum += n.weight * f(n.tau);
    return sum;
  }
  const double cut[] = {tau};
  for (const QuadNode& n : spec.nodes_split(cut)) {
    if (n.tau <= tau) sum += n.weight * f(n.tau);
  }
  return sum;
}

}  // namespace

KernelCoefficients kernel_coefficients(double l, const StieltjesSolution& solution) {
  require_gamma(solution);
  const double ig = 1.0 / solution.gamma();
  const Complex m = solution.m_breve_at(l);
  const Complex ab = 1.0 - ig - ig * l * m;
  return {ab.real(), ab.imag(), -std::numbers::pi * ig * l * solution.density_at(l)};
}

double phi(double l, double t, const StieltjesSolution& solution) {
  require_gamma(solution);
  if (l < 0.0) return 0.0;
  if (l == 0.0) return phi_zero(t, solution);
  return phi_positive(l, t, solution.gamma(), kernel_coefficients(l, solution));
}

double phi_normalization(double l, const StieltjesSolution& solution) {
  require_gamma(solution);
  const PopulationSpectrum& spec = solution.spec();
  if (l < 0.0) return 0.0;
  if (l == 0.0) return spec.integrate([&](double t) { return phi_zero(t, solution); });
  const KernelCoefficients c = kernel_coefficients(l, solution);
  const double gamma = solution.gamma();
  return spec.integrate([&](double t) { return phi_positive(l, t, gamma, c); });
}

double phi_cumulative(double lambda, double tau, const StieltjesSolution& solution) {
  require_gamma(solution);
  const PopulationSpectrum& spec = solution.spec();
  const double gamma = solution.gamma();
  if (lambda < 0.0 || tau < spec.h1()) return 0.0;
  double total = 0.0;
  if (gamma < 1.0) {
    total += solution.mass_at_zero() *
             integrate_H_below(spec, tau, [&](double t) { return phi_zero(t, solution); });
  }
  for (const auto& [l, w] : solution.density_nodes(lambda)) {
    const KernelCoefficients c = kernel_coefficients(l, solution);
    total += w * integrate_H_below(spec, tau,
                                   [&](double t) { return phi_positive(l, t, gamma, c); });
  }
  return total;
}

double average_overlap(double lambda_lo, double lambda_hi, double tau_lo, double tau_hi,
                       const StieltjesSolution& solution) {
  require_gamma(solution);
  const PopulationSpectrum& spec = solution.spec();
  const double f_mass = solution.cdf(lambda_hi) - solution.cdf(lambda_lo);
  const double h_mass = spec.cdf(tau_hi) - spec.cdf(tau_lo);
  if (!(f_mass > 1e-12) || !(h_mass > 1e-12)) {
    throw EmptyBin("average_overlap: bin carries no mass under F or H");
  }
  const double num = phi_cumulative(lambda_hi, tau_hi, solution) -
                     phi_cumulative(lambda_hi, tau_lo, solution) -
                     phi_cumulative(lambda_lo, tau_hi, solution) +
                     phi_cumulative(lambda_lo, tau_lo, solution);
  return num / (f_mass * h_mass);
}

OverlapKernel build_kernel(const StieltjesSolution& solution, std::vector<double> l_grid,
                           std::vector<double> t_grid) {
  require_gamma(solution);
  OverlapKernel k;
  k.gamma = solution.gamma();
  k.l_grid = std::move(l_grid);
  k.t_grid = std::move(t_grid);
  const std::size_t nl = k.l_grid.size();
  const std::size_t nt = k.t_grid.size();
  k.values.assign(nl * nt, 0.0);
  k.coefficients.assign(nl, {0.0, 0.0, 0.0});
  k.normalization.assign(nl, 0.0);
  std::vector<double> discrepancy(nl, 0.0);
  parallel_for(nl, [&](std::size_t i) {
    const double l = k.l_grid[i];
    if (l > 0.0) {
      const KernelCoefficients c = kernel_coefficients(l, solution);
      k.coefficients[i] = c;
      discrepancy[i] = std::abs(c.b - c.b_from_density);
    }
    for (std::size_t j = 0; j < nt; ++j) k.values[i * nt + j] = phi(l, k.t_grid[j], solution);
    k.normalization[i] = phi_normalization(l, solution);
  });
  for (double d : discrepancy) k.max_b_discrepancy = std::max(k.max_b_discrepancy, d);
  return k;
}

void write_kernel_csv(const std::filesystem::path& path, const OverlapKernel& kernel) {
  std::vector<std::vector<double>> rows;
  rows.reserve(kernel.values.size());
  for (std::size_t i = 0; i < kernel.l_grid.size(); ++i) {
    for (std::size_t j = 0; j < kernel.t_grid.size(); ++j) {
      rows.push_back({kernel.l_grid[i], kernel.t_grid[j], kernel.at(i, j)});
    }
  }
  write_csv(path, {"l", "t", "phi"}, rows);
}

void write_cumulative_csv(const std::filesystem::path& path, std::span<const double> lambdas,
                          std::span<const double> taus, const StieltjesSolution& solution) {
  std::vector<std::vector<double>> rows(lambdas.size() * taus.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < taus.size(); ++j) {
      rows[i * taus.size() + j] = {lambdas[i], taus[j],
                                   phi_cumulative(lambdas[i], taus[j], solution)};
    }
  });
  write_csv(path, {"lambda", "tau", "Phi"}, rows);
}

}  // namespace rmt
