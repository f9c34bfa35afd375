#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "rmt/stieltjes.hpp"

namespace rmt {

/// a + ib = 1 - 1/gamma - l m_breve(l) / gamma.
struct KernelCoefficients {
  double a;
  double b;
  /// b recomputed as -pi l F'(l) / gamma from the interpolated density.
  double b_from_density;
};

KernelCoefficients kernel_coefficients(double l, const StieltjesSolution& solution);

/// phi(l, t). l > 0: l t / (gamma ((a t - l)^2 + b^2 t^2)).
/// l = 0 and gamma < 1: 1 / ((1 - gamma)(1 + m_under(0) t)).
/// l < 0: 0. l = 0 with gamma > 1 throws ZeroBranchUnavailable.
double phi(double l, double t, const StieltjesSolution& solution);

/// int phi(l, t) dH(t).
double phi_normalization(double l, const StieltjesSolution& solution);

/// Phi(lambda, tau): double integral of phi over (-inf, lambda] x (-inf, tau]
/// against dF x dH, including the zero atom of F when gamma < 1.
double phi_cumulative(double lambda, double tau, const StieltjesSolution& solution);

/// Limiting mean of N |u_i* v_j|^2 over lambda_i in (lambda_lo, lambda_hi]
/// and tau_j in (tau_lo, tau_hi]. Throws EmptyBin if either marginal mass is
/// at most 1e-12.
double average_overlap(double lambda_lo, double lambda_hi, double tau_lo, double tau_hi,
                       const StieltjesSolution& solution);

struct OverlapKernel {
  std::vector<double> l_grid;
  std::vector<double> t_grid;
  /// values[i * t_grid.size() + j] = phi(l_grid[i], t_grid[j]).
  std::vector<double> values;
  double gamma = 0.0;
  std::vector<KernelCoefficients> coefficients;
  /// int phi(l, t) dH(t) per l.
  std::vector<double> normalization;
  /// max |b - b_from_density| over l > 0.
  double max_b_discrepancy = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * t_grid.size() + j]; }
  /// Differences above 1e-6 point at a solver fault.
  bool b_consistent() const { return max_b_discrepancy <= 1e-6; }
};

OverlapKernel build_kernel(const StieltjesSolution& solution, std::vector<double> l_grid,
                           std::vector<double> t_grid);

/// Columns l, t, phi.
void write_kernel_csv(const std::filesystem::path& path, const OverlapKernel& kernel);

/// Columns lambda, tau, Phi.
void write_cumulative_csv(const std::filesystem::path& path, std::span<const double> lambdas,
                          std::span<const double> taus, const StieltjesSolution& solution);

}  // namespace rmt
