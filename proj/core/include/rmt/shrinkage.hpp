#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "rmt/stieltjes.hpp"

namespace rmt {

/// delta(lambda): lambda / |1 - 1/gamma - lambda m_breve(lambda) / gamma|^2 for
/// lambda > 0, gamma / ((1 - gamma) m_under(0)) at lambda = 0 when gamma < 1,
/// and 0 otherwise.
double delta(double lambda, const StieltjesSolution& solution);

/// psi(lambda): (1 - 1/gamma - 2 lambda Re m_breve(lambda) / gamma) / lambda for
/// lambda > 0, m_H(0) / (1 - gamma) - m_under(0) at lambda = 0 when gamma < 1,
/// and 0 otherwise.
double psi(double lambda, const StieltjesSolution& solution);

/// int delta dF, zero atom included.
double delta_moment(const StieltjesSolution& solution);
/// int psi dF, zero atom included.
double psi_moment(const StieltjesSolution& solution);
/// Delta(x) = int_{(-inf, x]} delta dF.
double delta_cumulative(double x, const StieltjesSolution& solution);

struct ShrinkageCurve {
  std::vector<double> lambda_grid;
  std::vector<double> delta;
  std::vector<double> psi;
  std::optional<double> delta_zero;
  std::optional<double> psi_zero;
  double gamma = 0.0;
  /// int delta dF against int tau dH.
  double delta_moment = 0.0;
  double tau_moment = 0.0;
  /// int psi dF against int tau^{-1} dH.
  double psi_moment = 0.0;
  double inverse_tau_moment = 0.0;

  bool moments_conserved(double tolerance = 1e-3) const;
};

ShrinkageCurve shrinkage_curve(const StieltjesSolution& solution,
                               std::vector<double> lambda_grid);

/// Columns lambda, delta, psi, linear_baseline.
void write_shrinkage_csv(const std::filesystem::path& path, const ShrinkageCurve& curve,
                         std::span<const double> linear_baseline);

/// Sample eigenvalues at or below zero_tolerance * max are treated as zero.
inline constexpr double kZeroEigenvalueTolerance = 1e-10;

/// delta applied to each sample eigenvalue, order preserved. Eigenvalues
/// outside the limiting support use the value at the nearest support edge;
/// their positions are flagged in `outside` when given.
std::vector<double> shrink_spectrum(std::span<const double> sample_eigs,
                                    const StieltjesSolution& solution,
                                    std::vector<bool>* outside = nullptr);

/// psi applied to each sample eigenvalue, same conventions as shrink_spectrum.
std::vector<double> shrink_inverse_spectrum(std::span<const double> sample_eigs,
                                            const StieltjesSolution& solution,
                                            std::vector<bool>* outside = nullptr);

/// Trace statistics of the true covariance needed by the linear oracle.
struct LinearOracleStats {
  double trace_sigma;
  /// Tr(S Sigma) = sum_i lambda_i u_i* Sigma u_i.
  double trace_s_sigma;
};

struct LinearCoefficients {
  double a;
  double b;
};

/// (a, b) minimising ||a I + b S - Sigma||_F. When S is a multiple of the
/// identity the span collapses to {I} and b = 0.
LinearCoefficients linear_oracle_coefficients(std::span<const double> sample_eigs,
                                              const LinearOracleStats& stats);

/// a + b lambda_i for each sample eigenvalue.
std::vector<double> linear_shrinkage_oracle(std::span<const double> sample_eigs,
                                            const LinearOracleStats& stats);

/// Large-dimension limit of the linear oracle, from int lambda dF,
/// int lambda^2 dF, int lambda delta dF and int tau dH.
LinearCoefficients asymptotic_linear_coefficients(const StieltjesSolution& solution);

}  // namespace rmt
