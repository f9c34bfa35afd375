#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rmt/spectrum.hpp"
#include "rmt/stieltjes.hpp"

namespace rmt {

enum class EntryLaw { kRealGaussian, kComplexGaussian };

std::string to_string(EntryLaw law);
EntryLaw entry_law_from_string(const std::string& name);

struct SimulationConfig {
  std::size_t n = 100;  ///< dimension N
  std::size_t p = 200;  ///< sample count
  PopulationSpectrum spec;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  EntryLaw law = EntryLaw::kRealGaussian;

  double gamma() const { return static_cast<double>(p) / static_cast<double>(n); }
  /// Throws DomainError unless N >= 2, p >= 1, reps >= 1.
  void check() const;
};

/// {"n", "p", "reps", "seed", "entry_law", "spectrum": {...}}; reps, seed
/// and entry_law are optional.
SimulationConfig simulation_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimulationConfig& config);

/// Seed of the random stream owned by one replication.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep_index);

/// One replication of S = p^{-1} Sigma^{1/2} X X* Sigma^{1/2} with Sigma
/// diagonal, so the population eigenvectors are the standard basis.
struct Draw {
  Eigen::VectorXd tau;            ///< diagonal of Sigma, ascending
  Eigen::MatrixXcd sample;        ///< S
  Eigen::VectorXd eigenvalues;    ///< descending
  Eigen::MatrixXcd eigenvectors;  ///< column i pairs with eigenvalues[i]
  double orthonormality_error;    ///< max |U*U - I|
};

Draw generate(const SimulationConfig& config, std::size_t rep_index);

/// diag(U* Sigma U).
Eigen::VectorXd oracle_dtilde(const Eigen::MatrixXcd& eigenvectors, const Eigen::MatrixXcd& sigma);
/// Same for diagonal Sigma = diag(tau).
Eigen::VectorXd oracle_dtilde(const Eigen::MatrixXcd& eigenvectors, const Eigen::VectorXd& tau);

/// Eigenvalues at or below 1e-10 times the largest.
std::size_t zero_eigenvalue_count(const Eigen::VectorXd& eigenvalues);

/// Sum with pairwise reduction; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

struct EmpiricalDelta {
  std::vector<double> grid;
  /// Delta_N(x) = N^{-1} sum_i dtilde_i 1[lambda_i <= x], averaged over reps.
  std::vector<double> mean;
  /// Delta_N(+inf) - N^{-1} Tr Sigma per rep (zero up to rounding).
  double max_total_error = 0.0;
};

EmpiricalDelta empirical_delta(const SimulationConfig& config, std::vector<double> grid);

struct OverlapBin {
  double lambda_lo, lambda_hi, tau_lo, tau_hi;
  std::size_t count = 0;
  double mean = 0.0;
  /// Ratio-estimator standard error across replications.
  double standard_error = 0.0;
  bool empty() const { return count == 0; }
};

/// Mean of N |u_i* e_j|^2 over lambda_i in (lambda_lo, lambda_hi] and
/// tau_j in (tau_lo, tau_hi], per bin. Bins are given by ascending edges.
std::vector<OverlapBin> empirical_overlap(const SimulationConfig& config,
                                          std::span<const double> lambda_edges,
                                          std::span<const double> tau_edges);

struct PrialEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct SimulationReport {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  EntryLaw law = EntryLaw::kRealGaussian;
  double gamma = 0.0;

  PrialEstimate prial_nonlinear;
  PrialEstimate prial_linear;
  PrialEstimate prial_sample;
  PrialEstimate prial_oracle;

  /// Per-replication squared Frobenius distances to U Dtilde U*.
  std::vector<double> loss_sample;
  std::vector<double> loss_nonlinear;
  std::vector<double> loss_linear;
  std::vector<std::uint64_t> seeds_used;

  /// max over reps of |sum dtilde - Tr Sigma| / Tr Sigma.
  double max_trace_error = 0.0;
  /// max over reps of |sum lambda - Tr S| / Tr S.
  double max_sample_trace_error = 0.0;
  double max_orthonormality_error = 0.0;
  /// Replications whose zero-eigenvalue count differs from max(N - p, 0).
  std::size_t rank_mismatches = 0;
  /// Sample eigenvalues that fell outside the limiting support.
  std::size_t outside_support = 0;
  /// Mean dtilde over zero sample eigenvalues (only when p < N).
  std::optional<double> null_space_dtilde;
};

/// PRIAL = 100 (1 - mean loss(M) / mean loss(S)), with jackknife standard
/// errors. Per-rep loss slices must have equal length.
PrialEstimate prial(std::span<const double> loss, std::span<const double> loss_sample);

/// PRIAL experiment using the limiting correction for (H, p / N).
SimulationReport run_prial(const SimulationConfig& config, const StieltjesSolution& solution);
SimulationReport run_prial(const SimulationConfig& config);

nlohmann::json to_json(const SimulationReport& report);

}  // namespace rmt
