#include "rmt/shrinkage.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/csv.hpp"
#include "rmt/errors.hpp"

namespace rmt {
namespace {

void require_gamma(const StieltjesSolution& solution) {
  if (solution.gamma() == 1.0) throw GammaOne();
}

double delta_positive(double lambda, Complex m, double gamma) {
  const double ig = 1.0 / gamma;
  return lambda / std::norm(1.0 - ig - ig * lambda * m);
}

double psi_positive(double lambda, Complex m, double gamma) {
  const double ig = 1.0 / gamma;
  return (1.0 - ig - 2.0 * ig * lambda * m.real()) / lambda;
}

double delta_at_zero(const StieltjesSolution& solution) {
  const double gamma = solution.gamma();
  if (!(gamma < 1.0)) return 0.0;
  return gamma / ((1.0 - gamma) * *solution.m_under_zero());
}

double psi_at_zero(const StieltjesSolution& solution) {
  const double gamma = solution.gamma();
  if (!(gamma < 1.0)) return 0.0;
  return m_H_at_zero(solution.spec()) / (1.0 - gamma) - *solution.m_under_zero();
}

template <class Positive, class Zero>
std::vector<double> apply(std::span<const double> eigs, const StieltjesSolution& solution,
                          std::vector<bool>* outside, Positive positive, Zero zero) {
  require_gamma(solution);
  double top = 0.0;
  for (double x : eigs) {
    if (x < 0.0 && x < -kZeroEigenvalueTolerance * std::max(1.0, top)) {
      throw DomainError("shrinkage: sample eigenvalues must be nonnegative");
    }
    top = std::max(top, x);
  }
  const double cut = kZeroEigenvalueTolerance * top;
  const double zero_value = zero(solution);
  const double gamma = solution.gamma();
  std::vector<double> out(eigs.size());
  if (outside) outside->assign(eigs.size(), false);
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const double x = eigs[i];
    if (x <= cut) {
      out[i] = zero_value;
      continue;
    }
    bool clamped = false;
    const Complex m = solution.m_breve_at(x, &clamped);
    if (clamped) {
      if (outside) (*outside)[i] = true;
      // Evaluate at the nearest edge as well, so the value matches the
      // support's boundary rather than mixing an edge m with an outside x.
      double edge = x;
      double best = std::numeric_limits<double>::infinity();
      for (const Interval& iv : solution.support()) {
        for (double e : {iv.lo, iv.hi}) {
          if (std::abs(x - e) < best) {
            best = std::abs(x - e);
            edge = e;
          }
        }
      }
      out[i] = positive(edge, m, gamma);
    } else {
      out[i] = positive(x, m, gamma);
    }
  }
  return out;
}

}  // namespace

double delta(double lambda, const StieltjesSolution& solution) {
  require_gamma(solution);
  if (lambda < 0.0) return 0.0;
  if (lambda == 0.0) return delta_at_zero(solution);
  return delta_positive(lambda, solution.m_breve_at(lambda), solution.gamma());
}

double psi(double lambda, const StieltjesSolution& solution) {
  require_gamma(solution);
  if (lambda < 0.0) return 0.0;
  if (lambda == 0.0) return psi_at_zero(solution);
  return psi_positive(lambda, solution.m_breve_at(lambda), solution.gamma());
}

double delta_cumulative(double x, const StieltjesSolution& solution) {
  require_gamma(solution);
  if (x < 0.0) return 0.0;
  return solution.mass_at_zero() * delta_at_zero(solution) +
         solution.integrate_dF([&](double l) { return delta(l, solution); }, x);
}

double delta_moment(const StieltjesSolution& solution) {
  return delta_cumulative(std::numeric_limits<double>::infinity(), solution);
}

double psi_moment(const StieltjesSolution& solution) {
  require_gamma(solution);
  return solution.mass_at_zero() * psi_at_zero(solution) +
         solution.integrate_dF([&](double l) { return psi(l, solution); });
}

bool ShrinkageCurve::moments_conserved(double tolerance) const {
  return std::abs(delta_moment - tau_moment) <= tolerance &&
         std::abs(psi_moment - inverse_tau_moment) <= tolerance;
}

ShrinkageCurve shrinkage_curve(const StieltjesSolution& solution,
                               std::vector<double> lambda_grid) {
  require_gamma(solution);
  ShrinkageCurve c;
  c.gamma = solution.gamma();
  c.lambda_grid = std::move(lambda_grid);
  c.delta.reserve(c.lambda_grid.size());
  c.psi.reserve(c.lambda_grid.size());
  for (double l : c.lambda_grid) {
    c.delta.push_back(delta(l, solution));
    c.psi.push_back(psi(l, solution));
  }
  if (c.gamma < 1.0) {
    c.delta_zero = delta_at_zero(solution);
    c.psi_zero = psi_at_zero(solution);
  }
  c.delta_moment = delta_moment(solution);
  c.psi_moment = psi_moment(solution);
  c.tau_moment = solution.spec().moment(1);
  c.inverse_tau_moment = solution.spec().moment(-1);
  return c;
}

void write_shrinkage_csv(const std::filesystem::path& path, const ShrinkageCurve& curve,
                         std::span<const double> linear_baseline) {
  if (linear_baseline.size() != curve.lambda_grid.size()) {
    throw DomainError("write_shrinkage_csv: baseline length differs from grid");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.lambda_grid.size());
  for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
    rows.push_back({curve.lambda_grid[i], curve.delta[i], curve.psi[i], linear_baseline[i]});
  }
  write_csv(path, {"lambda", "delta", "psi", "linear_baseline"}, rows);
}

std::vector<double> shrink_spectrum(std::span<const double> sample_eigs,
                                    const StieltjesSolution& solution,
                                    std::vector<bool>* outside) {
  return apply(sample_eigs, solution, outside, delta_positive, delta_at_zero);
}

std::vector<double> shrink_inverse_spectrum(std::span<const double> sample_eigs,
                                            const StieltjesSolution& solution,
                                            std::vector<bool>* outside) {
  return apply(sample_eigs, solution, outside, psi_positive, psi_at_zero);
}

LinearCoefficients linear_oracle_coefficients(std::span<const double> sample_eigs,
                                              const LinearOracleStats& stats) {
  const auto n = static_cast<double>(sample_eigs.size());
  if (sample_eigs.empty()) throw DomainError("linear oracle: no eigenvalues");
  double s1 = 0.0;
  for (double x : sample_eigs) s1 += x;
  const double mean = s1 / n;
  // Centred second moment avoids cancellation in the 2x2 determinant.
  double var = 0.0;
  for (double x : sample_eigs) var += (x - mean) * (x - mean);
  const double target_mean = stats.trace_sigma / n;
  if (!(var > 1e-24 * std::max(1.0, mean * mean) * n)) {
    return {target_mean, 0.0};
  }
  const double b = (stats.trace_s_sigma - mean * stats.trace_sigma) / var;
  return {target_mean - b * mean, b};
}

std::vector<double> linear_shrinkage_oracle(std::span<const double> sample_eigs,
                                            const LinearOracleStats& stats) {
  const LinearCoefficients c = linear_oracle_coefficients(sample_eigs, stats);
  std::vector<double> out;
  out.reserve(sample_eigs.size());
  for (double x : sample_eigs) out.push_back(c.a + c.b * x);
  return out;
}

LinearCoefficients asymptotic_linear_coefficients(const StieltjesSolution& solution) {
  require_gamma(solution);
  // The zero atom contributes to the count only: lambda = 0 there.
  const double mean = solution.integrate_dF([](double l) { return l; });
  const double second = solution.integrate_dF([](double l) { return l * l; });
  const double cross = solution.integrate_dF([&](double l) { return l * delta(l, solution); });
  const double target = solution.spec().moment(1);
  const double var = second - mean * mean;
  if (!(var > 1e-24)) return {target, 0.0};
  const double b = (cross - mean * target) / var;
  return {target - b * mean, b};
}

}  // namespace rmt
