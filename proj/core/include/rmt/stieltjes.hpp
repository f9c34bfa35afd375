#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "rmt/spectrum.hpp"

namespace rmt {

using Complex = std::complex<double>;

struct SolverOptions {
  double damping = 0.5;
  int max_iterations = 10000;
  /// Bound on |m - T(m)| for an accepted solution, T being the fixed-point map.
  double tolerance = 1e-12;
};

/// Right-hand side T(m) of the Marcenko-Pastur equation
///   m = int {tau [1 - 1/gamma - z m / gamma] - z}^{-1} dH(tau).
Complex mp_map(Complex m, Complex z, const PopulationSpectrum& spec, double gamma);

/// |m - T(m)|.
double mp_residual(Complex m, Complex z, const PopulationSpectrum& spec,
                   double gamma);

/// m_F(z) for Im z > 0. The damped fixed-point iteration is run at
/// Im z >= h2, where it contracts quickly, and the solution is carried down
/// to the requested Im z by Newton continuation. Throws DomainError for
/// Im z <= 0 and NoConvergence when the residual cannot be brought below
/// the tolerance.
Complex solve_mF(Complex z, const PopulationSpectrum& spec, double gamma,
                 const SolverOptions& options = {});

/// m of the companion distribution (the limit e.s.d. of p^{-1} X* Sigma X),
/// solved from its own equation z = -1/m + gamma^{-1} int tau/(1 + tau m) dH.
/// Independent of solve_mF.
Complex solve_companion(Complex z, const PopulationSpectrum& spec, double gamma,
                        const SolverOptions& options = {});

/// Companion transform obtained from m_F through 1 + z m_F = gamma + gamma z m.
Complex companion_from_mF(Complex z, Complex m_F, double gamma);

/// Limit of the companion transform at zero for gamma < 1: the positive root
/// of 1/m = gamma^{-1} int tau/(1 + tau m) dH(tau), found by bisection.
/// Throws DomainError when gamma >= 1.
double companion_zero(const PopulationSpectrum& spec, double gamma);

/// (1 + gamma^{-1/2})^2 h2, an upper bound on the support of F.
double upper_edge_bound(const PopulationSpectrum& spec, double gamma);

struct BoundaryOptions {
  SolverOptions solver;
  /// Decreasing imaginary offsets used for the Richardson extrapolation.
  std::array<double, 3> etas{1e-4, 5e-5, 2.5e-5};
  /// Polish the extrapolated value by Newton on the real axis.
  bool refine_on_axis = true;
  double edge_threshold = 1e-8;
};

enum class BoundaryMethod : std::uint8_t {
  kAxisNewton,    ///< real-axis root reached by continuation
  kExtrapolated,  ///< Richardson value over the eta schedule
  kFailed,
};

struct BoundaryValue {
  Complex m;
  BoundaryMethod method;
};

/// lim_{eta -> 0+} m_F(lambda + i eta) for lambda > 0.
BoundaryValue boundary_value(double lambda, const PopulationSpectrum& spec,
                             double gamma, const BoundaryOptions& options = {});

struct Interval {
  double lo;
  double hi;
};

/// Boundary values of m_F tabulated on a grid for a fixed (H, gamma), with
/// interpolation and integration against the continuous part of dF.
///
/// Inside a support interval [lo, hi] values are interpolated in the angle
/// theta = acos((mid - lambda) / half), in which the square-root edge
/// behaviour of the density becomes smooth.
class StieltjesSolution {
 public:
  StieltjesSolution(PopulationSpectrum spec, double gamma, std::vector<double> grid,
                    std::vector<Complex> m_breve, std::vector<BoundaryMethod> method,
                    std::vector<Interval> support);

  const PopulationSpectrum& spec() const noexcept { return spec_; }
  double gamma() const noexcept { return gamma_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<Complex>& m_breve() const noexcept { return m_breve_; }
  const std::vector<double>& density() const noexcept { return density_; }
  const std::vector<BoundaryMethod>& method() const noexcept { return method_; }
  bool valid(std::size_t i) const { return method_[i] != BoundaryMethod::kFailed; }
  const std::vector<Interval>& support() const noexcept { return support_; }
  /// Companion transform at zero; present iff gamma < 1.
  const std::optional<double>& m_under_zero() const noexcept { return m_under_zero_; }
  /// 1 - gamma for gamma < 1, else 0.
  double mass_at_zero() const noexcept { return mass_at_zero_; }

  /// Interpolated boundary value. Outside the support the value at the
  /// nearest support edge is returned and `*clamped` is set.
  Complex m_breve_at(double lambda, bool* clamped = nullptr) const;
  double density_at(double lambda) const;
  /// Limiting c.d.f. F(lambda), atom at zero included.
  double cdf(double lambda) const;
  /// Trapezoid rule for the continuous mass over the grid, plus mass_at_zero.
  double total_mass() const;
  /// Quantile of F restricted to its continuous part plus the zero atom.
  double quantile(double u) const;

  /// Quadrature nodes (lambda, weight) for integrals against F' dlambda over
  /// (-inf, upper]; the zero atom is not included.
  std::vector<std::pair<double, double>> density_nodes(
      double upper = std::numeric_limits<double>::infinity()) const;

  template <class F>
  double integrate_dF(F&& f, double upper = std::numeric_limits<double>::infinity()) const {
    double sum = 0.0;
    for (const auto& [x, w] : density_nodes(upper)) sum += w * f(x);
    return sum;
  }

 private:
  struct Panel {
    double lo;
    double hi;
    std::vector<double> theta;
    std::vector<Complex> value;
  };

  Complex interpolate(const Panel& panel, double lambda) const;
  const Panel* panel_for(double lambda) const;

  PopulationSpectrum spec_;
  double gamma_;
  std::vector<double> grid_;
  std::vector<Complex> m_breve_;
  std::vector<double> density_;
  std::vector<BoundaryMethod> method_;
  std::vector<Interval> support_;
  std::optional<double> m_under_zero_;
  double mass_at_zero_ = 0.0;
  std::vector<Panel> panels_;
};

/// Boundary values on an ascending grid of positive lambdas. Support is the
/// set of maximal grid runs with density above the edge threshold. Per-point
/// solver failures are recorded as BoundaryMethod::kFailed. Throws GammaOne.
StieltjesSolution boundary_values(const PopulationSpectrum& spec, double gamma,
                                  std::vector<double> grid,
                                  const BoundaryOptions& options = {});

/// Support intervals with endpoints refined by bisection on the density.
/// Throws EmptySupport when no grid point exceeds the threshold.
std::vector<Interval> support_edges(const StieltjesSolution& solution,
                                    const BoundaryOptions& options = {},
                                    double resolution = 1e-10);

struct SpectrumOptions {
  BoundaryOptions boundary;
  /// Uniform scan used to locate the support.
  std::size_t scan_points = 1500;
  /// Nodes placed inside the support (Chebyshev-distributed per interval).
  std::size_t support_points = 2400;
};

/// Full pipeline: scan, refine edges, then tabulate on a support-adapted grid
/// whose nodes cluster at the edges.
StieltjesSolution solve_spectrum(const PopulationSpectrum& spec, double gamma,
                                 const SpectrumOptions& options = {});

}  // namespace rmt
