#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmt {

struct Atom {
  double weight;
  double location;
};

/// Uniform mass `weight` spread over [lo, hi].
struct Segment {
  double weight;
  double lo;
  double hi;
};

/// One node of the discrete measure used to integrate against H.
struct QuadNode {
  double tau;
  double weight;
};

/// Limiting population spectral distribution H: point masses plus uniform
/// segments, supported on [h1, h2] with h1 > 0.
///
/// Instances are only created through `validate`, so every live object is
/// normalised, sorted and immutable.
class PopulationSpectrum {
 public:
  /// Order of the Gauss-Legendre rule applied to every segment panel.
  static constexpr std::size_t kQuadratureOrder = 64;

  /// Throws NonPositiveSupport, MassNotOne or InvalidSpectrum.
  static PopulationSpectrum validate(std::vector<Atom> atoms,
                                     std::vector<Segment> segments = {});

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double h1() const noexcept { return h1_; }
  double h2() const noexcept { return h2_; }
  bool is_point_mass() const noexcept {
    return segments_.empty() && atoms_.size() == 1;
  }

  /// Quadrature nodes: atoms exactly, segments by one Gauss-Legendre panel
  /// each. The weights sum to one.
  std::span<const QuadNode> nodes() const noexcept { return nodes_; }

  /// Same as nodes() but with segment panels split at every breakpoint that
  /// falls strictly inside a segment.
  std::vector<QuadNode> nodes_split(std::span<const double> breakpoints) const;

  /// Integral of f against dH. f may return a real or complex value.
  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(1.0));
    R sum{};
    for (const QuadNode& n : nodes_) sum += n.weight * f(n.tau);
    return sum;
  }

  /// Integral of f against dH with segment panels split at `breakpoints`.
  template <class F>
  auto integrate(F&& f, std::span<const double> breakpoints) const {
    using R = decltype(f(1.0));
    R sum{};
    for (const QuadNode& n : nodes_split(breakpoints)) sum += n.weight * f(n.tau);
    return sum;
  }

  /// H(tau), right-continuous.
  double cdf(double tau) const;

  /// inf{tau : H(tau) >= u} for u in (0, 1].
  double quantile(double u) const;

  /// Exact integral of tau^k dH (k may be negative).
  double moment(int k) const;

 private:
  PopulationSpectrum() = default;

  std::vector<Atom> atoms_;
  std::vector<Segment> segments_;
  std::vector<QuadNode> nodes_;
  double h1_ = 0.0;
  double h2_ = 0.0;
};

/// Integral of 1/tau dH, i.e. the Stieltjes transform of H evaluated at 0.
double m_H_at_zero(const PopulationSpectrum& spec);

/// Deterministic N-point discretisation: tau_j = H^{-1}((j - 1/2) / N),
/// ascending.
std::vector<double> population_eigenvalues(const PopulationSpectrum& spec,
                                           std::size_t n);

/// Kolmogorov distance between the e.s.d. of `eigenvalues` and H.
double kolmogorov_distance(const PopulationSpectrum& spec,
                           std::span<const double> eigenvalues);

}  // namespace rmt
