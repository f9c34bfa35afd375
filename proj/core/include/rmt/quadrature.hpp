#pragma once

#include <cstddef>
#include <vector>

namespace rmt {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per order and cached for the lifetime of the
/// process. Thread-safe.
const GaussRule& gauss_legendre(std::size_t order);

/// Integrate f over [lo, hi] with a single Gauss-Legendre panel.
template <class F>
auto gauss_integrate(F&& f, double lo, double hi, std::size_t order = 64) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  using R = decltype(f(mid));
  R sum{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * sum;
}

}  // namespace rmt
