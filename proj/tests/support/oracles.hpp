#pragma once

// Closed forms for H = delta_c used as independent references. Nothing here
// calls the library's solvers.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

namespace oracle {

using Complex = std::complex<double>;

// m_F(z) for H = delta_c: root with Im m > 0 of
// (c / gamma) z m^2 - (c (1 - 1/gamma) - z) m + 1 = 0.
inline Complex point_mass_m(Complex z, double c, double gamma) {
  const double ig = 1.0 / gamma;
  const Complex qa = c * ig * z;
  const Complex qb = -(c * (1.0 - ig) - z);
  const Complex disc = std::sqrt(qb * qb - 4.0 * qa);
  const Complex r1 = (-qb + disc) / (2.0 * qa);
  const Complex r2 = (-qb - disc) / (2.0 * qa);
  return r1.imag() > r2.imag() ? r1 : r2;
}

inline std::pair<double, double> point_mass_edges(double c, double gamma) {
  const double s = std::sqrt(1.0 / gamma);
  return {c * (1.0 - s) * (1.0 - s), c * (1.0 + s) * (1.0 + s)};
}

// Continuous part of the limiting density for H = delta_c.
inline double point_mass_density(double lambda, double c, double gamma) {
  const auto [a, b] = point_mass_edges(c, gamma);
  if (lambda <= a || lambda >= b) return 0.0;
  return std::sqrt((b - lambda) * (lambda - a)) / (2.0 * std::numbers::pi * c * lambda / gamma);
}

// Limit of m_Fbar(i eta) as eta -> 0 using the relation
// 1 + z m_F = gamma + gamma z m_Fbar and the closed-form m_F.
inline double point_mass_companion_zero_limit(double c, double gamma, double eta) {
  const Complex z{0.0, eta};
  const Complex m = point_mass_m(z, c, gamma);
  return ((1.0 + z * m - gamma) / (gamma * z)).real();
}

}  // namespace oracle
