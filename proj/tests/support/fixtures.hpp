#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "rmt/spectrum.hpp"
#include "rmt/stieltjes.hpp"

namespace fixtures {

inline rmt::PopulationSpectrum identity() { return rmt::PopulationSpectrum::validate({{1.0, 1.0}}); }

inline rmt::PopulationSpectrum point_mass(double c) {
  return rmt::PopulationSpectrum::validate({{1.0, c}});
}

/// 20% mass at 1, 40% at 3, 40% at 10.
inline rmt::PopulationSpectrum three_atoms() {
  return rmt::PopulationSpectrum::validate({{0.2, 1.0}, {0.4, 3.0}, {0.4, 10.0}});
}

/// Uniform density on [5, 6].
inline rmt::PopulationSpectrum uniform_5_6() {
  return rmt::PopulationSpectrum::validate({}, {{1.0, 5.0, 6.0}});
}

inline rmt::PopulationSpectrum by_name(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "three_atoms") return three_atoms();
  return uniform_5_6();
}

/// solve_spectrum memoised per (spectrum name, gamma) within one process.
inline const rmt::StieltjesSolution& solution(const std::string& name, double gamma) {
  static std::mutex mu;
  static std::map<std::pair<std::string, double>, rmt::StieltjesSolution> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_pair(name, gamma);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, rmt::solve_spectrum(by_name(name), gamma)).first;
  return it->second;
}

}  // namespace fixtures
