#include "rmt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {
namespace {

constexpr double kMassTolerance = 1e-9;

void append_panel(std::vector<QuadNode>& out, double density, double lo,
                  double hi) {
  const GaussRule& rule = gauss_legendre(PopulationSpectrum::kQuadratureOrder);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    out.push_back({mid + half * rule.nodes[k], density * half * rule.weights[k]});
  }
}

}  // namespace

PopulationSpectrum PopulationSpectrum::validate(std::vector<Atom> atoms,
                                                std::vector<Segment> segments) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.weight) || !std::isfinite(a.location)) {
      throw InvalidSpectrum("spectrum: non-finite atom");
    }
    if (a.weight < 0.0) throw InvalidSpectrum("spectrum: negative atom weight");
    if (a.weight > 0.0 && a.location <= 0.0) {
      std::ostringstream os;
      os << "spectrum: atom at tau = " << a.location << " is not positive";
      throw NonPositiveSupport(os.str());
    }
    total += a.weight;
  }
  for (const Segment& s : segments) {
    if (!std::isfinite(s.weight) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
      throw InvalidSpectrum("spectrum: non-finite segment");
    }
    if (s.weight < 0.0) throw InvalidSpectrum("spectrum: negative segment weight");
    if (!(s.hi > s.lo)) throw InvalidSpectrum("spectrum: segment needs hi > lo");
    if (s.weight > 0.0 && s.lo <= 0.0) {
      std::ostringstream os;
      os << "spectrum: segment starting at tau = " << s.lo << " is not positive";
      throw NonPositiveSupport(os.str());
    }
    total += s.weight;
  }
  if (!(std::abs(total - 1.0) <= kMassTolerance)) {
    std::ostringstream os;
    os << "spectrum: total mass " << total << " differs from 1";
    throw MassNotOne(os.str());
  }

  std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
  std::erase_if(segments, [](const Segment& s) { return s.weight == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });

  PopulationSpectrum spec;
  for (const Atom& a : atoms) {
    if (!spec.atoms_.empty() && spec.atoms_.back().location == a.location) {
      spec.atoms_.back().weight += a.weight / total;
    } else {
      spec.atoms_.push_back({a.weight / total, a.location});
    }
  }
  for (const Segment& s : segments) {
    spec.segments_.push_back({s.weight / total, s.lo, s.hi});
  }

  spec.h1_ = std::numeric_limits<double>::infinity();
  spec.h2_ = 0.0;
  for (const Atom& a : spec.atoms_) {
    spec.h1_ = std::min(spec.h1_, a.location);
    spec.h2_ = std::max(spec.h2_, a.location);
  }
  for (const Segment& s : spec.segments_) {
    spec.h1_ = std::min(spec.h1_, s.lo);
    spec.h2_ = std::max(spec.h2_, s.hi);
  }
  spec.nodes_ = spec.nodes_split({});
  return spec;
}

std::vector<QuadNode> PopulationSpectrum::nodes_split(
    std::span<const double> breakpoints) const {
  std::vector<QuadNode> out;
  out.reserve(atoms_.size() + segments_.size() * kQuadratureOrder);
  for (const Atom& a : atoms_) out.push_back({a.location, a.weight});
  for (const Segment& s : segments_) {
    std::vector<double> cuts{s.lo};
    for (double b : breakpoints) {
      if (b > s.lo && b < s.hi) cuts.push_back(b);
    }
    cuts.push_back(s.hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double density = s.weight / (s.hi - s.lo);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      append_panel(out, density, cuts[k], cuts[k + 1]);
    }
  }
  return out;
}

double PopulationSpectrum::cdf(double tau) const {
  double c = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location <= tau) c += a.weight;
  }
  for (const Segment& s : segments_) {
    c += s.weight * std::clamp((tau - s.lo) / (s.hi - s.lo), 0.0, 1.0);
  }
  return std::min(c, 1.0);
}

double PopulationSpectrum::quantile(double u) const {
  // Between consecutive breakpoints the c.d.f. is affine, so the crossing is
  // found by locating the bracketing breakpoints and solving a linear equation.
  std::vector<double> bp;
  for (const Atom& a : atoms_) bp.push_back(a.location);
  for (const Segment& s : segments_) {
    bp.push_back(s.lo);
    bp.push_back(s.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  double prev = bp.front();
  double prev_cdf_right = cdf(prev);
  if (u <= prev_cdf_right) return prev;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    const double x = bp[k];
    // c.d.f. just below x: affine part only.
    double left = 0.0;
    for (const Atom& a : atoms_) {
      if (a.location < x) left += a.weight;
    }
    for (const Segment& s : segments_) {
      left += s.weight * std::clamp((x - s.lo) / (s.hi - s.lo), 0.0, 1.0);
    }
    if (u <= left) {
      if (left == prev_cdf_right) return prev;
      const double frac = (u - prev_cdf_right) / (left - prev_cdf_right);
      return prev + frac * (x - prev);
    }
    const double right = cdf(x);
    if (u <= right) return x;
    prev = x;
    prev_cdf_right = right;
  }
  return bp.back();
}

double PopulationSpectrum::moment(int k) const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight * std::pow(a.location, k);
  for (const Segment& s : segments_) {
    double integral = 0.0;
    if (k == -1) {
      integral = std::log(s.hi / s.lo);
    } else {
      const double e = static_cast<double>(k + 1);
      integral = (std::pow(s.hi, e) - std::pow(s.lo, e)) / e;
    }
    m += s.weight / (s.hi - s.lo) * integral;
  }
  return m;
}

double m_H_at_zero(const PopulationSpectrum& spec) { return spec.moment(-1); }

std::vector<double> population_eigenvalues(const PopulationSpectrum& spec,
                                           std::size_t n) {
  if (n == 0) throw DomainError("population_eigenvalues: N must be >= 1");
  std::vector<double> tau(n);
  for (std::size_t j = 0; j < n; ++j) {
    tau[j] = spec.quantile((static_cast<double>(j) + 0.5) / static_cast<double>(n));
  }
  std::sort(tau.begin(), tau.end());
  return tau;
}

double kolmogorov_distance(const PopulationSpectrum& spec,
                           std::span<const double> eigenvalues) {
  std::vector<double> x(eigenvalues.begin(), eigenvalues.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  // Check both sides of every jump of the e.s.d. and of every atom of H.
  std::vector<double> probes = x;
  for (const Atom& a : spec.atoms()) probes.push_back(a.location);
  for (const Segment& s : spec.segments()) {
    probes.push_back(s.lo);
    probes.push_back(s.hi);
  }
  double worst = 0.0;
  for (double p : probes) {
    const auto right = static_cast<double>(
        std::upper_bound(x.begin(), x.end(), p) - x.begin());
    const auto left = static_cast<double>(
        std::lower_bound(x.begin(), x.end(), p) - x.begin());
    const double h_right = spec.cdf(p);
    const double h_left = spec.cdf(std::nextafter(p, -1.0));
    worst = std::max(worst, std::abs(right / n - h_right));
    worst = std::max(worst, std::abs(left / n - h_left));
  }
  return worst;
}

}  // namespace rmt
