#include "rmt/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {
namespace {

struct Eval {
  Complex g;   // G(m) = 0 defines the solution
  Complex dg;  // G'(m)
};

using EvalFn = std::function<Eval(Complex)>;

// G(m) = m - T(m) for the Marcenko-Pastur map.
Eval mp_eval(Complex m, Complex z, std::span<const QuadNode> nodes, double gamma) {
  const double ig = 1.0 / gamma;
  const Complex a = 1.0 - ig - ig * z * m;
  Complex t{};
  Complex dt{};
  for (const QuadNode& n : nodes) {
    const Complex inv = 1.0 / (n.tau * a - z);
    t += n.weight * inv;
    dt += n.weight * n.tau * inv * inv;
  }
  return {m - t, 1.0 - ig * z * dt};
}

// G(m) = m + 1/D with D = z - gamma^{-1} int tau/(1 + tau m) dH.
Eval companion_eval(Complex m, Complex z, std::span<const QuadNode> nodes,
                    double gamma) {
  const double ig = 1.0 / gamma;
  Complex s{};
  Complex ds{};
  for (const QuadNode& n : nodes) {
    const Complex inv = 1.0 / (1.0 + n.tau * m);
    s += n.weight * n.tau * inv;
    ds += n.weight * n.tau * n.tau * inv * inv;
  }
  const Complex d = z - ig * s;
  const Complex dd = ig * ds;
  return {m + 1.0 / d, 1.0 - dd / (d * d)};
}

double scaled_tolerance(const SolverOptions& opt, Complex m) {
  return opt.tolerance * std::max(1.0, std::abs(m));
}

struct NewtonResult {
  Complex m;
  bool ok;
  double residual;
};

NewtonResult newton(const EvalFn& eval, Complex m, bool keep_upper,
                    const SolverOptions& opt, int max_iter = 100) {
  Eval e = eval(m);
  double r = std::abs(e.g);
  for (int it = 0; it < max_iter; ++it) {
    if (r <= 0.01 * scaled_tolerance(opt, m)) break;
    const Complex step = e.g / e.dg;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    double t = 1.0;
    bool accepted = false;
    Complex cand;
    Eval ec{};
    double rc = 0.0;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      cand = m - t * step;
      if (keep_upper && !(cand.imag() > 0.0)) continue;
      ec = eval(cand);
      rc = std::abs(ec.g);
      if (std::isfinite(rc) && (rc < r || rc <= scaled_tolerance(opt, cand))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double moved = std::abs(cand - m);
    m = cand;
    e = ec;
    r = rc;
    if (moved <= 1e-16 * std::max(1.0, std::abs(m))) break;
  }
  return {m, r <= scaled_tolerance(opt, m), r};
}

// Damped fixed-point iteration m <- (1 - w) m + w (m - G(m)).
NewtonResult damped_fixed_point(const EvalFn& eval, Complex m,
                                const SolverOptions& opt, int* iterations) {
  double r = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    *iterations = it + 1;
    const Eval e = eval(m);
    r = std::abs(e.g);
    const Complex next = m - opt.damping * e.g;
    const double moved = std::abs(next - m);
    m = next;
    if (moved <= scaled_tolerance(opt, m) && r <= scaled_tolerance(opt, m) / opt.damping) {
      break;
    }
  }
  const double final_r = std::abs(eval(m).g);
  return {m, final_r <= scaled_tolerance(opt, m), final_r};
}

using EvalAt = std::function<Eval(Complex m, Complex z)>;

// Carries a solution at re + i*eta_from down to re + i*eta_to along the
// imaginary direction. Returns false if a continuation step cannot be made.
bool continue_down(const EvalAt& eval, double re, double eta_from, double eta_to,
                   Complex& m, const SolverOptions& opt, double ratio = 0.2) {
  double eta = eta_from;
  while (eta > eta_to) {
    double next = std::max(eta_to, eta * ratio);
    bool done = false;
    for (int attempt = 0; attempt < 50 && !done; ++attempt) {
      const Complex z{re, next};
      const NewtonResult nr = newton([&](Complex x) { return eval(x, z); }, m, true, opt);
      if (nr.ok) {
        m = nr.m;
        eta = next;
        done = true;
      } else {
        next = std::sqrt(eta * next);
        if (eta - next <= 1e-3 * eta) break;
      }
    }
    if (!done) return false;
  }
  return true;
}

Complex solve_upper(const EvalAt& eval, Complex z, const PopulationSpectrum& spec,
                    const SolverOptions& opt, const char* what) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": requires finite z with Im z > 0");
  }
  const double scale = std::max({spec.h2(), std::abs(z.real()), 1.0});
  const double eta_start = std::max(z.imag(), scale);
  const Complex z0{z.real(), eta_start};
  const EvalFn at_start = [&](Complex m) { return eval(m, z0); };

  int iterations = 0;
  NewtonResult start = damped_fixed_point(at_start, -1.0 / z0, opt, &iterations);
  if (!start.ok) {
    const NewtonResult polished = newton(at_start, start.m, true, opt);
    if (!polished.ok) {
      std::ostringstream os;
      os << what << ": fixed-point iteration did not converge at z = " << z0;
      throw NoConvergence(os.str(), polished.residual, iterations);
    }
    start = polished;
  } else {
    start = newton(at_start, start.m, true, opt);
  }
  Complex m = start.m;
  if (!continue_down(eval, z.real(), eta_start, z.imag(), m, opt)) {
    std::ostringstream os;
    os << what << ": continuation toward z = " << z << " stalled";
    throw NoConvergence(os.str(), std::abs(eval(m, z).g), iterations);
  }
  const double residual = std::abs(eval(m, z).g);
  if (!(residual <= scaled_tolerance(opt, m))) {
    std::ostringstream os;
    os << what << ": residual " << residual << " above tolerance at z = " << z;
    throw NoConvergence(os.str(), residual, iterations);
  }
  return m;
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be positive and finite");
  }
}

}  // namespace

Complex mp_map(Complex m, Complex z, const PopulationSpectrum& spec, double gamma) {
  return m - mp_eval(m, z, spec.nodes(), gamma).g;
}

double mp_residual(Complex m, Complex z, const PopulationSpectrum& spec,
                   double gamma) {
  return std::abs(mp_eval(m, z, spec.nodes(), gamma).g);
}

Complex solve_mF(Complex z, const PopulationSpectrum& spec, double gamma,
                 const SolverOptions& options) {
  require_gamma(gamma);
  const auto nodes = spec.nodes();
  const EvalAt eval = [&](Complex m, Complex zz) { return mp_eval(m, zz, nodes, gamma); };
  // Seed from the companion equation, whose root in the upper half plane is
  // unique, and polish on the m_F equation.
  // With `exact_conversion`, the converted companion value is returned when
  // the polish cannot reach tolerance.
  const auto via_companion = [&](bool exact_conversion) -> std::optional<Complex> {
    const Complex mc = solve_upper(
        [&](Complex m, Complex zz) { return companion_eval(m, zz, nodes, gamma); }, z, spec, options,
        "solve_companion");
    const Complex seed = (gamma * z * mc + gamma - 1.0) / z;
    const NewtonResult nr = newton([&](Complex x) { return eval(x, z); }, seed, true, options);
    if (nr.ok) return nr.m;
    if (exact_conversion) return seed;
    return std::nullopt;
  };
  // For gamma < 1 the m_F equation has spurious upper-half-plane roots that
  // the direct continuation can wander onto near the zero atom. Close to
  // z = 0 it is also ill-conditioned (1 - 1/gamma - z m / gamma cancels),
  // while the conversion from the companion value is not.
  if (gamma < 1.0) {
    try {
      if (auto m = via_companion(true)) return *m;
    } catch (const NoConvergence&) {
    }
    return solve_upper(eval, z, spec, options, "solve_mF");
  }
  try {
    return solve_upper(eval, z, spec, options, "solve_mF");
  } catch (const NoConvergence&) {
    if (auto m = via_companion(false)) return *m;
    throw;
  }
}

Complex solve_companion(Complex z, const PopulationSpectrum& spec, double gamma,
                        const SolverOptions& options) {
  require_gamma(gamma);
  const auto nodes = spec.nodes();
  return solve_upper(
      [&](Complex m, Complex zz) { return companion_eval(m, zz, nodes, gamma); }, z,
      spec, options, "solve_companion");
}

Complex companion_from_mF(Complex z, Complex m_F, double gamma) {
  return (1.0 + z * m_F - gamma) / (gamma * z);
}

double companion_zero(const PopulationSpectrum& spec, double gamma) {
  require_gamma(gamma);
  if (gamma >= 1.0) {
    throw DomainError("companion_zero: the companion limit at zero requires gamma < 1");
  }
  const double ig = 1.0 / gamma;
  // f is increasing in m, f(0) = -1 and f(inf) = 1/gamma - 1 > 0.
  auto f = [&](double m) {
    return m * ig * spec.integrate([m](double tau) { return tau / (1.0 + tau * m); }) - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0 / spec.h2();
  while (f(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NoConvergence("companion_zero: no sign change", f(hi), 0);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

double upper_edge_bound(const PopulationSpectrum& spec, double gamma) {
  const double r = 1.0 + 1.0 / std::sqrt(gamma);
  return r * r * spec.h2();
}

BoundaryValue boundary_value(double lambda, const PopulationSpectrum& spec,
                             double gamma, const BoundaryOptions& options) {
  require_gamma(gamma);
  if (!(lambda > 0.0)) throw DomainError("boundary_value: lambda must be > 0");
  const auto nodes = spec.nodes();
  const EvalAt eval = [&](Complex m, Complex z) { return mp_eval(m, z, nodes, gamma); };
  const SolverOptions& opt = options.solver;

  const auto& etas = options.etas;
  Complex m1 = solve_mF({lambda, etas[0]}, spec, gamma, opt);
  Complex m2 = m1;
  Complex m3 = m1;
  if (!continue_down(eval, lambda, etas[0], etas[1], m2, opt)) {
    throw NoConvergence("boundary_value: continuation failed", 0.0, 0);
  }
  m3 = m2;
  if (!continue_down(eval, lambda, etas[1], etas[2], m3, opt)) {
    throw NoConvergence("boundary_value: continuation failed", 0.0, 0);
  }
  // Richardson for eta, eta/2, eta/4: removes the O(eta) and O(eta^2) terms.
  Complex extrapolated = (8.0 * m3 - 6.0 * m2 + m1) / 3.0;
  if (extrapolated.imag() < 0.0) extrapolated.imag(0.0);

  if (options.refine_on_axis) {
    Complex m = m3;
    // Failure part-way is not fatal: the axis Newton starts from the closest
    // point reached.
    continue_down(eval, lambda, etas[2], 1e-13 * std::max(1.0, lambda), m, opt, 0.1);
    const Complex z{lambda, 0.0};
    const NewtonResult nr = newton([&](Complex x) { return eval(x, z); }, m, false, opt);
    if (nr.ok && std::isfinite(nr.m.real()) && std::isfinite(nr.m.imag())) {
      Complex r = nr.m;
      if (r.imag() < 0.0) r = std::conj(r);
      return {r, BoundaryMethod::kAxisNewton};
    }
  }
  return {extrapolated, BoundaryMethod::kExtrapolated};
}

// ---------------------------------------------------------------------------
// StieltjesSolution

namespace {

double theta_of(double lambda, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  return std::acos(std::clamp((mid - lambda) / half, -1.0, 1.0));
}

double lambda_of(double theta, double lo, double hi) {
  return 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(theta);
}

}  // namespace

StieltjesSolution::StieltjesSolution(PopulationSpectrum spec, double gamma,
                                     std::vector<double> grid,
                                     std::vector<Complex> m_breve,
                                     std::vector<BoundaryMethod> method,
                                     std::vector<Interval> support)
    : spec_(std::move(spec)),
      gamma_(gamma),
      grid_(std::move(grid)),
      m_breve_(std::move(m_breve)),
      method_(std::move(method)),
      support_(std::move(support)) {
  if (grid_.size() != m_breve_.size() || grid_.size() != method_.size()) {
    throw DomainError("StieltjesSolution: grid and value sizes differ");
  }
  if (gamma_ == 1.0) throw GammaOne();
  density_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    density_[i] = valid(i) ? std::max(0.0, m_breve_[i].imag() / std::numbers::pi) : 0.0;
  }
  if (gamma_ < 1.0) {
    m_under_zero_ = companion_zero(spec_, gamma_);
    mass_at_zero_ = 1.0 - gamma_;
  }
  for (const Interval& iv : support_) {
    Panel panel{iv.lo, iv.hi, {}, {}};
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (grid_[i] > iv.lo && grid_[i] < iv.hi && valid(i)) {
        panel.theta.push_back(theta_of(grid_[i], iv.lo, iv.hi));
        panel.value.push_back(m_breve_[i]);
      }
    }
    if (panel.theta.empty()) {
      // Degenerate interval: fall back to the nearest valid grid values.
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_[i] >= iv.lo && grid_[i] <= iv.hi && valid(i)) {
          panel.theta.push_back(theta_of(grid_[i], iv.lo, iv.hi));
          panel.value.push_back(m_breve_[i]);
        }
      }
    }
    if (!panel.theta.empty()) panels_.push_back(std::move(panel));
  }
}

const StieltjesSolution::Panel* StieltjesSolution::panel_for(double lambda) const {
  for (const Panel& p : panels_) {
    if (lambda >= p.lo && lambda <= p.hi) return &p;
  }
  return nullptr;
}

Complex StieltjesSolution::interpolate(const Panel& panel, double lambda) const {
  const double theta = theta_of(lambda, panel.lo, panel.hi);
  const auto& th = panel.theta;
  const std::size_t n = th.size();
  if (n == 1) return panel.value[0];
  if (n < 4) {
    // Linear in theta.
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(th.begin(), th.end(), theta) - th.begin());
    j = std::clamp<std::size_t>(j, 1, n - 1);
    const double t = (theta - th[j - 1]) / (th[j] - th[j - 1]);
    return panel.value[j - 1] + t * (panel.value[j] - panel.value[j - 1]);
  }
  // Four-point Lagrange on the nodes surrounding theta.
  const auto upper = static_cast<std::ptrdiff_t>(
      std::upper_bound(th.begin(), th.end(), theta) - th.begin());
  std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(upper - 2, 0,
                                                    static_cast<std::ptrdiff_t>(n) - 4);
  Complex result{};
  for (std::ptrdiff_t a = start; a < start + 4; ++a) {
    double basis = 1.0;
    for (std::ptrdiff_t b = start; b < start + 4; ++b) {
      if (b != a) basis *= (theta - th[b]) / (th[a] - th[b]);
    }
    result += basis * panel.value[a];
  }
  return result;
}

Complex StieltjesSolution::m_breve_at(double lambda, bool* clamped) const {
  if (clamped) *clamped = false;
  if (panels_.empty()) throw EmptySupport("StieltjesSolution: no support to interpolate on");
  if (const Panel* p = panel_for(lambda)) return interpolate(*p, lambda);
  if (clamped) *clamped = true;
  const Panel* best = &panels_.front();
  double best_x = best->lo;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Panel& p : panels_) {
    for (double edge : {p.lo, p.hi}) {
      const double d = std::abs(lambda - edge);
      if (d < best_d) {
        best_d = d;
        best = &p;
        best_x = edge;
      }
    }
  }
  Complex v = interpolate(*best, best_x);
  v.imag(0.0);
  return v;
}

double StieltjesSolution::density_at(double lambda) const {
  const Panel* p = panel_for(lambda);
  if (!p) return 0.0;
  return std::max(0.0, interpolate(*p, lambda).imag() / std::numbers::pi);
}

std::vector<std::pair<double, double>> StieltjesSolution::density_nodes(double upper) const {
  constexpr std::size_t kOrder = 8;
  const GaussRule& rule = gauss_legendre(kOrder);
  std::vector<std::pair<double, double>> out;
  for (const Panel& p : panels_) {
    if (upper <= p.lo) continue;
    const double theta_max = upper >= p.hi ? std::numbers::pi : theta_of(upper, p.lo, p.hi);
    const double half_len = 0.5 * (p.hi - p.lo);
    const std::size_t pieces = std::max<std::size_t>(16, p.theta.size() / 2);
    const double width = theta_max / static_cast<double>(pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      const double a = width * static_cast<double>(k);
      const double mid = a + 0.5 * width;
      for (std::size_t q = 0; q < kOrder; ++q) {
        const double theta = mid + 0.5 * width * rule.nodes[q];
        const double x = lambda_of(theta, p.lo, p.hi);
        const double dens = std::max(0.0, interpolate(p, x).imag() / std::numbers::pi);
        const double w = 0.5 * width * rule.weights[q] * dens * half_len * std::sin(theta);
        out.emplace_back(x, w);
      }
    }
  }
  return out;
}

double StieltjesSolution::cdf(double lambda) const {
  double c = lambda >= 0.0 ? mass_at_zero_ : 0.0;
  c += integrate_dF([](double) { return 1.0; }, lambda);
  return c;
}

double StieltjesSolution::quantile(double u) const {
  if (u <= mass_at_zero_) return 0.0;
  if (panels_.empty()) throw EmptySupport("quantile: empty support");
  double lo = panels_.front().lo;
  double hi = panels_.back().hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double StieltjesSolution::total_mass() const {
  double mass = mass_at_zero_;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    mass += 0.5 * (density_[i] + density_[i - 1]) * (grid_[i] - grid_[i - 1]);
  }
  return mass;
}

// ---------------------------------------------------------------------------

StieltjesSolution boundary_values(const PopulationSpectrum& spec, double gamma,
                                  std::vector<double> grid,
                                  const BoundaryOptions& options) {
  require_gamma(gamma);
  if (gamma == 1.0) throw GammaOne();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("boundary_values: grid values must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("boundary_values: grid must be strictly ascending");
    }
  }
  std::vector<Complex> values(grid.size());
  std::vector<BoundaryMethod> method(grid.size(), BoundaryMethod::kFailed);
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      const BoundaryValue bv = boundary_value(grid[i], spec, gamma, options);
      values[i] = bv.m;
      method[i] = bv.method;
    } catch (const NoConvergence&) {
      values[i] = Complex(std::nan(""), std::nan(""));
      method[i] = BoundaryMethod::kFailed;
    }
  });

  std::vector<Interval> support;
  const double threshold = options.edge_threshold;
  std::size_t i = 0;
  while (i < grid.size()) {
    const bool inside = method[i] != BoundaryMethod::kFailed &&
                        values[i].imag() / std::numbers::pi > threshold;
    if (!inside) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && method[j + 1] != BoundaryMethod::kFailed &&
           values[j + 1].imag() / std::numbers::pi > threshold) {
      ++j;
    }
    support.push_back({grid[i], grid[j]});
    i = j + 1;
  }
  return StieltjesSolution(spec, gamma, std::move(grid), std::move(values),
                           std::move(method), std::move(support));
}

std::vector<Interval> support_edges(const StieltjesSolution& solution,
                                    const BoundaryOptions& options,
                                    double resolution) {
  const auto& grid = solution.grid();
  const auto& runs = solution.support();
  if (runs.empty()) throw EmptySupport("support_edges: no grid point above the edge threshold");
  const PopulationSpectrum& spec = solution.spec();
  const double gamma = solution.gamma();
  const double bound = upper_edge_bound(spec, gamma) * 1.05;

  auto inside = [&](double x) {
    try {
      const BoundaryValue bv = boundary_value(x, spec, gamma, options);
      return bv.m.imag() / std::numbers::pi > options.edge_threshold;
    } catch (const NoConvergence&) {
      return false;
    }
  };
  // Bisection between a point outside (out) and one inside (in).
  auto refine = [&](double out, double in) {
    const double tol = resolution * std::max(1.0, std::abs(in));
    while (std::abs(in - out) > tol) {
      const double mid = 0.5 * (in + out);
      if (inside(mid)) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return in;
  };

  std::vector<Interval> edges;
  edges.reserve(runs.size());
  for (const Interval& run : runs) {
    const auto first = std::lower_bound(grid.begin(), grid.end(), run.lo) - grid.begin();
    const auto last = std::lower_bound(grid.begin(), grid.end(), run.hi) - grid.begin();
    const double below = first > 0 ? grid[first - 1] : 0.5 * grid[first];
    const double above = static_cast<std::size_t>(last) + 1 < grid.size()
                             ? grid[last + 1]
                             : std::max(bound, grid[last] * 1.05);
    edges.push_back({refine(below, run.lo), refine(above, run.hi)});
  }
  return edges;
}

StieltjesSolution solve_spectrum(const PopulationSpectrum& spec, double gamma,
                                 const SpectrumOptions& options) {
  require_gamma(gamma);
  if (gamma == 1.0) throw GammaOne();
  const double bound = upper_edge_bound(spec, gamma) * 1.05;
  std::vector<double> scan(options.scan_points);
  for (std::size_t k = 0; k < scan.size(); ++k) {
    scan[k] = bound * static_cast<double>(k + 1) / static_cast<double>(scan.size());
  }
  const StieltjesSolution coarse = boundary_values(spec, gamma, std::move(scan), options.boundary);
  const std::vector<Interval> edges = support_edges(coarse, options.boundary);

  double total_length = 0.0;
  for (const Interval& iv : edges) total_length += iv.hi - iv.lo;
  std::vector<double> grid;
  std::vector<std::size_t> edge_index;
  for (const Interval& iv : edges) {
    const auto n = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::llround(static_cast<double>(options.support_points) *
                                                  (iv.hi - iv.lo) / total_length)));
    edge_index.push_back(grid.size());
    grid.push_back(iv.lo);
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      grid.push_back(lambda_of(theta, iv.lo, iv.hi));
    }
    edge_index.push_back(grid.size());
    grid.push_back(iv.hi);
  }
  // Adjacent intervals could share an endpoint only if the gap were empty;
  // keep the grid strictly ascending regardless.
  std::vector<double> cleaned;
  for (double x : grid) {
    if (cleaned.empty() || x > cleaned.back()) cleaned.push_back(x);
  }
  StieltjesSolution fine = boundary_values(spec, gamma, cleaned, options.boundary);

  // Edge nodes carry zero density by definition of the edge.
  std::vector<Complex> values = fine.m_breve();
  std::vector<BoundaryMethod> method = fine.method();
  for (const Interval& iv : edges) {
    for (double edge : {iv.lo, iv.hi}) {
      const auto idx = std::lower_bound(cleaned.begin(), cleaned.end(), edge) - cleaned.begin();
      if (static_cast<std::size_t>(idx) < cleaned.size() && cleaned[idx] == edge) {
        if (method[idx] == BoundaryMethod::kFailed) {
          values[idx] = Complex(0.0, 0.0);
          method[idx] = BoundaryMethod::kExtrapolated;
        }
        values[idx].imag(0.0);
      }
    }
  }
  return StieltjesSolution(spec, gamma, std::move(cleaned), std::move(values),
                           std::move(method), edges);
}

}  // namespace rmt
