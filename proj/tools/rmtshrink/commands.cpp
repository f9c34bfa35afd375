#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "rmt/csv.hpp"
#include "rmt/errors.hpp"
#include "rmt/overlap.hpp"
#include "rmt/shrinkage.hpp"
#include "rmt/simulate.hpp"
#include "rmt/spectrum_io.hpp"
#include "rmt/stieltjes.hpp"

namespace rmtcli {
namespace {

using nlohmann::json;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return v;
}

// "grid": [x, ...] or {"lo": .., "hi": .., "points": ..}; `fallback` when absent.
std::vector<double> read_grid(const json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& g = cfg.at(key);
  std::vector<double> grid;
  try {
    if (g.is_array()) {
      grid = g.get<std::vector<double>>();
    } else if (g.is_object()) {
      const auto points = g.at("points").get<std::size_t>();
      if (points == 0) throw UsageError(std::string(key) + ": points must be positive");
      grid = linspace(g.at("lo").get<double>(), g.at("hi").get<double>(), points);
    } else {
      throw UsageError(std::string(key) + " must be a list or {lo, hi, points}");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string(key) + ": " + e.what());
  }
  if (grid.empty()) throw UsageError(std::string(key) + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw UsageError(std::string(key) + " must be strictly ascending");
  }
  return grid;
}

std::size_t read_count(const json& cfg, const char* key, std::size_t fallback) {
  try {
    return cfg.value(key, fallback);
  } catch (const json::exception& e) {
    throw UsageError(std::string(key) + ": " + e.what());
  }
}

// Interior points of each support interval, proportional to length.
std::vector<double> support_grid(const rmt::StieltjesSolution& sol, std::size_t points) {
  double total = 0.0;
  for (const auto& iv : sol.support()) total += iv.hi - iv.lo;
  std::vector<double> grid;
  for (const auto& iv : sol.support()) {
    const auto n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(points) * (iv.hi - iv.lo) / total)));
    for (std::size_t k = 0; k < n; ++k) {
      grid.push_back(iv.lo + (iv.hi - iv.lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    }
  }
  return grid;
}

}  // namespace

void cmd_density(RunContext& ctx) {
  const rmt::PopulationSpectrum spec = ctx.spectrum();
  const std::vector<double> gammas = ctx.gammas();
  json masses = json::object();
  for (double g : gammas) {
    const double top = 1.05 * rmt::upper_edge_bound(spec, g);
    const std::size_t n = read_count(ctx.config(), "points", 1000);
    std::vector<double> grid = read_grid(ctx.config(), "grid", linspace(top / static_cast<double>(n), top, n));
    if (grid.front() <= 0.0) throw UsageError("grid values must be positive");
    const rmt::StieltjesSolution sol = rmt::boundary_values(spec, g, grid);

    std::ostringstream failed;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!sol.valid(i)) {
        if (failures++ < 10) failed << " " << rmt::format_double(grid[i]);
      }
    }
    if (failures > 0) {
      throw rmt::NoConvergence("density: " + std::to_string(failures) +
                                   " grid points failed at gamma " + gamma_tag(g) + ", lambda:" + failed.str(),
                               0.0, 0);
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back({grid[i], sol.density()[i], sol.m_breve()[i].real(), sol.m_breve()[i].imag()});
    }
    rmt::write_csv(ctx.output("density_gamma_" + gamma_tag(g) + ".csv"),
                   {"lambda", "density", "m_re", "m_im"}, rows);

    const rmt::StieltjesSolution full = rmt::solve_spectrum(spec, g);
    const double mass = full.integrate_dF([](double) { return 1.0; }) + full.mass_at_zero();
    json edges = json::array();
    for (const auto& iv : full.support()) edges.push_back({iv.lo, iv.hi});
    masses[gamma_tag(g)] = {{"total_mass", mass}, {"support", edges},
                            {"mass_at_zero", full.mass_at_zero()}};
    if (full.m_under_zero()) masses[gamma_tag(g)]["m_under_zero"] = *full.m_under_zero();
    ctx.expect(std::abs(mass - 1.0) <= 1e-3, "total mass " + rmt::format_double(mass) +
                                                  " at gamma " + gamma_tag(g));
  }
  ctx.add_note("density", masses);
}

void cmd_kernel(RunContext& ctx) {
  const rmt::PopulationSpectrum spec = ctx.spectrum();
  const std::vector<double> gammas = ctx.gammas({2.0, 10.0, 100.0});
  const std::size_t t_points = read_count(ctx.config(), "t_points", 201);
  if (t_points == 0) throw UsageError("t_points must be positive");
  const std::vector<double> t_grid =
      read_grid(ctx.config(), "t_grid", linspace(spec.h1(), spec.h2(), spec.h1() == spec.h2() ? 1 : t_points));
  json norms = json::object();
  for (double g : gammas) {
    const rmt::StieltjesSolution sol = rmt::solve_spectrum(spec, g);
    double l = sol.support().back().hi;
    if (ctx.config().contains("l")) l = ctx.config().at("l").get<double>();
    const rmt::OverlapKernel k = rmt::build_kernel(sol, {l}, t_grid);
    rmt::write_kernel_csv(ctx.output("kernel_gamma_" + gamma_tag(g) + ".csv"), k);

    std::size_t peak = 0;
    for (std::size_t j = 1; j < t_grid.size(); ++j) {
      if (k.at(0, j) > k.at(0, peak)) peak = j;
    }
    const json meta{{"gamma", g},
                    {"l", l},
                    {"normalization", k.normalization[0]},
                    {"b_consistent", k.b_consistent()},
                    {"max_b_discrepancy", k.max_b_discrepancy},
                    {"peak_t", t_grid[peak]}};
    ctx.write_json("kernel_gamma_" + gamma_tag(g) + ".json", meta);
    norms[gamma_tag(g)] = k.normalization[0];
    ctx.expect(std::abs(k.normalization[0] - 1.0) <= 1e-3,
               "kernel normalization " + rmt::format_double(k.normalization[0]) + " at gamma " + gamma_tag(g));

    if (ctx.config().contains("cumulative")) {
      const json& c = ctx.config().at("cumulative");
      const auto nl = c.value("lambda_points", std::size_t{50});
      const auto nt = c.value("tau_points", std::size_t{50});
      const std::vector<double> lambdas = linspace(0.0, sol.support().back().hi, nl);
      const std::vector<double> taus = linspace(spec.h1(), spec.h2(), spec.h1() == spec.h2() ? 1 : nt);
      rmt::write_cumulative_csv(ctx.output("cumulative_gamma_" + gamma_tag(g) + ".csv"), lambdas,
                                taus, sol);
    }
  }
  ctx.add_note("kernel_normalization", norms);
}

void cmd_shrink(RunContext& ctx) {
  const rmt::PopulationSpectrum spec = ctx.spectrum();
  const std::vector<double> gammas = ctx.gammas();
  const std::size_t points = read_count(ctx.config(), "points", 400);
  if (points == 0) throw UsageError("points must be positive");
  json summary = json::object();
  for (double g : gammas) {
    const rmt::StieltjesSolution sol = rmt::solve_spectrum(spec, g);
    const std::vector<double> grid = read_grid(ctx.config(), "grid", support_grid(sol, points));
    const rmt::ShrinkageCurve curve = rmt::shrinkage_curve(sol, grid);
    const rmt::LinearCoefficients lin = rmt::asymptotic_linear_coefficients(sol);
    std::vector<double> baseline;
    baseline.reserve(grid.size());
    for (double x : grid) baseline.push_back(lin.a + lin.b * x);
    rmt::write_shrinkage_csv(ctx.output("shrink_gamma_" + gamma_tag(g) + ".csv"), curve, baseline);

    bool monotone = true;
    for (std::size_t i = 1; i < curve.delta.size(); ++i) monotone &= curve.delta[i] >= curve.delta[i - 1];
    json s{{"gamma", g},
           {"delta_moment", curve.delta_moment},
           {"tau_moment", curve.tau_moment},
           {"psi_moment", curve.psi_moment},
           {"inverse_tau_moment", curve.inverse_tau_moment},
           {"linear_baseline", {{"a", lin.a}, {"b", lin.b}}},
           {"delta_monotone_on_grid", monotone}};
    if (curve.delta_zero) s["delta_zero"] = *curve.delta_zero;
    if (curve.psi_zero) s["psi_zero"] = *curve.psi_zero;
    ctx.write_json("shrink_gamma_" + gamma_tag(g) + ".json", s);
    summary[gamma_tag(g)] = s;
    std::cout << "gamma " << gamma_tag(g) << ": int delta dF = " << rmt::format_double(curve.delta_moment)
              << " (int tau dH = " << rmt::format_double(curve.tau_moment) << "), int psi dF = "
              << rmt::format_double(curve.psi_moment) << " (int 1/tau dH = "
              << rmt::format_double(curve.inverse_tau_moment) << ")\n";
    ctx.expect(curve.moments_conserved(1e-3), "moment conservation at gamma " + gamma_tag(g));
  }
  ctx.add_note("shrink", summary);
}

void cmd_simulate(RunContext& ctx) {
  json cfg = ctx.config();
  cfg["spectrum"] = rmt::spectrum_to_json(ctx.spectrum());
  cfg.erase("spectrum_path");
  if (ctx.options().seed) cfg["seed"] = *ctx.options().seed;
  if (ctx.options().reps) cfg["reps"] = *ctx.options().reps;
  rmt::SimulationConfig sim = [&] {
    try {
      return rmt::simulation_config_from_json(cfg);
    } catch (const rmt::DomainError& e) {
      throw UsageError(e.what());
    } catch (const rmt::InvalidSpectrum& e) {
      throw UsageError(e.what());
    }
  }();
  if (sim.p == sim.n) {
    throw UsageError("p = N gives gamma = 1, which is not supported: the limiting density can be unbounded near zero");
  }
  ctx.set_seed(sim.seed);

  if (ctx.options().paper_scale) {
    // Sweep of the PRIAL curve over dimensions at fixed p / N.
    std::vector<std::size_t> sizes{5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};
    if (cfg.contains("sweep_sizes")) sizes = cfg.at("sweep_sizes").get<std::vector<std::size_t>>();
    if (!ctx.options().reps) sim.reps = 10000;
    const double gamma = sim.gamma();
    const rmt::StieltjesSolution sol = rmt::solve_spectrum(sim.spec, gamma);
    std::vector<std::vector<double>> rows;
    for (std::size_t n : sizes) {
      rmt::SimulationConfig c = sim;
      c.n = n;
      c.p = static_cast<std::size_t>(std::llround(gamma * static_cast<double>(n)));
      if (c.p == c.n || std::abs(c.gamma() - gamma) > 1e-12 * gamma) {
        throw UsageError("sweep size " + std::to_string(n) + " does not give the configured p / N");
      }
      const rmt::SimulationReport r = rmt::run_prial(c, sol);
      rows.push_back({static_cast<double>(n), static_cast<double>(c.p), r.prial_nonlinear.value,
                      r.prial_nonlinear.standard_error, r.prial_linear.value, r.prial_linear.standard_error});
      std::cout << "N " << n << ": nonlinear " << rmt::format_double(r.prial_nonlinear.value) << ", linear "
                << rmt::format_double(r.prial_linear.value) << "\n";
      ctx.expect(r.prial_nonlinear.value > r.prial_linear.value,
                 "nonlinear PRIAL not above linear at N = " + std::to_string(n));
    }
    rmt::write_csv(ctx.output("prial_sweep.csv"),
                   {"n", "p", "prial_nonlinear", "se_nonlinear", "prial_linear", "se_linear"}, rows);
    return;
  }

  const rmt::StieltjesSolution sol = rmt::solve_spectrum(sim.spec, sim.gamma());
  const rmt::SimulationReport report = rmt::run_prial(sim, sol);
  json body = rmt::to_json(report);
  body["config"] = rmt::to_json(sim);

  std::vector<std::string> extras;
  if (cfg.contains("outputs")) extras = cfg.at("outputs").get<std::vector<std::string>>();
  for (const std::string& what : extras) {
    if (what == "losses") {
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < report.reps; ++r) {
        rows.push_back({static_cast<double>(r), report.loss_sample[r], report.loss_nonlinear[r],
                        report.loss_linear[r]});
      }
      rmt::write_csv(ctx.output("losses.csv"), {"rep", "sample", "nonlinear", "linear"}, rows);
    } else if (what == "delta") {
      const double top = 1.1 * sol.support().back().hi;
      const std::vector<double> grid = linspace(0.0, top, 401);
      const rmt::EmpiricalDelta e = rmt::empirical_delta(sim, grid);
      std::vector<std::vector<double>> rows;
      double sup = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double lim = rmt::delta_cumulative(grid[k], sol);
        sup = std::max(sup, std::abs(e.mean[k] - lim));
        rows.push_back({grid[k], e.mean[k], lim});
      }
      rmt::write_csv(ctx.output("empirical_delta.csv"), {"x", "empirical", "limit"}, rows);
      body["empirical_delta_sup_distance"] = sup;
    } else if (what == "overlap") {
      std::vector<double> le{-std::numeric_limits<double>::infinity()};
      for (int k = 1; k < 10; ++k) le.push_back(sol.quantile(k / 10.0));
      le.push_back(std::numeric_limits<double>::infinity());
      std::vector<double> te{0.0};
      for (const auto& a : sim.spec.atoms()) te.push_back(a.location);
      if (!sim.spec.segments().empty()) te = {0.0, sim.spec.h2()};
      const auto bins = rmt::empirical_overlap(sim, le, te);
      std::vector<std::vector<double>> rows;
      for (const auto& b : bins) {
        double lim = std::nan("");
        try {
          lim = rmt::average_overlap(b.lambda_lo, std::min(b.lambda_hi, 1e300), b.tau_lo, b.tau_hi, sol);
        } catch (const rmt::EmptyBin&) {
        }
        rows.push_back({b.lambda_lo, b.lambda_hi, b.tau_lo, b.tau_hi, static_cast<double>(b.count), b.mean,
                        b.standard_error, lim});
      }
      rmt::write_csv(ctx.output("overlap_bins.csv"),
                     {"lambda_lo", "lambda_hi", "tau_lo", "tau_hi", "count", "mean", "standard_error", "limit"},
                     rows);
    } else {
      throw UsageError("unknown output '" + what + "' (expected losses, delta or overlap)");
    }
  }
  ctx.write_json("report.json", body);

  std::cout << "PRIAL nonlinear " << rmt::format_double(report.prial_nonlinear.value) << " (se "
            << rmt::format_double(report.prial_nonlinear.standard_error) << "), linear "
            << rmt::format_double(report.prial_linear.value) << " (se "
            << rmt::format_double(report.prial_linear.standard_error) << ")\n";

  const double min_prial = cfg.value("min_prial", 90.0);
  ctx.expect(report.prial_sample.value == 0.0, "PRIAL(S) is not 0");
  ctx.expect(report.prial_oracle.value == 100.0, "PRIAL(U Dtilde U*) is not 100");
  ctx.expect(report.max_trace_error <= 1e-12, "sum of dtilde differs from Tr Sigma");
  ctx.expect(report.max_orthonormality_error <= 1e-10, "eigenvectors not orthonormal to 1e-10");
  ctx.expect(report.rank_mismatches == 0, "zero-eigenvalue count differs from max(N - p, 0)");
  ctx.expect(report.prial_nonlinear.value >= min_prial,
             "nonlinear PRIAL " + rmt::format_double(report.prial_nonlinear.value) + " below " +
                 rmt::format_double(min_prial));
  ctx.expect(report.prial_nonlinear.value > report.prial_linear.value, "nonlinear PRIAL not above linear");
}

}  // namespace rmtcli
