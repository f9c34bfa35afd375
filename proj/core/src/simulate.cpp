#include "rmt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"
#include "rmt/shrinkage.hpp"
#include "rmt/spectrum_io.hpp"

namespace rmt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double max_identity_error(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd g = u.adjoint() * u;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

std::string to_string(EntryLaw law) {
  return law == EntryLaw::kRealGaussian ? "real-gaussian" : "complex-gaussian";
}

EntryLaw entry_law_from_string(const std::string& name) {
  if (name == "real-gaussian") return EntryLaw::kRealGaussian;
  if (name == "complex-gaussian") return EntryLaw::kComplexGaussian;
  throw DomainError("unknown entry law '" + name + "'");
}

void SimulationConfig::check() const {
  if (n < 2) throw DomainError("simulation: N must be at least 2");
  if (p < 1) throw DomainError("simulation: p must be at least 1");
  if (reps < 1) throw DomainError("simulation: reps must be at least 1");
}

SimulationConfig simulation_config_from_json(const nlohmann::json& j) {
  try {
    SimulationConfig c{.n = j.at("n").get<std::size_t>(),
                       .p = j.at("p").get<std::size_t>(),
                       .spec = spectrum_from_json(j.at("spectrum")),
                       .reps = j.value("reps", std::size_t{1}),
                       .seed = j.value("seed", std::uint64_t{0}),
                       .law = entry_law_from_string(j.value("entry_law", std::string("real-gaussian")))};
    c.check();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("simulation config: ") + e.what());
  }
}

nlohmann::json to_json(const SimulationConfig& c) {
  return {{"n", c.n},       {"p", c.p},           {"reps", c.reps},
          {"seed", c.seed}, {"entry_law", to_string(c.law)}, {"spectrum", spectrum_to_json(c.spec)}};
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(rep_index + 0x632BE59BD9B4E019ULL));
}

Draw generate(const SimulationConfig& config, std::size_t rep_index) {
  config.check();
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto p = static_cast<Eigen::Index>(config.p);
  const std::vector<double> tau = population_eigenvalues(config.spec, config.n);
  Draw d;
  d.tau = Eigen::Map<const Eigen::VectorXd>(tau.data(), n);
  const Eigen::VectorXd root = d.tau.cwiseSqrt();

  std::mt19937_64 rng(stream_seed(config.seed, rep_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_p = 1.0 / static_cast<double>(p);

  if (config.law == EntryLaw::kRealGaussian) {
    Eigen::MatrixXd c(n, p);
    for (Eigen::Index col = 0; col < p; ++col) {
      for (Eigen::Index row = 0; row < n; ++row) c(row, col) = root(row) * normal(rng);
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    s.selfadjointView<Eigen::Lower>().rankUpdate(c, inv_p);
    s = s.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    d.sample = s.cast<std::complex<double>>();
    d.eigenvalues = eig.eigenvalues().reverse();
    d.eigenvectors = eig.eigenvectors().rowwise().reverse().cast<std::complex<double>>();
  } else {
    const double scale = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd c(n, p);
    for (Eigen::Index col = 0; col < p; ++col) {
      for (Eigen::Index row = 0; row < n; ++row) {
        const double re = normal(rng);
        const double im = normal(rng);
        c(row, col) = root(row) * scale * std::complex<double>(re, im);
      }
    }
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    s.selfadjointView<Eigen::Lower>().rankUpdate(c, inv_p);
    s = s.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s);
    d.sample = s;
    d.eigenvalues = eig.eigenvalues().reverse();
    d.eigenvectors = eig.eigenvectors().rowwise().reverse();
  }
  d.orthonormality_error = max_identity_error(d.eigenvectors);
  return d;
}

Eigen::VectorXd oracle_dtilde(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& sigma) {
  return (u.adjoint() * sigma * u).diagonal().real();
}

Eigen::VectorXd oracle_dtilde(const Eigen::MatrixXcd& u, const Eigen::VectorXd& tau) {
  // dtilde_i = sum_j tau_j |u_ji|^2
  return u.cwiseAbs2().transpose() * tau;
}

std::size_t zero_eigenvalue_count(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0;
  const double cut = kZeroEigenvalueTolerance * eigenvalues.maxCoeff();
  return static_cast<std::size_t>((eigenvalues.array() <= cut).count());
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

EmpiricalDelta empirical_delta(const SimulationConfig& config, std::vector<double> grid) {
  config.check();
  const std::size_t g = grid.size();
  std::vector<std::vector<double>> per_rep(config.reps);
  std::vector<double> total_error(config.reps, 0.0);
  const double inv_n = 1.0 / static_cast<double>(config.n);
  parallel_for(config.reps, [&](std::size_t r) {
    const Draw d = generate(config, r);
    const Eigen::VectorXd dt = oracle_dtilde(d.eigenvectors, d.tau);
    // Ascending eigenvalue order for a single sweep over the grid.
    const auto n = d.eigenvalues.size();
    std::vector<double> out(g, 0.0);
    double running = 0.0;
    Eigen::Index i = n - 1;
    for (std::size_t k = 0; k < g; ++k) {
      while (i >= 0 && d.eigenvalues(i) <= grid[k]) {
        running += dt(i) * inv_n;
        --i;
      }
      out[k] = running;
    }
    total_error[r] = std::abs(dt.sum() * inv_n - d.tau.sum() * inv_n);
    per_rep[r] = std::move(out);
  });
  EmpiricalDelta e;
  e.grid = std::move(grid);
  e.mean.assign(g, 0.0);
  std::vector<double> column(config.reps);
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t r = 0; r < config.reps; ++r) column[r] = per_rep[r][k];
    e.mean[k] = pairwise_sum(column) / static_cast<double>(config.reps);
  }
  e.max_total_error = *std::max_element(total_error.begin(), total_error.end());
  return e;
}

std::vector<OverlapBin> empirical_overlap(const SimulationConfig& config,
                                          std::span<const double> lambda_edges,
                                          std::span<const double> tau_edges) {
  config.check();
  if (lambda_edges.size() < 2 || tau_edges.size() < 2) {
    throw DomainError("empirical_overlap: need at least one bin per axis");
  }
  const std::size_t nl = lambda_edges.size() - 1;
  const std::size_t nt = tau_edges.size() - 1;
  const std::size_t nb = nl * nt;
  // Bin index of x among (e_0, e_1], (e_1, e_2], ...; npos when outside.
  auto locate = [](std::span<const double> edges, double x) -> std::size_t {
    if (!(x > edges.front()) || x > edges.back()) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), x) -
                                    edges.begin()) - 1;
  };
  std::vector<std::vector<double>> sums(config.reps, std::vector<double>(nb, 0.0));
  std::vector<std::vector<double>> counts(config.reps, std::vector<double>(nb, 0.0));
  const double nd = static_cast<double>(config.n);
  parallel_for(config.reps, [&](std::size_t r) {
    const Draw d = generate(config, r);
    const Eigen::Index n = d.eigenvalues.size();
    std::vector<std::size_t> tau_bin(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) tau_bin[j] = locate(tau_edges, d.tau(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::size_t lb = locate(lambda_edges, d.eigenvalues(i));
      if (lb == static_cast<std::size_t>(-1)) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (tau_bin[j] == static_cast<std::size_t>(-1)) continue;
        const std::size_t b = lb * nt + tau_bin[j];
        sums[r][b] += nd * std::norm(d.eigenvectors(j, i));
        counts[r][b] += 1.0;
      }
    }
  });
  std::vector<OverlapBin> bins(nb);
  const auto reps = static_cast<double>(config.reps);
  std::vector<double> s(config.reps), c(config.reps), resid(config.reps);
  for (std::size_t li = 0; li < nl; ++li) {
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const std::size_t b = li * nt + ti;
      OverlapBin& bin = bins[b];
      bin.lambda_lo = lambda_edges[li];
      bin.lambda_hi = lambda_edges[li + 1];
      bin.tau_lo = tau_edges[ti];
      bin.tau_hi = tau_edges[ti + 1];
      for (std::size_t r = 0; r < config.reps; ++r) {
        s[r] = sums[r][b];
        c[r] = counts[r][b];
      }
      const double total_c = pairwise_sum(c);
      bin.count = static_cast<std::size_t>(total_c);
      if (total_c == 0.0) continue;
      bin.mean = pairwise_sum(s) / total_c;
      if (config.reps > 1) {
        for (std::size_t r = 0; r < config.reps; ++r) {
          const double e = s[r] - bin.mean * c[r];
          resid[r] = e * e;
        }
        const double mean_c = total_c / reps;
        bin.standard_error = std::sqrt(pairwise_sum(resid) / (reps * (reps - 1.0))) / mean_c;
      }
    }
  }
  return bins;
}

PrialEstimate prial(std::span<const double> loss, std::span<const double> loss_sample) {
  if (loss.size() != loss_sample.size() || loss.empty()) {
    throw DomainError("prial: loss vectors must be non-empty and of equal length");
  }
  const double total = pairwise_sum(loss);
  const double total_s = pairwise_sum(loss_sample);
  if (!(total_s > 0.0)) throw DegenerateDenominator("prial: sample loss is zero");
  PrialEstimate est;
  est.value = 100.0 * (1.0 - total / total_s);
  const std::size_t r = loss.size();
  if (r < 2) return est;
  std::vector<double> leave(r);
  for (std::size_t k = 0; k < r; ++k) {
    leave[k] = 100.0 * (1.0 - (total - loss[k]) / (total_s - loss_sample[k]));
  }
  const double mean = pairwise_sum(leave) / static_cast<double>(r);
  std::vector<double> sq(r);
  for (std::size_t k = 0; k < r; ++k) sq[k] = (leave[k] - mean) * (leave[k] - mean);
  est.standard_error =
      std::sqrt(static_cast<double>(r - 1) / static_cast<double>(r) * pairwise_sum(sq));
  return est;
}

SimulationReport run_prial(const SimulationConfig& config) {
  if (config.p == config.n) throw GammaOne();
  return run_prial(config, solve_spectrum(config.spec, config.gamma()));
}

SimulationReport run_prial(const SimulationConfig& config, const StieltjesSolution& solution) {
  config.check();
  if (config.p == config.n || solution.gamma() == 1.0) throw GammaOne();
  if (std::abs(solution.gamma() - config.gamma()) > 1e-12 * config.gamma()) {
    throw DomainError("run_prial: solution was built for a different gamma");
  }
  const std::size_t reps = config.reps;
  SimulationReport rep;
  rep.n = config.n;
  rep.p = config.p;
  rep.reps = reps;
  rep.seed = config.seed;
  rep.law = config.law;
  rep.gamma = config.gamma();
  rep.loss_sample.assign(reps, 0.0);
  rep.loss_nonlinear.assign(reps, 0.0);
  rep.loss_linear.assign(reps, 0.0);
  rep.seeds_used.resize(reps);

  std::vector<double> trace_err(reps), sample_trace_err(reps), ortho(reps);
  std::vector<double> null_sum(reps, 0.0), null_count(reps, 0.0);
  std::vector<std::size_t> mismatch(reps, 0), outside(reps, 0);
  const std::size_t expected_zeros = config.n > config.p ? config.n - config.p : 0;

  parallel_for(reps, [&](std::size_t r) {
    rep.seeds_used[r] = stream_seed(config.seed, r);
    const Draw d = generate(config, r);
    const Eigen::VectorXd dt = oracle_dtilde(d.eigenvectors, d.tau);
    const std::vector<double> eigs(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
    std::vector<bool> flags;
    const std::vector<double> nl = shrink_spectrum(eigs, solution, &flags);
    const LinearOracleStats stats{d.tau.sum(), d.eigenvalues.dot(dt)};
    const std::vector<double> lin = linear_shrinkage_oracle(eigs, stats);

    // Every estimator shares U, so ||U M U* - U Dtilde U*||_F^2 = sum (m_i - dtilde_i)^2.
    double ls = 0.0, ln = 0.0, ll = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      const double t = dt(static_cast<Eigen::Index>(i));
      ls += (eigs[i] - t) * (eigs[i] - t);
      ln += (nl[i] - t) * (nl[i] - t);
      ll += (lin[i] - t) * (lin[i] - t);
    }
    rep.loss_sample[r] = ls;
    rep.loss_nonlinear[r] = ln;
    rep.loss_linear[r] = ll;

    const double tr_sigma = d.tau.sum();
    trace_err[r] = std::abs(dt.sum() - tr_sigma) / tr_sigma;
    const double tr_s = d.sample.trace().real();
    sample_trace_err[r] = std::abs(d.eigenvalues.sum() - tr_s) / tr_s;
    ortho[r] = d.orthonormality_error;
    const std::size_t zeros = zero_eigenvalue_count(d.eigenvalues);
    mismatch[r] = zeros != expected_zeros ? 1 : 0;
    outside[r] = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    const double cut = kZeroEigenvalueTolerance * d.eigenvalues.maxCoeff();
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
      if (d.eigenvalues(i) <= cut) {
        null_sum[r] += dt(i);
        null_count[r] += 1.0;
      }
    }
  });

  const std::vector<double> zero_loss(reps, 0.0);
  rep.prial_sample = prial(rep.loss_sample, rep.loss_sample);
  rep.prial_oracle = prial(zero_loss, rep.loss_sample);
  rep.prial_nonlinear = prial(rep.loss_nonlinear, rep.loss_sample);
  rep.prial_linear = prial(rep.loss_linear, rep.loss_sample);
  rep.max_trace_error = *std::max_element(trace_err.begin(), trace_err.end());
  rep.max_sample_trace_error = *std::max_element(sample_trace_err.begin(), sample_trace_err.end());
  rep.max_orthonormality_error = *std::max_element(ortho.begin(), ortho.end());
  for (std::size_t r = 0; r < reps; ++r) {
    rep.rank_mismatches += mismatch[r];
    rep.outside_support += outside[r];
  }
  const double nc = pairwise_sum(null_count);
  if (nc > 0.0) rep.null_space_dtilde = pairwise_sum(null_sum) / nc;
  return rep;
}

nlohmann::json to_json(const SimulationReport& r) {
  auto est = [](const PrialEstimate& e) {
    return nlohmann::json{{"value", e.value}, {"standard_error", e.standard_error}};
  };
  nlohmann::json j{
      {"n", r.n},
      {"p", r.p},
      {"reps", r.reps},
      {"seed", r.seed},
      {"entry_law", to_string(r.law)},
      {"gamma", r.gamma},
      {"prial_nonlinear", est(r.prial_nonlinear)},
      {"prial_linear", est(r.prial_linear)},
      {"prial_sample", est(r.prial_sample)},
      {"prial_oracle", est(r.prial_oracle)},
      {"loss_sample", r.loss_sample},
      {"loss_nonlinear", r.loss_nonlinear},
      {"loss_linear", r.loss_linear},
      {"seeds_used", r.seeds_used},
      {"max_trace_error", r.max_trace_error},
      {"max_sample_trace_error", r.max_sample_trace_error},
      {"max_orthonormality_error", r.max_orthonormality_error},
      {"rank_mismatches", r.rank_mismatches},
      {"outside_support", r.outside_support},
  };
  if (r.null_space_dtilde) j["null_space_dtilde"] = *r.null_space_dtilde;
  return j;
}

}  // namespace rmt
