#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "fixtures.hpp"
#include "rmt/errors.hpp"
#include "rmt/simulate.hpp"

namespace {

rmt::SimulationConfig config(std::size_t n, std::size_t p, rmt::PopulationSpectrum spec,
                             std::size_t reps = 1, std::uint64_t seed = 1) {
  return {.n = n, .p = p, .spec = std::move(spec), .reps = reps, .seed = seed};
}

}  // namespace

TEST(Generate, LargeSampleConvergesToSigma) {
  const auto d = rmt::generate(config(2, 1000000, fixtures::identity()), 0);
  for (Eigen::Index i = 0; i < 2; ++i) EXPECT_NEAR(d.eigenvalues(i), 1.0, 0.01);
}

TEST(Generate, OrthonormalDescendingEigensystem) {
  for (auto law : {rmt::EntryLaw::kRealGaussian, rmt::EntryLaw::kComplexGaussian}) {
    auto cfg = config(60, 90, fixtures::three_atoms());
    cfg.law = law;
    const auto d = rmt::generate(cfg, 4);
    EXPECT_LE(d.orthonormality_error, 1e-10);
    for (Eigen::Index i = 1; i < d.eigenvalues.size(); ++i) EXPECT_GE(d.eigenvalues(i - 1), d.eigenvalues(i));
    // S u_i = lambda_i u_i
    const Eigen::MatrixXcd r = d.sample * d.eigenvectors - d.eigenvectors * d.eigenvalues.asDiagonal();
    EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(d.sample.trace().real(), d.eigenvalues.sum(), 1e-10 * d.eigenvalues.sum());
  }
}

TEST(Generate, RankDeficientWhenFewerSamples) {
  const auto d = rmt::generate(config(100, 50, fixtures::identity()), 0);
  EXPECT_EQ(rmt::zero_eigenvalue_count(d.eigenvalues), 50u);
  const auto full = rmt::generate(config(50, 100, fixtures::identity()), 0);
  EXPECT_EQ(rmt::zero_eigenvalue_count(full.eigenvalues), 0u);
}

TEST(Generate, DeterministicPerReplication) {
  const auto cfg = config(20, 40, fixtures::three_atoms(), 1, 77);
  const auto a = rmt::generate(cfg, 3);
  const auto b = rmt::generate(cfg, 3);
  const auto c = rmt::generate(cfg, 4);
  EXPECT_EQ(a.sample, b.sample);
  EXPECT_NE(a.sample, c.sample);
}

TEST(Generate, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t r = 0; r < 256; ++r) seen.insert(rmt::stream_seed(s, r));
  }
  EXPECT_EQ(seen.size(), 4u * 256u);
}

TEST(OracleDtilde, IdentityGivesOnes) {
  const auto d = rmt::generate(config(40, 80, fixtures::identity()), 0);
  const auto dt = rmt::oracle_dtilde(d.eigenvectors, d.tau);
  for (Eigen::Index i = 0; i < dt.size(); ++i) EXPECT_NEAR(dt(i), 1.0, 1e-13);
}

TEST(OracleDtilde, OverloadsAgreeAndTraceIsPreserved) {
  const auto d = rmt::generate(config(50, 100, fixtures::three_atoms()), 2);
  const Eigen::MatrixXcd sigma = d.tau.cast<std::complex<double>>().asDiagonal();
  const auto a = rmt::oracle_dtilde(d.eigenvectors, sigma);
  const auto b = rmt::oracle_dtilde(d.eigenvectors, d.tau);
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(b.mean(), d.tau.mean(), 1e-14 * d.tau.mean());
}

TEST(OracleDtilde, TopEigenvalueBiasedUpward) {
  const auto cfg = config(100, 200, fixtures::three_atoms());
  double gap = 0.0;
  for (std::size_t r = 0; r < 100; ++r) {
    const auto d = rmt::generate(cfg, r);
    gap += d.eigenvalues(0) - rmt::oracle_dtilde(d.eigenvectors, d.tau)(0);
  }
  EXPECT_GT(gap / 100.0, 0.0);
}

TEST(EmpiricalDelta, Limits) {
  const auto cfg = config(30, 60, fixtures::three_atoms(), 5);
  const auto e = rmt::empirical_delta(cfg, {-1.0, 0.0, 1e9});
  EXPECT_EQ(e.mean[0], 0.0);
  EXPECT_EQ(e.mean[1], 0.0);
  EXPECT_NEAR(e.mean[2], fixtures::three_atoms().moment(1), 1e-13);
  EXPECT_LE(e.max_total_error, 1e-13);
}

TEST(EmpiricalOverlap, IdentityBinsAverageOne) {
  const auto cfg = config(50, 100, fixtures::identity(), 40, 5);
  const std::vector<double> le{0.0, 0.5, 1.0, 1.5, 4.0};
  const std::vector<double> te{0.0, 2.0};
  for (const auto& b : rmt::empirical_overlap(cfg, le, te)) {
    ASSERT_GT(b.count, 0u);
    EXPECT_LE(std::abs(b.mean - 1.0), std::max(3.0 * b.standard_error, 1e-12)) << b.lambda_lo;
  }
}

TEST(EmpiricalOverlap, BinsOutsideSupportsAreEmpty) {
  const auto cfg = config(20, 40, fixtures::three_atoms(), 3);
  const std::vector<double> le{100.0, 200.0};
  const std::vector<double> te{20.0, 30.0};
  const auto bins = rmt::empirical_overlap(cfg, le, te);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_TRUE(bins[0].empty());
}

TEST(Prial, Definition) {
  const std::vector<double> ls{2.0, 3.0, 5.0};
  EXPECT_EQ(rmt::prial(ls, ls).value, 0.0);
  EXPECT_EQ(rmt::prial(std::vector<double>(3, 0.0), ls).value, 100.0);
  EXPECT_NEAR(rmt::prial(std::vector<double>{1.0, 1.5, 2.5}, ls).value, 50.0, 1e-12);
}

TEST(RunPrial, ExactIdentities) {
  for (std::size_t p : {10u, 40u}) {
    auto cfg = config(20, p, fixtures::three_atoms(), 50, 12);
    const auto r = rmt::run_prial(cfg);
    EXPECT_EQ(r.prial_sample.value, 0.0);
    EXPECT_EQ(r.prial_oracle.value, 100.0);
    EXPECT_LE(r.max_trace_error, 1e-13);
    EXPECT_LE(r.max_sample_trace_error, 1e-12);
    EXPECT_LE(r.max_orthonormality_error, 1e-10);
    EXPECT_EQ(r.rank_mismatches, 0u);
    for (std::size_t i = 0; i < r.reps; ++i) {
      EXPECT_GE(r.loss_sample[i], 0.0);
      EXPECT_GE(r.loss_nonlinear[i], 0.0);
      EXPECT_GE(r.loss_linear[i], 0.0);
    }
    EXPECT_EQ(r.null_space_dtilde.has_value(), p < 20);
  }
}

TEST(RunPrial, NonlinearBeatsLinearAcrossSizes) {
  for (std::size_t n : {10u, 20u, 50u}) {
    const auto r = rmt::run_prial(config(n, 2 * n, fixtures::three_atoms(), 300, 21));
    EXPECT_GT(r.prial_nonlinear.value, r.prial_linear.value) << n;
  }
}

TEST(RunPrial, DeterministicAcrossThreadCounts) {
  const auto cfg = config(20, 40, fixtures::three_atoms(), 64, 99);
  const auto& sol = fixtures::solution("three_atoms", 2.0);
  const char* old = std::getenv("RMT_SHRINK_THREADS");
  const std::string saved = old ? old : "";
  setenv("RMT_SHRINK_THREADS", "1", 1);
  const std::string a = rmt::to_json(rmt::run_prial(cfg, sol)).dump();
  setenv("RMT_SHRINK_THREADS", "3", 1);
  const std::string b = rmt::to_json(rmt::run_prial(cfg, sol)).dump();
  if (old) setenv("RMT_SHRINK_THREADS", saved.c_str(), 1); else unsetenv("RMT_SHRINK_THREADS");
  EXPECT_EQ(a, b);
}

TEST(RunPrial, RejectsGammaOne) {
  EXPECT_THROW(rmt::run_prial(config(20, 20, fixtures::three_atoms())), rmt::GammaOne);
  EXPECT_THROW(rmt::run_prial(config(20, 30, fixtures::three_atoms()), fixtures::solution("three_atoms", 2.0)),
               rmt::DomainError);
}

TEST(SimulationConfig, JsonRoundTripAndValidation) {
  const auto cfg = config(20, 40, fixtures::three_atoms(), 7, 123);
  const auto back = rmt::simulation_config_from_json(rmt::to_json(cfg));
  EXPECT_EQ(back.n, 20u);
  EXPECT_EQ(back.p, 40u);
  EXPECT_EQ(back.reps, 7u);
  EXPECT_EQ(back.seed, 123u);
  auto bad = rmt::to_json(cfg);
  bad["n"] = 1;
  EXPECT_THROW(rmt::simulation_config_from_json(bad), rmt::DomainError);
  bad = rmt::to_json(cfg);
  bad["entry_law"] = "cauchy";
  EXPECT_THROW(rmt::simulation_config_from_json(bad), rmt::DomainError);
  bad = rmt::to_json(cfg);
  bad.erase("p");
  EXPECT_THROW(rmt::simulation_config_from_json(bad), rmt::DomainError);
}

TEST(PairwiseSum, OrderFixedResult) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(1.0 / (i + 1));
  EXPECT_EQ(rmt::pairwise_sum(v), rmt::pairwise_sum(v));
  EXPECT_NEAR(rmt::pairwise_sum(v), 7.485470860550345, 1e-13);
}
