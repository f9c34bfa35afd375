#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmt/spectrum.hpp"

namespace rmtcli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kAssertion = 3 };

/// Bad input detected before any numerics ran.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested --assert check did not hold. Data files are kept but no
/// manifest is written.
struct AssertionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  bool check = false;
  bool paper_scale = false;
};

/// Shared state of one command run: parsed config, output bookkeeping and
/// the manifest written on success.
class RunContext {
 public:
  RunContext(std::string command, Options options);

  const Options& options() const { return options_; }
  const nlohmann::json& config() const { return config_; }

  /// "spectrum" inline or "spectrum_path" relative to the config file.
  rmt::PopulationSpectrum spectrum() const;
  /// "gammas" list (or single "gamma"); rejects gamma = 1.
  std::vector<double> gammas(std::vector<double> fallback = {}) const;

  /// Path inside --out, recorded for the manifest.
  std::filesystem::path output(const std::string& name);
  void write_json(const std::string& name, const nlohmann::json& doc);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

  /// Records a failed check; finish() turns it into AssertionFailed.
  void expect(bool ok, const std::string& what);

  /// Throws AssertionFailed if --assert was given and a check failed,
  /// otherwise writes manifest.json.
  void finish();

 private:
  std::string command_;
  Options options_;
  nlohmann::json config_;
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
  nlohmann::json notes_ = nlohmann::json::object();
  std::vector<std::string> failures_;
  std::chrono::steady_clock::time_point start_;
};

/// "{:g}"-style tag for file names, e.g. 2 -> "2", 0.5 -> "0.5".
std::string gamma_tag(double gamma);

}  // namespace rmtcli
