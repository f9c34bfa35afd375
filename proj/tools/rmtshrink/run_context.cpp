#include "run_context.hpp"

#include <cstdio>
#include <fstream>

#include "rmt/errors.hpp"
#include "rmt/spectrum_io.hpp"

namespace rmtcli {

namespace fs = std::filesystem;

RunContext::RunContext(std::string command, Options options)
    : command_(std::move(command)),
      options_(std::move(options)),
      start_(std::chrono::steady_clock::now()) {
  std::ifstream in(options_.config);
  if (!in) throw UsageError("cannot read config " + options_.config.string());
  try {
    config_ = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + options_.config.string() + ": " + e.what());
  }
  if (!config_.is_object()) throw UsageError("config must be a JSON object");
  std::error_code ec;
  fs::create_directories(options_.out, ec);
  if (ec) throw UsageError("cannot create output directory " + options_.out.string());
  // A stale manifest would mark an interrupted rerun as complete.
  fs::remove(options_.out / "manifest.json", ec);
}

rmt::PopulationSpectrum RunContext::spectrum() const {
  try {
    if (config_.contains("spectrum")) return rmt::spectrum_from_json(config_.at("spectrum"));
    if (config_.contains("spectrum_path")) {
      fs::path p = config_.at("spectrum_path").get<std::string>();
      if (p.is_relative()) p = options_.config.parent_path() / p;
      return rmt::load_spectrum(p);
    }
  } catch (const rmt::InvalidSpectrum& e) {
    throw UsageError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("spectrum_path: ") + e.what());
  }
  throw UsageError("config needs \"spectrum\" or \"spectrum_path\"");
}

std::vector<double> RunContext::gammas(std::vector<double> fallback) const {
  std::vector<double> g = std::move(fallback);
  try {
    if (config_.contains("gammas")) {
      g = config_.at("gammas").get<std::vector<double>>();
    } else if (config_.contains("gamma")) {
      g = {config_.at("gamma").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("gammas: ") + e.what());
  }
  if (g.empty()) throw UsageError("no gamma values requested");
  for (double x : g) {
    if (x == 1.0) {
      throw UsageError("gamma = 1 is not supported: the limiting density can be unbounded near zero");
    }
    if (!(x > 0.0)) throw UsageError("gamma values must be positive");
  }
  return g;
}

fs::path RunContext::output(const std::string& name) {
  outputs_.push_back(name);
  return options_.out / name;
}

void RunContext::write_json(const std::string& name, const nlohmann::json& doc) {
  std::ofstream out(output(name), std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + name);
}

void RunContext::expect(bool ok, const std::string& what) {
  if (!ok) failures_.push_back(what);
}

void RunContext::finish() {
  if (options_.check && !failures_.empty()) {
    std::string msg = "assertion failed:";
    for (const auto& f : failures_) msg += "\n  " + f;
    throw AssertionFailed(msg);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json m{
      {"command", command_},
      {"config", options_.config.string()},
      {"outputs", outputs_},
      {"tool_version", RMT_VERSION},
      {"wall_clock_seconds", seconds},
      {"checks", {{"requested", options_.check}, {"failures", failures_}}},
  };
  m["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  if (!notes_.empty()) m["metadata"] = notes_;
  std::ofstream out(options_.out / "manifest.json", std::ios::binary | std::ios::trunc);
  out << m.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for manifest.json");
}

std::string gamma_tag(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", gamma);
  return buf;
}

}  // namespace rmtcli
