#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "rmt/errors.hpp"

int main(int argc, char** argv) {
  using namespace rmtcli;

  CLI::App app{"Limiting spectra, eigenvector overlaps and nonlinear shrinkage for sample covariance matrices"};
  app.set_version_flag("--version", std::string(RMT_VERSION));
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  std::size_t reps = 0;

  const std::map<std::string, std::pair<std::string, std::function<void(RunContext&)>>> commands{
      {"density", {"Limiting sample eigenvalue density on a grid, one CSV per gamma", cmd_density}},
      {"kernel", {"Overlap kernel phi(l, t) at the top of the support, one CSV per gamma", cmd_kernel}},
      {"shrink", {"Shrinkage curves delta and psi with the linear baseline", cmd_shrink}},
      {"simulate", {"Monte-Carlo PRIAL experiment", cmd_simulate}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_flag("--assert", opt.check, "Exit with status 3 when a built-in check fails");
    if (name == "simulate") {
      sub->add_option("--seed", seed, "Base seed (overrides the config)");
      sub->add_option("--reps", reps, "Replications (overrides the config)")->check(CLI::PositiveNumber);
      sub->add_flag("--paper-scale", opt.paper_scale,
                    "Sweep dimensions at fixed p/N with 10000 replications (long running)");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    if (name == "simulate") {
      if (sub->count("--seed")) opt.seed = seed;
      if (sub->count("--reps")) opt.reps = reps;
    }
    try {
      RunContext ctx(name, opt);
      commands.at(name).second(ctx);
      ctx.finish();
      return kOk;
    } catch (const UsageError& e) {
      std::cerr << "rmtshrink " << name << ": " << e.what() << "\n";
      return kUsage;
    } catch (const AssertionFailed& e) {
      std::cerr << "rmtshrink " << name << ": " << e.what() << "\n";
      return kAssertion;
    } catch (const rmt::GammaOne& e) {
      std::cerr << "rmtshrink " << name << ": " << e.what() << "\n";
      return kUsage;
    } catch (const rmt::NoConvergence& e) {
      std::cerr << "rmtshrink " << name << ": numeric failure: " << e.what() << "\n";
      return kNumeric;
    } catch (const rmt::Error& e) {
      std::cerr << "rmtshrink " << name << ": numeric failure: " << e.what() << "\n";
      return kNumeric;
    } catch (const std::exception& e) {
      std::cerr << "rmtshrink " << name << ": " << e.what() << "\n";
      return kNumeric;
    }
  }
  return kUsage;
}
