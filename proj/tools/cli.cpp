// SPDX-License-Identifier: MIT
//
// Command-line driver for the secrecy-rate simulator: SNR / coherence sweeps,
// canned figure-style scenarios, the training-model self-check, and direct
// access to the power-allocation policies.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "secrecy/experiments.hpp"
#include "secrecy/parallel.hpp"

namespace {

void print_allocation(const secrecy::SystemParams& p,
                      const secrecy::PowerAllocation& a) {
  fmt::print("P_r  = {}\n", a.P_r);
  fmt::print("P_f  = {}\n", a.P_f);
  fmt::print("P_fa = {}\n", a.P_fa);
  fmt::print("P_d  = {}\n", a.P_d);
  fmt::print("P_a  = {}\n", a.P_a);
  fmt::print("energy = {} (budget {})\n", secrecy::total_energy(p, a),
             p.P * static_cast<double>(p.T));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-rate bounds and power allocation for training-based "
               "multi-antenna wiretap links"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path;
  std::string out_path;
  uint64_t seed = 0;
  uint64_t samples = 0;
  int grid = 0;
  auto* opt_config =
      app.add_option("--config", config_path, "key=value config file");
  auto* opt_out = app.add_option("--out", out_path, "output CSV path");
  auto* opt_seed = app.add_option("--seed", seed, "Monte Carlo seed");
  auto* opt_samples =
      app.add_option("--samples", samples, "Monte Carlo sample count");
  auto* opt_grid =
      app.add_option("--grid", grid, "grid-search resolution (shares per axis)");

  auto* cmd_snr = app.add_subcommand(
      "sweep-snr", "sweep the allocation schemes over an SNR grid");
  auto* cmd_coh = app.add_subcommand(
      "sweep-coherence", "sweep over coherence lengths at fixed SNR");
  auto* cmd_fig = app.add_subcommand(
      "fig", "reproduce one of the canned figure-style scenarios");
  int fig_which = 0;
  cmd_fig->add_option("which", fig_which, "scenario number")
      ->required()
      ->check(CLI::IsMember({2, 3, 4, 5}));
  auto* cmd_validate = app.add_subcommand(
      "validate-training",
      "check the simulated training stage against its closed forms");
  auto* cmd_alloc = app.add_subcommand(
      "alloc", "print the optimized power allocation for one scheme");
  std::string alloc_mode;
  cmd_alloc->add_option("mode", alloc_mode, "training scheme")
      ->required()
      ->check(CLI::IsMember({"conv", "dce"}));
  double alloc_snr = 30.0;
  cmd_alloc->add_option("--snr", alloc_snr, "transmit SNR in dB (default 30)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  secrecy::ScenarioConfig cfg;
  try {
    if (opt_config->count() > 0) {
      cfg = secrecy::load_config(config_path);
    }
    if (opt_seed->count() > 0) {
      cfg.mc.seed = seed;
    }
    if (opt_samples->count() > 0) {
      if (samples < 1) {
        throw secrecy::ConfigError("samples must be at least 1");
      }
      cfg.mc.samples = samples;
    }
    if (opt_grid->count() > 0) {
      if (grid < 1) {
        throw secrecy::ConfigError("grid_resolution must be at least 1");
      }
      cfg.grid_resolution = grid;
    }
    if (opt_out->count() > 0) {
      cfg.out_path = out_path;
    }
    if (std::getenv("SECRECY_WORKERS") != nullptr) {
      cfg.workers = secrecy::worker_count_from_env();
    }
  } catch (const secrecy::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  }

  try {
    if (cmd_snr->parsed()) {
      secrecy::write_csv(cfg.out_path, secrecy::run_snr_sweep(cfg));
    } else if (cmd_coh->parsed()) {
      if (cfg.coherence_grid.empty()) {
        for (int T = 40; T <= 600; T += 10) {
          cfg.coherence_grid.push_back(T);
        }
      }
      secrecy::write_csv(cfg.out_path, secrecy::run_coherence_sweep(cfg));
    } else if (cmd_fig->parsed()) {
      secrecy::write_csv(cfg.out_path,
                         secrecy::reproduce_figure(fig_which, cfg));
    } else if (cmd_validate->parsed()) {
      secrecy::TrainingValidation v =
          secrecy::validate_training(cfg.mc.samples, cfg.mc.seed);
      for (const std::string& line : v.lines) {
        fmt::print("{}\n", line);
      }
      fmt::print("{}\n", v.ok ? "all training checks passed"
                              : "training checks FAILED");
      return v.ok ? 0 : 1;
    } else if (cmd_alloc->parsed()) {
      secrecy::SystemParams base = cfg.params;
      base.P = secrecy::power_for_snr_db(alloc_snr, base.sigma2);
      if (alloc_mode == "conv") {
        secrecy::SystemParams p = secrecy::with_mode_durations(
            base, secrecy::TrainingMode::kConventional);
        print_allocation(p, secrecy::conventional_closed_form(p));
      } else {
        secrecy::SystemParams p =
            secrecy::with_mode_durations(base, secrecy::TrainingMode::kDce);
        secrecy::ScaResult r = secrecy::sca_dce(p, cfg.sca);
        print_allocation(p, r.alloc);
        fmt::print("iterations = {} ({})\n", r.iterations,
                   r.converged ? "converged" : "iteration limit");
        fmt::print("surrogate objective (inverse) = {}\n", r.trace.back());
      }
    }
  } catch (const secrecy::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
