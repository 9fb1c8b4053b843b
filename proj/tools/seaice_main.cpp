// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the solver only through the C API.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seaice/seaice.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvariant = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> nx;
  std::optional<double> T;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", f.out_dir, "output directory (overrides output.dir)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--seed", f.seed, "seed for randomized fields (overrides seed)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--nx", f.nx, "grid cells per direction, sets nx = ny (overrides grid)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--T", f.T, "end time (overrides time.T)")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_flag("--strict", f.strict, "fail fast on monitored bounds; exit 2 on invariant failures");
}

int report(seaice_status s) {
  std::fprintf(stderr, "error: %s: %s\n", seaice_status_string(s), seaice_last_error());
  return s == SEAICE_ERR_BOUND_VIOLATION ? kExitInvariant : kExitError;
}

// Loads the config and applies overrides in a fixed order: seed, nx, T,
// out-dir, strict. Repeated flags keep their last value.
seaice_status load(const CommonFlags& f, seaice_config** cfg) {
  seaice_status s = seaice_config_load(f.config.c_str(), cfg);
  if (s != SEAICE_OK) return s;
  if (f.seed && (s = seaice_config_set_seed(*cfg, *f.seed)) != SEAICE_OK) return s;
  if (f.nx && (s = seaice_config_set_grid_size(*cfg, *f.nx)) != SEAICE_OK) return s;
  if (f.T && (s = seaice_config_set_end_time(*cfg, *f.T)) != SEAICE_OK) return s;
  if (f.out_dir && (s = seaice_config_set_out_dir(*cfg, f.out_dir->c_str())) != SEAICE_OK) return s;
  if (f.strict && (s = seaice_config_set_fail_fast(*cfg, 1)) != SEAICE_OK) return s;
  return SEAICE_OK;
}

class ConfigHandle {
 public:
  ~ConfigHandle() { seaice_config_free(cfg_); }
  seaice_config** out() { return &cfg_; }
  const seaice_config* get() const { return cfg_; }

 private:
  seaice_config* cfg_ = nullptr;
};

std::string out_dir(const seaice_config* cfg) {
  const char* d = nullptr;
  seaice_config_get_out_dir(cfg, &d);
  return d ? d : "";
}

int cmd_run(const CommonFlags& f) {
  ConfigHandle cfg;
  if (seaice_status s = load(f, cfg.out()); s != SEAICE_OK) return report(s);
  seaice_run_summary r{};
  if (seaice_status s = seaice_run(cfg.get(), &r); s != SEAICE_OK) return report(s);
  std::printf("t_end        %.17g\n", r.t_end);
  std::printf("records      %d\n", r.records);
  std::printf("slabs        %d\n", r.slabs);
  std::printf("mass         %.17g -> %.17g\n", r.mass_initial, r.mass_final);
  std::printf("residual     %.3e\n", r.residual);
  std::printf("violations   %d\n", r.violations);
  std::printf("output       %s\n", out_dir(cfg.get()).c_str());
  return 0;
}

int cmd_picard(const CommonFlags& f) {
  ConfigHandle cfg;
  if (seaice_status s = load(f, cfg.out()); s != SEAICE_OK) return report(s);
  seaice_picard_summary r{};
  if (seaice_status s = seaice_picard_study(cfg.get(), &r); s != SEAICE_OK) return report(s);
  std::printf("slabs tried            %d\n", r.slabs);
  if (r.located)
    std::printf("located T_slab         %.17g (three consecutive ratios <= %g)\n", r.T_located, r.target);
  else
    std::printf("located T_slab         none (no slab reached ratio %g)\n", r.target);
  std::printf("final ratio monotone   %s\n", r.final_ratio_nonincreasing ? "yes" : "no");
  std::printf("table                  %s/picard_study.csv\n", out_dir(cfg.get()).c_str());
  return f.strict && (!r.located || !r.final_ratio_nonincreasing) ? kExitInvariant : 0;
}

int cmd_continuation(const CommonFlags& f) {
  ConfigHandle cfg;
  if (seaice_status s = load(f, cfg.out()); s != SEAICE_OK) return report(s);
  seaice_continuation_summary r{};
  if (seaice_status s = seaice_continuation_study(cfg.get(), &r); s != SEAICE_OK) return report(s);
  std::printf("differences          %d\n", r.differences);
  std::printf("d_first              %.17g\n", r.d_first);
  std::printf("d_last               %.17g\n", r.d_last);
  std::printf("strictly decreasing  %s\n", r.strictly_decreasing ? "yes" : "no");
  std::printf("table                %s/continuation.csv\n", out_dir(cfg.get()).c_str());
  return f.strict && !r.strictly_decreasing ? kExitInvariant : 0;
}

int cmd_stability(const CommonFlags& f) {
  ConfigHandle cfg;
  if (seaice_status s = load(f, cfg.out()); s != SEAICE_OK) return report(s);
  seaice_stability_summary r{};
  if (seaice_status s = seaice_stability_study(cfg.get(), &r); s != SEAICE_OK) return report(s);
  std::printf("perturbations   %d\n", r.count);
  std::printf("ratio range     [%.17g, %.17g]\n", r.min_ratio, r.max_ratio);
  std::printf("within spread   %s\n", r.within_spread ? "yes" : "no");
  std::printf("table           %s/stability.csv\n", out_dir(cfg.get()).c_str());
  return f.strict && !r.within_spread ? kExitInvariant : 0;
}

void print_row(const seaice_invariant_row* row, void*) {
  std::printf("%-4s  %-10s %-44s n=%-6d worst=%-11.3e tol=%.1e\n", row->pass ? "PASS" : "FAIL", row->suite,
              row->check, row->samples, row->worst, row->tolerance);
  std::fflush(stdout);
}

int cmd_invariants(const CommonFlags& f) {
  ConfigHandle cfg;
  if (seaice_status s = load(f, cfg.out()); s != SEAICE_OK) return report(s);
  // The suite is seeded by the configured seed after overrides.
  std::uint64_t seed = 0;
  if (seaice_status s = seaice_config_get_seed(cfg.get(), &seed); s != SEAICE_OK) return report(s);
  int failures = 0;
  if (seaice_status s = seaice_check_invariants(seed, print_row, nullptr, &failures); s != SEAICE_OK)
    return report(s);
  std::printf("%d failure(s)\n", failures);
  if (failures == 0) return 0;
  return f.strict ? kExitInvariant : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized viscous-plastic sea-ice solver"};
  app.require_subcommand(1);

  CommonFlags flags;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const CommonFlags&);
  };
  const Sub subs[] = {
      {"run", "integrate the configured initial state to T", cmd_run},
      {"picard-study", "contraction ratio versus slab length", cmd_picard},
      {"continuation-study", "Cauchy differences along a shrinking regularization schedule", cmd_continuation},
      {"stability-study", "perturbation growth for several amplitudes", cmd_stability},
      {"check-invariants", "randomized invariant suite with a pass/fail table", cmd_invariants},
  };
  int (*chosen)(const CommonFlags&) = nullptr;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, flags);
    cmd->callback([&chosen, fn = s.fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (e.get_exit_code() != 0) std::fprintf(stderr, "%s", app.help().c_str());
    return code;
  }
  return chosen ? chosen(flags) : kExitError;
}
