// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the solver only through the C API.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "porohdg/porohdg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr double kOracleTolerance = 1e-9;

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int report(porohdg_status s, const char* what, bool config_phase) {
  std::fprintf(stderr, "porohdg: %s: %s: %s\n", what, porohdg_status_name(s), porohdg_last_error());
  if (s == POROHDG_ERR_CONFIG || s == POROHDG_ERR_INVALID_ARGUMENT) return kExitUsage;
  return config_phase ? kExitUsage : kExitRuntime;
}

struct ConfigHandle {
  porohdg_config* p = nullptr;
  ~ConfigHandle() { porohdg_config_free(p); }
};

struct ResultHandle {
  porohdg_result* p = nullptr;
  ~ResultHandle() { porohdg_result_free(p); }
};

const char* const kFieldNames[] = {"sigma", "vs", "vf", "p"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybridizable DG solver for 2D Biot poroelastic waves", "porohdg"};
  app.set_version_flag("--version", std::string(porohdg_version()));

  std::string config_path, scenario_name;
  std::optional<int> degree, levels, snapshots;
  std::optional<long long> seed;
  std::optional<std::string> dt, tfinal, out_dir, mode;
  bool emit_matrix = false, list = false, print_config = false, no_files = false;

  auto* cfg_opt = app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  auto* scn_opt = app.add_option("--scenario", scenario_name, "Built-in preset name");
  cfg_opt->excludes(scn_opt);
  scn_opt->excludes(cfg_opt);
  app.add_option("--degree", degree, "Polynomial degree k");
  app.add_option("--dt", dt, "Time step, e.g. 0.01 or \"2 ms\" or auto");
  app.add_option("--tfinal", tfinal, "Final time");
  app.add_option("--levels", levels, "Convergence study levels (h = 1/2 .. 1/2^L)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--mode", mode, "simulate | convergence-study | oracle-check");
  app.add_option("--seed", seed, "Random seed for oracle-check states");
  app.add_option("--snapshots", snapshots, "Number of VTK snapshots after the initial one (0: none)");
  app.add_flag("--emit-matrix", emit_matrix, "Write the global trace matrix in Matrix Market format");
  app.add_flag("--no-files", no_files, "Do not write any output files");
  app.add_flag("--list-scenarios", list, "Print the preset names and exit");
  app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  if (argc <= 1) {
    std::fprintf(stderr, "%s", app.help().c_str());
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list) {
    for (int i = 0; i < porohdg_scenario_count(); ++i) std::printf("%s\n", porohdg_scenario_name(i));
    return kExitOk;
  }
  if (config_path.empty() && scenario_name.empty()) {
    std::fprintf(stderr, "porohdg: one of --config or --scenario is required\n\n%s", app.help().c_str());
    return kExitUsage;
  }

  ConfigHandle cfg;
  porohdg_status s = config_path.empty() ? porohdg_config_from_scenario(scenario_name.c_str(), &cfg.p)
                                         : porohdg_config_from_file(config_path.c_str(), &cfg.p);
  if (s != POROHDG_OK) return report(s, "loading configuration", true);

  auto set = [&](const char* key, const std::string& value) {
    const porohdg_status st = porohdg_config_set(cfg.p, key, value.c_str());
    if (st != POROHDG_OK) {
      std::fprintf(stderr, "porohdg: --%s %s: %s\n", key, value.c_str(), porohdg_last_error());
    }
    return st == POROHDG_OK;
  };
  bool ok = true;
  if (mode) ok = ok && set("mode", *mode);
  if (degree) ok = ok && set("degree", std::to_string(*degree));
  if (dt) ok = ok && set("dt", *dt);
  if (tfinal) ok = ok && set("t_final", *tfinal);
  if (levels) ok = ok && set("levels", std::to_string(*levels));
  if (out_dir) ok = ok && set("output", *out_dir);
  if (seed) ok = ok && set("seed", std::to_string(*seed));
  if (snapshots) ok = ok && set("snapshots", std::to_string(*snapshots));
  if (!ok) return kExitUsage;

  if (print_config) {
    size_t need = 0;
    porohdg_config_to_text(cfg.p, nullptr, 0, &need);
    std::string text(need, '\0');
    porohdg_config_to_text(cfg.p, text.data(), text.size(), &need);
    std::fputs(text.c_str(), stdout);
    return kExitOk;
  }

  porohdg_run_options ro = porohdg_run_options_default();
  ro.write_files = no_files ? 0 : 1;
  ro.emit_matrix = emit_matrix ? 1 : 0;
  ro.log = &log_line;
  ResultHandle res;
  s = porohdg_run(cfg.p, &ro, &res.p);
  if (s != POROHDG_OK) return report(s, "run failed", false);

  switch (porohdg_result_mode(res.p)) {
    case POROHDG_MODE_CONVERGENCE_STUDY: {
      std::fputs(porohdg_result_table(res.p), stdout);
      std::printf("fitted slopes (three finest levels):");
      for (int f = 0; f < 4; ++f) {
        double r = 0.0;
        if (porohdg_result_rate(res.p, static_cast<porohdg_field>(f), &r) == POROHDG_OK) {
          std::printf(" %s %.3f", kFieldNames[f], r);
        }
      }
      std::printf("\n");
      break;
    }
    case POROHDG_MODE_ORACLE_CHECK: {
      const double d = porohdg_result_oracle_difference(res.p);
      std::printf("max relative difference %.3e\n", d);
      if (!(d <= kOracleTolerance)) {
        std::fprintf(stderr, "porohdg: condensed and monolithic solutions differ by %.3e\n", d);
        return kExitRuntime;
      }
      break;
    }
    case POROHDG_MODE_SIMULATE: {
      const int n = porohdg_result_diagnostic_count(res.p);
      double t = 0, x2 = 0, y2 = 0, x20 = 0;
      porohdg_result_diagnostic(res.p, 0, nullptr, &x20, nullptr);
      porohdg_result_diagnostic(res.p, n - 1, &t, &x2, &y2);
      std::printf("steps %d  dt %.6g  t %.6g  X^2 %.6e  Y^2 %.6e  X0^2 %.6e\n",
                  porohdg_result_steps(res.p), porohdg_result_dt(res.p), t, x2, y2, x20);
      double e = 0.0;
      if (porohdg_result_error(res.p, POROHDG_FIELD_STRESS, &e) == POROHDG_OK) {
        std::printf("final L2 errors:");
        for (int f = 0; f < 4; ++f) {
          porohdg_result_error(res.p, static_cast<porohdg_field>(f), &e);
          std::printf(" %s %.6e", kFieldNames[f], e);
        }
        std::printf("\n");
      }
      break;
    }
  }
  for (int i = 0; i < porohdg_result_file_count(res.p); ++i) {
    std::fprintf(stderr, "wrote %s\n", porohdg_result_file(res.p, i));
  }
  return porohdg_result_finite(res.p) ? kExitOk : kExitRuntime;
}
