// ltd: run decoherence scenarios, regenerate the published tables, or run
// the randomized oracle suite.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ltd/cli.hpp"

int main(int argc, char** argv) {
  using namespace ltd::cli;

  CLI::App app{"Local-time decoherence scenarios"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its report");
  RunConfig cfg;
  std::string format = "json";
  std::string out_path, config_path;
  std::optional<double> t0_start, t0_stop, lambda, dt, t;
  std::optional<std::int64_t> t0_count, n;
  std::int64_t seed = 0;
  std::vector<std::string> sets;
  run_cmd->add_option("--scenario", cfg.scenario, "two_qubit, four_qubit, spin_bath, position, wcm or clock");
  run_cmd->add_option("--preset", cfg.preset, "paper (default), automatic; spin_bath also extended, degenerate, uniform");
  run_cmd->add_option("--t0-start", t0_start, "first window centre of the t0 grid");
  run_cmd->add_option("--t0-stop", t0_stop, "last window centre");
  run_cmd->add_option("--t0-count", t0_count, "number of grid points");
  run_cmd->add_option("--lambda", lambda, "Gaussian width parameter");
  run_cmd->add_option("--dt", dt, "window half-width");
  run_cmd->add_option("--n", n, "bath size (spin_bath)");
  run_cmd->add_option("--t", t, "elapsed time (clock)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "random seed (default 0)");
  run_cmd->add_option("--set", sets, "extra parameter key=value (value parsed as JSON)");
  run_cmd->add_option("--out", out_path, "output file (default stdout)");
  run_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--config", config_path, "JSON file of parameters");

  // paper-tables
  auto* tables_cmd = app.add_subcommand("paper-tables", "Recompute every published value");
  std::string tables_dir = "paper_tables";
  std::optional<double> tables_lambda;
  tables_cmd->add_option("dir", tables_dir, "output directory");
  tables_cmd->add_option("--lambda", tables_lambda, "override lambda in every scenario");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Randomized analytic-vs-quadrature checks");
  ValidateOptions vopts;
  validate_cmd->add_option("--trials", vopts.trials)->check(CLI::PositiveNumber);
  validate_cmd->add_option("--dim-cap", vopts.dim_cap)->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", vopts.seed);
  validate_cmd->add_flag("--inject-unsquared-exponent", vopts.inject_unsquared_exponent,
                         "use the unsquared purity exponent (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  if (*run_cmd) {
    auto put = [&](const char* key, const auto& v) {
      if (v) cfg.overrides[key] = fmt::format("{}", *v);
    };
    put("t0_start", t0_start);
    put("t0_stop", t0_stop);
    put("t0_count", t0_count);
    put("lambda", lambda);
    put("dt", dt);
    put("n", n);
    put("t", t);
    if (seed_opt->count() > 0) cfg.overrides["seed"] = std::to_string(seed);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --set expects key=value, got '" << s << "'\n";
        return kExitParameter;
      }
      cfg.overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!out_path.empty()) cfg.out = out_path;
    if (!config_path.empty()) cfg.config_file = config_path;
    cfg.format = format == "csv" ? Format::csv : Format::json;
    return run(cfg, std::cout, std::cerr);
  }
  if (*tables_cmd) {
    TablesOptions topts;
    topts.lambda = tables_lambda;
    topts.threads = env_threads();
    return paper_tables_command(tables_dir, topts, std::cout, std::cerr);
  }
  return validate_command(vopts, std::cout, std::cerr);
}
