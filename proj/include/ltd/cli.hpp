#pragma once

// Command-line front end: configuration resolution, scenario dispatch,
// the published-value tables and the randomized oracle suite.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltd/report.hpp"

namespace ltd::cli {

enum class Format { json, csv };

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitUnwritable = 4;
inline constexpr int kExitCheckFailed = 5;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Overrides are kept as JSON text values so that presets, config files and
/// flags merge with one rule: later layers replace earlier keys.
struct RunConfig {
  std::string scenario;
  std::string preset = "paper";
  std::map<std::string, std::string> overrides;  // key -> JSON literal
  std::optional<std::filesystem::path> config_file;
  std::optional<std::filesystem::path> out;  // stdout when empty
  Format format = Format::json;
};

const std::vector<std::string>& scenario_names();

/// Preset < config file < overrides; returns the merged flat parameter
/// object as JSON text.
std::string resolve_parameters(const RunConfig& cfg);

ScenarioReport run_scenario(const RunConfig& cfg);
std::string serialize(const ScenarioReport& rep, Format format);

/// Writes via a temporary file in the target directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

int exit_code(ErrorKind kind);

/// Runs one scenario and writes the report; returns the exit status and
/// prints diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// ------------------------------------------------------------ paper tables

enum class RowKind { value, upper_bound };

struct TableRow {
  std::string scenario;
  std::string label;
  double value = 0.0;
  double paper_value = 0.0;
  double tolerance = 0.0;
  RowKind kind = RowKind::value;
  std::string source;

  double deviation() const;
  bool pass() const;
};

struct TablesOptions {
  std::optional<double> lambda;  // replaces the preset lambda everywhere
  std::size_t threads = 1;
};

std::vector<TableRow> paper_tables(const TablesOptions& opts = {});

/// Writes <dir>/<scenario>.json per model and <dir>/summary.csv.
int paper_tables_command(const std::filesystem::path& dir, const TablesOptions& opts,
                         std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------- validate

struct ValidateOptions {
  std::size_t trials = 100;
  std::size_t dim_cap = 16;
  std::uint64_t seed = 0;
  bool inject_unsquared_exponent = false;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  double sigma_deviation = 0.0;
  double purity_deviation = 0.0;
  double energy_deviation = 0.0;
  bool pass = false;
};

/// Trial k draws its system from mt19937_64(seed + k).
TrialResult validate_trial(std::uint64_t trial_seed, const ValidateOptions& opts);
std::vector<TrialResult> validate(const ValidateOptions& opts);
int validate_command(const ValidateOptions& opts, std::ostream& out, std::ostream& err);

/// Threads from LTD_THREADS (at least 1, default 1).
std::size_t env_threads();

}  // namespace ltd::cli
