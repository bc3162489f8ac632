#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "ltd/cli.hpp"
#include "params.hpp"

namespace ltd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"two_qubit", "four_qubit", "spin_bath",
                                              "position",  "wcm",        "clock"};
  return names;
}

namespace {

json preset_object(const std::string& scenario, const std::string& preset) {
  if (preset == "paper") return json::object();
  if (preset == "automatic") return {{"policy", "automatic"}};
  if (scenario == "spin_bath") {
    if (preset == "extended") return {{"spectrum", "extended"}};
    if (preset == "degenerate")
      return {{"family", "degenerate"}, {"uniqueness", true}, {"lambda", 1.0}, {"dt", 1.1}};
    if (preset == "uniform") return {{"family", "uniform"}};
  }
  fail(ErrorKind::parameter, fmt::format("unknown preset '{}' for scenario '{}'", preset, scenario));
}

json read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parameter, fmt::format("cannot read config file {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::parameter, fmt::format("config file {}: {}", path.string(), e.what()));
  }
  if (!j.is_object()) fail(ErrorKind::parameter, "config file must hold a JSON object");
  return j;
}

}  // namespace

json resolved_object(const RunConfig& cfg, std::string& scenario, std::string& preset) {
  json file = cfg.config_file ? read_config(*cfg.config_file) : json::object();
  scenario = cfg.scenario;
  preset = cfg.preset;
  // The config file may name the scenario and preset; flags still win.
  if (scenario.empty() && file.contains("scenario")) scenario = file["scenario"].get<std::string>();
  if (file.contains("preset") && cfg.preset == "paper") preset = file["preset"].get<std::string>();
  file.erase("scenario");
  file.erase("preset");
  if (scenario.empty()) fail(ErrorKind::parameter, "no scenario given");
  if (std::find(scenario_names().begin(), scenario_names().end(), scenario) == scenario_names().end())
    fail(ErrorKind::parameter, fmt::format("unknown scenario '{}'", scenario));

  json merged = preset_object(scenario, preset);
  for (auto& [k, v] : file.items()) merged[k] = v;
  for (const auto& [k, text] : cfg.overrides) {
    json v;
    try {
      v = json::parse(text);
    } catch (const json::exception&) {
      v = text;  // bare words are strings
    }
    merged[k] = v;
  }
  return merged;
}

std::string resolve_parameters(const RunConfig& cfg) {
  std::string scenario, preset;
  return resolved_object(cfg, scenario, preset).dump();
}

void write_atomic(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw IoError(fmt::format("cannot write {}: directory does not exist", path.string()));
  const fs::path tmp =
      dir / fmt::format(".{}.{}.{}.tmp", path.filename().string(), ::getpid(), counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}: {}", path.string(), std::strerror(errno)));
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError(fmt::format("cannot write {}", path.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot write {}: {}", path.string(), ec.message()));
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resolution:
    case ErrorKind::cutoff:
    case ErrorKind::positivity:
    case ErrorKind::normalization:
      return kExitNumerical;
    default:
      return kExitParameter;
  }
}

std::size_t env_threads() {
  const char* v = std::getenv("LTD_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return std::size_t(n);
}

}  // namespace ltd::cli
