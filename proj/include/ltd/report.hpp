#pragma once

// Scenario reports and their JSON / CSV serialization.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ltd/qcore.hpp"

namespace ltd {

using ParamValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct Quantity {
  std::string label;
  double value = 0.0;
  std::optional<double> paper_value;
  std::string tag;  // "reproduced", "derived", "computed", ...

  std::optional<double> deviation() const;
};

struct Verdict {
  std::string label;
  bool value = false;
  std::string metric;  // label of the quantity the verdict tests
  double threshold = 0.0;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<std::pair<std::string, ParamValue>> parameters;
  std::vector<Quantity> gaussian_factors;
  std::vector<Quantity> diagnostics;
  std::vector<Verdict> verdicts;
  std::map<std::string, std::string> provenance;

  void param(std::string key, ParamValue v);
  /// Non-finite values are rejected with a resolution error.
  Quantity& factor(std::string label, double value, std::string tag = "computed");
  Quantity& diag(std::string label, double value, std::string tag = "computed");
  void diag_complex(const std::string& label, Complex value, const std::string& tag = "computed");
  void verdict(std::string label, bool value, std::string metric, double threshold);
  void cite(const std::string& label, std::string what) { provenance[label] = std::move(what); }

  /// First quantity with this label in factors or diagnostics.
  const Quantity* find(const std::string& label) const;
  const Verdict* find_verdict(const std::string& label) const;
};

std::string to_json(const ScenarioReport& report);
std::string to_csv(const ScenarioReport& report);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

}  // namespace ltd
