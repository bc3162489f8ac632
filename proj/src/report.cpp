#include "ltd/report.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ltd {

using ordered_json = nlohmann::ordered_json;

std::optional<double> Quantity::deviation() const {
  if (!paper_value) return std::nullopt;
  return std::abs(value - *paper_value);
}

namespace {

Quantity& push_quantity(std::vector<Quantity>& into, std::string label, double value,
                        std::string tag) {
  if (!std::isfinite(value))
    fail(ErrorKind::resolution, fmt::format("report: non-finite value for '{}'", label));
  into.push_back({std::move(label), value, std::nullopt, std::move(tag)});
  return into.back();
}

ordered_json quantity_json(const Quantity& q) {
  ordered_json j;
  j["label"] = q.label;
  j["value"] = q.value;
  if (q.paper_value) {
    j["paper_value"] = *q.paper_value;
    j["deviation"] = *q.deviation();
  }
  j["tag"] = q.tag;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void ScenarioReport::param(std::string key, ParamValue v) {
  for (auto& [k, existing] : parameters)
    if (k == key) {
      existing = std::move(v);
      return;
    }
  parameters.emplace_back(std::move(key), std::move(v));
}

Quantity& ScenarioReport::factor(std::string label, double value, std::string tag) {
  return push_quantity(gaussian_factors, std::move(label), value, std::move(tag));
}

Quantity& ScenarioReport::diag(std::string label, double value, std::string tag) {
  return push_quantity(diagnostics, std::move(label), value, std::move(tag));
}

void ScenarioReport::diag_complex(const std::string& label, Complex value, const std::string& tag) {
  diag(label + ".re", value.real(), tag);
  diag(label + ".im", value.imag(), tag);
}

void ScenarioReport::verdict(std::string label, bool value, std::string metric, double threshold) {
  verdicts.push_back({std::move(label), value, std::move(metric), threshold});
}

const Quantity* ScenarioReport::find(const std::string& label) const {
  for (const auto* list : {&gaussian_factors, &diagnostics})
    for (const auto& q : *list)
      if (q.label == label) return &q;
  return nullptr;
}

const Verdict* ScenarioReport::find_verdict(const std::string& label) const {
  for (const auto& v : verdicts)
    if (v.label == label) return &v;
  return nullptr;
}

std::string format_number(double x) { return fmt::format("{}", x); }

std::string to_json(const ScenarioReport& r) {
  ordered_json j;
  j["scenario"] = r.scenario;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.parameters)
    std::visit([&](const auto& x) { params[k] = x; }, v);
  j["parameters"] = params;
  j["gaussian_factors"] = ordered_json::array();
  for (const auto& q : r.gaussian_factors) j["gaussian_factors"].push_back(quantity_json(q));
  j["diagnostics"] = ordered_json::array();
  for (const auto& q : r.diagnostics) j["diagnostics"].push_back(quantity_json(q));
  j["verdicts"] = ordered_json::array();
  for (const auto& v : r.verdicts)
    j["verdicts"].push_back(
        {{"label", v.label}, {"value", v.value}, {"metric", v.metric}, {"threshold", v.threshold}});
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

std::string to_csv(const ScenarioReport& r) {
  std::string out = "label,value,paper_value,deviation,tag\n";
  auto row = [&](const std::string& label, double value, std::optional<double> paper,
                 std::optional<double> dev, const std::string& tag) {
    out += fmt::format("{},{},{},{},{}\n", csv_field(label), format_number(value),
                       paper ? format_number(*paper) : "", dev ? format_number(*dev) : "",
                       csv_field(tag));
  };
  for (const auto& [k, v] : r.parameters) {
    if (const auto* d = std::get_if<double>(&v)) row("parameters/" + k, *d, {}, {}, "parameter");
    else if (const auto* i = std::get_if<std::int64_t>(&v))
      row("parameters/" + k, double(*i), {}, {}, "parameter");
    else if (const auto* b = std::get_if<bool>(&v))
      row("parameters/" + k, *b ? 1.0 : 0.0, {}, {}, "parameter");
    else if (const auto* xs = std::get_if<std::vector<double>>(&v))
      for (std::size_t n = 0; n < xs->size(); ++n)
        row(fmt::format("parameters/{}[{}]", k, n), (*xs)[n], {}, {}, "parameter");
  }
  for (const auto& q : r.gaussian_factors)
    row("gaussian_factors/" + q.label, q.value, q.paper_value, q.deviation(), q.tag);
  for (const auto& q : r.diagnostics)
    row("diagnostics/" + q.label, q.value, q.paper_value, q.deviation(), q.tag);
  for (const auto& v : r.verdicts) row("verdicts/" + v.label, v.value ? 1.0 : 0.0, {}, {}, "verdict");
  return out;
}

}  // namespace ltd
