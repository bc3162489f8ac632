#include <cmath>
#include <iostream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ltd/cli.hpp"
#include "ltd/models.hpp"

namespace ltd::cli {

using namespace ltd::models;
namespace fs = std::filesystem;

double TableRow::deviation() const { return std::abs(value - paper_value); }

bool TableRow::pass() const {
  if (kind == RowKind::upper_bound) return value <= paper_value + tolerance;
  return deviation() <= tolerance;
}

namespace {

struct Tolerance {
  double abs = 1e-3;
  double rel = 0.0;
  RowKind kind = RowKind::value;
};

// Acceptance tolerances for the published values; everything else is
// compared to the printed third decimal.
Tolerance tolerance_for(const std::string& scenario, const std::string& label) {
  if (label == "fidelity_deficit") return {0.0, 0.0, RowKind::upper_bound};
  if (scenario == "four_qubit" && label == "fidelity") return {3e-3};
  if (label.starts_with("tau_min_half") || label == "delta_h_int" || label == "gap_to_ground")
    return {0.0, 0.01};
  if (label == "smallest[2,-1]") return {1e-2};
  if (label == "split_smallest") return {5e-3};
  if (label == "factor_deviation_from_12") return {1e-12};
  if (label.starts_with("coherent.")) return {1e-8};
  return {};
}

void collect(std::vector<TableRow>& rows, const std::string& name, const ScenarioReport& rep,
             std::set<std::string>* skip = nullptr) {
  auto add = [&](const Quantity& q) {
    if (!q.paper_value) return;
    if (skip && skip->count(q.label)) return;
    const auto tol = tolerance_for(rep.scenario, q.label);
    TableRow row;
    row.scenario = name;
    row.label = q.label;
    row.value = q.value;
    row.paper_value = *q.paper_value;
    row.tolerance = std::max(tol.abs, tol.rel * std::abs(*q.paper_value));
    row.kind = tol.kind;
    if (auto it = rep.provenance.find(q.label); it != rep.provenance.end()) row.source = it->second;
    rows.push_back(row);
  };
  for (const auto& q : rep.gaussian_factors) add(q);
  for (const auto& q : rep.diagnostics) add(q);
}

}  // namespace

std::vector<TableRow> paper_tables(const TablesOptions& opts) {
  std::vector<TableRow> rows;
  LemmaOptions lemma;
  lemma.threads = opts.threads;

  TwoQubitParams two;
  two.law.lambda = opts.lambda;
  two.lemma = lemma;
  collect(rows, "two_qubit", two_qubit_scenario(two));

  FourQubitParams four;
  four.law.lambda = opts.lambda;
  four.lemma = lemma;
  collect(rows, "four_qubit", four_qubit_scenario(four));

  // Large-N rows are closed-form; the bath dynamics are not needed.
  SpinBathParams bath;
  bath.spec = SpinBathSpec::paper(1000);
  bath.dynamics = false;
  bath.law.lambda = opts.lambda;
  collect(rows, "spin_bath", spin_bath_scenario(bath));

  std::set<std::string> seen;
  for (const auto& r : rows)
    if (r.scenario == "spin_bath") seen.insert(r.label);
  bath.spec.a_spectrum = RealVector{{2.0, 1.0, -1.0, -2.0}};
  bath.spec.b = ComplexVector::Constant(4, 0.5);
  bath.spec.coarse_map = RealVector{{2.0, 0.0, 0.0, -2.0}};
  collect(rows, "spin_bath_extended", spin_bath_scenario(bath), &seen);

  PositionParams pos;
  pos.law.lambda = opts.lambda;
  collect(rows, "position", position_scenario(pos));
  return rows;
}

int paper_tables_command(const fs::path& dir, const TablesOptions& opts, std::ostream& out,
                         std::ostream& err) {
  std::vector<TableRow> rows;
  try {
    rows = paper_tables(opts);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create " << dir.string() << '\n';
    return kExitUnwritable;
  }

  std::vector<std::string> order;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), r.scenario) == order.end()) order.push_back(r.scenario);

  std::string csv = "scenario,label,value,paper_value,deviation,tolerance,pass\n";
  std::vector<const TableRow*> failing;
  try {
    for (const auto& name : order) {
      nlohmann::ordered_json j;
      j["scenario"] = name;
      j["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        if (r.scenario != name) continue;
        nlohmann::ordered_json row;
        row["label"] = r.label;
        row["value"] = r.value;
        row["paper_value"] = r.paper_value;
        row["deviation"] = r.deviation();
        row["tolerance"] = r.tolerance;
        row["kind"] = r.kind == RowKind::upper_bound ? "upper_bound" : "value";
        row["pass"] = r.pass();
        row["source"] = r.source;
        j["rows"].push_back(row);
        csv += fmt::format("{},{},{},{},{},{},{}\n", r.scenario, r.label, format_number(r.value),
                           format_number(r.paper_value), format_number(r.deviation()),
                           format_number(r.tolerance), r.pass() ? 1 : 0);
        if (!r.pass()) failing.push_back(&r);
      }
      write_atomic(dir / (name + ".json"), j.dump(2) + "\n");
    }
    write_atomic(dir / "summary.csv", csv);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnwritable;
  }

  out << fmt::format("{} rows, {} outside tolerance\n", rows.size(), failing.size());
  for (const auto* r : failing)
    err << fmt::format("FAIL {}/{}: value {} published {} deviation {:.4g} tolerance {:.4g}\n",
                       r->scenario, r->label, format_number(r->value),
                       format_number(r->paper_value), r->deviation(), r->tolerance);
  return failing.empty() ? kExitOk : kExitCheckFailed;
}

}  // namespace ltd::cli
