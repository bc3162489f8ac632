#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "common.hpp"

namespace ltd::models {

using namespace detail;

SeparableInteraction four_qubit_interaction() {
  RealMatrix h(2, 4);
  h << 0.75, 0.25, -0.25, -0.75,
      -0.75, -0.25, 0.25, 0.75;
  return SeparableInteraction::make(h);
}

ScenarioReport four_qubit_scenario(const FourQubitParams& p) {
  const auto inter = four_qubit_interaction();
  ComplexVector b(2), d(4);
  b << p.b.first, p.b.second;
  d << std::sqrt(1.0 / 8), std::sqrt(3.0 / 8), std::sqrt(3.0 / 8), std::sqrt(1.0 / 8);

  ScenarioReport rep;
  rep.scenario = "four_qubit";
  rep.param("b_plus_weight", std::norm(p.b.first));
  rep.param("shell_weights", std::vector<double>{1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8});

  const RealVector levels = inter.flattened_levels();
  const ComplexVector amps = tensor_product(b, d);
  const auto bound = localtime::time_bound(levels, amps.cwiseAbs2());
  const auto law = resolve_law(rep, p.law, bound, localtime::PaperModel::four_qubit, p.t0);

  const auto ext = extreme_factors(levels, law.lambda);
  rep.factor("smallest", ext.smallest, "reproduced").paper_value = 0.755;
  rep.factor("largest", ext.largest, "reproduced").paper_value = 0.969;
  rep.cite("smallest", "four-qubit smallest Gaussian factor exp(-9/32)");
  rep.cite("largest", "four-qubit largest Gaussian factor exp(-1/32)");

  rep.diag("tau_min_half", bound.tau_min / 2);
  rep.diag("tau_min_half_ground_gap", bound.ground_gap_branch() / 2, "ground-gap branch")
      .paper_value = std::numbers::pi / 3;
  rep.cite("tau_min_half_ground_gap", "four-qubit time bound pi/3 (ground-gap branch)");
  rep.diag("delta_h", bound.dh);
  rep.diag("gap_to_ground", bound.gap_to_ground);

  const auto fam = bipartite::branch_family(inter, b, d, law);
  const auto sigma = bipartite::assemble_sigma(fam);
  const auto sys = localtime::SpectralSystem::make(levels, amps);
  rep.diag("assembly_deviation",
           (sigma.matrix() - localtime::sigma_analytic(sys, law).matrix()).norm());
  rep.diag("purity", sigma.purity());

  const double fid = fidelity_pure(sigma, bipartite::evolve_branches(inter, b, d, law.t0));
  rep.diag("fidelity", fid, "reproduced").paper_value = 0.894;
  rep.cite("fidelity", "four-qubit exact fidelity 0.894");
  const double lo = std::sqrt(ext.smallest), hi = std::sqrt(ext.largest);
  rep.diag("fidelity_lower_bound", lo, "reproduced").paper_value = 0.869;
  rep.diag("fidelity_upper_bound", hi, "reproduced").paper_value = 0.984;
  rep.cite("fidelity_lower_bound", "four-qubit fidelity bound sqrt(0.755)");
  rep.cite("fidelity_upper_bound", "four-qubit fidelity bound sqrt(0.969)");
  rep.verdict("fidelity_within_bounds", lo < fid && fid < hi, "fidelity", 0.0);

  // tr rho_{+-} = 1/4 cos(3 t0 / 2) e^{-9/16 lambda} + 3/4 cos(t0 / 2) e^{-1/16 lambda}
  // for the equal-weight bath.
  const auto grid = p.t0_grid.points();
  rep.param("t0_grid", grid);
  double dev = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const Complex tr = bipartite::branch_trace(inter, d, 0, 1, t, law.lambda);
    const double closed = 0.25 * std::cos(1.5 * t) * std::exp(-9.0 / (16 * law.lambda)) +
                          0.75 * std::cos(0.5 * t) * std::exp(-1.0 / (16 * law.lambda));
    dev = std::max(dev, std::abs(tr - closed));
    rep.diag_complex(fmt::format("trace_pm[{}]", k), tr);
  }
  rep.diag("trace_closed_form_deviation", dev);

  const auto mi = bipartite::mutual_information(fam);
  rep.diag("mutual_information", mi.mutual);
  rep.diag("object_entropy", mi.object_entropy);

  add_lemma(rep, fam, p.lemma);
  return rep;
}

}  // namespace ltd::models
