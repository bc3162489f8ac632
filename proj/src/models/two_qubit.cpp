#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "common.hpp"

namespace ltd::models {

using namespace detail;

ScenarioReport two_qubit_scenario(const TwoQubitParams& p) {
  require(std::isfinite(p.coupling) && p.coupling != 0.0, ErrorKind::parameter,
          "two_qubit: coupling C must be nonzero");
  const double c = p.coupling;
  RealMatrix h(2, 2);
  h << c / 4, -c / 4, -c / 4, c / 4;
  const auto inter = SeparableInteraction::make(h);
  ComplexVector b(2), d(2);
  b << p.b.first, p.b.second;
  d << p.d.first, p.d.second;

  ScenarioReport rep;
  rep.scenario = "two_qubit";
  rep.param("C", c);
  rep.param("d_plus_weight", std::norm(p.d.first));
  rep.param("b_plus_weight", std::norm(p.b.first));

  const RealVector levels = inter.flattened_levels();
  const ComplexVector amps = tensor_product(b, d);
  const RealVector weights = amps.cwiseAbs2();
  const auto bound = localtime::time_bound(levels, weights);
  const auto law = resolve_law(rep, p.law, bound, localtime::PaperModel::two_qubit, p.t0);

  auto& f = rep.factor("coherence", localtime::gaussian_factor(c / 2, law.lambda), "reproduced");
  f.paper_value = 0.939;
  rep.cite("coherence", "two-qubit Gaussian factor exp(-C^2/16 lambda)");

  rep.diag("tau_min_half", bound.tau_min / 2).paper_value = std::numbers::pi / c;
  rep.cite("tau_min_half", "two-qubit time bound pi/C");

  const auto fam = bipartite::branch_family(inter, b, d, law);
  const auto sigma = bipartite::assemble_sigma(fam);
  const auto sys = localtime::SpectralSystem::make(levels, amps);
  rep.diag("assembly_deviation", (sigma.matrix() - localtime::sigma_analytic(sys, law).matrix()).norm());
  rep.diag("purity", sigma.purity());

  const double fid = fidelity_pure(sigma, bipartite::evolve_branches(inter, b, d, law.t0));
  rep.diag("fidelity", fid);
  auto& deficit = rep.diag("fidelity_deficit", 1.0 - fid, "bound");
  deficit.paper_value = 0.062;
  rep.cite("fidelity_deficit", "two-qubit coherence error bound 0.062");
  rep.verdict("fidelity_deficit_within_bound", 1.0 - fid <= 0.062, "fidelity_deficit", 0.062);

  // Trace and product entry along the t0 grid against their closed forms.
  const double wp = std::norm(d(0)), wm = std::norm(d(1));
  const double g = localtime::gaussian_factor(c / 2, law.lambda);
  double dev_trace = 0.0, dev_product = 0.0;
  const auto grid = p.t0_grid.points();
  rep.param("t0_grid", grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const auto fam_t = fam.at(t);
    const Complex tr = fam_t.block(0, 1).trace();
    const Complex tr_closed = g * (wp * std::exp(-kI * (t * c / 2)) + wm * std::exp(kI * (t * c / 2)));
    dev_trace = std::max(dev_trace, std::abs(tr - tr_closed));
    const Complex prod = (fam_t.block(0, 0) * fam_t.block(1, 1))(0, 0);
    const Complex prod_closed =
        wp * wp + wp * wm * std::exp(-kI * (t * c)) * std::exp(-c * c / (8 * law.lambda));
    dev_product = std::max(dev_product, std::abs(prod - prod_closed));
    rep.diag_complex(fmt::format("trace_pm[{}]", k), tr);
  }
  rep.diag("trace_closed_form_deviation", dev_trace);
  rep.diag("product_closed_form_deviation", dev_product);

  const auto mi = bipartite::mutual_information(fam);
  rep.diag("mutual_information", mi.mutual);
  rep.diag("object_entropy", mi.object_entropy);

  add_lemma(rep, fam, p.lemma);
  return rep;
}

}  // namespace ltd::models
