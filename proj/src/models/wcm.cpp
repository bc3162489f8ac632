#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "common.hpp"

namespace ltd::models {

using namespace detail;

void FockSpec::validate() const {
  require(c.size() >= 1, ErrorKind::parameter, "wcm: empty object amplitudes");
  require(cutoff >= 1, ErrorKind::parameter, "wcm: cutoff must be positive");
  require(std::isfinite(epsilon.real()) && std::isfinite(epsilon.imag()), ErrorKind::parameter,
          "wcm: non-finite coupling");
  if (std::abs(c.squaredNorm() - 1.0) > 1e-12)
    fail(ErrorKind::normalization, "wcm: object amplitudes not normalized");
}

ComplexVector coherent_state(Complex beta, std::size_t cutoff) {
  require(cutoff >= 1, ErrorKind::parameter, "coherent_state: cutoff must be positive");
  const double r = std::abs(beta), arg = std::arg(beta);
  ComplexVector v(static_cast<Index>(cutoff));
  for (std::size_t k = 0; k < cutoff; ++k) {
    // |beta>_k = e^{-|beta|^2/2} beta^k / sqrt(k!), built in log space.
    const double log_mag = r == 0.0 ? (k == 0 ? 0.0 : -INFINITY)
                                    : -0.5 * r * r + double(k) * std::log(r) -
                                          0.5 * std::lgamma(double(k) + 1.0);
    v(Index(k)) = std::polar(std::exp(log_mag), double(k) * arg);
  }
  const double kept = v.squaredNorm();
  if (!(1.0 - kept < 1e-8))
    fail(ErrorKind::cutoff,
         fmt::format("coherent state |beta| = {} loses {:.3e} beyond cutoff {}", r, 1.0 - kept, cutoff));
  return v / std::sqrt(kept);
}

WcmParams::WcmParams() {
  spec.c = ComplexVector::Constant(2, 0.5 * std::numbers::sqrt2);
  spec.kappa = ComplexVector::Zero(0);
  t0 = 2.0;
}

ScenarioReport wcm_scenario(const WcmParams& p) {
  p.spec.validate();
  require(std::isfinite(p.t_pre) && p.t_pre >= 0.0, ErrorKind::parameter,
          "wcm: premeasurement time must be non-negative");
  require(p.overlap_threshold > 0.0 && p.overlap_threshold < 1.0, ErrorKind::parameter,
          "wcm: overlap threshold must lie in (0, 1)");
  const Index n_obj = p.spec.c.size();
  const std::size_t dim = p.spec.cutoff;
  const Complex eps = p.spec.epsilon;

  ScenarioReport rep;
  rep.scenario = "wcm";
  rep.param("cutoff", std::int64_t(dim));
  rep.param("object_weights", to_std(p.spec.c.cwiseAbs2()));
  rep.param("epsilon_re", eps.real());
  rep.param("epsilon_im", eps.imag());
  rep.param("t_pre", p.t_pre);
  rep.param("overlap_threshold", p.overlap_threshold);
  rep.param("kappa_count", std::int64_t(p.spec.kappa.size()));

  // Phase 1: |Psi> = sum_n c_n |n>_O |n eps t / 2>_A.
  std::vector<ComplexVector> app;
  std::vector<Complex> betas;
  for (Index n = 0; n < n_obj; ++n) {
    betas.push_back(double(n) * eps * p.t_pre / 2.0);
    app.push_back(coherent_state(betas.back(), dim));
  }

  double formula_dev = 0.0, max_overlap = 0.0;
  Index min_gap = 0;
  for (Index n = 0; n < n_obj; ++n)
    for (Index m = n + 1; m < n_obj; ++m) {
      const double dn = double(m - n);
      const double closed = std::exp(-dn * dn * std::norm(eps) * p.t_pre * p.t_pre / 8.0);
      const double direct = std::abs(app[std::size_t(n)].dot(app[std::size_t(m)]));
      formula_dev = std::max(formula_dev, std::abs(closed - direct));
      rep.diag(fmt::format("overlap[{},{}]", n, m), direct);
      if (std::abs(p.spec.c(n)) > 0.0 && std::abs(p.spec.c(m)) > 0.0) {
        max_overlap = std::max(max_overlap, direct);
        if (min_gap == 0 || m - n < min_gap) min_gap = m - n;
      }
    }
  rep.diag("overlap_formula_deviation", formula_dev);
  rep.diag("max_branch_overlap", max_overlap);
  rep.verdict("premeasurement_complete", max_overlap < p.overlap_threshold, "max_branch_overlap",
              p.overlap_threshold);
  if (min_gap > 0 && std::abs(eps) > 0.0)
    rep.diag("t_complete", std::sqrt(8.0 * std::log(1.0 / p.overlap_threshold)) /
                               (double(min_gap) * std::abs(eps)));

  // Phase 2: the environment reads X_A; branch n sits at x_n = sqrt(2) Re(beta_n).
  const auto chi = GridWavepacket::gaussian(-p.env_range, p.env_range, p.env_points, 0.0, 1.0);
  RealVector x(n_obj);
  for (Index n = 0; n < n_obj; ++n) x(n) = std::numbers::sqrt2 * betas[std::size_t(n)].real();
  RealMatrix h(n_obj, chi.grid.size());
  for (Index n = 0; n < n_obj; ++n)
    for (Index j = 0; j < h.cols(); ++j) h(n, j) = x(n) * chi.grid(j);
  const auto env = SeparableInteraction::make(h);
  const ComplexVector d = chi.amplitudes / chi.amplitudes.norm();

  localtime::TimeBound tb;
  tb.tau_min = std::numbers::pi / 2;
  const auto law = resolve_law(rep, p.law, tb, localtime::PaperModel::position, p.t0);
  const double spread = x.size() > 0 ? x.maxCoeff() - x.minCoeff() : 0.0;
  if (chi.grid.size() > 1 && law.t0 * spread * chi.spacing() > std::numbers::pi)
    fail(ErrorKind::resolution,
         fmt::format("wcm: environment grid recurs before t0 = {} (spread {})", law.t0, spread));

  ComplexMatrix f(n_obj, n_obj);
  for (Index n = 0; n < n_obj; ++n)
    for (Index m = 0; m < n_obj; ++m)
      f(n, m) = n == m ? Complex{1.0, 0.0} : bipartite::branch_trace(env, d, n, m, law.t0, law.lambda);

  const Index total = n_obj * Index(dim);
  ComplexMatrix rho_oa(total, total), target = ComplexMatrix::Zero(total, total);
  for (Index n = 0; n < n_obj; ++n)
    for (Index m = 0; m < n_obj; ++m) {
      const ComplexMatrix outer = app[std::size_t(n)] * app[std::size_t(m)].adjoint();
      const Complex cc = p.spec.c(n) * std::conj(p.spec.c(m));
      rho_oa.block(n * Index(dim), m * Index(dim), Index(dim), Index(dim)) = cc * f(n, m) * outer;
      if (n == m) target.block(n * Index(dim), n * Index(dim), Index(dim), Index(dim)) = cc * outer;
    }
  const auto rho = validate_density(rho_oa);
  const std::size_t keep_o[] = {0};
  const auto rho_o = partial_trace(rho, SubsystemSplit({n_obj, Index(dim)}), keep_o);

  double diag_dev = 0.0;
  for (Index n = 0; n < n_obj; ++n)
    diag_dev = std::max(diag_dev, std::abs(rho_o.matrix()(n, n).real() - std::norm(p.spec.c(n))));
  double max_coherence = 0.0;
  for (Index n = 0; n < n_obj; ++n)
    for (Index m = n + 1; m < n_obj; ++m)
      if (std::abs(p.spec.c(n)) > 0.0 && std::abs(p.spec.c(m)) > 0.0)
        max_coherence = std::max(max_coherence, std::abs(f(n, m)));

  rep.diag("rho_o.diagonal_deviation", diag_dev);
  rep.diag("rho_o.purity", rho_o.purity());
  rep.diag("rho_oa.purity", rho.purity());
  rep.diag("rho_oa.distance_to_mixture", (rho.matrix() - target).norm());
  rep.diag("max_environment_coherence", max_coherence);
  rep.verdict("rho_o_diagonal_exact", diag_dev < 1e-12, "rho_o.diagonal_deviation", 1e-12);
  return rep;
}

}  // namespace ltd::models
