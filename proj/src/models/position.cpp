#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "common.hpp"

namespace ltd::models {

using namespace detail;

GridWavepacket GridWavepacket::gaussian(double lo, double hi, std::size_t points, double center,
                                        double spread, double wavenumber) {
  require(points >= 1, ErrorKind::parameter, "wavepacket: empty grid");
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, ErrorKind::parameter,
          "wavepacket: grid interval must satisfy lo < hi");
  require(std::isfinite(spread) && spread > 0.0, ErrorKind::parameter,
          "wavepacket: spread must be positive");
  GridWavepacket w;
  w.sigma = spread;
  w.grid.resize(Index(points));
  w.amplitudes.resize(Index(points));
  if (points == 1) {
    w.grid(0) = 0.5 * (lo + hi);
    w.amplitudes(0) = 1.0;
    return w;
  }
  const double pre = std::pow(std::numbers::pi * spread * spread, -0.25);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * double(i) / double(points - 1);
    const double u = (x - center) / spread;
    w.grid(Index(i)) = x;
    w.amplitudes(Index(i)) = pre * std::exp(-0.5 * u * u) * std::exp(kI * (wavenumber * x));
  }
  w.amplitudes /= std::sqrt(w.norm2());
  return w;
}

double GridWavepacket::spacing() const {
  return grid.size() > 1 ? grid(1) - grid(0) : 1.0;
}

double GridWavepacket::norm2() const { return amplitudes.squaredNorm() * spacing(); }

void GridWavepacket::validate() const {
  require(grid.size() >= 1 && grid.size() == amplitudes.size(), ErrorKind::parameter,
          "wavepacket: grid and amplitudes differ in length");
  require(grid.allFinite() && amplitudes.allFinite(), ErrorKind::parameter,
          "wavepacket: non-finite entry");
  if (grid.size() > 1) {
    const double h = spacing();
    require(h > 0.0, ErrorKind::parameter, "wavepacket: grid must increase");
    for (Index i = 1; i < grid.size(); ++i)
      if (std::abs(grid(i) - grid(i - 1) - h) > 1e-9 * std::max(1.0, std::abs(h)))
        fail(ErrorKind::parameter, "wavepacket: grid not uniform");
  }
  if (std::abs(norm2() - 1.0) > 1e-10)
    fail(ErrorKind::normalization, fmt::format("wavepacket: discrete norm {} != 1", norm2()));
}

std::vector<Complex> gaussian_moments(double x0, double s2, double kappa, std::size_t n_max) {
  require(s2 > 0.0 && std::isfinite(s2), ErrorKind::parameter, "gaussian_moments: variance must be positive");
  std::vector<Complex> m(n_max + 1);
  const Complex mu{x0, -s2 * kappa};
  m[0] = std::sqrt(2.0 * std::numbers::pi * s2) *
         std::exp(Complex{-0.5 * s2 * kappa * kappa, -kappa * x0});
  if (n_max >= 1) m[1] = mu * m[0];
  for (std::size_t n = 2; n <= n_max; ++n) m[n] = mu * m[n - 1] + double(n - 1) * s2 * m[n - 2];
  return m;
}

Complex coherent_matrix_element(double x_i, double s_i, double p_i, double x_j, double s_j,
                                double p_j, std::size_t n) {
  const double si2 = s_i * s_i, sj2 = s_j * s_j, sum = si2 + sj2;
  const double s2 = si2 * sj2 / sum;
  const double x0 = (x_j * si2 + x_i * sj2) / sum;
  const double norm = std::pow(std::numbers::pi * si2, -0.25) * std::pow(std::numbers::pi * sj2, -0.25);
  const double dx = x_i - x_j;
  return norm * std::exp(-dx * dx / (2.0 * sum)) * gaussian_moments(x0, s2, p_i - p_j, n)[n];
}

namespace {

// Direct trapezoid evaluation of <psi_i| x^n |psi_j>, the independent check
// of the closed form.
Complex coherent_matrix_element_numeric(double x_i, double s_i, double p_i, double x_j,
                                        double s_j, double p_j, std::size_t n) {
  const double lo = std::min(x_i - 14 * s_i, x_j - 14 * s_j);
  const double hi = std::max(x_i + 14 * s_i, x_j + 14 * s_j);
  const std::size_t points = 40001;
  const double h = (hi - lo) / double(points - 1);
  const double ni = std::pow(std::numbers::pi * s_i * s_i, -0.25);
  const double nj = std::pow(std::numbers::pi * s_j * s_j, -0.25);
  std::vector<Complex> terms(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double x = lo + h * double(k);
    const double ui = (x - x_i) / s_i, uj = (x - x_j) / s_j;
    const Complex psi_i = ni * std::exp(Complex{-0.5 * ui * ui, p_i * x});
    const Complex psi_j = nj * std::exp(Complex{-0.5 * uj * uj, p_j * x});
    const double w = (k == 0 || k + 1 == points) ? 0.5 : 1.0;
    terms[k] = w * h * std::pow(x, double(n)) * std::conj(psi_i) * psi_j;
  }
  return localtime::pairwise_sum(terms);
}

}  // namespace

ScenarioReport position_scenario(const PositionParams& p) {
  require(p.x_points >= 64, ErrorKind::parameter, "position: x grid needs at least 64 points");
  require(p.p_points >= 64 || p.p_points == 1, ErrorKind::parameter,
          "position: P grid needs at least 64 points (or exactly one)");
  const auto phi = GridWavepacket::gaussian(-p.x_range, p.x_range, p.x_points, 0.0, p.sigma_object);
  const auto chi =
      GridWavepacket::gaussian(-p.p_range, p.p_range, p.p_points, 0.0, p.sigma_apparatus);
  phi.validate();
  chi.validate();

  ScenarioReport rep;
  rep.scenario = "position";
  rep.param("x_points", std::int64_t(p.x_points));
  rep.param("p_points", std::int64_t(p.p_points));
  rep.param("x_range", p.x_range);
  rep.param("p_range", p.p_range);
  rep.param("sigma_object", p.sigma_object);
  rep.param("sigma_apparatus", p.sigma_apparatus);
  rep.param("C", 1.0);

  // The bound max{pi / 4 s1 s2, pi / 4 L P} is taken as given for this model.
  const double half = std::max(std::numbers::pi / (4 * p.sigma_object * p.sigma_apparatus),
                               std::numbers::pi / (4 * p.x_range * p.p_range));
  localtime::TimeBound tb;
  tb.tau_min = 2 * half;
  tb.dh = p.sigma_object * p.sigma_apparatus;
  tb.gap_to_ground = p.x_range * p.p_range;
  auto& tau = rep.diag("tau_min_half", half, "reproduced");
  tau.paper_value = std::numbers::pi / 4;
  rep.cite("tau_min_half", "position-measurement time bound pi/4 for unit spreads");

  const auto grid = p.t0_grid.points();
  rep.param("t0_grid", grid);
  const auto law = resolve_law(rep, p.law, tb, localtime::PaperModel::position, grid.front());

  // Phase aliasing: consecutive t0 values must not advance the fastest phase by more than pi.
  const double max_xp = phi.grid.cwiseAbs().maxCoeff() * chi.grid.cwiseAbs().maxCoeff();
  if (grid.size() >= 2) {
    const double step = std::abs(grid[1] - grid[0]);
    if (max_xp * step > std::numbers::pi)
      fail(ErrorKind::resolution,
           fmt::format("position: t0 step {} aliases phases up to |xP| = {}", step, max_xp));
  }

  RealMatrix h(phi.grid.size(), chi.grid.size());
  for (Index i = 0; i < h.rows(); ++i)
    for (Index j = 0; j < h.cols(); ++j) h(i, j) = phi.grid(i) * chi.grid(j);
  const auto inter = SeparableInteraction::make(h);
  const ComplexVector d = chi.amplitudes / chi.amplitudes.norm();
  const ComplexVector b = phi.amplitudes / phi.amplitudes.norm();

  // Factor of rho_A(x, x') against exp(-(xP - x'P')^2 / 12), sampled over x pairs.
  double dev12 = 0.0;
  bool single_p_pure = true;
  const Index stride = std::max<Index>(1, h.rows() / 16);
  for (Index i = 0; i < h.rows(); i += stride)
    for (Index ip = 0; ip < h.rows(); ip += stride) {
      const ComplexMatrix blk = bipartite::branch_block(inter, d, i, ip, 0.0, law.lambda);
      for (Index j = 0; j < h.cols(); ++j)
        for (Index jp = 0; jp < h.cols(); ++jp) {
          const double mag = std::abs(d(j) * std::conj(d(jp)));
          if (mag < 1e-150) continue;
          const double f = std::abs(blk(j, jp)) / mag;
          const double gap = h(i, j) - h(ip, jp);
          dev12 = std::max(dev12, std::abs(f - std::exp(-gap * gap / 12.0)));
          if (h.cols() == 1 && std::abs(f - 1.0) > 1e-15) single_p_pure = false;
        }
    }
  rep.factor("factor_deviation_from_12", dev12, "derived").paper_value = 0.0;
  rep.cite("factor_deviation_from_12", "position kernel exp(-(xP - x'P')^2 / 12)");
  if (h.cols() == 1) rep.verdict("single_momentum_no_decoherence", single_p_pure, "factor", 1.0);

  // Decay of tr rho_A(x, x') / phi(x) phi*(x') and of the diagonal-branch overlap.
  const double hx = phi.spacing();
  for (double sep : p.separations) {
    const Index shift = Index(std::llround(sep / hx));
    if (shift <= 0 || shift >= h.rows()) continue;
    const Index i = h.rows() / 2, ip = i - shift;
    const double actual = phi.grid(i) - phi.grid(ip);
    const auto label = fmt::format("[{}]", format_number(sep));
    rep.diag("separation" + label, actual);
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double v = std::abs(bipartite::branch_trace(inter, d, i, ip, grid[k], law.lambda));
      if (k == 0) first = v;
      last = v;
    }
    rep.diag("abs_trace_first" + label, first);
    rep.diag("abs_trace_last" + label, last);
    auto overlap_at = [&](double t) {
      return overlap_norm(bipartite::branch_block(inter, d, i, i, t, law.lambda),
                          bipartite::branch_block(inter, d, ip, ip, t, law.lambda));
    };
    rep.diag("overlap_first" + label, overlap_at(grid.front()));
    rep.diag("overlap_last" + label, overlap_at(grid.back()));
    rep.verdict("trace_decays" + label, grid.size() < 2 || last < first, "abs_trace_last" + label, first);
  }

  // Fidelity sqrt(sum w w' W W' exp(-(xP - x'P')^2 / 4 lambda)) over the grid.
  std::vector<std::pair<double, double>> uw;
  const RealVector wx = b.cwiseAbs2(), wp = d.cwiseAbs2();
  for (Index i = 0; i < wx.size(); ++i)
    for (Index j = 0; j < wp.size(); ++j) {
      const double w = wx(i) * wp(j);
      if (w > 1e-18) uw.emplace_back(h(i, j), w);
    }
  std::sort(uw.begin(), uw.end());
  const double cut = std::sqrt(4.0 * law.lambda * 80.0);
  std::vector<double> rows(uw.size());
  for (std::size_t a = 0; a < uw.size(); ++a) {
    double s = 0.0;
    for (std::size_t c = a; c < uw.size() && uw[c].first - uw[a].first <= cut; ++c) {
      const double f = localtime::gaussian_factor(uw[c].first - uw[a].first, law.lambda);
      s += (c == a ? 1.0 : 2.0) * uw[c].second * f;
    }
    rows[a] = uw[a].second * s;
  }
  double kept = 0.0;
  for (const auto& x : uw) kept += x.second;
  const double fid2 = localtime::pairwise_sum(rows) / (kept * kept);
  rep.diag("fidelity", std::sqrt(fid2));

  // Coherent-state pair at the requested separation.
  const double sc = p.coherent_separation;
  double moment_dev = 0.0;
  for (std::size_t n = 0; n <= 4; ++n) {
    const Complex closed = coherent_matrix_element(0.0, 1.0, 0.0, sc, 1.0, 0.0, n);
    const Complex numeric = coherent_matrix_element_numeric(0.0, 1.0, 0.0, sc, 1.0, 0.0, n);
    moment_dev = std::max(moment_dev, std::abs(closed - numeric));
  }
  const double modulus = std::abs(coherent_matrix_element(0.0, 1.0, 0.0, sc, 1.0, 0.0, 0));
  rep.param("coherent_separation", sc);
  rep.diag("coherent.overlap_modulus", modulus).paper_value = std::exp(-sc * sc / 4);
  rep.cite("coherent.overlap_modulus", "coherent-state suppression exp(-(x_i - x_j)^2 / 4)");
  rep.diag("coherent.suppression_exponent", std::log(modulus) / (sc * sc), "reproduced")
      .paper_value = -0.25;
  rep.cite("coherent.suppression_exponent", "coherent-state exponent -(x_i - x_j)^2 / 4");
  rep.diag("coherent.moment_oracle_deviation", moment_dev);
  rep.verdict("coherent_oracle_agrees", moment_dev < 1e-8, "coherent.moment_oracle_deviation", 1e-8);
  return rep;
}

}  // namespace ltd::models
