#include "ltd/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_cdf.h>
#include <gsl/gsl_integration.h>

namespace ltd::localtime {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPanelOrder = 16;

template <typename T>
T pairwise_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_impl(xs.first(half)) + pairwise_impl(xs.subspan(half));
}

double erf_inverse(double y) { return gsl_cdf_ugaussian_Pinv(0.5 * (1.0 + y)) / std::sqrt(2.0); }

struct Node {
  double t;
  double w;
};

// Composite Gauss-Legendre (fixed-order panels) or trapezoid nodes on [a, b].
void append_nodes(std::vector<Node>& out, double a, double b, std::size_t nodes,
                  QuadratureRule rule) {
  if (rule == QuadratureRule::trapezoid) {
    const std::size_t n = std::max<std::size_t>(nodes, 2);
    const double h = (b - a) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      out.push_back({a + h * double(i), (i == 0 || i + 1 == n) ? 0.5 * h : h});
    return;
  }
  static gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(kPanelOrder);
  const std::size_t panels = std::max<std::size_t>(1, (nodes + kPanelOrder - 1) / kPanelOrder);
  const double width = (b - a) / double(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * double(p);
    for (std::size_t i = 0; i < kPanelOrder; ++i) {
      double xi = 0.0, wi = 0.0;
      gsl_integration_glfixed_point(lo, lo + width, i, &xi, &wi, table);
      out.push_back({xi, wi});
    }
  }
}

double bandwidth(const RealVector& levels) {
  if (levels.size() == 0) return 0.0;
  return levels.maxCoeff() - levels.minCoeff();
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs); }
Complex pairwise_sum(std::span<const Complex> xs) { return pairwise_impl(xs); }

GaussianTimeLaw GaussianTimeLaw::make(double t0, double lambda, double dt) {
  require(std::isfinite(t0), ErrorKind::parameter, "time law: t0 not finite");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::parameter,
          fmt::format("time law: lambda must be > 0 (got {})", lambda));
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::parameter,
          fmt::format("time law: dt must be > 0 (got {})", dt));
  return {t0, lambda, dt};
}

SpectralSystem SpectralSystem::make(RealVector levels, ComplexVector amplitudes,
                                    std::vector<std::string> labels) {
  require(levels.size() > 0, ErrorKind::dimension, "spectral system: no levels");
  require(levels.size() == amplitudes.size(), ErrorKind::dimension,
          "spectral system: levels and amplitudes differ in length");
  require(levels.allFinite(), ErrorKind::parameter, "spectral system: non-finite level");
  require(labels.empty() || labels.size() == std::size_t(levels.size()), ErrorKind::dimension,
          "spectral system: label count mismatch");
  const double n2 = amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-12)
    fail(ErrorKind::normalization, fmt::format("spectral system: sum |c_n|^2 = {}", n2));
  return {std::move(levels), std::move(amplitudes), std::move(labels)};
}

RealVector SpectralSystem::weights() const { return amplitudes.cwiseAbs2(); }

ComplexVector SpectralSystem::state_at(double t) const {
  ComplexVector psi(dim());
  for (Index n = 0; n < dim(); ++n) psi(n) = amplitudes(n) * std::exp(-kI * (t * levels(n)));
  return psi;
}

PureState SpectralSystem::pure_state_at(double t) const { return PureState::normalized(state_at(t)); }

double SpectralSystem::mean_energy() const { return weights().dot(levels); }

double TimeBound::deviation_branch() const {
  return dh > 0.0 ? kPi / (2.0 * dh) : std::numeric_limits<double>::infinity();
}

double TimeBound::ground_gap_branch() const {
  return gap_to_ground > 0.0 ? kPi / (2.0 * gap_to_ground)
                             : std::numeric_limits<double>::infinity();
}

EnsembleState EnsembleState::make(std::vector<double> weights,
                                  std::vector<SpectralSystem> members) {
  require(!members.empty() && weights.size() == members.size(), ErrorKind::dimension,
          "ensemble: weights and members differ in length");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), ErrorKind::parameter, "ensemble: negative weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::parameter,
          fmt::format("ensemble: weights sum to {}", total));
  return {std::move(weights), std::move(members)};
}

double gaussian_density(const GaussianTimeLaw& law, double t) {
  const double x = t - law.t0;
  return std::sqrt(law.lambda / kPi) * std::exp(-law.lambda * x * x);
}

double window_mass(const GaussianTimeLaw& law) {
  return std::erf(std::sqrt(law.lambda) * law.dt);
}

TimeBound time_bound(const RealVector& levels, const RealVector& weights) {
  require(levels.size() > 0 && levels.size() == weights.size(), ErrorKind::dimension,
          "time_bound: levels and weights differ in length");
  require(levels.allFinite(), ErrorKind::parameter, "time_bound: non-finite level");
  require(std::abs(weights.sum() - 1.0) <= 1e-9 && weights.minCoeff() >= 0.0,
          ErrorKind::parameter, "time_bound: weights not normalized");
  const double mean = weights.dot(levels);
  double var = 0.0;
  for (Index i = 0; i < levels.size(); ++i) var += weights(i) * (levels(i) - mean) * (levels(i) - mean);
  TimeBound b;
  b.dh = std::sqrt(std::max(0.0, var));
  b.gap_to_ground = std::max(0.0, mean - levels.minCoeff());
  const double scale = std::max(1.0, levels.cwiseAbs().maxCoeff());
  if (b.dh <= 1e-14 * scale && b.gap_to_ground <= 1e-14 * scale)
    fail(ErrorKind::degenerate_clock, "time_bound: single populated ground level, no clock");
  const double dev = b.deviation_branch();
  const double gap = b.ground_gap_branch();
  b.tau_min = std::max(dev, gap);
  b.binding = dev >= gap ? BindingBranch::deviation : BindingBranch::ground_gap;
  return b;
}

ParameterChoice select_parameters(const TimeBound& bound, ParameterPolicy policy,
                                  std::optional<PaperModel> model,
                                  const AutomaticPolicy& config) {
  ParameterChoice c;
  c.constraint_form = "dt >= lambda^-1/2";
  if (policy == ParameterPolicy::paper_preset) {
    require(model.has_value(), ErrorKind::parameter, "paper preset requires a model");
    switch (*model) {
      case PaperModel::two_qubit: c.dt = 3.0; c.lambda = 1.0; break;
      case PaperModel::four_qubit: c.dt = 1.0; c.lambda = 2.0; break;
      case PaperModel::spin_bath: c.dt = 1.56; c.lambda = 1.0; break;
      case PaperModel::position: c.dt = 0.78; c.lambda = 3.0; break;
    }
  } else {
    require(std::isfinite(bound.tau_min) && bound.tau_min > 0.0, ErrorKind::parameter,
            "automatic parameters: tau_min is not finite");
    c.dt = config.safety * bound.tau_min / 2.0;
    const double base = std::max(1.0, 1.0 / (c.dt * c.dt));
    const double root = erf_inverse(config.min_window_mass) / c.dt;
    c.lambda = std::max(base, root * root);
    if (c.lambda > config.max_lambda)
      fail(ErrorKind::parameter,
           fmt::format("automatic parameters: window mass >= {} needs lambda = {:.3e} > {:.3e} "
                       "(tau_min = {:.3e} too small)",
                       config.min_window_mass, c.lambda, config.max_lambda, bound.tau_min));
  }
  if (std::isfinite(bound.tau_min) && !(bound.tau_min > 2.0 * c.dt))
    fail(ErrorKind::parameter,
         fmt::format("parameters violate tau_min > 2 dt (tau_min = {}, dt = {})", bound.tau_min, c.dt));
  if (c.dt * std::sqrt(c.lambda) < 1.0 - 1e-12)
    fail(ErrorKind::parameter,
         fmt::format("parameters violate dt >= lambda^-1/2 (dt = {}, lambda = {})", c.dt, c.lambda));
  c.window_mass = std::erf(std::sqrt(c.lambda) * c.dt);
  return c;
}

DensityMatrix sigma_analytic(const SpectralSystem& sys, const GaussianTimeLaw& law) {
  const Index d = sys.dim();
  ComplexMatrix s(d, d);
  for (Index n = 0; n < d; ++n) {
    s(n, n) = std::norm(sys.amplitudes(n));
    for (Index m = n + 1; m < d; ++m) {
      const double gap = sys.levels(n) - sys.levels(m);
      const Complex v = sys.amplitudes(n) * std::conj(sys.amplitudes(m)) *
                        std::exp(-kI * (law.t0 * gap)) * gaussian_factor(gap, law.lambda);
      s(n, m) = v;
      s(m, n) = std::conj(v);
    }
  }
  return validate_density(s);
}

DensityMatrix sigma_quadrature(const SpectralSystem& sys, const GaussianTimeLaw& law,
                               const QuadratureOptions& opts) {
  require(opts.nodes >= 2, ErrorKind::parameter,
          fmt::format("sigma_quadrature: nodes = {} < 2", opts.nodes));
  const double band = bandwidth(sys.levels);
  if (band * law.dt / double(opts.nodes) > opts.max_phase_per_node)
    fail(ErrorKind::resolution,
         fmt::format("sigma_quadrature: {} nodes cannot resolve bandwidth {} over half-window {}",
                     opts.nodes, band, law.dt));

  std::vector<Node> nodes;
  const double a = law.t0 - law.dt, b = law.t0 + law.dt;
  if (opts.tail_correction) {
    // rho(t) falls below exp(-40) relative to its peak beyond this reach.
    const double reach = std::sqrt(40.0 / law.lambda);
    if (reach > law.dt) {
      const double per_unit = double(opts.nodes) / (b - a);
      const auto tail_nodes = std::max<std::size_t>(
          kPanelOrder, std::size_t(std::ceil(per_unit * (reach - law.dt))));
      append_nodes(nodes, law.t0 - reach, a, tail_nodes, opts.rule);
      append_nodes(nodes, a, b, opts.nodes, opts.rule);
      append_nodes(nodes, b, law.t0 + reach, tail_nodes, opts.rule);
    } else {
      append_nodes(nodes, a, b, opts.nodes, opts.rule);
    }
  } else {
    append_nodes(nodes, a, b, opts.nodes, opts.rule);
  }

  std::vector<double> density(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    density[k] = nodes[k].w * gaussian_density(law, nodes[k].t);
  const double mass = opts.tail_correction ? 1.0 : pairwise_sum(density);

  const Index d = sys.dim();
  ComplexMatrix s(d, d);
  std::vector<Complex> terms(nodes.size());
  for (Index n = 0; n < d; ++n) {
    s(n, n) = std::norm(sys.amplitudes(n));
    for (Index m = n + 1; m < d; ++m) {
      const double gap = sys.levels(n) - sys.levels(m);
      for (std::size_t k = 0; k < nodes.size(); ++k)
        terms[k] = density[k] * std::exp(-kI * (nodes[k].t * gap));
      const Complex v = sys.amplitudes(n) * std::conj(sys.amplitudes(m)) * pairwise_sum(terms) / mass;
      s(n, m) = v;
      s(m, n) = std::conj(v);
    }
  }
  return validate_density(s);
}

double purity(const SpectralSystem& sys, const GaussianTimeLaw& law, PurityExponent exponent) {
  const RealVector w = sys.weights();
  std::vector<double> terms;
  terms.reserve(std::size_t(w.size() * w.size()));
  for (Index n = 0; n < w.size(); ++n)
    for (Index m = 0; m < w.size(); ++m) {
      const double gap = sys.levels(n) - sys.levels(m);
      const double expo = exponent == PurityExponent::squared ? gap * gap : std::abs(gap);
      terms.push_back(w(n) * w(m) * std::exp(-expo / (2.0 * law.lambda)));
    }
  return pairwise_sum(terms);
}

DensityMatrix coarse_time_mixture(const SpectralSystem& sys, double t0, double dt,
                                  const std::array<double, 3>& weights) {
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), ErrorKind::parameter, "coarse mixture: negative weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::parameter,
          fmt::format("coarse mixture: weights sum to {}", total));
  const std::array<double, 3> instants{t0 - dt, t0, t0 + dt};
  ComplexMatrix s = ComplexMatrix::Zero(sys.dim(), sys.dim());
  for (std::size_t i = 0; i < 3; ++i) {
    if (weights[i] == 0.0) continue;
    const ComplexVector psi = sys.state_at(instants[i]);
    s += weights[i] * psi * psi.adjoint();
  }
  return validate_density(s);
}

DensityMatrix apply_dynamical_map(const EnsembleState& ens, const GaussianTimeLaw& law) {
  const RealVector& levels = ens.members.front().levels;
  ComplexMatrix s = ComplexMatrix::Zero(levels.size(), levels.size());
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    const auto& member = ens.members[i];
    if (member.levels.size() != levels.size() ||
        (member.levels - levels).cwiseAbs().maxCoeff() > 1e-12)
      fail(ErrorKind::model, fmt::format("dynamical map: member {} has a different spectrum", i));
    s += ens.weights[i] * sigma_analytic(member, law).matrix();
  }
  return validate_density(s);
}

}  // namespace ltd::localtime
