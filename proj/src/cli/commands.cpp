#include <cmath>
#include <iostream>
#include <random>

#include <fmt/format.h>

#include "ltd/cli.hpp"
#include "ltd/models.hpp"
#include "params.hpp"

namespace ltd::cli {

using namespace ltd::models;

namespace {

models::LawChoice read_law(ParamReader& r) {
  LawChoice law;
  const auto policy = r.get<std::string>("policy", "paper_preset");
  if (policy == "paper_preset" || policy == "paper")
    law.policy = ParameterPolicy::paper_preset;
  else if (policy == "automatic")
    law.policy = ParameterPolicy::automatic;
  else
    fail(ErrorKind::parameter, fmt::format("unknown policy '{}'", policy));
  law.lambda = r.opt<double>("lambda");
  law.dt = r.opt<double>("dt");
  return law;
}

bool grid_given(const ParamReader& r) {
  return r.has("t0_start") || r.has("t0_stop") || r.has("t0_count");
}

TimeGrid read_grid(ParamReader& r, TimeGrid g) {
  if (!grid_given(r)) {
    r.opt<double>("t0_start");
    r.opt<double>("t0_stop");
    r.opt<std::int64_t>("t0_count");
    return g;
  }
  g.start = r.get<double>("t0_start", g.start);
  g.stop = r.get<double>("t0_stop", r.has("t0_stop") ? g.stop : g.start);
  const auto count = r.get<std::int64_t>("t0_count", r.has("t0_stop") ? std::int64_t(g.count) : 1);
  require(count >= 1, ErrorKind::parameter, "t0 count must be at least 1");
  g.count = std::size_t(count);
  return g;
}

std::pair<Complex, Complex> weight_pair(ParamReader& r, const std::string& key,
                                        std::pair<Complex, Complex> fallback) {
  const auto w = r.opt<double>(key);
  if (!w) return fallback;
  require(*w >= 0.0 && *w <= 1.0, ErrorKind::parameter, fmt::format("{} must lie in [0, 1]", key));
  return {Complex(std::sqrt(*w)), Complex(std::sqrt(1.0 - *w))};
}

std::size_t count_param(ParamReader& r, const std::string& key, std::size_t fallback) {
  const auto v = r.get<std::int64_t>(key, std::int64_t(fallback));
  require(v >= 0, ErrorKind::parameter, fmt::format("{} must be non-negative", key));
  return std::size_t(v);
}

LemmaOptions lemma_options(std::size_t threads) {
  LemmaOptions o;
  o.threads = threads;
  return o;
}

ScenarioReport run_two_qubit(ParamReader& r, std::size_t threads) {
  TwoQubitParams p;
  p.coupling = r.get<double>("coupling", p.coupling);
  p.b = weight_pair(r, "b_plus_weight", p.b);
  p.d = weight_pair(r, "d_plus_weight", p.d);
  p.t0 = r.get<double>("t0", p.t0);
  p.t0_grid = read_grid(r, p.t0_grid);
  p.law = read_law(r);
  p.lemma = lemma_options(threads);
  return two_qubit_scenario(p);
}

ScenarioReport run_four_qubit(ParamReader& r, std::size_t threads) {
  FourQubitParams p;
  p.b = weight_pair(r, "b_plus_weight", p.b);
  p.t0 = r.get<double>("t0", p.t0);
  p.t0_grid = read_grid(r, p.t0_grid);
  p.law = read_law(r);
  p.lemma = lemma_options(threads);
  return four_qubit_scenario(p);
}

void use_extended_spectrum(SpinBathSpec& s) {
  s.a_spectrum = RealVector{{2.0, 1.0, -1.0, -2.0}};
  s.b = ComplexVector::Constant(4, 0.5);
  s.coarse_map = RealVector{{2.0, 0.0, 0.0, -2.0}};
}

ScenarioReport run_spin_bath(ParamReader& r, std::size_t threads, std::uint64_t seed) {
  SpinBathParams p;
  const auto n = count_param(r, "n", 12);
  require(n >= 1, ErrorKind::parameter, "spin bath: n must be at least 1");
  const auto family = r.get<std::string>("family", "paper");
  if (family == "paper")
    p.spec = SpinBathSpec::paper(n);
  else if (family == "uniform")
    p.spec = SpinBathSpec::uniform_couplings(n, seed);
  else if (family == "degenerate")
    p.spec = SpinBathSpec::degenerate(n);
  else if (family == "three_qubit")
    p.spec = SpinBathSpec::three_qubit_bath();
  else
    fail(ErrorKind::parameter, fmt::format("unknown spin-bath family '{}'", family));

  const auto spectrum = r.get<std::string>("spectrum", "pm");
  if (spectrum == "extended")
    use_extended_spectrum(p.spec);
  else if (spectrum != "pm")
    fail(ErrorKind::parameter, fmt::format("unknown spectrum '{}'", spectrum));

  const auto mode = r.get<std::string>("mode", "automatic");
  if (mode == "automatic")
    p.mode = BathMode::automatic;
  else if (mode == "exact")
    p.mode = BathMode::exact;
  else if (mode == "monte_carlo")
    p.mode = BathMode::monte_carlo;
  else
    fail(ErrorKind::parameter, fmt::format("unknown bath mode '{}'", mode));

  p.mc_samples = count_param(r, "mc_samples", p.mc_samples);
  p.seed = seed;
  p.dynamics = r.get<bool>("dynamics", p.dynamics);
  p.uniqueness = r.get<bool>("uniqueness", p.uniqueness);
  p.max_shells = count_param(r, "max_shells", p.max_shells);
  if (grid_given(r)) p.t0_grid = read_grid(r, TimeGrid{});
  else read_grid(r, TimeGrid{});
  p.law = read_law(r);
  p.lemma = lemma_options(threads);
  return spin_bath_scenario(p);
}

ScenarioReport run_position(ParamReader& r) {
  PositionParams p;
  p.x_points = count_param(r, "x_points", p.x_points);
  p.p_points = count_param(r, "p_points", p.p_points);
  p.x_range = r.get<double>("x_range", p.x_range);
  p.p_range = r.get<double>("p_range", p.p_range);
  p.sigma_object = r.get<double>("sigma_object", p.sigma_object);
  p.sigma_apparatus = r.get<double>("sigma_apparatus", p.sigma_apparatus);
  p.separations = r.get<std::vector<double>>("separations", p.separations);
  p.coherent_separation = r.get<double>("coherent_separation", p.coherent_separation);
  p.t0_grid = read_grid(r, p.t0_grid);
  p.law = read_law(r);
  return position_scenario(p);
}

ScenarioReport run_wcm(ParamReader& r) {
  WcmParams p;
  p.spec.cutoff = count_param(r, "cutoff", p.spec.cutoff);
  if (const auto w = r.opt<std::vector<double>>("object_weights")) {
    p.spec.c.resize(Index(w->size()));
    for (std::size_t i = 0; i < w->size(); ++i) {
      require((*w)[i] >= 0.0, ErrorKind::parameter, "object_weights must be non-negative");
      p.spec.c(Index(i)) = std::sqrt((*w)[i]);
    }
  }
  p.spec.epsilon = {r.get<double>("epsilon_re", p.spec.epsilon.real()),
                    r.get<double>("epsilon_im", p.spec.epsilon.imag())};
  p.t_pre = r.get<double>("t_pre", p.t_pre);
  p.overlap_threshold = r.get<double>("overlap_threshold", p.overlap_threshold);
  p.env_points = count_param(r, "env_points", p.env_points);
  p.env_range = r.get<double>("env_range", p.env_range);
  p.t0 = r.get<double>("t0", p.t0);
  p.law = read_law(r);
  return wcm_scenario(p);
}

ScenarioReport run_clock(ParamReader& r) {
  ClockParams p;
  p.t = r.get<double>("t", p.t);
  p.mass = r.get<double>("mass", p.mass);
  p.velocity = r.get<double>("velocity", p.velocity);
  p.x0 = r.get<double>("x0", p.x0);
  p.sigma = r.get<double>("sigma", p.sigma);
  p.points = count_param(r, "points", p.points);
  return clock_scenario(p);
}

}  // namespace

ScenarioReport run_scenario(const RunConfig& cfg) {
  std::string scenario, preset;
  ParamReader r(resolved_object(cfg, scenario, preset));
  const auto seed_value = r.get<std::int64_t>("seed", 0);
  const auto seed = std::uint64_t(seed_value);
  const std::size_t threads = count_param(r, "threads", env_threads());
  require(threads >= 1, ErrorKind::parameter, "threads must be at least 1");

  ScenarioReport rep;
  if (scenario == "two_qubit") rep = run_two_qubit(r, threads);
  else if (scenario == "four_qubit") rep = run_four_qubit(r, threads);
  else if (scenario == "spin_bath") rep = run_spin_bath(r, threads, seed);
  else if (scenario == "position") rep = run_position(r);
  else if (scenario == "wcm") rep = run_wcm(r);
  else rep = run_clock(r);
  r.finish();
  rep.param("preset", preset);
  return rep;
}

std::string serialize(const ScenarioReport& rep, Format format) {
  return format == Format::json ? to_json(rep) : to_csv(rep);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto text = serialize(run_scenario(cfg), cfg.format);
    if (cfg.out)
      write_atomic(*cfg.out, text);
    else
      out << text;
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnwritable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

// ---------------------------------------------------------------- validate

namespace {

double unit_draw(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TrialResult validate_trial(std::uint64_t trial_seed, const ValidateOptions& opts) {
  std::mt19937_64 rng(trial_seed);
  TrialResult res;
  res.seed = trial_seed;
  res.dim = 1 + std::size_t(rng() % opts.dim_cap);
  const Index n = Index(res.dim);

  RealVector levels(n);
  ComplexVector amps(n);
  for (Index i = 0; i < n; ++i) {
    levels(i) = -2.0 + 4.0 * unit_draw(rng);
    amps(i) = Complex(2.0 * unit_draw(rng) - 1.0, 2.0 * unit_draw(rng) - 1.0);
  }
  amps /= amps.norm();
  const double t0 = 10.0 * unit_draw(rng);
  const double lambda = 0.5 + 3.5 * unit_draw(rng);
  const auto law = localtime::GaussianTimeLaw::make(t0, lambda, 1.5 / std::sqrt(lambda));
  const auto sys = localtime::SpectralSystem::make(levels, amps);

  const auto analytic = localtime::sigma_analytic(sys, law);
  localtime::QuadratureOptions q;
  q.nodes = 1024;
  q.tail_correction = true;
  const auto quad = localtime::sigma_quadrature(sys, law, q);
  res.sigma_deviation = (analytic.matrix() - quad.matrix()).norm();

  const auto exponent = opts.inject_unsquared_exponent ? localtime::PurityExponent::literal_unsquared
                                                       : localtime::PurityExponent::squared;
  res.purity_deviation = std::abs(localtime::purity(sys, law, exponent) - analytic.purity());

  double energy = 0.0, initial = 0.0;
  for (Index i = 0; i < n; ++i) {
    energy += analytic.matrix()(i, i).real() * levels(i);
    initial += std::norm(amps(i)) * levels(i);
  }
  res.energy_deviation = std::abs(energy - initial);
  res.pass = res.sigma_deviation < 1e-6 && res.purity_deviation < 1e-12 && res.energy_deviation < 1e-10;
  return res;
}

std::vector<TrialResult> validate(const ValidateOptions& opts) {
  require(opts.trials >= 1, ErrorKind::parameter, "validate: trials must be at least 1");
  require(opts.dim_cap >= 1, ErrorKind::parameter, "validate: dimension cap must be at least 1");
  std::vector<TrialResult> out;
  out.reserve(opts.trials);
  for (std::size_t k = 0; k < opts.trials; ++k) out.push_back(validate_trial(opts.seed + k, opts));
  return out;
}

int validate_command(const ValidateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto results = validate(opts);
    std::size_t failed = 0;
    double worst_sigma = 0.0, worst_purity = 0.0, worst_energy = 0.0;
    for (const auto& r : results) {
      worst_sigma = std::max(worst_sigma, r.sigma_deviation);
      worst_purity = std::max(worst_purity, r.purity_deviation);
      worst_energy = std::max(worst_energy, r.energy_deviation);
      if (!r.pass) {
        ++failed;
        err << fmt::format(
            "FAIL trial seed {} dim {}: sigma {:.3e} purity {:.3e} energy {:.3e} "
            "(replay with --seed {} --trials 1)\n",
            r.seed, r.dim, r.sigma_deviation, r.purity_deviation, r.energy_deviation, r.seed);
      }
    }
    out << fmt::format("{} trials, {} failed; worst sigma {:.3e}, purity {:.3e}, energy {:.3e}\n",
                       results.size(), failed, worst_sigma, worst_purity, worst_energy);
    return failed == 0 ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace ltd::cli
