#include "common.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace ltd::models {

std::vector<double> TimeGrid::points() const {
  require(count >= 1, ErrorKind::parameter, "t0 grid: count must be at least 1");
  require(std::isfinite(start) && std::isfinite(stop), ErrorKind::parameter,
          "t0 grid: non-finite bound");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? start : start + (stop - start) * double(k) / double(count - 1);
  return out;
}

namespace detail {

namespace {

const char* policy_name(ParameterPolicy p) {
  return p == ParameterPolicy::paper_preset ? "paper" : "automatic";
}

}  // namespace

GaussianTimeLaw resolve_law(ScenarioReport& rep, const LawChoice& choice,
                            const localtime::TimeBound& bound,
                            std::optional<localtime::PaperModel> model, double t0) {
  double dt = 0.0, lambda = 0.0;
  std::string policy;
  std::string form = "dt >= lambda^-1/2";
  if (choice.lambda && choice.dt) {
    dt = *choice.dt;
    lambda = *choice.lambda;
    policy = "explicit";
  } else {
    const auto pc = localtime::select_parameters(bound, choice.policy, model);
    dt = choice.dt.value_or(pc.dt);
    lambda = choice.lambda.value_or(pc.lambda);
    policy = policy_name(choice.policy);
    if (choice.dt || choice.lambda) policy += "+override";
    form = pc.constraint_form;
  }
  const auto law = GaussianTimeLaw::make(t0, lambda, dt);
  rep.param("policy", policy);
  rep.param("dt", law.dt);
  rep.param("lambda", law.lambda);
  rep.param("t0", law.t0);
  rep.param("constraint_form", form);
  rep.diag("window_mass", localtime::window_mass(law));
  const bool holds = (!std::isfinite(bound.tau_min) || bound.tau_min > 2.0 * law.dt) &&
                     law.dt * std::sqrt(law.lambda) >= 1.0 - 1e-12;
  rep.verdict("window_constraints_hold", holds, "tau_min > 2 dt and " + form, 0.0);
  return law;
}

bipartite::LemmaReport add_lemma(ScenarioReport& rep, const bipartite::BranchFamily& family,
                                 const LemmaOptions& opts) {
  const auto samples = bipartite::large_time_samples(family, 8);
  const auto lr = bipartite::lemma41_report(family, samples.t0, samples.T, opts);
  rep.param("lemma.T", samples.T);
  rep.param("lemma.t0_samples", samples.t0);
  rep.param("lemma.window_samples", std::int64_t(opts.window_samples));
  double worst_overlap = 0.0, worst_trace = 0.0;
  for (const auto& pd : lr.pairs) {
    const auto tag = fmt::format("[{},{}]", pd.alpha, pd.alpha_p);
    rep.diag("lemma.mean_overlap" + tag, pd.mean_overlap);
    rep.diag("lemma.mean_trace" + tag, pd.mean_trace);
    rep.diag("lemma.trace_second_moment" + tag, pd.trace_second_moment);
    rep.diag("lemma.max_overlap" + tag, pd.max_overlap);
    rep.diag("lemma.max_trace" + tag, pd.max_trace);
    rep.diag("lemma.fraction_overlap_below" + tag, pd.fraction_overlap_below);
    rep.diag("lemma.fraction_trace_below" + tag, pd.fraction_trace_below);
    worst_overlap = std::max(worst_overlap, pd.mean_overlap);
    worst_trace = std::max(worst_trace, pd.mean_trace);
  }
  rep.diag("lemma.worst_mean_overlap", worst_overlap);
  rep.diag("lemma.worst_mean_trace", worst_trace);
  rep.verdict("lemma_satisfied", lr.satisfied, "lemma.worst_mean_overlap, lemma.worst_mean_trace",
              lr.epsilon);
  return lr;
}

FactorRange extreme_factors(const RealVector& levels, double lambda) {
  double lo = INFINITY, hi = 0.0;
  for (Index i = 0; i < levels.size(); ++i)
    for (Index j = i + 1; j < levels.size(); ++j) {
      const double gap = std::abs(levels(i) - levels(j));
      if (gap < 1e-12) continue;
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
    }
  if (!std::isfinite(lo)) return {1.0, 1.0};
  return {localtime::gaussian_factor(hi, lambda), localtime::gaussian_factor(lo, lambda)};
}

std::string pair_label(double a, double b) {
  return fmt::format("[{},{}]", format_number(a), format_number(b));
}

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail
}  // namespace ltd::models
