#pragma once

#include <optional>
#include <string>

#include "ltd/bipartite.hpp"
#include "ltd/models.hpp"

namespace ltd::models::detail {

/// Picks (dt, lambda) for a scenario and records the choice in the report.
GaussianTimeLaw resolve_law(ScenarioReport& rep, const LawChoice& choice,
                            const localtime::TimeBound& bound,
                            std::optional<localtime::PaperModel> model, double t0);

/// Large-t0 lemma diagnostics for every branch pair, recorded under "lemma.".
bipartite::LemmaReport add_lemma(ScenarioReport& rep, const bipartite::BranchFamily& family,
                                 const LemmaOptions& opts);

/// Smallest and largest Gaussian factor over nonzero level gaps.
FactorRange extreme_factors(const RealVector& levels, double lambda);

std::string pair_label(double a, double b);

std::vector<double> to_std(const RealVector& v);

}  // namespace ltd::models::detail
