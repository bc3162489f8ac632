#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "ltd/models.hpp"
#include "oracles.hpp"

using namespace ltd;
using namespace ltd::models;

namespace {

constexpr double kPi = std::numbers::pi;

double value_of(const ScenarioReport& r, const std::string& label) {
  const Quantity* q = r.find(label);
  REQUIRE_MESSAGE(q != nullptr, label);
  return q->value;
}

bool verdict_of(const ScenarioReport& r, const std::string& label) {
  const Verdict* v = r.find_verdict(label);
  REQUIRE_MESSAGE(v != nullptr, label);
  return v->value;
}

// Brute-force enumeration of the bath configurations.
std::map<double, double> enumerate_shells(const RealVector& g, const RealVector& up) {
  std::map<double, double> out;
  const Index n = g.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    double e = 0.0, p = 1.0;
    for (Index k = 0; k < n; ++k) {
      const bool plus = (mask >> k) & 1;
      e += plus ? g(k) : -g(k);
      p *= plus ? up(k) : 1.0 - up(k);
    }
    // Merge energies equal up to rounding.
    auto it = out.lower_bound(e - 1e-12);
    if (it != out.end() && std::abs(it->first - e) < 1e-12)
      it->second += p;
    else
      out[e] += p;
  }
  return out;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("two-qubit report reproduces the published factor and bound") {
  const auto r = two_qubit_scenario(TwoQubitParams{});
  CHECK(value_of(r, "coherence") == doctest::Approx(std::exp(-1.0 / 16)).epsilon(1e-15));
  CHECK(std::abs(value_of(r, "coherence") - 0.939) < 1e-3);
  CHECK(value_of(r, "fidelity_deficit") <= 0.062);
  CHECK(value_of(r, "trace_closed_form_deviation") < 1e-12);
  CHECK(value_of(r, "assembly_deviation") < 1e-12);
  CHECK_FALSE(verdict_of(r, "lemma_satisfied"));

  TwoQubitParams sharp;
  sharp.law.lambda = 1e12;
  sharp.law.dt = 1e-3;
  CHECK(value_of(two_qubit_scenario(sharp), "fidelity") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("four-qubit factors, bounds and trace trajectory") {
  const auto r = four_qubit_scenario(FourQubitParams{});
  CHECK(value_of(r, "smallest") == doctest::Approx(std::exp(-9.0 / 32)).epsilon(1e-14));
  CHECK(value_of(r, "largest") == doctest::Approx(std::exp(-1.0 / 32)).epsilon(1e-14));
  const double f = value_of(r, "fidelity");
  CHECK(f > value_of(r, "fidelity_lower_bound"));
  CHECK(f < value_of(r, "fidelity_upper_bound"));
  CHECK_FALSE(verdict_of(r, "lemma_satisfied"));

  const auto grid = FourQubitParams{}.t0_grid.points();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const double closed = 0.25 * std::cos(1.5 * t) * std::exp(-9.0 / 32) + 0.75 * std::cos(0.5 * t) * std::exp(-1.0 / 32);
    CHECK(std::abs(value_of(r, "trace_pm[" + std::to_string(k) + "].re") - closed) < 1e-10);
  }
}

TEST_CASE("exact bath shells match brute-force enumeration") {
  auto spec = SpinBathSpec::uniform_couplings(7, 3);
  const auto shells = bath_shells(spec, BathMode::exact);
  const auto ref = enumerate_shells(spec.effective_couplings(), spec.up_probabilities());
  REQUIRE(std::size_t(shells.energies.size()) == ref.size());
  Index k = 0;
  for (const auto& [e, p] : ref) {
    CHECK(shells.energies(k) == doctest::Approx(e).epsilon(1e-12));
    CHECK(shells.weights(k) == doctest::Approx(p).epsilon(1e-12));
    ++k;
  }
  CHECK(shells.weights.sum() == doctest::Approx(1.0));

  const auto grouped = bath_shells(SpinBathSpec::paper(12), BathMode::exact);
  const auto brute = enumerate_shells(SpinBathSpec::paper(12).effective_couplings(),
                                      SpinBathSpec::paper(12).up_probabilities());
  CHECK(std::size_t(grouped.energies.size()) == brute.size());
}

TEST_CASE("three-qubit bath reproduces the four-qubit model") {
  const auto spec = SpinBathSpec::three_qubit_bath();
  const auto shells = bath_shells(spec, BathMode::exact);
  const auto inter = spin_bath_interaction(spec, shells);
  const auto direct = four_qubit_interaction();
  REQUIRE(inter.dim_a() == 4);
  // Shell weights 1/8, 3/8, 3/8, 1/8 and levels a_i E_beta.
  const double w[] = {0.125, 0.375, 0.375, 0.125};
  for (Index k = 0; k < 4; ++k) CHECK(shells.weights(k) == doctest::Approx(w[k]));
  ComplexVector d = shells.weights.cwiseSqrt().cast<Complex>();
  for (double t0 : {0.0, 1.3, 7.7, 20.0}) {
    const Complex a = bipartite::branch_trace(inter, d, 0, 1, t0, 2.0);
    const Complex b = bipartite::branch_trace(direct, d, 0, 1, t0, 2.0);
    CHECK(std::abs(a - b) < 1e-14);
  }
}

TEST_CASE("Monte-Carlo trace agrees with the exact shells") {
  const auto spec = SpinBathSpec::paper(12);
  const auto shells = bath_shells(spec, BathMode::exact);
  const auto inter = spin_bath_interaction(spec, shells);
  const ComplexVector d = shells.weights.cwiseSqrt().cast<Complex>();
  for (double t0 : {0.5, 3.0, 40.0}) {
    const Complex exact = bipartite::branch_trace(inter, d, 0, 1, t0, 1.0);
    const auto mc = monte_carlo_trace(spec, 0, 1, t0, 1.0, 20000, 5);
    CHECK(mc.standard_error > 0.0);
    CHECK(std::abs(mc.mean - exact) < 3 * std::sqrt(2.0) * mc.standard_error);
  }
  // Same seed, same stream.
  const auto a = monte_carlo_trace(spec, 0, 1, 2.0, 1.0, 1000, 9);
  const auto b = monte_carlo_trace(spec, 0, 1, 2.0, 1.0, 1000, 9);
  CHECK(a.mean == b.mean);
}

TEST_CASE("spin-bath bound and uniform-configuration factors") {
  for (std::size_t n : {12u, 1000u}) {
    const auto b = spin_bath_bound(SpinBathSpec::paper(n));
    const double nn = double(n);
    CHECK(b.delta_h_int == doctest::Approx(std::sqrt((nn + 1) * (2 * nn + 1) / (6 * nn * nn))).epsilon(1e-12));
    CHECK(b.gap_to_ground == doctest::Approx((nn + 1) / (2 * nn)).epsilon(1e-12));
  }
  const auto big = spin_bath_bound(SpinBathSpec::paper(1000));
  CHECK(std::abs(big.delta_h_int * std::sqrt(3.0) - 1.0) < 0.01);

  const auto pm = uniform_configuration_factors(1, -1, 0.5, 1.0);
  CHECK(pm.smallest == doctest::Approx(std::exp(-0.25)));
  const auto p21 = uniform_configuration_factors(2, -1, 0.5, 1.0);
  CHECK(p21.smallest == doctest::Approx(std::exp(-9.0 / 16)));
  CHECK(p21.largest == doctest::Approx(std::exp(-1.0 / 16)));
  const auto p22 = uniform_configuration_factors(2, -2, 0.5, 1.0);
  CHECK(p22.smallest == doctest::Approx(std::exp(-1.0)));
  CHECK(p22.largest == doctest::Approx(1.0));
}

TEST_CASE("spin-bath scenario at N = 12") {
  SpinBathParams p;
  p.spec = SpinBathSpec::paper(12);
  const auto r = spin_bath_scenario(p);
  CHECK(value_of(r, "lemma.worst_mean_trace") < 0.05);
  CHECK(verdict_of(r, "lemma_satisfied"));
  CHECK(verdict_of(r, "classical_classical"));
  CHECK(value_of(r, "mutual_information") <= value_of(r, "object_entropy") + 1e-10);

  SpinBathParams bad = p;
  bad.spec.b = ComplexVector::Ones(2);
  CHECK_THROWS_AS(spin_bath_scenario(bad), Error);
}

TEST_CASE("gaussian_moments and coherent matrix elements against Simpson") {
  const double x0 = 0.7, s2 = 1.3, kappa = 0.9;
  const auto m = gaussian_moments(x0, s2, kappa, 3);
  for (std::size_t n = 0; n <= 3; ++n) {
    const auto ref = oracle::simpson(
        [&](double x) { return std::pow(x, double(n)) * std::exp(oracle::C(-(x - x0) * (x - x0) / (2 * s2), -x * kappa)); },
        -30, 30, 20000);
    CHECK(std::abs(m[n] - ref) < 1e-9);
  }

  auto psi = [](double c, double s, double p) {
    return [=](double x) {
      return std::pow(kPi * s * s, -0.25) * std::exp(oracle::C(-(x - c) * (x - c) / (2 * s * s), p * x));
    };
  };
  const auto a = psi(-1.0, 1.0, 0.4), b = psi(1.5, 0.8, -0.2);
  for (std::size_t n : {0u, 1u, 2u}) {
    const auto ref = oracle::simpson([&](double x) { return std::conj(a(x)) * std::pow(x, double(n)) * b(x); }, -30, 30, 20000);
    CHECK(std::abs(coherent_matrix_element(-1.0, 1.0, 0.4, 1.5, 0.8, -0.2, n) - ref) < 1e-9);
  }
  // Unit spreads at separation 4: |<psi_i|psi_j>| = exp(-4).
  CHECK(std::abs(coherent_matrix_element(0, 1, 0, 4, 1, 0, 0)) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("position scenario verdicts and single momentum") {
  PositionParams p;
  p.x_points = 64;
  p.p_points = 64;
  p.t0_grid = {0.0, 0.2, 9};
  const auto r = position_scenario(p);
  CHECK(value_of(r, "tau_min_half") == doctest::Approx(kPi / 4));
  for (const auto& v : r.verdicts) CHECK_MESSAGE(v.value, v.label);

  PositionParams one = p;
  one.p_points = 1;
  const auto r1 = position_scenario(one);
  CHECK(verdict_of(r1, "single_momentum_no_decoherence"));
}

TEST_CASE("coherent_state amplitudes") {
  const Complex beta(1.2, -0.7);
  const auto v = coherent_state(beta, 40);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  double lf = 0.0;  // log n!
  for (Index n = 0; n < 10; ++n) {
    if (n > 0) lf += std::log(double(n));
    const Complex expect = std::exp(-std::norm(beta) / 2) * std::pow(beta, double(n)) * std::exp(-lf / 2);
    CHECK(std::abs(v(n) - expect) < 1e-12);
  }
  try {
    coherent_state(Complex(6.0, 0.0), 20);
    FAIL("expected a cutoff error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cutoff);
  }
}

TEST_CASE("WCM premeasurement and reduced object state") {
  WcmParams p;
  p.t_pre = 6.0;
  p.overlap_threshold = 0.0125;
  p.env_points = 64;
  const auto r = wcm_scenario(p);
  CHECK(value_of(r, "overlap[0,1]") == doctest::Approx(std::exp(-4.5)).epsilon(1e-10));
  CHECK(verdict_of(r, "premeasurement_complete"));
  CHECK(verdict_of(r, "rho_o_diagonal_exact"));

  WcmParams pure = p;
  pure.spec.c = ComplexVector::Zero(2);
  pure.spec.c(0) = 1.0;
  const auto rp = wcm_scenario(pure);
  CHECK(value_of(rp, "rho_o.purity") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free-particle clock") {
  ClockParams p;
  const auto r = clock_scenario(p);
  CHECK(std::abs(value_of(r, "t_estimate") - 50.0) < 1e-6);

  ClockParams shifted = p;
  shifted.x0 = 5.0;
  CHECK(std::abs(value_of(clock_scenario(shifted), "t_estimate") - 55.0) < 1e-6);

  const auto packet = GridWavepacket::gaussian(-40, 40, 2048, 0.0, 1.0, 1.0);
  const auto early = free_particle_clock(packet, 1.0, 1e-6);
  CHECK(std::abs(early.t_estimate) < 1e-5);

  const auto still = GridWavepacket::gaussian(-40, 40, 2048, 0.0, 1.0, 0.0);
  try {
    free_particle_clock(still, 1.0, 5.0);
    FAIL("expected an undefined-clock error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_clock);
  }

  const auto again = clock_scenario(p);
  CHECK(to_json(again) == to_json(r));
}

}  // TEST_SUITE
