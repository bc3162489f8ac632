#pragma once

// Parameterized decoherence and measurement scenarios, each producing a
// ScenarioReport.

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltd/bipartite.hpp"
#include "ltd/localtime.hpp"
#include "ltd/report.hpp"

namespace ltd::models {

using bipartite::LemmaOptions;
using bipartite::SeparableInteraction;
using localtime::GaussianTimeLaw;
using localtime::ParameterPolicy;

struct TimeGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  /// count >= 1; count == 1 gives {start}.
  std::vector<double> points() const;
};

/// Window parameters: either a preset pair or the automatic rule, with
/// optional explicit overrides of lambda and dt.
struct LawChoice {
  ParameterPolicy policy = ParameterPolicy::paper_preset;
  std::optional<double> lambda;
  std::optional<double> dt;
};

// ---------------------------------------------------------------- two qubits

struct TwoQubitParams {
  double coupling = 1.0;  // C
  std::pair<Complex, Complex> d{0.5 * std::numbers::sqrt2, 0.5 * std::numbers::sqrt2};
  std::pair<Complex, Complex> b{0.5 * std::numbers::sqrt2, 0.5 * std::numbers::sqrt2};
  LawChoice law;
  double t0 = 10.0;
  TimeGrid t0_grid{0.0, 4.0 * std::numbers::pi, 20};
  LemmaOptions lemma;
};

ScenarioReport two_qubit_scenario(const TwoQubitParams& p);

// --------------------------------------------------------------- four qubits

struct FourQubitParams {
  std::pair<Complex, Complex> b{0.5 * std::numbers::sqrt2, 0.5 * std::numbers::sqrt2};
  LawChoice law;
  double t0 = 10.0;
  TimeGrid t0_grid{0.0, 8.0 * std::numbers::pi, 20};
  LemmaOptions lemma;
};

/// S1z (S2z + S3z + S4z) on the four bath shells with degeneracies 1, 3, 3, 1.
SeparableInteraction four_qubit_interaction();
ScenarioReport four_qubit_scenario(const FourQubitParams& p);

// ----------------------------------------------------------------- spin bath

struct SpinBathSpec {
  RealVector couplings;          // g_k
  double coupling_weight = 1.0;  // Hamiltonian couplings are G_k = w g_k
  /// When set, g_k is proportional to these integers, so configuration
  /// energies are grouped exactly by sum_k key_k alpha_k.
  std::optional<std::vector<std::int64_t>> integer_keys;
  RealVector a_spectrum;  // object eigenvalues
  ComplexVector b;        // object amplitudes, one per eigenvalue
  std::vector<std::pair<Complex, Complex>> bath;  // (a_k, b_k) per bath qubit
  /// Image of each object eigenvalue under a coarse graining of the spectrum.
  std::optional<RealVector> coarse_map;
  std::string family = "custom";

  std::size_t n() const { return std::size_t(couplings.size()); }
  /// G_k
  RealVector effective_couplings() const { return coupling_weight * couplings; }
  /// |a_k|^2, the probability of alpha_k = +1.
  RealVector up_probabilities() const;
  void validate() const;

  /// g_k = k/N, weight 1/N, a = {+1, -1}, |a_k| = |b_k|.
  static SpinBathSpec paper(std::size_t n);
  /// g_k drawn uniformly from (0, 1) with the given seed, weight 1/N.
  static SpinBathSpec uniform_couplings(std::size_t n, std::uint64_t seed);
  /// Degenerate object weights with an asymmetric bath (|a_k|^2 = 0.8),
  /// g_k = p_k / 100 for the k-th prime p_k, weight 1.
  static SpinBathSpec degenerate(std::size_t n = 12);
  /// Three bath qubits with G_k = 1/4: the four-qubit model in bath form.
  static SpinBathSpec three_qubit_bath();
};

enum class BathMode { automatic, exact, monte_carlo };

/// Bath configurations grouped by collective energy E = sum_k G_k alpha_k.
struct BathShells {
  RealVector energies;  // ascending
  RealVector weights;   // probabilities
  bool exact = true;
  std::size_t samples = 0;  // Monte-Carlo configurations drawn
};

/// Exact mode enumerates all 2^N configurations (N <= 24); Monte-Carlo mode
/// draws `samples` configurations from a mt19937_64 stream seeded with `seed`.
BathShells bath_shells(const SpinBathSpec& spec, BathMode mode, std::size_t samples = 100000,
                       std::uint64_t seed = 0);

/// h_{i beta} = a_i E_beta.
SeparableInteraction spin_bath_interaction(const SpinBathSpec& spec, const BathShells& shells);

struct SpinBathBound {
  double delta_h_int = 0.0;   // sqrt(w sum g_k^2)
  double delta_h_true = 0.0;  // standard deviation of the effective Hamiltonian
  double gap_to_ground = 0.0; // <H> - E_g
  double tau_min = 0.0;       // from delta_h_int and gap_to_ground
};

SpinBathBound spin_bath_bound(const SpinBathSpec& spec);

struct FactorRange {
  double smallest = 1.0;
  double largest = 1.0;
};

/// Gaussian factors between object eigenvalues a_i, a_j over uniform bath
/// configurations (every alpha_k equal), where E = +-sum_k G_k.
FactorRange uniform_configuration_factors(double a_i, double a_j, double coupling_sum,
                                          double lambda);

struct MonteCarloEstimate {
  Complex mean;
  double standard_error = 0.0;
};

/// tr rho^A_{ij}(t0) estimated from `samples` configurations.
MonteCarloEstimate monte_carlo_trace(const SpinBathSpec& spec, Index i, Index j, double t0,
                                     double lambda, std::size_t samples, std::uint64_t seed);

struct SpinBathParams {
  SpinBathSpec spec = SpinBathSpec::paper(12);
  BathMode mode = BathMode::automatic;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  LawChoice law;
  std::optional<TimeGrid> t0_grid;  // defaults to the large-t0 samples
  bool dynamics = true;             // branch operators, lemma and trace trajectory
  bool uniqueness = false;          // pointer-basis scan (degenerate |b|^2 only)
  LemmaOptions lemma;
  std::size_t max_shells = 400;  // cap on matrix diagnostics in Monte-Carlo mode
};

ScenarioReport spin_bath_scenario(const SpinBathParams& p);

// ------------------------------------------------------ position measurement

struct GridWavepacket {
  RealVector grid;  // uniform
  ComplexVector amplitudes;
  double sigma = 1.0;

  /// Normalized Gaussian (pi s^2)^{-1/4} exp(-(x - c)^2 / 2 s^2 + i k x),
  /// renormalized on the grid. A single-point grid sits at the interval midpoint.
  static GridWavepacket gaussian(double lo, double hi, std::size_t points, double center,
                                 double spread, double wavenumber = 0.0);
  double spacing() const;
  /// sum |psi|^2 dx (1 for a single-point grid).
  double norm2() const;
  void validate() const;
};

struct PositionParams {
  std::size_t x_points = 128;
  std::size_t p_points = 128;
  double x_range = 10.0;  // grid on [-x_range, x_range]
  double p_range = 10.0;
  double sigma_object = 1.0;
  double sigma_apparatus = 1.0;
  LawChoice law;
  TimeGrid t0_grid{0.0, 3.0, 121};
  std::vector<double> separations{1.0, 2.0};  // x - x' pairs for decay traces
  double coherent_separation = 4.0;
};

/// Closed-form moments I_n (n = 0..n_max) of the Gaussian-weighted integral
/// int x^n exp(-(x - x0)^2 / 2 s^2 - i x kappa) dx.
std::vector<Complex> gaussian_moments(double x0, double s2, double kappa, std::size_t n_max);

/// <psi_i| x^n |psi_j> for normalized coherent states, closed form.
Complex coherent_matrix_element(double x_i, double s_i, double p_i, double x_j, double s_j,
                                double p_j, std::size_t n);

ScenarioReport position_scenario(const PositionParams& p);

// ------------------------------------------------------------------- WCM

struct FockSpec {
  std::size_t cutoff = 64;  // D
  ComplexVector c;          // object amplitudes over |n>, n = 0..size-1
  Complex epsilon{1.0, 0.0};
  ComplexVector kappa;      // bath couplings, reported only

  void validate() const;
};

/// Truncated, renormalized coherent state; throws a cutoff error when the
/// discarded tail exceeds 1e-8.
ComplexVector coherent_state(Complex beta, std::size_t cutoff);

struct WcmParams {
  FockSpec spec;
  double t_pre = 8.0;  // premeasurement duration
  double overlap_threshold = 0.01;
  LawChoice law;
  double t0 = 2.0;
  std::size_t env_points = 128;
  double env_range = 10.0;

  WcmParams();
};

ScenarioReport wcm_scenario(const WcmParams& p);

// ------------------------------------------------------------------- clock

struct ClockReading {
  double x_mean = 0.0;
  double v_mean = 0.0;
  double t_estimate = 0.0;
};

/// Spectral free evolution of `packet` for time t; t_estimate = <x(t)> / <v>.
ClockReading free_particle_clock(const GridWavepacket& packet, double mass, double t);

struct ClockParams {
  double t = 50.0;
  double mass = 1.0;
  double velocity = 1.0;
  double x0 = 0.0;
  double sigma = 1.0;
  std::size_t points = 8192;
};

/// Builds a grid wide enough for the spread packet and runs the clock.
ScenarioReport clock_scenario(const ClockParams& p);

}  // namespace ltd::models
