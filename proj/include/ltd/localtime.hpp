#pragma once

// Gaussian local-time law and the time-averaged state sigma.
//
// All energies and times use hbar = 1. The readout instant t is distributed
// as rho(t) = sqrt(lambda/pi) exp(-lambda (t - t0)^2), nominally restricted
// to the window [t0 - dt, t0 + dt].

#include <array>
#include <cmath>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "ltd/qcore.hpp"

namespace ltd::localtime {

struct GaussianTimeLaw {
  double t0 = 0.0;
  double lambda = 1.0;  // inverse time squared
  double dt = 1.0;      // half-window

  /// Checks lambda > 0, dt > 0 and finiteness.
  static GaussianTimeLaw make(double t0, double lambda, double dt);
  GaussianTimeLaw at(double new_t0) const { return {new_t0, lambda, dt}; }
};

/// Energy eigenvalues h_n with initial amplitudes c_n in that eigenbasis.
struct SpectralSystem {
  RealVector levels;
  ComplexVector amplitudes;
  std::vector<std::string> basis_labels;

  static SpectralSystem make(RealVector levels, ComplexVector amplitudes,
                             std::vector<std::string> labels = {});
  Index dim() const { return levels.size(); }
  /// |c_n|^2
  RealVector weights() const;
  /// U(t) |Phi>, with U(t) = exp(-i t H).
  ComplexVector state_at(double t) const;
  PureState pure_state_at(double t) const;
  /// sum |c_n|^2 h_n
  double mean_energy() const;
};

enum class BindingBranch { deviation, ground_gap };

struct TimeBound {
  double tau_min = 0.0;
  double dh = 0.0;             // energy standard deviation
  double gap_to_ground = 0.0;  // <H> - E_g
  BindingBranch binding = BindingBranch::deviation;

  double deviation_branch() const;   // pi / (2 dh)
  double ground_gap_branch() const;  // pi / (2 gap)
};

struct EnsembleState {
  std::vector<double> weights;
  std::vector<SpectralSystem> members;

  static EnsembleState make(std::vector<double> weights, std::vector<SpectralSystem> members);
};

double gaussian_density(const GaussianTimeLaw& law, double t);

/// Probability mass of rho(t) inside the window: erf(sqrt(lambda) dt).
double window_mass(const GaussianTimeLaw& law);

TimeBound time_bound(const RealVector& levels, const RealVector& weights);

enum class ParameterPolicy { paper_preset, automatic };

/// Models with a published (dt, lambda) pair.
enum class PaperModel { two_qubit, four_qubit, spin_bath, position };

struct AutomaticPolicy {
  double safety = 0.98;       // dt = safety * tau_min / 2
  double min_window_mass = 0.95;
  double max_lambda = 1e8;
};

struct ParameterChoice {
  double dt = 0.0;
  double lambda = 0.0;
  double window_mass = 0.0;
  /// Which form of the lower bound on dt was enforced ("dt >= lambda^-1/2").
  std::string constraint_form;
};

ParameterChoice select_parameters(const TimeBound& bound, ParameterPolicy policy,
                                  std::optional<PaperModel> model = std::nullopt,
                                  const AutomaticPolicy& config = {});

/// Closed-form sigma in the energy eigenbasis (full-line Gaussian integral).
DensityMatrix sigma_analytic(const SpectralSystem& sys, const GaussianTimeLaw& law);

enum class QuadratureRule { gauss_legendre, trapezoid };

struct QuadratureOptions {
  std::size_t nodes = 512;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  /// Integrate the Gaussian tails outside the window as well, instead of
  /// renormalizing the windowed integral by the window mass.
  bool tail_correction = false;
  /// Maximum phase advance of the fastest Bohr frequency per node.
  double max_phase_per_node = 0.5;
};

/// Direct numerical time integral of rho(t) |Psi(t)><Psi(t)|.
DensityMatrix sigma_quadrature(const SpectralSystem& sys, const GaussianTimeLaw& law,
                               const QuadratureOptions& opts = {});

enum class PurityExponent {
  squared,            // exp(-(h_n - h_m)^2 / 2 lambda)
  literal_unsquared,  // exp(-|h_n - h_m| / 2 lambda), kept only as a bug detector
};

double purity(const SpectralSystem& sys, const GaussianTimeLaw& law,
              PurityExponent exponent = PurityExponent::squared);

/// Three-instant mixture p- |Psi(t0-dt)> + p0 |Psi(t0)> + p+ |Psi(t0+dt)>.
DensityMatrix coarse_time_mixture(const SpectralSystem& sys, double t0, double dt,
                                  const std::array<double, 3>& weights);

/// sum_i p_i sigma_i for members sharing one Hamiltonian.
DensityMatrix apply_dynamical_map(const EnsembleState& ens, const GaussianTimeLaw& law);

/// Gaussian suppression of a coherence between energies separated by `gap`.
inline double gaussian_factor(double gap, double lambda) {
  return std::exp(-gap * gap / (4.0 * lambda));
}

/// Pairwise (cascade) summation; results depend only on input order.
double pairwise_sum(std::span<const double> xs);
Complex pairwise_sum(std::span<const Complex> xs);

}  // namespace ltd::localtime
