#pragma once

// Branch operators of a separable object-apparatus interaction
//
//   H_int = sum_{alpha,beta} h_{alpha beta} P_alpha (x) Pi_beta,
//
// averaged over the Gaussian local-time law, plus the diagnostics built on
// them: orthogonality of the apparatus branches, mutual information, the
// pointer-basis uniqueness scan and the tripartite (O+A+E) extension.
//
// Product-basis index convention: |alpha>_O |beta>_A -> alpha * dim_a + beta.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltd/localtime.hpp"
#include "ltd/qcore.hpp"

namespace ltd::bipartite {

using localtime::GaussianTimeLaw;

class SeparableInteraction {
 public:
  /// Rows index the object projectors P_alpha, columns the apparatus
  /// projectors Pi_beta.
  static SeparableInteraction make(RealMatrix h);

  Index dim_o() const { return h_.rows(); }
  Index dim_a() const { return h_.cols(); }
  const RealMatrix& h() const { return h_; }
  double level(Index alpha, Index beta) const { return h_(alpha, beta); }
  /// h_{alpha beta} flattened in product-basis order.
  RealVector flattened_levels() const;

 private:
  explicit SeparableInteraction(RealMatrix h) : h_(std::move(h)) {}
  RealMatrix h_;
};

/// rho^A_{alpha alpha'}(t0) for every ordered pair; the diagonal blocks are
/// the apparatus branch states rho^A_alpha.
struct BranchFamily {
  SeparableInteraction interaction;
  ComplexVector b;  // object amplitudes
  ComplexVector d;  // apparatus amplitudes
  GaussianTimeLaw law;
  std::vector<ComplexMatrix> blocks;  // blocks[alpha * dim_o + alpha']

  Index dim_o() const { return interaction.dim_o(); }
  Index dim_a() const { return interaction.dim_a(); }
  const ComplexMatrix& block(Index alpha, Index alpha_p) const {
    return blocks[std::size_t(alpha * dim_o() + alpha_p)];
  }
  DensityMatrix rho_a(Index alpha) const;
  /// Same interaction and amplitudes, re-evaluated at another instant.
  BranchFamily at(double t0) const;
};

/// One branch operator without building the whole family.
ComplexMatrix branch_block(const SeparableInteraction& inter, const ComplexVector& d,
                           Index alpha, Index alpha_p, double t0, double lambda);

/// tr rho^A_{alpha alpha'}(t0), an O(dim_a) sum.
Complex branch_trace(const SeparableInteraction& inter, const ComplexVector& d, Index alpha,
                     Index alpha_p, double t0, double lambda);

PureState evolve_branches(const SeparableInteraction& inter, const ComplexVector& b,
                          const ComplexVector& d, double t);

BranchFamily branch_family(const SeparableInteraction& inter, const ComplexVector& b,
                           const ComplexVector& d, const GaussianTimeLaw& law);

DensityMatrix assemble_sigma(const BranchFamily& family);

/// First (block-diagonal) term of sigma: sum_alpha |b_alpha|^2 |alpha><alpha| (x) rho^A_alpha.
DensityMatrix block_diagonal_sigma(const BranchFamily& family);

/// chi(t) = sum p exp(-i t omega), scaled in use by zeta.
struct CorrelationAmplitude {
  RealVector p;
  RealVector omega;
  double zeta = 1.0;
  RealVector epsilon;

  static CorrelationAmplitude make(RealVector p, RealVector omega);
  /// tr rho^A_{alpha alpha'} = zeta chi(t0).
  static CorrelationAmplitude for_trace(const BranchFamily& family, Index alpha, Index alpha_p);
  /// (rho^A_alpha rho^A_alpha')_{beta beta''} =
  ///   d_beta d*_beta'' exp(-i t0 (h_{alpha beta} - h_{alpha' beta''})) zeta chi(t0).
  static CorrelationAmplitude for_product(const BranchFamily& family, Index alpha,
                                          Index alpha_p, Index beta, Index beta_pp);
};

Complex correlation_amplitude(const CorrelationAmplitude& ca, double t);

struct WindowAverage {
  Complex mean;
  double second_moment = 0.0;  // <|f|^2>
};

/// Midpoint-sampled average of f and |f|^2 over [t_start, t_start + T].
WindowAverage window_average(const std::function<Complex(double)>& f, double t_start, double T,
                             std::size_t samples);

/// "Large t0" sampling: T = 50 * 2 pi / median|omega| and `count` instants
/// spread uniformly over [T, 2T]. The median is over the Bohr frequencies
/// h_{alpha beta} - h_{alpha' beta} weighted by |d_beta|^2.
struct LargeTimeSamples {
  double T = 0.0;
  std::vector<double> t0;
};
LargeTimeSamples large_time_samples(const BranchFamily& family, std::size_t count = 8);

struct LemmaOptions {
  double epsilon = 0.05;
  std::size_t window_samples = 2048;
  std::size_t threads = 1;
};

struct PairDiagnostics {
  Index alpha = 0;
  Index alpha_p = 0;
  double max_overlap = 0.0;       // over the sampled t0
  double max_trace = 0.0;
  double mean_overlap = 0.0;      // window average of ||rho_a rho_a'||_F
  double mean_trace = 0.0;        // window average of |tr rho_aa'|
  double trace_second_moment = 0.0;
  double fraction_overlap_below = 0.0;
  double fraction_trace_below = 0.0;
};

struct LemmaReport {
  std::vector<PairDiagnostics> pairs;
  double window_start = 0.0;
  double window_length = 0.0;
  std::size_t t0_count = 0;
  double epsilon = 0.0;
  bool satisfied = false;
};

LemmaReport lemma41_report(const BranchFamily& family, std::span<const double> t0_samples,
                           double T, const LemmaOptions& opts = {});

struct MutualInformation {
  double mutual = 0.0;          // I(O:A), nats
  double object_entropy = 0.0;  // H(O), nats
};

MutualInformation mutual_information(const BranchFamily& family);

/// Frobenius distance from sigma to its pinch in basis_o (x) basis_a. With no
/// basis_a, the minimum over the eigenbasis of rho^A and the eigenbasis of the
/// branch-weighted operator sum_alpha (alpha + 1) <alpha|sigma|alpha>.
double classical_classical_distance(const DensityMatrix& sigma, const SubsystemSplit& split,
                                    const ComplexMatrix& basis_o,
                                    const std::optional<ComplexMatrix>& basis_a = std::nullopt);

/// Index groups of equal |b_alpha|^2 (size >= 2 only).
std::vector<std::vector<Index>> degenerate_groups(const ComplexVector& b, double tol = 1e-9);

struct ScanOptions {
  std::size_t angles = 12;  // mixing-angle steps per quarter turn
  std::size_t phases = 12;  // relative-phase steps per full turn
  double epsilon = 0.05;
  double required_fraction = 0.9;
  double degeneracy_tol = 1e-9;
  std::size_t threads = 1;
};

/// Conditions for one candidate basis: |nu_i> = cos(theta)|a_i> + e^{i phi} sin(theta)|a_j>,
/// |nu_j> = -e^{-i phi} sin(theta)|a_i> + cos(theta)|a_j>, other vectors unchanged.
struct BasisConditions {
  Index first = 0;
  Index second = 0;
  double theta = 0.0;
  double phi = 0.0;
  double condition_t = 0.0;                 // max_{nu != nu'} |tr R_{nu nu'}|, pinch form
  std::vector<double> condition_p;          // per t0: max_{nu != nu'} ||R_nu R_nu'||_F
  std::vector<double> cross_trace_residual; // per t0: dropped cross-trace part of tr R
  double fraction_t_pass = 0.0;
  double fraction_p_pass = 0.0;
  bool passes_both = false;
};

BasisConditions evaluate_basis(const BranchFamily& family, Index first, Index second,
                               double theta, double phi, std::span<const double> t0_samples,
                               const ScanOptions& opts = {});

struct UniquenessReport {
  BasisConditions original;
  std::optional<BasisConditions> best_alternative;
  std::size_t alternatives_tested = 0;
  std::size_t alternatives_passing = 0;
  double epsilon = 0.0;
  double required_fraction = 0.0;
  std::vector<double> t0_samples;
  bool original_passes = false;
  bool unique = false;
  std::string note;
};

UniquenessReport uniqueness_scan(const BranchFamily& family,
                                 const std::vector<std::vector<Index>>& groups,
                                 std::span<const double> t0_samples,
                                 const ScanOptions& opts = {});

struct TripartiteState {
  DensityMatrix sigma;       // O (x) A (x) E
  DensityMatrix rho_oa;      // tr_E sigma
  DensityMatrix rho_o;       // tr_A rho_oa
  ComplexMatrix env_traces;  // tr rho^E_{alpha alpha'}
};

/// Premeasured Schmidt state sum_alpha b_alpha |alpha>_O |alpha>_A monitored by
/// an environment through the separable A-E interaction h_{alpha j}.
/// `apparatus_basis` holds the pointer states |alpha>_A as columns.
TripartiteState tripartite_sigma(const ComplexVector& b, const ComplexMatrix& apparatus_basis,
                                 const RealMatrix& env_h, const ComplexVector& d_env,
                                 const GaussianTimeLaw& law);

/// Runs f(i) for i in [0, n) on up to `threads` workers; each index is
/// processed exactly once, so output written per index is deterministic.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& f);

}  // namespace ltd::bipartite
