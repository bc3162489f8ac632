#pragma once

// Dense complex linear algebra and quantum-state primitives.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ltd/errors.hpp"

namespace ltd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical tolerances shared by the state validators. None of these come
/// from physics; they bound double-precision accumulation for dimensions up
/// to a few thousand.
struct Tolerances {
  double hermitian = 1e-10;         // max |m - m^dagger| entry
  double trace = 1e-8;              // |tr m - 1| above this is an error
  double positivity_floor = -1e-9;  // eigenvalues below this are an error
  std::size_t max_entries = std::size_t{1} << 24;
};

/// Square, Hermitian, unit-trace, positive semidefinite matrix. Only
/// obtainable through validate_density, so holding one is proof of validity.
class DensityMatrix {
 public:
  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  /// tr rho^2
  double purity() const;

  friend DensityMatrix validate_density(const ComplexMatrix& m,
                                        const Tolerances& tol);

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Normalized state vector.
class PureState {
 public:
  /// Rejects amplitudes whose squared norm differs from 1 by more than 1e-12.
  static PureState from_amplitudes(ComplexVector amplitudes);
  /// Rescales any nonzero vector to unit norm.
  static PureState normalized(const ComplexVector& amplitudes);

  Index dim() const { return psi_.size(); }
  const ComplexVector& amplitudes() const { return psi_; }
  DensityMatrix projector() const;

 private:
  explicit PureState(ComplexVector psi) : psi_(std::move(psi)) {}
  ComplexVector psi_;
};

/// Ordered factor dimensions of a tensor-product space.
class SubsystemSplit {
 public:
  explicit SubsystemSplit(std::vector<Index> dims);
  const std::vector<Index>& dims() const { return dims_; }
  Index total() const { return total_; }
  std::size_t parts() const { return dims_.size(); }

 private:
  std::vector<Index> dims_;
  Index total_ = 1;
};

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns
};

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const Tolerances& tol = {});
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

/// Reduced state on the factors listed in `keep` (ascending factor order in
/// the result). `keep` must be a nonempty proper subset.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const SubsystemSplit& split,
                            std::span<const std::size_t> keep,
                            const Tolerances& tol = {});

DensityMatrix validate_density(const ComplexMatrix& m,
                               const Tolerances& tol = {});

EigenDecomposition eigh(const ComplexMatrix& m, const Tolerances& tol = {});

/// -tr rho ln rho in nats.
double von_neumann_entropy(const DensityMatrix& rho,
                           const Tolerances& tol = {});

/// sqrt(<psi|rho|psi>), clamped to [0, 1].
double fidelity_pure(const DensityMatrix& rho, const PureState& psi);

/// Frobenius norm of the operator product a*b.
double overlap_norm(const ComplexMatrix& a, const ComplexMatrix& b);

double hermitian_deviation(const ComplexMatrix& m);

}  // namespace ltd
