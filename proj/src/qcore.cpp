#include "ltd/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace ltd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::shape: return "shape";
    case ErrorKind::size: return "size";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::model: return "model";
    case ErrorKind::degenerate_clock: return "degenerate-clock";
    case ErrorKind::undefined_clock: return "undefined-clock";
    case ErrorKind::cutoff: return "cutoff";
  }
  return "unknown";
}

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::shape, fmt::format("{}: non-finite entry", what));
}

}  // namespace

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return m_.squaredNorm();
}

PureState PureState::from_amplitudes(ComplexVector amplitudes) {
  require(amplitudes.size() > 0, ErrorKind::dimension, "pure state: empty amplitude vector");
  const double n2 = amplitudes.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
    fail(ErrorKind::normalization, fmt::format("pure state: squared norm {} != 1", n2));
  return PureState(std::move(amplitudes));
}

PureState PureState::normalized(const ComplexVector& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::normalization, "pure state: zero vector");
  return PureState(amplitudes / n);
}

DensityMatrix PureState::projector() const {
  return validate_density(psi_ * psi_.adjoint());
}

SubsystemSplit::SubsystemSplit(std::vector<Index> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), ErrorKind::dimension, "split: no factors");
  for (Index d : dims_) {
    require(d >= 1, ErrorKind::dimension, "split: factor dimension < 1");
    total_ *= d;
  }
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const Tolerances& tol) {
  require_finite(a, "tensor_product");
  require_finite(b, "tensor_product");
  const double rows = double(a.rows()) * double(b.rows());
  const double cols = double(a.cols()) * double(b.cols());
  if (rows * cols > double(tol.max_entries))
    fail(ErrorKind::size, fmt::format("tensor_product: {}x{} result exceeds {} entries", rows,
                                      cols, tol.max_entries));
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSplit& split,
                            std::span<const std::size_t> keep, const Tolerances& tol) {
  if (split.total() != rho.dim())
    fail(ErrorKind::dimension, fmt::format("partial_trace: split total {} != state dim {}",
                                           split.total(), rho.dim()));
  const auto& dims = split.dims();
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    require(k < dims.size(), ErrorKind::dimension, "partial_trace: keep index out of range");
    kept[k] = true;
  }
  const auto n_kept = std::count(kept.begin(), kept.end(), true);
  if (n_kept == 0 || n_kept == static_cast<long>(dims.size()))
    fail(ErrorKind::dimension, "partial_trace: keep must be a nonempty proper subset");

  // Split every full index into (kept digits, traced digits), row-major with
  // factor 0 most significant.
  const Index total = split.total();
  std::vector<Index> kept_of(total), traced_of(total);
  Index kept_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (kept[f]) kept_dim *= dims[f];
  for (Index full = 0; full < total; ++full) {
    Index rem = full, k = 0, t = 0, kscale = 1, tscale = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const Index digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        k += digit * kscale;
        kscale *= dims[f];
      } else {
        t += digit * tscale;
        tscale *= dims[f];
      }
    }
    kept_of[full] = k;
    traced_of[full] = t;
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  const ComplexMatrix& m = rho.matrix();
  for (Index j = 0; j < total; ++j)
    for (Index i = 0; i < total; ++i)
      if (traced_of[i] == traced_of[j]) out(kept_of[i], kept_of[j]) += m(i, j);
  return validate_density(out, tol);
}

EigenDecomposition eigh(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) fail(ErrorKind::shape, "eigh: matrix not square");
  require_finite(m, "eigh");
  const double dev = hermitian_deviation(m);
  if (dev > tol.hermitian)
    fail(ErrorKind::shape, fmt::format("eigh: matrix not Hermitian (deviation {:.3e})", dev));
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) fail(ErrorKind::shape, "eigh: decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorKind::shape, "validate_density: matrix not square");
  require_finite(m, "validate_density");
  const double dev = hermitian_deviation(m);
  if (dev >= tol.hermitian)
    fail(ErrorKind::shape,
         fmt::format("validate_density: not Hermitian (deviation {:.3e})", dev));
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  const double tr = sym.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    fail(ErrorKind::normalization, fmt::format("validate_density: trace {} != 1", tr));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorKind::shape, "validate_density: eigensolver failed");
  const double lowest = solver.eigenvalues()(0);
  if (lowest < tol.positivity_floor)
    fail(ErrorKind::positivity,
         fmt::format("validate_density: negative eigenvalue {:.3e}", lowest));
  return DensityMatrix(std::move(sym));
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  const auto dec = eigh(rho.matrix(), tol);
  double s = 0.0;
  for (Index i = 0; i < dec.values.size(); ++i) {
    const double w = std::max(0.0, dec.values(i));
    if (w > 0.0) s -= w * std::log(w);
  }
  return std::max(0.0, s);
}

double fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim())
    fail(ErrorKind::dimension,
         fmt::format("fidelity_pure: state dim {} != reference dim {}", rho.dim(), psi.dim()));
  const ComplexVector& v = psi.amplitudes();
  const double f2 = v.dot(rho.matrix() * v).real();
  return std::sqrt(std::clamp(f2, 0.0, 1.0));
}

double overlap_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
    fail(ErrorKind::dimension, fmt::format("overlap_norm: {}x{} vs {}x{}", a.rows(), a.cols(),
                                           b.rows(), b.cols()));
  return (a * b).norm();
}

}  // namespace ltd
