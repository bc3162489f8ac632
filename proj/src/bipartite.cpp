#include "ltd/bipartite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include <fmt/format.h>

namespace ltd::bipartite {

using localtime::pairwise_sum;

namespace {

void require_normalized(const ComplexVector& v, const char* what) {
  require(v.size() > 0, ErrorKind::model, fmt::format("{}: empty amplitude vector", what));
  const double n2 = v.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
    fail(ErrorKind::normalization, fmt::format("{}: squared norm {} != 1", what, n2));
}

void require_orthonormal_columns(const ComplexMatrix& m, const char* what) {
  const ComplexMatrix gram = m.adjoint() * m;
  const double dev = (gram - ComplexMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
  if (!(dev < 1e-10))
    fail(ErrorKind::parameter, fmt::format("{}: columns not orthonormal (deviation {:.3e})", what, dev));
}

void check_family_inputs(const SeparableInteraction& inter, const ComplexVector& b,
                         const ComplexVector& d) {
  if (b.size() != inter.dim_o() || d.size() != inter.dim_a())
    fail(ErrorKind::model,
         fmt::format("branch amplitudes {}x{} do not match interaction {}x{}", b.size(), d.size(),
                     inter.dim_o(), inter.dim_a()));
  require_normalized(b, "object amplitudes b");
  require_normalized(d, "apparatus amplitudes d");
}

double frobenius_offdiag(const ComplexMatrix& x) {
  double s = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i)
      if (i != j) s += std::norm(x(i, j));
  return std::sqrt(s);
}

}  // namespace

SeparableInteraction SeparableInteraction::make(RealMatrix h) {
  require(h.rows() >= 1 && h.cols() >= 1, ErrorKind::model, "interaction: empty level table");
  require(h.allFinite(), ErrorKind::model, "interaction: non-finite level");
  return SeparableInteraction(std::move(h));
}

RealVector SeparableInteraction::flattened_levels() const {
  RealVector out(dim_o() * dim_a());
  for (Index a = 0; a < dim_o(); ++a)
    for (Index b = 0; b < dim_a(); ++b) out(a * dim_a() + b) = h_(a, b);
  return out;
}

ComplexMatrix branch_block(const SeparableInteraction& inter, const ComplexVector& d,
                           Index alpha, Index alpha_p, double t0, double lambda) {
  const Index n = inter.dim_a();
  ComplexMatrix m(n, n);
  for (Index bp = 0; bp < n; ++bp) {
    for (Index b = 0; b < n; ++b) {
      const double gap = inter.level(alpha, b) - inter.level(alpha_p, bp);
      const Complex phase = gap == 0.0 ? Complex{1.0, 0.0} : std::exp(-kI * (t0 * gap));
      m(b, bp) = d(b) * std::conj(d(bp)) * phase * localtime::gaussian_factor(gap, lambda);
    }
  }
  return m;
}

Complex branch_trace(const SeparableInteraction& inter, const ComplexVector& d, Index alpha,
                     Index alpha_p, double t0, double lambda) {
  std::vector<Complex> terms(std::size_t(inter.dim_a()));
  for (Index b = 0; b < inter.dim_a(); ++b) {
    const double gap = inter.level(alpha, b) - inter.level(alpha_p, b);
    terms[std::size_t(b)] =
        std::norm(d(b)) * std::exp(-kI * (t0 * gap)) * localtime::gaussian_factor(gap, lambda);
  }
  return pairwise_sum(terms);
}

PureState evolve_branches(const SeparableInteraction& inter, const ComplexVector& b,
                          const ComplexVector& d, double t) {
  check_family_inputs(inter, b, d);
  ComplexVector psi(inter.dim_o() * inter.dim_a());
  for (Index a = 0; a < inter.dim_o(); ++a)
    for (Index k = 0; k < inter.dim_a(); ++k)
      psi(a * inter.dim_a() + k) = b(a) * d(k) * std::exp(-kI * (t * inter.level(a, k)));
  return PureState::normalized(psi);
}

BranchFamily branch_family(const SeparableInteraction& inter, const ComplexVector& b,
                           const ComplexVector& d, const GaussianTimeLaw& law) {
  check_family_inputs(inter, b, d);
  const auto checked = GaussianTimeLaw::make(law.t0, law.lambda, law.dt);
  BranchFamily fam{inter, b, d, checked, {}};
  const Index no = inter.dim_o();
  fam.blocks.reserve(std::size_t(no * no));
  for (Index a = 0; a < no; ++a)
    for (Index ap = 0; ap < no; ++ap)
      fam.blocks.push_back(branch_block(inter, d, a, ap, checked.t0, checked.lambda));
  return fam;
}

DensityMatrix BranchFamily::rho_a(Index alpha) const {
  require(alpha >= 0 && alpha < dim_o(), ErrorKind::dimension, "rho_a: branch index out of range");
  return validate_density(block(alpha, alpha));
}

BranchFamily BranchFamily::at(double t0) const {
  return branch_family(interaction, b, d, law.at(t0));
}

DensityMatrix assemble_sigma(const BranchFamily& fam) {
  const Index no = fam.dim_o(), na = fam.dim_a();
  ComplexMatrix s(no * na, no * na);
  for (Index a = 0; a < no; ++a)
    for (Index ap = 0; ap < no; ++ap)
      s.block(a * na, ap * na, na, na) = fam.b(a) * std::conj(fam.b(ap)) * fam.block(a, ap);
  return validate_density(s);
}

DensityMatrix block_diagonal_sigma(const BranchFamily& fam) {
  const Index no = fam.dim_o(), na = fam.dim_a();
  ComplexMatrix s = ComplexMatrix::Zero(no * na, no * na);
  for (Index a = 0; a < no; ++a) s.block(a * na, a * na, na, na) = std::norm(fam.b(a)) * fam.block(a, a);
  return validate_density(s);
}

CorrelationAmplitude CorrelationAmplitude::make(RealVector p, RealVector omega) {
  require(p.size() > 0 && p.size() == omega.size(), ErrorKind::parameter,
          "correlation amplitude: weights and frequencies differ in length");
  require(p.allFinite() && omega.allFinite(), ErrorKind::parameter,
          "correlation amplitude: non-finite entry");
  require(p.minCoeff() >= 0.0, ErrorKind::parameter, "correlation amplitude: negative weight");
  const double total = pairwise_sum(std::span<const double>(p.data(), std::size_t(p.size())));
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorKind::parameter, fmt::format("correlation amplitude: weights sum to {}", total));
  CorrelationAmplitude ca;
  ca.epsilon = RealVector::Ones(p.size());
  ca.p = std::move(p);
  ca.omega = std::move(omega);
  return ca;
}

namespace {

CorrelationAmplitude from_weighted(RealVector raw, RealVector omega, RealVector eps) {
  CorrelationAmplitude ca;
  ca.zeta = pairwise_sum(std::span<const double>(raw.data(), std::size_t(raw.size())));
  if (!(ca.zeta > 0.0)) fail(ErrorKind::parameter, "correlation amplitude: zero total weight");
  ca.p = raw / ca.zeta;
  ca.omega = std::move(omega);
  ca.epsilon = std::move(eps);
  return ca;
}

}  // namespace

CorrelationAmplitude CorrelationAmplitude::for_trace(const BranchFamily& fam, Index a, Index ap) {
  const auto& in = fam.interaction;
  const double lambda = fam.law.lambda;
  RealVector raw(fam.dim_a()), omega(fam.dim_a()), eps(fam.dim_a());
  for (Index k = 0; k < fam.dim_a(); ++k) {
    omega(k) = in.level(a, k) - in.level(ap, k);
    eps(k) = localtime::gaussian_factor(omega(k), lambda);
    raw(k) = std::norm(fam.d(k)) * eps(k);
  }
  return from_weighted(std::move(raw), std::move(omega), std::move(eps));
}

CorrelationAmplitude CorrelationAmplitude::for_product(const BranchFamily& fam, Index a, Index ap,
                                                       Index beta, Index beta_pp) {
  const auto& in = fam.interaction;
  const double lambda = fam.law.lambda;
  RealVector raw(fam.dim_a()), omega(fam.dim_a()), eps(fam.dim_a());
  for (Index k = 0; k < fam.dim_a(); ++k) {
    const double g1 = in.level(a, beta) - in.level(a, k);
    const double g2 = in.level(ap, k) - in.level(ap, beta_pp);
    omega(k) = in.level(ap, k) - in.level(a, k);
    eps(k) = std::exp(-(g1 * g1 + g2 * g2) / (4.0 * lambda));
    raw(k) = std::norm(fam.d(k)) * eps(k);
  }
  return from_weighted(std::move(raw), std::move(omega), std::move(eps));
}

Complex correlation_amplitude(const CorrelationAmplitude& ca, double t) {
  std::vector<Complex> terms(std::size_t(ca.p.size()));
  for (Index k = 0; k < ca.p.size(); ++k)
    terms[std::size_t(k)] = ca.p(k) * std::exp(-kI * (t * ca.omega(k)));
  return pairwise_sum(terms);
}

WindowAverage window_average(const std::function<Complex(double)>& f, double t_start, double T,
                             std::size_t samples) {
  require(samples >= 256, ErrorKind::parameter, "window_average: need at least 256 samples");
  require(std::isfinite(T) && T > 0.0 && std::isfinite(t_start), ErrorKind::parameter,
          "window_average: window length must be positive");
  std::vector<Complex> vals(samples);
  std::vector<double> sq(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t_start + T * (double(k) + 0.5) / double(samples);
    vals[k] = f(t);
    sq[k] = std::norm(vals[k]);
  }
  const double n = double(samples);
  return {pairwise_sum(vals) / n, pairwise_sum(sq) / n};
}

LargeTimeSamples large_time_samples(const BranchFamily& fam, std::size_t count) {
  require(count >= 8, ErrorKind::parameter, "large_time_samples: need at least 8 instants");
  std::vector<std::pair<double, double>> freq;  // (|omega|, weight)
  const auto& in = fam.interaction;
  for (Index a = 0; a < fam.dim_o(); ++a)
    for (Index ap = a + 1; ap < fam.dim_o(); ++ap)
      for (Index k = 0; k < fam.dim_a(); ++k) {
        const double w = std::abs(in.level(a, k) - in.level(ap, k));
        if (w > 1e-12) freq.emplace_back(w, std::norm(fam.d(k)));
      }
  double median = 1.0;
  if (!freq.empty()) {
    std::sort(freq.begin(), freq.end());
    double total = 0.0;
    for (const auto& f : freq) total += f.second;
    double acc = 0.0;
    median = freq.back().first;
    for (const auto& f : freq) {
      acc += f.second;
      if (acc >= 0.5 * total) {
        median = f.first;
        break;
      }
    }
  }
  LargeTimeSamples out;
  out.T = 50.0 * 2.0 * std::numbers::pi / median;
  out.t0.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    out.t0[k] = out.T + out.T * double(k) / double(count - 1);
  return out;
}

LemmaReport lemma41_report(const BranchFamily& fam, std::span<const double> t0_samples, double T,
                           const LemmaOptions& opts) {
  require(t0_samples.size() >= 8, ErrorKind::parameter, "lemma report: need at least 8 t0 samples");
  require(std::isfinite(T) && T > 0.0, ErrorKind::parameter, "lemma report: T must be positive");
  const auto [lo, hi] = std::minmax_element(t0_samples.begin(), t0_samples.end());
  if (*hi - *lo < T * (1.0 - 1e-9))
    fail(ErrorKind::parameter,
         fmt::format("lemma report: t0 samples span {} < T = {}", *hi - *lo, T));

  LemmaReport rep;
  rep.window_start = *lo;
  rep.window_length = T;
  rep.t0_count = t0_samples.size();
  rep.epsilon = opts.epsilon;

  const auto& in = fam.interaction;
  const double lambda = fam.law.lambda;
  const Index na = fam.dim_a();
  // rho_a = U_a G_a U_a^+ with U_a = diag(d e^{-i t h_a}) and G_a real, so
  // ||rho_a rho_a'||_F = ||D G_a diag(w) G_a' D||_F, D = diag|d|,
  // w = |d|^2 e^{-i t (h_a' - h_a)}.
  const RealVector mod = fam.d.cwiseAbs();
  std::vector<RealMatrix> left, right;  // D G_a, G_a D
  for (Index a = 0; a < fam.dim_o(); ++a) {
    RealMatrix g(na, na);
    for (Index j = 0; j < na; ++j)
      for (Index i = 0; i < na; ++i) g(i, j) = localtime::gaussian_factor(in.level(a, i) - in.level(a, j), lambda);
    left.push_back(mod.asDiagonal() * g);
    right.push_back(g * mod.asDiagonal());
  }
  auto overlap_at = [&](Index a, Index ap, double t) {
    RealVector re(na), im(na);
    for (Index k = 0; k < na; ++k) {
      const Complex w = std::norm(fam.d(k)) * std::exp(-kI * (t * (in.level(ap, k) - in.level(a, k))));
      re(k) = w.real();
      im(k) = w.imag();
    }
    const RealMatrix& l = left[std::size_t(a)];
    const RealMatrix& r = right[std::size_t(ap)];
    const double sr = ((l * re.asDiagonal()) * r).squaredNorm();
    const double si = ((l * im.asDiagonal()) * r).squaredNorm();
    return std::sqrt(sr + si);
  };

  const std::size_t ws = std::max<std::size_t>(opts.window_samples, 256);
  rep.satisfied = true;
  for (Index a = 0; a < fam.dim_o(); ++a) {
    for (Index ap = a + 1; ap < fam.dim_o(); ++ap) {
      PairDiagnostics pd;
      pd.alpha = a;
      pd.alpha_p = ap;

      std::vector<double> ov(ws), tr(ws), tr2(ws);
      parallel_for(ws, opts.threads, [&](std::size_t k) {
        const double t = rep.window_start + T * (double(k) + 0.5) / double(ws);
        ov[k] = overlap_at(a, ap, t);
        tr[k] = std::abs(branch_trace(in, fam.d, a, ap, t, lambda));
        tr2[k] = tr[k] * tr[k];
      });
      pd.mean_overlap = pairwise_sum(ov) / double(ws);
      pd.mean_trace = pairwise_sum(tr) / double(ws);
      pd.trace_second_moment = pairwise_sum(tr2) / double(ws);

      std::size_t ov_below = 0, tr_below = 0;
      for (double t : t0_samples) {
        const double o = overlap_at(a, ap, t);
        const double x = std::abs(branch_trace(in, fam.d, a, ap, t, lambda));
        pd.max_overlap = std::max(pd.max_overlap, o);
        pd.max_trace = std::max(pd.max_trace, x);
        ov_below += o < opts.epsilon;
        tr_below += x < opts.epsilon;
      }
      pd.fraction_overlap_below = double(ov_below) / double(t0_samples.size());
      pd.fraction_trace_below = double(tr_below) / double(t0_samples.size());

      if (!(pd.mean_overlap < opts.epsilon && pd.mean_trace < opts.epsilon)) rep.satisfied = false;
      rep.pairs.push_back(pd);
    }
  }
  if (rep.pairs.empty()) rep.satisfied = false;
  return rep;
}

MutualInformation mutual_information(const BranchFamily& fam) {
  const Index na = fam.dim_a();
  ComplexMatrix avg = ComplexMatrix::Zero(na, na);
  double cond = 0.0, h_o = 0.0;
  for (Index a = 0; a < fam.dim_o(); ++a) {
    const double w = std::norm(fam.b(a));
    if (w == 0.0) continue;
    avg += w * fam.block(a, a);
    cond += w * von_neumann_entropy(fam.rho_a(a));
    h_o -= w * std::log(w);
  }
  const double s_avg = von_neumann_entropy(validate_density(avg));
  return {std::max(0.0, s_avg - cond), std::max(0.0, h_o)};
}

double classical_classical_distance(const DensityMatrix& sigma, const SubsystemSplit& split,
                                    const ComplexMatrix& basis_o,
                                    const std::optional<ComplexMatrix>& basis_a) {
  if (split.parts() != 2 || split.total() != sigma.dim())
    fail(ErrorKind::dimension, "classical_classical_distance: need a bipartite split matching sigma");
  const Index no = split.dims()[0], na = split.dims()[1];
  if (basis_o.rows() != no || basis_o.cols() != no)
    fail(ErrorKind::dimension, "classical_classical_distance: object basis has wrong shape");
  require_orthonormal_columns(basis_o, "classical_classical_distance: object basis");

  auto distance_for = [&](const ComplexMatrix& ba) {
    const ComplexMatrix u = tensor_product(basis_o, ba);
    return frobenius_offdiag(u.adjoint() * sigma.matrix() * u);
  };

  if (basis_a) {
    if (basis_a->rows() != na || basis_a->cols() != na)
      fail(ErrorKind::dimension, "classical_classical_distance: apparatus basis has wrong shape");
    require_orthonormal_columns(*basis_a, "classical_classical_distance: apparatus basis");
    return distance_for(*basis_a);
  }

  const std::size_t keep_a[] = {1};
  const auto rho_a = partial_trace(sigma, split, keep_a);
  ComplexMatrix weighted = ComplexMatrix::Zero(na, na);
  const ComplexMatrix& s = sigma.matrix();
  for (Index a = 0; a < no; ++a) {
    ComplexMatrix cond = ComplexMatrix::Zero(na, na);
    for (Index i = 0; i < no; ++i)
      for (Index j = 0; j < no; ++j)
        cond += std::conj(basis_o(i, a)) * basis_o(j, a) * s.block(i * na, j * na, na, na);
    weighted += double(a + 1) * cond;
  }
  weighted = 0.5 * (weighted + weighted.adjoint()).eval();
  return std::min(distance_for(eigh(rho_a.matrix()).vectors), distance_for(eigh(weighted).vectors));
}

std::vector<std::vector<Index>> degenerate_groups(const ComplexVector& b, double tol) {
  std::vector<Index> order(std::size_t(b.size()));
  for (Index i = 0; i < b.size(); ++i) order[std::size_t(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return std::norm(b(x)) < std::norm(b(y)); });
  std::vector<std::vector<Index>> groups;
  std::vector<Index> cur;
  for (Index i : order) {
    if (!cur.empty() && std::abs(std::norm(b(i)) - std::norm(b(cur.front()))) > tol) {
      if (cur.size() >= 2) groups.push_back(cur);
      cur.clear();
    }
    cur.push_back(i);
  }
  if (cur.size() >= 2) groups.push_back(cur);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

namespace {

// V has the candidate vectors |nu> as columns; c_{alpha nu} = <nu|alpha> = conj(V(alpha, nu)).
ComplexMatrix mixing_basis(Index dim, Index i, Index j, double theta, double phi) {
  ComplexMatrix v = ComplexMatrix::Identity(dim, dim);
  if (i == j) {
    require(theta == 0.0, ErrorKind::parameter, "basis mixing needs two distinct indices");
    return v;
  }
  const Complex e = std::exp(kI * phi);
  v(i, i) = std::cos(theta);
  v(j, i) = e * std::sin(theta);
  v(i, j) = -std::conj(e) * std::sin(theta);
  v(j, j) = std::cos(theta);
  return v;
}

BasisConditions evaluate_on(const std::vector<BranchFamily>& fams, Index i, Index j, double theta,
                            double phi, const ScanOptions& opts) {
  const BranchFamily& ref = fams.front();
  const Index no = ref.dim_o();
  const ComplexMatrix c = mixing_basis(no, i, j, theta, phi).conjugate();

  BasisConditions bc;
  bc.first = i;
  bc.second = j;
  bc.theta = theta;
  bc.phi = phi;

  for (Index nu = 0; nu < no; ++nu)
    for (Index nup = 0; nup < no; ++nup) {
      if (nu == nup) continue;
      Complex s = 0.0;
      for (Index a = 0; a < no; ++a) s += std::norm(ref.b(a)) * c(a, nu) * std::conj(c(a, nup));
      bc.condition_t = std::max(bc.condition_t, std::abs(s));
    }

  std::size_t p_pass = 0;
  for (const BranchFamily& fam : fams) {
    std::vector<ComplexMatrix> r_diag;
    r_diag.reserve(std::size_t(no));
    for (Index nu = 0; nu < no; ++nu) {
      ComplexMatrix r = ComplexMatrix::Zero(fam.dim_a(), fam.dim_a());
      for (Index a = 0; a < no; ++a)
        for (Index ap = 0; ap < no; ++ap) {
          const Complex coef = fam.b(a) * std::conj(fam.b(ap)) * c(a, nu) * std::conj(c(ap, nu));
          if (coef != 0.0) r += coef * fam.block(a, ap);
        }
      r_diag.push_back(std::move(r));
    }
    double cond_p = 0.0, cross = 0.0;
    for (Index nu = 0; nu < no; ++nu)
      for (Index nup = 0; nup < no; ++nup) {
        if (nu == nup) continue;
        // R_nu Hermitian: ||R_nu R_nu'|| = ||R_nu' R_nu||.
        if (nu < nup)
          cond_p = std::max(cond_p, overlap_norm(r_diag[std::size_t(nu)], r_diag[std::size_t(nup)]));
        Complex s = 0.0;
        for (Index a = 0; a < no; ++a)
          for (Index ap = 0; ap < no; ++ap)
            if (a != ap)
              s += fam.b(a) * std::conj(fam.b(ap)) * c(a, nu) * std::conj(c(ap, nup)) *
                   fam.block(a, ap).trace();
        cross = std::max(cross, std::abs(s));
      }
    bc.condition_p.push_back(cond_p);
    bc.cross_trace_residual.push_back(cross);
    p_pass += cond_p < opts.epsilon;
  }
  const double n = double(fams.size());
  bc.fraction_t_pass = bc.condition_t < opts.epsilon ? 1.0 : 0.0;
  bc.fraction_p_pass = double(p_pass) / n;
  bc.passes_both =
      bc.fraction_t_pass >= opts.required_fraction && bc.fraction_p_pass >= opts.required_fraction;
  return bc;
}

std::vector<BranchFamily> families_at(const BranchFamily& fam, std::span<const double> t0,
                                      std::size_t threads) {
  require(!t0.empty(), ErrorKind::parameter, "basis conditions: no t0 samples");
  std::vector<std::optional<BranchFamily>> slots(t0.size());
  parallel_for(t0.size(), threads, [&](std::size_t k) { slots[k] = fam.at(t0[k]); });
  std::vector<BranchFamily> out;
  out.reserve(t0.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : pairwise_sum(xs) / double(xs.size());
}

}  // namespace

BasisConditions evaluate_basis(const BranchFamily& fam, Index first, Index second, double theta,
                               double phi, std::span<const double> t0_samples,
                               const ScanOptions& opts) {
  require(first >= 0 && second >= 0 && first < fam.dim_o() && second < fam.dim_o(),
          ErrorKind::dimension, "evaluate_basis: index out of range");
  return evaluate_on(families_at(fam, t0_samples, opts.threads), first, second, theta, phi, opts);
}

UniquenessReport uniqueness_scan(const BranchFamily& fam,
                                 const std::vector<std::vector<Index>>& groups,
                                 std::span<const double> t0_samples, const ScanOptions& opts) {
  require(opts.angles >= 12 && opts.phases >= 12, ErrorKind::parameter,
          "uniqueness_scan: grid needs at least 12 angles per parameter");
  for (const auto& g : groups) {
    require(g.size() >= 2, ErrorKind::parameter, "uniqueness_scan: group with fewer than 2 members");
    for (Index i : g) {
      require(i >= 0 && i < fam.dim_o(), ErrorKind::parameter, "uniqueness_scan: index out of range");
      if (std::abs(std::norm(fam.b(i)) - std::norm(fam.b(g.front()))) > opts.degeneracy_tol)
        fail(ErrorKind::parameter,
             fmt::format("uniqueness_scan: |b_{}|^2 differs from |b_{}|^2", i, g.front()));
    }
  }

  const auto fams = families_at(fam, t0_samples, opts.threads);

  UniquenessReport rep;
  rep.epsilon = opts.epsilon;
  rep.required_fraction = opts.required_fraction;
  rep.t0_samples.assign(t0_samples.begin(), t0_samples.end());
  rep.original = evaluate_on(fams, 0, 0, 0.0, 0.0, opts);
  rep.original_passes = rep.original.passes_both;

  struct Candidate {
    Index i, j;
    double theta, phi;
  };
  std::vector<Candidate> cands;
  for (const auto& g : groups)
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t y = x + 1; y < g.size(); ++y)
        for (std::size_t k = 1; k < opts.angles; ++k)
          for (std::size_t m = 0; m < opts.phases; ++m)
            cands.push_back({g[x], g[y], double(k) * std::numbers::pi / (2.0 * double(opts.angles)),
                             2.0 * std::numbers::pi * double(m) / double(opts.phases)});

  std::vector<std::optional<BasisConditions>> results(cands.size());
  parallel_for(cands.size(), opts.threads, [&](std::size_t k) {
    const auto& c = cands[k];
    results[k] = evaluate_on(fams, c.i, c.j, c.theta, c.phi, opts);
  });

  rep.alternatives_tested = cands.size();
  auto better = [](const BasisConditions& x, const BasisConditions& y) {
    if (x.passes_both != y.passes_both) return x.passes_both;
    if (x.fraction_p_pass != y.fraction_p_pass) return x.fraction_p_pass > y.fraction_p_pass;
    return mean_of(x.condition_p) < mean_of(y.condition_p);
  };
  for (auto& r : results) {
    if (r->passes_both) ++rep.alternatives_passing;
    if (!rep.best_alternative || better(*r, *rep.best_alternative)) rep.best_alternative = *r;
  }

  rep.unique = rep.original_passes && rep.alternatives_passing == 0;
  if (groups.empty())
    rep.note = "no degenerate group; only the original basis was checked";
  else if (rep.alternatives_passing > 0)
    rep.note = fmt::format("{} alternative bases satisfy both conditions", rep.alternatives_passing);
  else if (!rep.original_passes)
    rep.note = "original basis fails the conditions";
  else
    rep.note = "only the original basis satisfies both conditions";
  return rep;
}

TripartiteState tripartite_sigma(const ComplexVector& b, const ComplexMatrix& apparatus_basis,
                                 const RealMatrix& env_h, const ComplexVector& d_env,
                                 const GaussianTimeLaw& law) {
  const Index no = b.size();
  if (apparatus_basis.cols() != no || env_h.rows() != no || env_h.cols() != d_env.size())
    fail(ErrorKind::model,
         fmt::format("tripartite: b has {} entries, apparatus basis {} columns, environment {}x{}, "
                     "d_env {} entries",
                     no, apparatus_basis.cols(), env_h.rows(), env_h.cols(), d_env.size()));
  require_normalized(b, "object amplitudes b");
  require_normalized(d_env, "environment amplitudes");
  require_orthonormal_columns(apparatus_basis, "tripartite: apparatus basis");
  const auto checked = GaussianTimeLaw::make(law.t0, law.lambda, law.dt);
  const auto env = SeparableInteraction::make(env_h);

  const Index na = apparatus_basis.rows(), ne = env.dim_a();
  const Index total = no * na * ne;
  if (double(total) * double(total) > double(Tolerances{}.max_entries))
    fail(ErrorKind::size, fmt::format("tripartite: state dimension {} too large", total));

  ComplexMatrix sigma = ComplexMatrix::Zero(total, total);
  ComplexMatrix traces(no, no);
  const Index blk = na * ne;
  for (Index a = 0; a < no; ++a)
    for (Index ap = 0; ap < no; ++ap) {
      const ComplexMatrix rho_e = branch_block(env, d_env, a, ap, checked.t0, checked.lambda);
      traces(a, ap) = rho_e.trace();
      const ComplexMatrix pa = apparatus_basis.col(a) * apparatus_basis.col(ap).adjoint();
      sigma.block(a * blk, ap * blk, blk, blk) =
          b(a) * std::conj(b(ap)) * tensor_product(pa, rho_e);
    }

  auto sig = validate_density(sigma);
  const SubsystemSplit split({no, na, ne});
  const std::size_t keep_oa[] = {0, 1};
  auto rho_oa = partial_trace(sig, split, keep_oa);
  const std::size_t keep_o[] = {0};
  auto rho_o = partial_trace(rho_oa, SubsystemSplit({no, na}), keep_o);
  return {std::move(sig), std::move(rho_oa), std::move(rho_o), std::move(traces)};
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ltd::bipartite
