#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ltd/bipartite.hpp"
#include "oracles.hpp"

using namespace ltd;
using namespace ltd::bipartite;
using localtime::GaussianTimeLaw;

namespace {

constexpr double kPi = std::numbers::pi;

SeparableInteraction two_qubit(double c) {
  RealMatrix h(2, 2);
  h << c / 4, -c / 4, -c / 4, c / 4;
  return SeparableInteraction::make(h);
}

ComplexVector uniform(Index n) { return ComplexVector::Constant(n, 1.0 / std::sqrt(double(n))); }

// sigma_ij = c_i c_j^* exp(-i t0 (E_i - E_j)) exp(-(E_i - E_j)^2 / 4 lambda), entry by entry.
oracle::CM sigma_oracle(const RealVector& e, const ComplexVector& c, double t0, double lambda) {
  const Index n = e.size();
  oracle::CM s(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double g = e(i) - e(j);
      s(i, j) = c(i) * std::conj(c(j)) * std::exp(oracle::C(-g * g / (4 * lambda), -t0 * g));
    }
  return s;
}

double entropy_oracle(const oracle::CM& rho) {
  Eigen::SelfAdjointEigenSolver<oracle::CM> es(rho);
  double s = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double w = es.eigenvalues()(k);
    if (w > 1e-300) s -= w * std::log(w);
  }
  return s;
}

}  // namespace

TEST_SUITE("bipartite") {

TEST_CASE("evolve_branches at t = 0 is the product state") {
  std::mt19937_64 rng(21);
  RealMatrix h = RealMatrix::Random(2, 3);
  const auto inter = SeparableInteraction::make(h);
  const ComplexVector b = oracle::random_state(rng, 2), d = oracle::random_state(rng, 3);
  const auto psi = evolve_branches(inter, b, d, 0.0);
  CHECK((psi.amplitudes() - oracle::kron(b, d)).norm() < 1e-15);

  // Rows equal: no entanglement at any t.
  RealMatrix flat(2, 3);
  flat << 0.3, -1.1, 2.0, 0.3, -1.1, 2.0;
  const auto same = SeparableInteraction::make(flat);
  const auto later = evolve_branches(same, b, d, 7.3);
  const std::size_t keep[] = {0};
  const auto ro = partial_trace(later.projector(), SubsystemSplit({2, 3}), keep);
  CHECK(ro.purity() == doctest::Approx(1.0).epsilon(1e-12));

  const auto tq = evolve_branches(two_qubit(1.0), uniform(2), uniform(2), 2.0);
  // ++ and -- pick up exp(-i t C/4), +- and -+ exp(+i t C/4).
  CHECK(std::abs(tq.amplitudes()(0) - 0.5 * std::exp(oracle::C(0, -0.5))) < 1e-15);
  CHECK(std::abs(tq.amplitudes()(1) - 0.5 * std::exp(oracle::C(0, 0.5))) < 1e-15);
}

TEST_CASE("two-qubit branch operator off-diagonal") {
  const double c = 1.0, lambda = 1.0, t0 = 3.7;
  std::mt19937_64 rng(22);
  const ComplexVector d = oracle::random_state(rng, 2);
  const auto fam = branch_family(two_qubit(c), uniform(2), d, GaussianTimeLaw::make(t0, lambda, 1.5));
  const oracle::C expect =
      d(0) * std::conj(d(1)) * std::exp(oracle::C(-c * c / (16 * lambda), -t0 * c / 2));
  CHECK(std::abs(fam.block(0, 0)(0, 1) - expect) < 1e-15);
  CHECK(std::abs(fam.block(0, 0)(0, 1)) == doctest::Approx(0.9394 * std::abs(d(0) * d(1))).epsilon(1e-4));
}

TEST_CASE("assembled sigma matches the entrywise oracle and sigma_analytic") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    RealMatrix h(3, 4);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 4; ++j) h(i, j) = 4 * oracle::unit(rng) - 2;
    const auto inter = SeparableInteraction::make(h);
    const ComplexVector b = oracle::random_state(rng, 3), d = oracle::random_state(rng, 4);
    const double t0 = 10 * oracle::unit(rng), lambda = 0.5 + 2 * oracle::unit(rng);
    const auto law = GaussianTimeLaw::make(t0, lambda, 1.0);
    const auto sigma = assemble_sigma(branch_family(inter, b, d, law));
    const ComplexVector amps = oracle::kron(b, d);
    CHECK((sigma.matrix() - sigma_oracle(inter.flattened_levels(), amps, t0, lambda)).norm() < 1e-12);
    const auto sys = localtime::SpectralSystem::make(inter.flattened_levels(), amps);
    CHECK((sigma.matrix() - localtime::sigma_analytic(sys, law).matrix()).norm() < 1e-12);
  }
}

TEST_CASE("family identities: Hermitian pairing, traces, single branch") {
  std::mt19937_64 rng(24);
  RealMatrix h(3, 5);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 5; ++j) h(i, j) = 3 * oracle::unit(rng);
  const auto fam = branch_family(SeparableInteraction::make(h), oracle::random_state(rng, 3),
                                 oracle::random_state(rng, 5), GaussianTimeLaw::make(4.0, 1.3, 1.0));
  for (Index a = 0; a < 3; ++a) {
    CHECK(fam.rho_a(a).matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    for (Index ap = 0; ap < 3; ++ap) {
      CHECK((fam.block(a, ap) - fam.block(ap, a).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(fam.block(a, ap).trace()) <= 1.0 + 1e-12);
      CHECK(std::abs(fam.block(a, ap).trace() -
                     branch_trace(fam.interaction, fam.d, a, ap, 4.0, 1.3)) < 1e-14);
    }
  }

  RealMatrix one(1, 5);
  one = h.row(0);
  const ComplexVector d = oracle::random_state(rng, 5);
  const auto single = branch_family(SeparableInteraction::make(one), ComplexVector::Ones(1), d,
                                    GaussianTimeLaw::make(2.0, 1.0, 1.0));
  CHECK((assemble_sigma(single).matrix() - single.block(0, 0)).norm() < 1e-15);
}

TEST_CASE("pure limit gives rank-one cross operators") {
  std::mt19937_64 rng(25);
  RealMatrix h = RealMatrix::Random(2, 3);
  const ComplexVector d = oracle::random_state(rng, 3);
  const auto fam = branch_family(SeparableInteraction::make(h), uniform(2), d,
                                 GaussianTimeLaw::make(1.5, 1e14, 1.0));
  Eigen::JacobiSVD<oracle::CM> svd(fam.block(0, 1));
  CHECK(svd.singularValues()(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(svd.singularValues()(1) < 1e-10);
}

TEST_CASE("correlation_amplitude and window_average") {
  const auto ca = CorrelationAmplitude::make(RealVector::Constant(3, 1.0 / 3), RealVector::LinSpaced(3, 0.5, 2.5));
  CHECK(std::abs(correlation_amplitude(ca, 0.0) - 1.0) < 1e-15);
  const auto mono = CorrelationAmplitude::make(RealVector::Ones(1), RealVector::Constant(1, 1.7));
  for (double t : {0.1, 5.0, 100.0}) CHECK(std::abs(correlation_amplitude(mono, t)) == doctest::Approx(1.0));
  for (double t = 0; t < 50; t += 0.37) CHECK(std::abs(correlation_amplitude(ca, t)) <= 1.0 + 1e-15);

  // Two-qubit trace case: zeta chi(t0) = exp(-C^2/16 lambda) cos(C t0 / 2).
  for (double t0 : {0.0, 1.0, 4.2, 9.9}) {
    const auto fam = branch_family(two_qubit(1.0), uniform(2), uniform(2), GaussianTimeLaw::make(t0, 1.0, 1.5));
    const auto tr = CorrelationAmplitude::for_trace(fam, 0, 1);
    const Complex v = tr.zeta * correlation_amplitude(tr, t0);
    CHECK(std::abs(v - std::exp(-1.0 / 16) * std::cos(t0 / 2)) < 1e-14);
    CHECK(std::abs(v - fam.block(0, 1).trace()) < 1e-14);
  }

  const auto cst = window_average([](double) { return Complex(0.3, -0.4); }, 2.0, 5.0, 256);
  CHECK(std::abs(cst.mean - Complex(0.3, -0.4)) < 1e-15);
  CHECK(cst.second_moment == doctest::Approx(0.25));

  const double w = 1.3;
  const auto ph = window_average([&](double t) { return std::exp(Complex(0, -w * t)); }, 0.7, 2 * kPi / w, 1024);
  CHECK(std::abs(ph.mean) < 1e-3);
  CHECK(ph.second_moment >= std::norm(ph.mean));
  CHECK_THROWS_AS(window_average([](double) { return Complex(1); }, 0, 1, 10), Error);
}

TEST_CASE("window second moment of an incommensurate spectrum approaches sum p^2") {
  std::mt19937_64 rng(26);
  RealVector p(12), om(12);
  for (Index k = 0; k < 12; ++k) {
    p(k) = 0.5 + oracle::unit(rng);
    om(k) = double(k + 1) + std::sqrt(2.0) * oracle::unit(rng);
  }
  p /= p.sum();
  const auto ca = CorrelationAmplitude::make(p, om);
  const auto avg = window_average([&](double t) { return correlation_amplitude(ca, t); }, 0.0, 200.0, 20000);
  CHECK(avg.second_moment == doctest::Approx(p.squaredNorm()).epsilon(0.2));
}

TEST_CASE("mutual_information limits and the entropy bound") {
  // Identical branches.
  RealMatrix flat(2, 3);
  flat << 0.1, 0.8, -0.4, 0.1, 0.8, -0.4;
  std::mt19937_64 rng(27);
  const auto same = branch_family(SeparableInteraction::make(flat), oracle::random_state(rng, 2),
                                  oracle::random_state(rng, 3), GaussianTimeLaw::make(3.0, 1.0, 1.0));
  CHECK(mutual_information(same).mutual < 1e-12);

  // Fourier branches: orthogonal pure apparatus states at t0 = 1 in the pure limit.
  for (Index k : {2, 3}) {
    RealMatrix h(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index j = 0; j < k; ++j) h(a, j) = 2 * kPi * double(a * j) / double(k);
    const auto fam = branch_family(SeparableInteraction::make(h), uniform(k), uniform(k),
                                   GaussianTimeLaw::make(1.0, 1e14, 1.0));
    const auto mi = mutual_information(fam);
    CHECK(mi.object_entropy == doctest::Approx(std::log(double(k))).epsilon(1e-14));
    CHECK(std::abs(mi.mutual - std::log(double(k))) < 1e-6);
    for (Index a = 0; a < k; ++a)
      for (Index ap = a + 1; ap < k; ++ap) CHECK(overlap_norm(fam.rho_a(a).matrix(), fam.rho_a(ap).matrix()) < 1e-6);
  }

  for (int trial = 0; trial < 20; ++trial) {
    RealMatrix h(3, 4);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 4; ++j) h(i, j) = 4 * oracle::unit(rng);
    const auto fam = branch_family(SeparableInteraction::make(h), oracle::random_state(rng, 3),
                                   oracle::random_state(rng, 4), GaussianTimeLaw::make(5 * oracle::unit(rng), 0.3 + oracle::unit(rng), 1.0));
    const auto mi = mutual_information(fam);
    CHECK(mi.mutual <= mi.object_entropy + 1e-10);
    // Holevo form from an independent entropy routine.
    oracle::CM avg = oracle::CM::Zero(4, 4);
    double cond = 0.0;
    for (Index a = 0; a < 3; ++a) {
      const double w = std::norm(fam.b(a));
      avg += w * fam.block(a, a);
      cond += w * entropy_oracle(fam.block(a, a));
    }
    CHECK(mi.mutual == doctest::Approx(std::max(0.0, entropy_oracle(avg) - cond)).epsilon(1e-9));
  }
}

TEST_CASE("classical_classical_distance of diagonal and Schmidt states") {
  std::mt19937_64 rng(28);
  RealVector p = RealVector::NullaryExpr(6, [&] { return 0.1 + oracle::unit(rng); });
  p /= p.sum();
  const auto diag = validate_density(p.cast<Complex>().asDiagonal().toDenseMatrix());
  const SubsystemSplit split({2, 3});
  CHECK(classical_classical_distance(diag, split, ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(classical_classical_distance(diag, split, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)) < 1e-15);

  ComplexVector b(3);
  b << std::sqrt(0.5), Complex(0, std::sqrt(0.3)), std::sqrt(0.2);
  ComplexVector schmidt = ComplexVector::Zero(9);
  for (Index a = 0; a < 3; ++a) schmidt(a * 3 + a) = b(a);
  const auto pure = PureState::from_amplitudes(schmidt).projector();
  double s = 0.0;
  for (Index a = 0; a < 3; ++a)
    for (Index ap = 0; ap < 3; ++ap)
      if (a != ap) s += std::norm(b(a)) * std::norm(b(ap));
  const SubsystemSplit qq({3, 3});
  CHECK(classical_classical_distance(pure, qq, ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(3, 3)) ==
        doctest::Approx(std::sqrt(s)).epsilon(1e-13));
  CHECK(classical_classical_distance(pure, qq, ComplexMatrix::Identity(3, 3)) ==
        doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  CHECK_THROWS_AS(classical_classical_distance(pure, split, ComplexMatrix::Identity(2, 2)), Error);
}

TEST_CASE("degenerate_groups") {
  ComplexVector b(4);
  b << 0.5, Complex(0, 0.5), 0.5, -0.5;
  CHECK(degenerate_groups(b) == std::vector<std::vector<Index>>{{0, 1, 2, 3}});
  ComplexVector c(3);
  c << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
  CHECK(degenerate_groups(c).empty());
}

TEST_CASE("condition-T pinch closed form for non-degenerate weights") {
  RealMatrix h(2, 3);
  h << 0.0, 0.4, 1.1, 0.9, -0.3, 0.2;
  ComplexVector b(2);
  b << std::sqrt(0.7), std::sqrt(0.3);
  std::mt19937_64 rng(29);
  const auto fam = branch_family(SeparableInteraction::make(h), b, oracle::random_state(rng, 3),
                                 GaussianTimeLaw::make(1.0, 1.0, 1.0));
  const std::vector<double> t0{10, 20, 30};
  for (double theta : {0.1, kPi / 8, kPi / 4, 1.2}) {
    const auto bc = evaluate_basis(fam, 0, 1, theta, 0.7, t0);
    CHECK(bc.condition_t == doctest::Approx(0.5 * std::abs(std::sin(2 * theta)) * 0.4).epsilon(1e-12));
  }
}

TEST_CASE("pure-limit degenerate weights leave the pointer basis ambiguous") {
  RealMatrix h(2, 2);
  h << 0.0, 0.0, 0.0, kPi;
  const auto fam = branch_family(SeparableInteraction::make(h), uniform(2), uniform(2),
                                 GaussianTimeLaw::make(1.0, 1e14, 1.0));
  std::vector<double> t0;
  for (int k = 0; k < 8; ++k) t0.push_back(2 * k + 1);
  const auto groups = degenerate_groups(fam.b);
  REQUIRE(groups.size() == 1);
  const auto rep = uniqueness_scan(fam, groups, t0);
  CHECK(rep.original_passes);
  CHECK(rep.alternatives_passing > 0);
  CHECK_FALSE(rep.unique);

  const auto alt = evaluate_basis(fam, 0, 1, kPi / 4, 0.0, t0);
  CHECK(alt.condition_t < 1e-15);

  const auto none = uniqueness_scan(fam, {}, t0);
  CHECK(none.alternatives_tested == 0);
  CHECK(none.note.find("no degenerate group") != std::string::npos);
}

TEST_CASE("tripartite state with a trivial environment") {
  std::mt19937_64 rng(30);
  const ComplexVector b = oracle::random_state(rng, 3);
  const ComplexMatrix basis = ComplexMatrix::Identity(3, 3);
  const RealMatrix env_h = RealMatrix::Constant(3, 1, 0.0);
  const auto st = tripartite_sigma(b, basis, env_h, ComplexVector::Ones(1), GaussianTimeLaw::make(5.0, 1.0, 1.0));
  ComplexVector schmidt = ComplexVector::Zero(9);
  for (Index a = 0; a < 3; ++a) schmidt(a * 3 + a) = b(a);
  CHECK((st.rho_oa.matrix() - schmidt * schmidt.adjoint()).norm() < 1e-14);
  for (Index a = 0; a < 3; ++a) CHECK(st.rho_o.matrix()(a, a).real() == doctest::Approx(std::norm(b(a))).epsilon(1e-15));

  // A real environment only touches off-diagonals.
  RealMatrix eh(3, 4);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j) eh(i, j) = 3 * oracle::unit(rng);
  const auto mon = tripartite_sigma(b, basis, eh, oracle::random_state(rng, 4), GaussianTimeLaw::make(7.0, 1.0, 1.0));
  for (Index a = 0; a < 3; ++a) {
    CHECK(std::abs(mon.rho_o.matrix()(a, a) - std::norm(b(a))) < 1e-15);
    CHECK(std::abs(mon.env_traces(a, a) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(tripartite_sigma(b, basis, RealMatrix::Zero(2, 4), uniform(4), GaussianTimeLaw::make(0, 1, 1)), Error);
}

TEST_CASE("lemma window averages match direct operator products") {
  std::mt19937_64 rng(31);
  RealMatrix h(3, 6);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 6; ++j) h(i, j) = 3 * oracle::unit(rng);
  const auto fam = branch_family(SeparableInteraction::make(h), oracle::random_state(rng, 3),
                                 oracle::random_state(rng, 6), GaussianTimeLaw::make(0.0, 0.8, 1.0));
  std::vector<double> t0;
  for (int k = 0; k < 8; ++k) t0.push_back(20.0 + 20.0 * k / 7.0);
  LemmaOptions opts;
  opts.window_samples = 256;
  const auto rep = lemma41_report(fam, t0, 20.0, opts);
  REQUIRE(rep.pairs.size() == 3);
  for (const auto& pd : rep.pairs) {
    double ov = 0.0, tr2 = 0.0;
    for (int k = 0; k < 256; ++k) {
      const double t = 20.0 + 20.0 * (k + 0.5) / 256;
      const auto f = fam.at(t);
      ov += (f.block(pd.alpha, pd.alpha) * f.block(pd.alpha_p, pd.alpha_p)).norm();
      tr2 += std::norm(f.block(pd.alpha, pd.alpha_p).trace());
    }
    CHECK(pd.mean_overlap == doctest::Approx(ov / 256).epsilon(1e-12));
    CHECK(pd.trace_second_moment == doctest::Approx(tr2 / 256).epsilon(1e-12));
    double mx = 0.0;
    for (double t : t0) {
      const auto f = fam.at(t);
      mx = std::max(mx, (f.block(pd.alpha, pd.alpha) * f.block(pd.alpha_p, pd.alpha_p)).norm());
    }
    CHECK(pd.max_overlap == doctest::Approx(mx).epsilon(1e-12));
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

}  // TEST_SUITE
