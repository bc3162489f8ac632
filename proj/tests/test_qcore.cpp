#include <doctest.h>

#include "ltd/qcore.hpp"
#include "oracles.hpp"

using namespace ltd;

TEST_SUITE("qcore") {

TEST_CASE("tensor_product identity and diagonal cases") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK((tensor_product(i2, i2) - ComplexMatrix::Identity(4, 4)).norm() == 0.0);

  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const ComplexMatrix zz = tensor_product(z, z);
  const double expect[] = {1, -1, -1, 1};
  for (int k = 0; k < 4; ++k) CHECK(zz(k, k).real() == expect[k]);
  CHECK((zz - ComplexMatrix(zz.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("tensor_product matches index oracle and acts on product vectors") {
  std::mt19937_64 rng(11);
  const auto a = oracle::random_matrix(rng, 2, 2);
  const auto b = oracle::random_matrix(rng, 2, 2);
  const auto v = oracle::random_matrix(rng, 2, 1);
  const auto w = oracle::random_matrix(rng, 2, 1);
  CHECK((tensor_product(a, b) - oracle::kron(a, b)).norm() < 1e-14);
  const ComplexVector lhs = tensor_product(a, b) * oracle::kron(v, w);
  const ComplexVector rhs = oracle::kron(a * v, b * w);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

  const auto c = oracle::random_matrix(rng, 3, 2);
  CHECK((tensor_product(tensor_product(a, b), c) - tensor_product(a, tensor_product(b, c))).norm() <
        1e-12);
}

TEST_CASE("partial_trace product, Bell and random cases") {
  std::mt19937_64 rng(12);
  const auto ro = oracle::random_density(rng, 3);
  const auto ra = oracle::random_density(rng, 4);
  const auto rho = validate_density(oracle::kron(ro, ra));
  const SubsystemSplit split({3, 4});
  const std::size_t keep0[] = {0}, keep1[] = {1};
  CHECK((partial_trace(rho, split, keep0).matrix() - ro).norm() < 1e-12);
  CHECK((partial_trace(rho, split, keep1).matrix() - ra).norm() < 1e-12);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const auto pb = PureState::from_amplitudes(bell).projector();
  const SubsystemSplit qq({2, 2});
  for (const auto& keep : {keep0, keep1}) {
    const auto r = partial_trace(pb, qq, std::span<const std::size_t>(keep, 1));
    CHECK((r.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  }

  const auto mixed = validate_density(oracle::random_density(rng, 12));
  CHECK((partial_trace(mixed, split, keep0).matrix() - oracle::trace_second(mixed.matrix(), 3, 4))
            .norm() < 1e-13);
  CHECK((partial_trace(mixed, split, keep1).matrix() - oracle::trace_first(mixed.matrix(), 3, 4))
            .norm() < 1e-13);
}

TEST_CASE("partial_trace of three factors keeps factors in order") {
  std::mt19937_64 rng(13);
  const auto a = oracle::random_density(rng, 2);
  const auto b = oracle::random_density(rng, 3);
  const auto c = oracle::random_density(rng, 2);
  const auto rho = validate_density(oracle::kron(oracle::kron(a, b), c));
  const std::size_t keep[] = {0, 2};
  const auto r = partial_trace(rho, SubsystemSplit({2, 3, 2}), keep);
  CHECK((r.matrix() - oracle::kron(a, c)).norm() < 1e-13);
}

TEST_CASE("validate_density accepts states and rejects violations") {
  CHECK_NOTHROW(validate_density(ComplexMatrix::Identity(2, 2) / 2.0));
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  try {
    validate_density(bad);
    FAIL("expected a positivity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::positivity);
  }
  ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 4.0;
  CHECK_THROWS_AS(validate_density(half), Error);
  ComplexMatrix nh = ComplexMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(validate_density(nh), Error);
  CHECK_THROWS_AS(validate_density(ComplexMatrix::Zero(2, 3)), Error);
}

TEST_CASE("eigh diagonal, Pauli-x and reconstruction") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto e = eigh(d);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(e.values(2) == doctest::Approx(3.0));

  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  const auto ex = eigh(x);
  CHECK(ex.values(0) == doctest::Approx(-1.0));
  CHECK(ex.values(1) == doctest::Approx(1.0));
  // |+> for +1 and |-> for -1, up to phase.
  CHECK(std::abs(ex.vectors(0, 1) * std::conj(ex.vectors(1, 1))) == doctest::Approx(0.5));
  CHECK(std::abs(ex.vectors.col(1).dot(ComplexVector::Constant(2, 1 / std::sqrt(2.0)))) ==
        doctest::Approx(1.0));

  std::mt19937_64 rng(14);
  for (Index n : {8, 64}) {
    const auto h = oracle::random_hermitian(rng, n);
    const auto eh = eigh(h);
    const ComplexMatrix rec = eh.vectors * eh.values.cast<Complex>().asDiagonal() * eh.vectors.adjoint();
    CHECK((rec - h).norm() < 1e-10);
    for (Index k = 1; k < n; ++k) CHECK(eh.values(k - 1) <= eh.values(k));
  }
}

TEST_CASE("von_neumann_entropy values") {
  std::mt19937_64 rng(15);
  const auto psi = oracle::random_state(rng, 5);
  CHECK(von_neumann_entropy(PureState::from_amplitudes(psi).projector()) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(validate_density(ComplexMatrix::Identity(6, 6) / 6.0)) ==
        doctest::Approx(std::log(6.0)));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  const double expect = oracle::shannon({0.75, 0.25});
  CHECK(expect == doctest::Approx(0.5623).epsilon(1e-4));
  CHECK(von_neumann_entropy(validate_density(d)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("fidelity_pure values and identity") {
  std::mt19937_64 rng(16);
  const auto psi = PureState::from_amplitudes(oracle::random_state(rng, 2));
  CHECK(fidelity_pure(psi.projector(), psi) == doctest::Approx(1.0));
  CHECK(fidelity_pure(validate_density(ComplexMatrix::Identity(2, 2) / 2.0), psi) ==
        doctest::Approx(1 / std::sqrt(2.0)));
  for (int k = 0; k < 20; ++k) {
    const auto rho = validate_density(oracle::random_density(rng, 4));
    const auto phi = PureState::from_amplitudes(oracle::random_state(rng, 4));
    const double f = fidelity_pure(rho, phi);
    const double direct = phi.amplitudes().dot(rho.matrix() * phi.amplitudes()).real();
    CHECK(f <= 1.0);
    CHECK(std::abs(f * f - direct) < 1e-12);
  }
}

TEST_CASE("overlap_norm of projectors") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(overlap_norm(p0, p1) == 0.0);
  CHECK(overlap_norm(p0, p0) == doctest::Approx(1.0));
}

TEST_CASE("purity bounds over random states") {
  std::mt19937_64 rng(17);
  for (Index n = 1; n <= 9; ++n) {
    const auto rho = validate_density(oracle::random_density(rng, n));
    CHECK(rho.purity() >= 1.0 / double(n) - 1e-10);
    CHECK(rho.purity() <= 1.0 + 1e-10);
  }
}

}  // TEST_SUITE
