#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using CM = Eigen::MatrixXcd;
using CV = Eigen::VectorXcd;

inline double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline CM random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  CM m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = C(2 * unit(rng) - 1, 2 * unit(rng) - 1);
  return m;
}

inline CM random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const CM a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

inline CV random_state(std::mt19937_64& rng, Eigen::Index n) {
  CV v = random_matrix(rng, n, 1);
  return v / v.norm();
}

inline CM random_density(std::mt19937_64& rng, Eigen::Index n) {
  const CM a = random_matrix(rng, n, n);
  CM rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Kronecker product by explicit index arithmetic.
inline CM kron(const CM& a, const CM& b) {
  CM out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// tr_B of a (dA dB) x (dA dB) matrix, keep the first factor.
inline CM trace_second(const CM& m, Eigen::Index da, Eigen::Index db) {
  CM out = CM::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

/// tr_A, keep the second factor.
inline CM trace_first(const CM& m, Eigen::Index da, Eigen::Index db) {
  CM out = CM::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

/// Maclaurin series of erf; converges for moderate arguments.
inline double erf_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18) break;
  }
  return 2.0 / std::sqrt(M_PI) * sum;
}

/// Composite trapezoid rule on [a, b] with n intervals.
inline C trapezoid(const std::function<C(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  C s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

/// Composite Simpson rule, n even.
inline C simpson(const std::function<C(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  C s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// -sum p ln p over a probability vector.
inline double shannon(std::initializer_list<double> ps) {
  double s = 0.0;
  for (double p : ps)
    if (p > 0) s -= p * std::log(p);
  return s;
}

}  // namespace oracle
