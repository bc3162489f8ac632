#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "common.hpp"

namespace ltd::models {

using namespace detail;

namespace {

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan plan = nullptr;
  Plan(int n, fftw_complex* buf, int sign) {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

}  // namespace

ClockReading free_particle_clock(const GridWavepacket& packet, double mass, double t) {
  packet.validate();
  require(std::isfinite(t) && t > 0.0, ErrorKind::parameter, "clock: t must be positive");
  require(std::isfinite(mass) && mass > 0.0, ErrorKind::parameter, "clock: mass must be positive");
  const Index n = packet.grid.size();
  require(n >= 2, ErrorKind::parameter, "clock: grid needs at least two points");
  const double dx = packet.spacing();

  std::vector<Complex> buf(packet.amplitudes.data(), packet.amplitudes.data() + n);
  auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
  Plan forward(int(n), raw, FFTW_FORWARD);
  Plan backward(int(n), raw, FFTW_BACKWARD);

  fftw_execute(forward.plan);
  const double dk = 2.0 * std::numbers::pi / (double(n) * dx);
  std::vector<double> kw(static_cast<std::size_t>(n)), w(kw.size());
  for (Index j = 0; j < n; ++j) {
    const double k = dk * double(j < (n + 1) / 2 ? j : j - n);
    const auto s = std::size_t(j);
    w[s] = std::norm(buf[s]);
    kw[s] = k * w[s];
    buf[s] *= std::exp(-kI * (k * k * t / (2.0 * mass)));
  }
  const double v_mean = localtime::pairwise_sum(kw) / localtime::pairwise_sum(w) / mass;
  if (!(std::abs(v_mean) > 1e-12))
    fail(ErrorKind::undefined_clock, "clock: mean velocity vanishes");

  fftw_execute(backward.plan);
  std::vector<double> xw(static_cast<std::size_t>(n)), pw(xw.size());
  for (Index j = 0; j < n; ++j) {
    const auto s = std::size_t(j);
    pw[s] = std::norm(buf[s]);
    xw[s] = packet.grid(j) * pw[s];
  }
  ClockReading out;
  out.x_mean = localtime::pairwise_sum(xw) / localtime::pairwise_sum(pw);
  out.v_mean = v_mean;
  out.t_estimate = out.x_mean / v_mean;
  return out;
}

ScenarioReport clock_scenario(const ClockParams& p) {
  require(std::isfinite(p.velocity) && p.velocity != 0.0, ErrorKind::undefined_clock,
          "clock: mean velocity vanishes");
  require(std::isfinite(p.t) && p.t > 0.0, ErrorKind::parameter, "clock: t must be positive");
  require(p.mass > 0.0 && p.sigma > 0.0, ErrorKind::parameter, "clock: mass and spread must be positive");
  require(p.points >= 64, ErrorKind::parameter, "clock: grid needs at least 64 points");

  const double spread_t = p.sigma * std::sqrt(1.0 + std::pow(p.t / (2.0 * p.mass * p.sigma * p.sigma), 2));
  const double x_end = p.x0 + p.velocity * p.t;
  const double margin = 12.0 * std::max(p.sigma, spread_t);
  const double lo = std::min(p.x0, x_end) - margin, hi = std::max(p.x0, x_end) + margin;
  const double k0 = p.mass * p.velocity;
  const double dx = (hi - lo) / double(p.points - 1);
  if (std::numbers::pi / dx < std::abs(k0) + 12.0 / p.sigma)
    fail(ErrorKind::resolution,
         fmt::format("clock: {} points cannot resolve momentum {} over [{}, {}]", p.points, k0, lo, hi));

  const auto packet = GridWavepacket::gaussian(lo, hi, p.points, p.x0, p.sigma, k0);
  const auto r = free_particle_clock(packet, p.mass, p.t);

  ScenarioReport rep;
  rep.scenario = "clock";
  rep.param("t", p.t);
  rep.param("mass", p.mass);
  rep.param("velocity", p.velocity);
  rep.param("x0", p.x0);
  rep.param("sigma", p.sigma);
  rep.param("points", std::int64_t(p.points));
  rep.param("grid_lo", lo);
  rep.param("grid_hi", hi);
  rep.diag("x_mean", r.x_mean);
  rep.diag("v_mean", r.v_mean);
  rep.diag("t_estimate", r.t_estimate);
  rep.diag("relative_error", std::abs(r.t_estimate - p.t) / p.t);
  return rep;
}

}  // namespace ltd::models
