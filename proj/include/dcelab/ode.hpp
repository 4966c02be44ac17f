#pragma once

// Dormand-Prince 5(4) integrator with the 4th-order continuous extension.
// Works on any dense Eigen matrix type (real or complex); the error norm is the
// RMS of the componentwise scaled local error.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dcelab/errors.hpp"

namespace dce::ode {

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: pick automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Integrates dy/dt = f(t, y) from t0 to t1 (t1 < t0 runs backwards).
/// `sample_times` must be monotone in the integration direction and inside
/// [t0, t1]; the observer receives the dense-output state at each of them.
template <class State>
class Dopri5 {
 public:
  using Rhs = std::function<void(double, const State&, State&)>;
  using Observer = std::function<void(double, const State&)>;

  Dopri5(Rhs f, Tolerances tol) : f_(std::move(f)), tol_(tol) {}

  State integrate(double t0, State y, double t1, const std::vector<double>& sample_times = {},
                  const Observer& observe = {}) {
    stats_ = {};
    if (t1 == t0) {
      for (double ts : sample_times)
        if (observe) observe(ts, y);
      return y;
    }
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    std::size_t next_sample = 0;
    auto emit_until = [&](double t_hi, auto&& dense) {
      while (next_sample < sample_times.size() &&
             dir * (sample_times[next_sample] - t_hi) <= 0.0) {
        if (observe) observe(sample_times[next_sample], dense(sample_times[next_sample]));
        ++next_sample;
      }
    };
    emit_until(t0, [&](double) -> const State& { return y; });

    State k1, k2, k3, k4, k5, k6, k7, ytmp, yerr, ynew;
    eval(t, y, k1);
    double h = tol_.initial_step > 0.0 ? tol_.initial_step : initial_step(t, y, k1, dir);
    h = dir * std::min(std::abs(h), tol_.max_step);
    const double span = std::abs(t1 - t0);

    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
      if (++steps > tol_.max_steps) throw IntegrationError("too many steps", t);
      if (dir * (t + h - t1) > 0.0) h = t1 - t;
      if (std::abs(h) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span)) {
        throw IntegrationError("step size underflow", t);
      }
      ytmp = y + h * (a21 * k1);
      eval(t + c2 * h, ytmp, k2);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      eval(t + c3 * h, ytmp, k3);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      eval(t + c4 * h, ytmp, k4);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      eval(t + c5 * h, ytmp, k5);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      eval(t + h, ytmp, k6);
      ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      eval(t + h, ynew, k7);
      yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double err = error_norm(y, ynew, yerr);
      if (!std::isfinite(err)) throw IntegrationError("non-finite state", t);
      if (err <= 1.0) {
        ++stats_.accepted;
        const double t_new = t + h;
        if (next_sample < sample_times.size() && observe) {
          // continuous extension coefficients
          const State r1 = y;
          const State r2 = ynew - y;
          const State r3 = h * k1 - r2;
          const State r4 = r2 - h * k7 - r3;
          const State r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
          const double t_old = t;
          emit_until(t_new, [&](double ts) -> State {
            const double th = (ts - t_old) / h;
            const double th1 = 1.0 - th;
            return State(r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5))));
          });
        }
        y = ynew;
        k1 = k7;
        t = t_new;
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = dir * std::min(std::abs(h) * fac, tol_.max_step);
      } else {
        ++stats_.rejected;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    emit_until(t1, [&](double) -> const State& { return y; });
    return y;
  }

  const Stats& stats() const noexcept { return stats_; }

 private:
  void eval(double t, const State& y, State& out) {
    ++stats_.rhs_evaluations;
    f_(t, y, out);
  }

  double error_norm(const State& y0, const State& y1, const State& err) const {
    const auto scale = (tol_.atol + tol_.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
    const double s = (err.cwiseAbs().array() / scale).square().sum();
    return std::sqrt(s / static_cast<double>(err.size()));
  }

  double initial_step(double t, const State& y, const State& f0, double dir) {
    const auto scale = (tol_.atol + tol_.rtol * y.cwiseAbs().array());
    const double d0 = std::sqrt((y.cwiseAbs().array() / scale).square().mean());
    const double d1n = std::sqrt((f0.cwiseAbs().array() / scale).square().mean());
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    State y1 = y + dir * h0 * f0;
    State f1;
    eval(t + dir * h0, y1, f1);
    const double d2 = std::sqrt(((f1 - f0).cwiseAbs().array() / scale).square().mean()) / h0;
    const double h1 = std::max(d1n, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1n, d2), 0.2);
    return std::min(100.0 * h0, h1);
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Rhs f_;
  Tolerances tol_;
  Stats stats_;
};

/// Classical fixed-step RK4, used for smooth linear systems where step control
/// buys nothing.
template <class State, class F>
State rk4_fixed(F&& f, double t0, State y, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  State k1, k2, k3, k4;
  double t = t0;
  for (std::size_t i = 0; i < steps; ++i) {
    f(t, y, k1);
    f(t + 0.5 * h, State(y + 0.5 * h * k1), k2);
    f(t + 0.5 * h, State(y + 0.5 * h * k2), k3);
    f(t + h, State(y + h * k3), k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + static_cast<double>(i + 1) * h;
  }
  return y;
}

}  // namespace dce::ode
