#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dce {

/// Position and the first three time derivatives of a wall.
struct WallState {
  double R = 0.0;
  double Rdot = 0.0;
  double Rddot = 0.0;
  double Rdddot = 0.0;
};

/// Prescribed wall path.  The wall moves only on [t_start, t_end]; outside
/// that window it rests at R(t_start) or R(t_end).  Implementations are
/// immutable and safe to share across threads.
class WallTrajectory {
 public:
  virtual ~WallTrajectory() = default;

  /// Full kinematic state; static values outside the motion window.
  WallState state(double t) const;
  double R(double t) const { return state(t).R; }
  double Rdot(double t) const { return state(t).Rdot; }
  double Rddot(double t) const { return state(t).Rddot; }

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }

  /// Upper bound of |Rdot| over the motion window.
  virtual double max_speed() const = 0;
  /// Lower and upper bounds of R over the motion window.
  virtual double min_position() const = 0;
  virtual double max_position() const = 0;
  /// True when Rdot vanishes identically.
  virtual bool is_static() const { return false; }
  virtual std::string kind() const = 0;

 protected:
  WallTrajectory(double t_start, double t_end);
  /// State for t inside [t_start, t_end].
  virtual WallState moving_state(double t) const = 0;

 private:
  double t_start_;
  double t_end_;
};

using TrajectoryPtr = std::shared_ptr<const WallTrajectory>;

/// Wall at rest at R0 on [t_start, t_end].
TrajectoryPtr make_static(double R0, double t_start, double t_end);

/// R(t) = R0 (1 + eps sin(Omega (t - t_start))) on [t_start, t_end].
TrajectoryPtr make_harmonic(double R0, double eps, double Omega, double t_start, double t_end);

/// Smooth stroke R(t) = R_from + (R_to - R_from) delta((t - t_start) / tau)
/// with the quintic delta(s) = 10 s^3 - 15 s^4 + 6 s^5 and tau = t_end - t_start.
TrajectoryPtr make_quintic_stroke(double R_from, double R_to, double t_start, double t_end);

/// Quintic smoothstep and its derivatives with respect to s in [0, 1].
struct Smoothstep {
  double value, d1, d2, d3;
};
Smoothstep quintic_smoothstep(double s);

/// Stroke profile delta(s) on [0, 1] with its first three s-derivatives.
using StrokeShape = std::function<Smoothstep(double)>;

/// R(t) = R_from + (R_to - R_from) shape((t - t_start) / tau).  The speed and
/// position bounds are sampled on 4096 points.
TrajectoryPtr make_profile(double R_from, double R_to, double t_start, double t_end, StrokeShape shape);

/// Natural cubic spline through samples (t_i, R_i); the wall is taken to be
/// at rest at the first and last sample.
TrajectoryPtr make_tabulated(std::vector<double> t, std::vector<double> R);

}  // namespace dce
