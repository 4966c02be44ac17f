#pragma once

// Moore-function description of a 1D cavity with moving walls.
//
// Conformal coordinates tbar + xbar = G(t + x), tbar - xbar = F(t - x) map the
// cavity [L(t), R(t)] onto [0, 1].  The functions obey
//   G(t + L(t)) = F(t - L(t)),   G(t + R(t)) - F(t - R(t)) = 2,
// and are linear before the motion starts.  For a fixed left wall at 0, G = F.
//
// Values and the first three derivatives are evaluated exactly (to root
// tolerance) by following the reflection chain back into the static past;
// derivatives are carried through each reflection by the chain rule.

#include <complex>
#include <cstddef>
#include <vector>

#include "dcelab/bogoliubov.hpp"
#include "dcelab/trajectory.hpp"

namespace dce {

struct MooreJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

struct MooreOptions {
  double grid_spacing = 0.0;  // 0: R0 / 512
};

class MooreFunction {
 public:
  /// Right wall `right`; left wall `left` (nullptr: fixed at x = 0).
  MooreFunction(TrajectoryPtr right, TrajectoryPtr left, double t_max, MooreOptions opt = {});

  MooreJet G(double z) const;
  MooreJet F(double v) const;

  double t_max() const noexcept { return t_max_; }
  double d0() const noexcept { return d0_; }
  double R0() const noexcept { return R0_; }
  double L0() const noexcept { return L0_; }
  const WallTrajectory& right() const noexcept { return *right_; }
  /// Left wall position and state (zero when fixed).
  WallState left_state(double t) const;
  bool single_mirror() const noexcept { return !left_; }
  const WallTrajectory* left() const noexcept { return left_.get(); }

  /// Sampled F on z in [z_min, z_max] with the configured spacing.
  const std::vector<double>& grid() const noexcept { return z_; }
  const std::vector<double>& values() const noexcept { return F_; }

  /// max |G(t+R) - F(t-R) - 2| (and |G(t+L) - F(t-L)|) over the time grid.
  double residual() const;

 private:
  MooreJet G_impl(double z) const;
  MooreJet F_impl(double v) const;

  TrajectoryPtr right_, left_;
  double t_max_;
  double t_static_;  // both walls rest before this time
  double R0_, L0_, d0_;
  double z_hi_;      // largest admissible argument
  double spacing_;
  std::vector<double> z_, F_;
};

/// Single moving mirror with the left wall at x = 0.  Throws
/// InvalidTrajectoryError if the wall speed reaches 1.
MooreFunction solve_moore(TrajectoryPtr traj, double t_max, MooreOptions opt = {});

/// Two moving walls, left < right.
MooreFunction solve_moore(TrajectoryPtr left, TrajectoryPtr right, double t_max,
                          MooreOptions opt = {});

/// v_n(x, t) = (i / sqrt(4 pi n)) [e^{-i n pi G(t+x)} - e^{-i n pi F(t-x)}].
std::complex<double> moore_mode(const MooreFunction& mf, std::size_t n, double x, double t);

/// Time derivative of v_n at fixed x.
std::complex<double> moore_mode_dt(const MooreFunction& mf, std::size_t n, double x, double t);

/// Renormalized energy density f_G(t + x) + f_F(t - x) for an initial thermal
/// state at temperature T (natural units).
double energy_density(const MooreFunction& mf, double T, double x, double t);

/// Bogoliubov matrices from overlaps of v_n with the instantaneous modes on
/// the slice t, which must lie after both walls have stopped.  `panels` sets
/// the composite Gauss rule (0: automatic).
BogoliubovMatrices bogoliubov_from_moore(const MooreFunction& mf, double t, std::size_t n_modes,
                                         std::size_t panels = 0);

/// Energy-density samples on a rectangular (x, t) grid; x is given as the
/// fraction of the instantaneous cavity, 0..1.
struct DensityGrid {
  std::vector<double> t, x, T_tt;  // flattened row-major in (t, x)
};
DensityGrid energy_density_grid(const MooreFunction& mf, double T, std::size_t nt, std::size_t nx,
                                unsigned threads = 1);

}  // namespace dce
