#pragma once

// Instantaneous-basis evolution of the cavity field for a prescribed wall path.
//
// Each in-mode n is carried as the vector Q^(n)(t) of instantaneous-mode
// amplitudes.  Internally the solver works with the adiabatic amplitudes
//   a_k = (w_k Q_k + i P_k) / sqrt(2 w_k),   b_k = (w_k Q_k - i P_k) / sqrt(2 w_k)
// in the interaction picture, where P = Qdot - Rdot M Q is the canonical
// momentum.  A resting wall then leaves the state exactly constant.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dcelab/cavity.hpp"
#include "dcelab/ode.hpp"
#include "dcelab/trajectory.hpp"

namespace dce {

/// Q(k, n) = Q_k^(n)(t), Qdot likewise.  Rows are instantaneous modes, columns
/// are in-modes (index 0 is mode 1).
struct ModeAmplitudes {
  Eigen::MatrixXcd Q;
  Eigen::MatrixXcd Qdot;
  double t = 0.0;
  double R = 1.0;            // wall position at t
  bool wall_at_rest = true;  // Rdot(t) == 0

  // interaction-picture state, kept so propagation can resume exactly
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  Eigen::VectorXd theta;
};

/// alpha(n, k), beta(n, k): in-mode n, out-mode k.
struct BogoliubovMatrices {
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd beta;
};

/// In-vacuum amplitudes at time t for a wall resting at R:
/// Q_k^(n) = delta_nk e^{-i w_k t} / sqrt(2 w_k).
ModeAmplitudes initial_amplitudes(std::size_t n_modes, double R, double t);

/// Evolves the amplitudes from amps.t to t_target (either direction) along the
/// trajectory.  Adaptive Dormand-Prince with relative tolerance rtol.
ModeAmplitudes propagate(const WallTrajectory& traj, const ModeAmplitudes& amps, double t_target,
                         double rtol = 1e-9, ode::Stats* stats = nullptr);

/// Integrates from in-vacuum at traj.t_start() to traj.t_end().
ModeAmplitudes integrate_modes(const CavitySpec& spec, const WallTrajectory& traj,
                               double tol = 1e-9);

/// Exact inversion of Q = (alpha e^{-iwt} + beta e^{iwt}) / sqrt(2w) using Q and
/// Qdot.  Requires the wall to be at rest at amps.t; basis must be the
/// spectrum at that wall position.
BogoliubovMatrices extract_bogoliubov(const ModeAmplitudes& amps, const ModeBasis& basis);

/// Convenience: integrate_modes followed by extract_bogoliubov.
BogoliubovMatrices solve_bogoliubov(const CavitySpec& spec, const WallTrajectory& traj,
                                    double tol = 1e-9);

/// N_k^out = sum_n (|alpha_nk|^2 N_n + |beta_nk|^2 (N_n + 1)).
Eigen::VectorXd photon_spectrum(const BogoliubovMatrices& bog, const Eigen::VectorXd& N_in);

/// Row identity sum_k (|alpha_nk|^2 - |beta_nk|^2) for every n.
Eigen::VectorXd symplectic_rows(const BogoliubovMatrices& bog);

/// Instantaneous-basis vacuum photon numbers N_k(t) = sum_n |beta_nk(t)|^2
/// sampled at the requested times (inside [t_start, t_end]).
struct PhotonSeries {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> N;  // N[i](k)
};
PhotonSeries photon_series(const CavitySpec& spec, const WallTrajectory& traj,
                           const std::vector<double>& times, double tol = 1e-9);

}  // namespace dce
