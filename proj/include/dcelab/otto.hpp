#pragma once

// Quantum Otto cycle with the cavity field as working medium.  The wall follows
// L(t) = L0 [1 - eps delta(t / tau)] on the compression stroke and the reversed
// path on the expansion stroke.  Units: hbar = c = 1, omega_k = k pi / L0.
//
// The friction energy to second order in eps factorizes through
//   D(nu) = int_0^tau deltadot(t) e^{i nu t} dt,
// since the double time integral of deltadot(t1) deltadot(t2) cos(nu (t1 - t2))
// equals |D(nu)|^2.  All frequencies entering are integer multiples of pi/L0.

#include <cstddef>
#include <vector>

#include "dcelab/trajectory.hpp"

namespace dce {

StrokeShape quintic_shape();
/// quintic + s^3 (1 - s)^3 (a + b s): same endpoint constraints, asymmetric for b != 0.
StrokeShape polynomial_shape(double a, double b);
/// delta_r(s) = 1 - delta(1 - s): the same path traversed backwards.
StrokeShape reversed_shape(StrokeShape shape);

/// delta(t) = 10 (t/tau)^3 - 15 (t/tau)^4 + 6 (t/tau)^5; DomainError outside [0, tau].
double quintic_trajectory(double t, double tau);

/// Requires delta(0) = 0, delta(1) = 1, delta' = delta'' = 0 at both ends and
/// 0 <= delta <= 1 in between; InvalidTrajectoryError otherwise.
void check_admissible(const StrokeShape& shape, double tol = 1e-10);

struct CycleSpec {
  double L0 = 1.0;
  double eps = 0.01;
  double beta_A = 2.0;   // cold bath (engine mode: beta_A > beta_C)
  double beta_C = 0.2;   // hot bath
  double tau = 1.0;      // stroke duration
  StrokeShape shape = quintic_shape();
  std::size_t n_modes = 0;      // 0: grow until the mode sum converges
  double mode_tol = 1e-6;       // relative change allowed when doubling N
  std::size_t max_modes = 1u << 15;
  bool include_casimir = true;
  double thermalization_time = 0.0;  // per bath contact, added to the 2 tau of the strokes
  void validate() const;
  double omega1() const;
};

/// F^beta(t1, t2) for mode k (1-based), inner sum over j <= n_modes (n_modes = 0
/// uses 64).  beta may be +infinity.
double friction_kernel(double t1, double t2, std::size_t k, double beta, const CycleSpec& spec);

struct FrictionResult {
  double value = 0.0;
  std::size_t n_modes = 0;
  std::vector<double> partial;  // value at N/8, N/4, N/2, N
  bool converged = false;
};

/// (eps^2/4) sum_k omega_k int int F^beta over a stroke of duration tau.
/// Throws TruncationError (with partial sums) if a fixed n_modes does not
/// converge, or the automatic growth reaches max_modes.
FrictionResult friction_energy_detail(const CycleSpec& spec, double beta, double tau);
double friction_energy(const CycleSpec& spec, double beta, double tau);

/// Same quantity from the exact mode equations: propagate the thermal state
/// through the stroke and take sum_k omega_k(L1) (N_k^out - N_k^in).
double friction_energy_ode(const CycleSpec& spec, double beta, std::size_t n_modes, double rtol = 1e-10);

struct CycleResult {
  double E_A = 0, E_B = 0, E_C = 0, E_D = 0;
  double W = 0, Q = 0;
  double eta = 0;              // W / Q
  double eta_first_order = 0;  // eta_Otto - (E_F^A + E_F^C) / Q_Otto
  double W_otto = 0, Q_otto = 0, eta_otto = 0;
  double E_F_A = 0, E_F_C = 0;
  double cycle_time = 0;
  double P = 0;                // W / cycle_time
  bool engine = true;          // Q_otto > 0
  bool subluminal = true;      // wall speed stays below c
  std::size_t n_modes = 0;     // modes used for the friction sums
};

CycleResult adiabatic_cycle(const CycleSpec& spec);
CycleResult nonadiabatic_cycle(const CycleSpec& spec);

struct PowerPoint {
  double tau, W, Q, eta, P;
};
std::vector<PowerPoint> power_curve(const CycleSpec& spec, const std::vector<double>& tau_grid,
                                    unsigned threads = 1);
/// Index of the largest P.
std::size_t power_argmax(const std::vector<PowerPoint>& curve);

}  // namespace dce
