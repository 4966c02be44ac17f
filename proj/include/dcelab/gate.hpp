#pragma once

// Controlled-squeeze gate on a dispersively coupled qubit-resonator pair.
//
// Conventions (angular frequencies, t in seconds or natural units alike):
//   S(r, theta) = exp[(r/2)(e^{i theta} a^dag^2 - e^{-i theta} a^2)],  r >= 0
//   |r, theta> = S(r, theta)|0>,  U0(phi) = e^{i phi N}
//   sigma_z = |0><0| - |1><1|, so |0> is the upper qubit level.
// Joint vectors are ordered qubit (x) Fock: index q (n_max + 1) + n.

#include <array>
#include <cstddef>
#include <cstdint>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dce {

using cplx = std::complex<double>;

struct GateParams {
  double omega = 2.0 * 3.14159265358979323846 * 6e9;   // bare resonator
  double omega_q = 2.0 * 3.14159265358979323846 * 4e9;
  double chi = 2.0 * 3.14159265358979323846 * 8e6;
  double g_d = 5e7;
  double eps_d = 0.15;
  double theta = 0.0;  // drive phase
  double t_gate = 200e-9;
  std::size_t n_max = 0;  // 0: chosen from r by fock_cutoff
  void validate() const;

  double omega_bar0() const { return omega + chi; }
  double omega_bar1() const { return omega - chi; }
  double omega_d() const { return 2.0 * omega_bar1(); }
  /// Delta = omega_bar1 - omega_bar0 = -2 chi.
  double delta() const { return -2.0 * chi; }
  /// Delta (1 - (g_d eps_d / Delta)^2 / 2).
  double delta_tilde() const;
  /// r = g_d eps_d t_gate.
  double squeeze_r() const { return g_d * eps_d * t_gate; }
  /// phi = delta_tilde t_gate.
  double phi() const { return delta_tilde() * t_gate; }
  /// |Delta| / (g_d eps_d) >= min_ratio.
  bool dispersive_ok(double min_ratio = 5.0) const;
  std::size_t fock_dim() const;
};

/// Smallest even n_max whose squeezed-vacuum leakage beyond n_max is below tol.
std::size_t fock_cutoff(double r, double tol = 1e-12);

/// Population of |r, theta> above n_max (exact, from the closed-form amplitudes).
double squeeze_leakage(double r, std::size_t n_max);

/// Closed-form squeezed vacuum on 0..n_max, renormalized.  TruncationError if
/// the leakage exceeds max_leak.
Eigen::VectorXcd squeeze_state(double r, double theta, std::size_t n_max, double max_leak = 1e-8);

/// Truncated S(r, theta) from the spectral decomposition of its generator.
Eigen::MatrixXcd squeeze_operator(double r, double theta, std::size_t n_max);

/// a acting on a Fock vector (the top level is dropped by truncation).
Eigen::VectorXcd lower(const Eigen::VectorXcd& psi);
double mean_photon_number(const Eigen::VectorXcd& psi);

struct EncodedPair {
  Eigen::VectorXcd chi_plus, chi_minus;
  double c_plus = 1.0, c_minus = 0.0;
};
/// chi_+ = (|r,t> + |r,t+pi>) / (sqrt2 c_+),  chi_- = (|r,t+pi> - |r,t>) / (sqrt2 c_-),
/// c_+- = sqrt(1 +- 1/sqrt(cosh 2r)).  DomainError for r = 0 (chi_- degenerates).
EncodedPair chi_states(double r, double theta_tilde, std::size_t n_max);
double c_plus(double r);
double c_minus(double r);

/// Joint state from a qubit amplitude pair and a Fock vector per branch.
Eigen::VectorXcd joint(const Eigen::VectorXcd& branch0, const Eigen::VectorXcd& branch1);
Eigen::VectorXcd branch(const Eigen::VectorXcd& psi, int q);

/// U(r, theta, phi) = S(r, theta) (x) |1><1| + U0(phi) (x) |0><0|.
Eigen::VectorXcd controlled_squeeze(const Eigen::VectorXcd& psi, double r, double theta, double phi);
Eigen::VectorXcd hadamard(const Eigen::VectorXcd& psi);
/// pi rotation about x: |0> <-> |1> (global phase dropped).
Eigen::VectorXcd pi_rotation(const Eigen::VectorXcd& psi);

/// The six steps: H, U(r, theta, phi), X, U(r, theta + 2 phi + pi, phi), X, H,
/// starting from (alpha|0> + beta|1>) (x) |vac>.
Eigen::VectorXcd encoding_protocol(cplx alpha, cplx beta, double r, double theta, double phi, std::size_t n_max);
Eigen::VectorXcd encoding_protocol(cplx alpha, cplx beta, const GateParams& p);

/// Target state: |0>(alpha c_+ chi_+ + beta c_- chi_-)/sqrt2 + |1>(alpha c_- chi_- + beta c_+ chi_+)/sqrt2
/// with theta_tilde = theta + 2 phi.
Eigen::VectorXcd encoded_target(cplx alpha, cplx beta, double r, double theta_tilde, std::size_t n_max);

struct QubitMeasurement {
  double p_plus = 0, p_minus = 0;          // sigma_z = +1 (|0>) and -1 (|1>)
  Eigen::VectorXcd state_plus, state_minus; // normalized resonator states
};
QubitMeasurement measure_qubit(const Eigen::VectorXcd& psi);

/// Number of +1 outcomes in `shots` projective measurements.
std::size_t sample_qubit(const QubitMeasurement& m, std::size_t shots, std::uint64_t seed);

/// Closed form 1/2 (1 + Pz^2) + 1/2 (1 - Pz^2) sqrt(1 - 1/cosh 2r).
double average_fidelity(double r, double Pz);

/// P_+ F_+ + P_- F_- from the simulated protocol; F_+- against alpha chi_+- + beta chi_-+.
struct ProtocolFidelity {
  double p_plus, p_minus, f_plus, f_minus, average;
};
ProtocolFidelity simulated_fidelity(cplx alpha, cplx beta, double r, double theta, double phi, std::size_t n_max);

struct Parity {
  double even = 0, odd = 0;
};
Parity parity_measurement(const Eigen::VectorXcd& fock);
Parity parity_measurement_dm(const Eigen::MatrixXcd& rho_fock);

// ---- open system ----

struct OpenRates {
  double tau_q = 200e-6;    // qubit relaxation
  double tau_r = 200e-6;    // resonator damping
  double tau_phi = 10e-6;   // qubit dephasing
  double temperature = 0.06;  // kelvin
  void validate() const;
};

/// Bose occupation at angular frequency omega (s^-1) and temperature T (K).
double bath_occupation(double omega, double T);

/// Lindblad evolution of a joint density matrix under the RWA gate
/// Hamiltonian (squeeze rate g_d eps_d on |1>, rotation delta_tilde on |0>)
/// with thermal qubit/resonator damping and sigma_z dephasing.  Strang
/// splitting: exact unitary half steps around an RK4 step of the dissipator.
/// `drive` scales the squeeze rate (1 during a gate).  Throws PhysicsError if
/// the result has an eigenvalue below -1e-10.
Eigen::MatrixXcd open_evolve(const Eigen::MatrixXcd& rho, const GateParams& p, const OpenRates& rates,
                             double theta, double duration, std::size_t steps, double drive = 1.0,
                             bool check_positivity = true);

struct OpenFidelity {
  double p_plus, p_minus, f_plus, f_minus, average, purity;
};
/// Six-step protocol with both gates evolved by open_evolve.
OpenFidelity open_protocol_fidelity(cplx alpha, cplx beta, const GateParams& p, const OpenRates& rates,
                                    std::size_t steps_per_gate = 100);

// ---- RWA validation ----

/// Integrates the full Hamiltonian
///   omega_q/2 sz + omega N + chi N sz + g_d eps_d sin(omega_d t - theta)(a + a^dag)^2
/// over one gate in the frame rotating at omega_bar1 (an exact change of frame;
/// no terms dropped).  Returns the final joint vector in that frame.
Eigen::VectorXcd full_hamiltonian_evolve(const Eigen::VectorXcd& psi, const GateParams& p, double rtol = 1e-9);

struct BranchFidelities {
  double squeeze_branch;   // |1>|vac>
  double rotation_branch;  // |0>|vac>
  double rotation_coherent; // |0>|alpha = 1>
};
BranchFidelities rwa_branch_fidelities(const GateParams& p, double rtol = 1e-9);

}  // namespace dce
