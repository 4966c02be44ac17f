#pragma once

// Static 1D cavity primitives in natural units (hbar = c = k_B = 1).

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dce {

enum class Boundary { dirichlet, squid_generalized };

struct CavitySpec {
  double length = 1.0;        // L0
  std::size_t n_modes = 20;   // truncation N
  Boundary boundary = Boundary::dirichlet;

  /// Throws DomainError unless length > 0 and n_modes >= 1.
  void validate() const;
};

/// Wavenumbers k_n (= frequencies omega_n, c = 1) for n = 1..N.
struct ModeBasis {
  Eigen::VectorXd k;
  const Eigen::VectorXd& omega() const noexcept { return k; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(k.size()); }
};

/// M_kj = <psi_j, d_R psi_k>, S = sum_l M_lk M_lj and the dimensionless
/// g_kj = R M_kj.  Row/column index 0 is mode 1.
struct CouplingMatrices {
  Eigen::MatrixXd M;
  Eigen::MatrixXd S;
  Eigen::MatrixXd g;
};

ModeBasis dirichlet_spectrum(const CavitySpec& spec);

/// Dirichlet spectrum of a cavity of length R with N modes.
ModeBasis dirichlet_spectrum(double R, std::size_t n_modes);

/// Instantaneous mode psi_j(x, R) = sqrt(2/R) sin(j pi x / R), j >= 1.
double mode_function(std::size_t j, double x, double R);

/// d psi_j / d R at fixed x.
double mode_function_dR(std::size_t j, double x, double R);

/// Closed-form coupling matrices at wall position R for N modes.
CouplingMatrices coupling_M(std::size_t n_modes, double R);
inline CouplingMatrices coupling_M(const CavitySpec& spec, double R) {
  return coupling_M(spec.n_modes, R);
}

/// Bose-Einstein occupation 1/(exp(beta omega) - 1).
double thermal_occupation(double beta, double omega);

/// -pi / (24 L)
double static_casimir_energy(double L);

/// Z(T d0) = sum_n n pi / (exp(n pi / (T d0)) - 1).
double thermal_Z(double Td0);

}  // namespace dce
