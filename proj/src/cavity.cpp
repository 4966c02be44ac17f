#include "dcelab/cavity.hpp"

#include <cmath>
#include <limits>

#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"

namespace dce {

using numerics::kPi;

void CavitySpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("cavity length must be positive");
  if (n_modes < 1) throw DomainError("cavity needs at least one mode");
}

ModeBasis dirichlet_spectrum(double R, std::size_t n_modes) {
  if (!(R > 0.0)) throw DomainError("cavity length must be positive");
  ModeBasis b;
  b.k.resize(static_cast<Eigen::Index>(n_modes));
  for (std::size_t n = 0; n < n_modes; ++n) b.k[n] = static_cast<double>(n + 1) * kPi / R;
  return b;
}

ModeBasis dirichlet_spectrum(const CavitySpec& spec) {
  spec.validate();
  if (spec.boundary != Boundary::dirichlet) {
    throw DomainError("dirichlet_spectrum requires a Dirichlet cavity; use the SQUID solver");
  }
  return dirichlet_spectrum(spec.length, spec.n_modes);
}

double mode_function(std::size_t j, double x, double R) {
  if (!(R > 0.0)) throw DomainError("mode_function: R must be positive");
  if (x < 0.0 || x > R) throw DomainError("mode_function: x outside [0, R]");
  return std::sqrt(2.0 / R) * std::sin(static_cast<double>(j) * kPi * x / R);
}

double mode_function_dR(std::size_t j, double x, double R) {
  if (!(R > 0.0)) throw DomainError("mode_function_dR: R must be positive");
  const double k = static_cast<double>(j) * kPi / R;
  const double amp = std::sqrt(2.0 / R);
  return -0.5 / R * amp * std::sin(k * x) - amp * std::cos(k * x) * k * x / R;
}

CouplingMatrices coupling_M(std::size_t n_modes, double R) {
  if (!(R > 0.0)) throw DomainError("coupling_M: R must be positive");
  const auto n = static_cast<Eigen::Index>(n_modes);
  CouplingMatrices c;
  c.g = Eigen::MatrixXd::Zero(n, n);
  // g_kj = (-1)^(k+j) 2kj / (j^2 - k^2); antisymmetric, zero diagonal
  for (Eigen::Index a = 0; a < n; ++a) {
    const double k = static_cast<double>(a + 1);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double j = static_cast<double>(b + 1);
      const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
      const double v = sign * 2.0 * k * j / (j * j - k * k);
      c.g(a, b) = v;
      c.g(b, a) = -v;
    }
  }
  c.M = c.g / R;
  c.S = c.M.transpose() * c.M;
  return c;
}

double thermal_occupation(double beta, double omega) {
  if (!(beta > 0.0) || !(omega > 0.0)) throw DomainError("thermal_occupation needs beta, omega > 0");
  const double x = beta * omega;
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

double static_casimir_energy(double L) {
  if (!(L > 0.0)) throw DomainError("static_casimir_energy: L must be positive");
  return -kPi / (24.0 * L);
}

double thermal_Z(double Td0) {
  if (Td0 < 0.0) throw DomainError("thermal_Z: negative temperature");
  if (Td0 == 0.0) return 0.0;
  double sum = 0.0;
  for (long n = 1;; ++n) {
    const double e = static_cast<double>(n) * kPi;
    const double x = e / Td0;
    if (x > 700.0) break;
    const double term = e / std::expm1(x);
    sum += term;
    // terms decay monotonically once x > 1
    if (x > 1.0 && term < 1e-16 * sum) break;
  }
  return sum;
}

}  // namespace dce
