#pragma once

// Lowest-order multiple-scale analysis for R(t) = R0 (1 + eps sin(Omega t)) on
// a Dirichlet cavity.  Only the secular terms survive on the slow time
// tau = eps t; the resulting system is linear with constant coefficients.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcelab/cavity.hpp"

namespace dce {

enum class ResonanceKind { degenerate_2wk, sum_wk_wj, difference_scatter };

std::string to_string(ResonanceKind kind);

/// Mode indices are 1-based; for degenerate resonances k == j.  For the
/// difference kind, j is the upper mode (w_j - w_k = Omega).
struct Resonance {
  ResonanceKind kind;
  std::size_t k;
  std::size_t j;
  double target;  // the matched combination of frequencies
};

struct ResonanceReport {
  std::vector<Resonance> items;
  bool empty() const noexcept { return items.empty(); }
  /// True when any 2w_k or w_k + w_j condition fires.
  bool creates_photons() const;
};

/// Tests Omega against 2w_k, w_k + w_j (k < j) and |w_k - w_j| for all modes,
/// with |Omega - target| < tol * w_1.
ResonanceReport classify_resonances(const ModeBasis& basis, double Omega, double tol = 1e-9);

/// alpha[i](n, k), beta[i](n, k) at slow times tau[i].
struct SlowAmplitudes {
  std::vector<double> tau;
  std::vector<double> t;  // lab time tau / eps
  std::vector<Eigen::MatrixXcd> alpha;
  std::vector<Eigen::MatrixXcd> beta;
};

struct SlowOptions {
  double match_tol = 1e-9;     // relative to w_1
  std::size_t samples = 101;   // output points including tau = 0
  std::size_t steps = 0;       // RK4 steps; 0 picks >= 1000
};

/// Integrates the slow system from alpha = I, beta = 0.  R0 fixes the
/// reference cavity and must match the basis; eps only converts tau to the
/// lab time recorded in the result.
SlowAmplitudes evolve_slow(const ModeBasis& basis, double Omega, double R0, double eps,
                           double tau_max, const SlowOptions& opt = {});

/// Same, from arbitrary initial coefficients (rows are in-modes).
SlowAmplitudes evolve_slow(const ModeBasis& basis, double Omega, double R0, double eps,
                           double tau_max, const Eigen::MatrixXcd& alpha0,
                           const Eigen::MatrixXcd& beta0, const SlowOptions& opt = {});

/// Generator K of d/dtau [A; B] = K [A; B] where A(k, n) = alpha_nk.
Eigen::MatrixXd slow_generator(const ModeBasis& basis, double Omega, double R0, double match_tol);

}  // namespace dce
