#pragma once

// Static spectrum of a transmission-line cavity terminated by SQUIDs:
//   (kd) tan(kd + phi) + chi0 (kd)^2 = b0R
//  -(kd) tan(phi)      + chi0 (kd)^2 = b0L
// The second equation fixes phi explicitly; the first becomes
//   Theta(x) = x + atan((chi0 x^2 - b0L) / x) + atan((chi0 x^2 - b0R) / x) = m pi.

#include <cstddef>
#include <vector>

namespace dce {

struct SquidCavityParams {
  double chi0 = 0.0;
  double b0L = 0.0;
  double b0R = 0.0;
  double d = 1.0;
  void validate() const;
};

struct SpectrumRoot {
  double kd = 0.0;
  double phi = 0.0;  // principal branch (-pi/2, pi/2]
};

/// Both defining equations in the normalized form sin(angle mismatch); these
/// stay well conditioned when b0 is large.  Zero at an exact root.
struct SpectrumResidual {
  double right = 0.0;
  double left = 0.0;
};
SpectrumResidual spectrum_residual(const SquidCavityParams& p, const SpectrumRoot& r);

/// The equations exactly as written (LHS - RHS); ill-conditioned near the
/// tangent poles, useful for moderate parameters.
SpectrumResidual spectrum_residual_raw(const SquidCavityParams& p, const SpectrumRoot& r);

/// Phase function Theta(x) defined above.
double spectrum_phase(const SquidCavityParams& p, double x);

/// The n_max lowest positive roots in increasing order.  Throws
/// RootFindingError if a root pair merges at a tangency (possible only for
/// negative b0).
std::vector<SpectrumRoot> solve_spectrum(const SquidCavityParams& p, std::size_t n_max);

/// L0 + E_lcav L0 / (2 E_J cos f).  Throws DomainError when |cos f| < cos_min.
double effective_length(double L0, double E_lcav, double E_J, double f, double cos_min = 1e-3);

enum class DriveKind { twice = 1, sum = 2, difference = 4 };
constexpr unsigned kAllDriveKinds = 7;

struct DriveFrequency {
  double Omega;    // in units of 1/d (c = 1)
  DriveKind kind;
  std::size_t n;   // 1-based root indices
  std::size_t m;
};

/// 2k_n, k_n + k_m and |k_n - k_m| for the selected kinds, deduplicated
/// within rel_tol (first occurrence kept).
std::vector<DriveFrequency> resonance_frequencies(const std::vector<SpectrumRoot>& roots, double d,
                                                  unsigned kinds = kAllDriveKinds,
                                                  double rel_tol = 1e-9);

/// True when consecutive gaps of kd agree within rel_tol of the first gap.
bool is_equidistant(const std::vector<SpectrumRoot>& roots, double rel_tol = 1e-8);

}  // namespace dce
