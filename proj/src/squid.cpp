#include "dcelab/squid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"

namespace dce {

using numerics::kPi;

void SquidCavityParams::validate() const {
  if (!(chi0 >= 0.0)) throw DomainError("squid: chi0 must be non-negative");
  if (!(d > 0.0)) throw DomainError("squid: d must be positive");
  if (!std::isfinite(b0L) || !std::isfinite(b0R)) throw DomainError("squid: b0 must be finite");
}

namespace {

double phi_of(const SquidCavityParams& p, double x) { return std::atan((p.chi0 * x * x - p.b0L) / x); }

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double spectrum_phase(const SquidCavityParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("squid: phase needs x > 0");
  return x + std::atan((p.chi0 * x * x - p.b0L) / x) + std::atan((p.chi0 * x * x - p.b0R) / x);
}

SpectrumResidual spectrum_residual(const SquidCavityParams& p, const SpectrumRoot& r) {
  const double x = r.kd;
  // x tan(a) = c  <=>  sin(a - atan2(c, x)) = 0 for x > 0
  const double aR = std::atan2(p.b0R - p.chi0 * x * x, x);
  const double aL = std::atan2(p.chi0 * x * x - p.b0L, x);
  return {std::abs(std::sin(x + r.phi - aR)), std::abs(std::sin(r.phi - aL))};
}

SpectrumResidual spectrum_residual_raw(const SquidCavityParams& p, const SpectrumRoot& r) {
  const double x = r.kd;
  return {std::abs(x * std::tan(x + r.phi) + p.chi0 * x * x - p.b0R),
          std::abs(-x * std::tan(r.phi) + p.chi0 * x * x - p.b0L)};
}

std::vector<SpectrumRoot> solve_spectrum(const SquidCavityParams& p, std::size_t n_max) {
  p.validate();
  if (n_max < 1) throw DomainError("squid: n_max must be >= 1");
  std::vector<SpectrumRoot> roots;
  roots.reserve(n_max);
  auto push = [&](double x) { roots.push_back({x, phi_of(p, x)}); };
  const double theta0 = -0.5 * kPi * (sgn(p.b0L) + sgn(p.b0R));

  if (p.b0L >= 0.0 && p.b0R >= 0.0) {
    // Theta' = 1 + sum (chi0 + b / x^2) / (1 + h^2) >= 1: one root per branch
    long m = static_cast<long>(std::floor(theta0 / kPi)) + 1;
    double lo = 0.0;
    for (std::size_t n = 0; n < n_max; ++n, ++m) {
      const double target = static_cast<double>(m) * kPi;
      auto f = [&](double x) { return spectrum_phase(p, x) - target; };
      // Theta(x) >= x + theta0 and Theta(x) <= x + pi bound the root
      double a = std::max(lo, 1e-300);
      double b = std::max(a, target - theta0) + 1.0;
      while (f(b) < 0.0) b *= 2.0;
      if (f(a) > 0.0) {
        std::ostringstream msg;
        msg << "squid: branch " << m << " not bracketed above kd = " << a;
        throw RootFindingError(msg.str());
      }
      const double x = numerics::find_root(f, a, b, 1e-15 * b);
      push(x);
      lo = x;
    }
    return roots;
  }

  // negative b0: Theta may turn over, so scan sin(Theta) for sign changes
  auto s = [&](double x) { return std::sin(spectrum_phase(p, x)); };
  const double scale = std::max({1.0, std::sqrt(std::abs(p.b0L) + std::abs(p.b0R)), 1.0 / (p.chi0 + 1e-300)});
  const double h = std::min(kPi / 256.0, 0.01 / scale);
  double x0 = h * 1e-3;
  double s0 = s(x0);
  double best = std::abs(s0);
  while (roots.size() < n_max) {
    const double x1 = x0 + h;
    const double s1 = s(x1);
    if ((s0 > 0.0) != (s1 > 0.0) || s1 == 0.0) {
      // exclude the poles of tan: sin(Theta) flips sign only at Theta = m pi here
      push(numerics::find_root(s, x0, x1, 1e-15 * x1));
      best = 1.0;
    } else {
      const double mid = std::abs(s(0.5 * (x0 + x1)));
      if (mid < 1e-6 && mid < best) {
        std::ostringstream msg;
        msg << "squid: near-tangent root pair around kd = " << 0.5 * (x0 + x1)
            << "; branch lost (b0L = " << p.b0L << ", b0R = " << p.b0R << ")";
        throw RootFindingError(msg.str());
      }
      best = std::min(best, std::abs(s1));
    }
    x0 = x1;
    s0 = s1;
  }
  return roots;
}

double effective_length(double L0, double E_lcav, double E_J, double f, double cos_min) {
  if (!(L0 > 0.0)) throw DomainError("effective_length: L0 must be positive");
  if (!(E_J > 0.0)) throw DomainError("effective_length: E_J must be positive");
  const double c = std::cos(f);
  if (std::abs(c) < cos_min) throw DomainError("effective_length: cos f too close to zero");
  return L0 + E_lcav * L0 / (2.0 * E_J * c);
}

std::vector<DriveFrequency> resonance_frequencies(const std::vector<SpectrumRoot>& roots, double d,
                                                  unsigned kinds, double rel_tol) {
  if (!(d > 0.0)) throw DomainError("resonance_frequencies: d must be positive");
  std::vector<DriveFrequency> out;
  auto add = [&](double w, DriveKind kind, std::size_t n, std::size_t m) {
    if (w <= 0.0) return;
    for (const auto& o : out)
      if (std::abs(o.Omega - w) <= rel_tol * std::max(o.Omega, w)) return;
    out.push_back({w, kind, n, m});
  };
  const auto n = roots.size();
  if (kinds & static_cast<unsigned>(DriveKind::twice))
    for (std::size_t i = 0; i < n; ++i) add(2.0 * roots[i].kd / d, DriveKind::twice, i + 1, i + 1);
  if (kinds & static_cast<unsigned>(DriveKind::sum))
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) add((roots[i].kd + roots[j].kd) / d, DriveKind::sum, i + 1, j + 1);
  if (kinds & static_cast<unsigned>(DriveKind::difference))
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        add(std::abs(roots[j].kd - roots[i].kd) / d, DriveKind::difference, i + 1, j + 1);
  return out;
}

bool is_equidistant(const std::vector<SpectrumRoot>& roots, double rel_tol) {
  if (roots.size() < 3) return true;
  const double gap = roots[1].kd - roots[0].kd;
  for (std::size_t i = 2; i < roots.size(); ++i)
    if (std::abs(roots[i].kd - roots[i - 1].kd - gap) > rel_tol * std::abs(gap)) return false;
  return true;
}

}  // namespace dce
