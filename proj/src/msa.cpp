#include "dcelab/msa.hpp"

#include <cmath>

#include "dcelab/errors.hpp"
#include "dcelab/ode.hpp"

namespace dce {

std::string to_string(ResonanceKind kind) {
  switch (kind) {
    case ResonanceKind::degenerate_2wk: return "degenerate_2wk";
    case ResonanceKind::sum_wk_wj: return "sum_wk_wj";
    case ResonanceKind::difference_scatter: return "difference_scatter";
  }
  return "unknown";
}

bool ResonanceReport::creates_photons() const {
  for (const auto& r : items)
    if (r.kind != ResonanceKind::difference_scatter) return true;
  return false;
}

ResonanceReport classify_resonances(const ModeBasis& basis, double Omega, double tol) {
  if (!(Omega > 0.0)) throw DomainError("drive frequency must be positive");
  if (basis.size() == 0) throw DomainError("empty mode basis");
  const double thr = tol * basis.k[0];
  const auto n = basis.size();
  ResonanceReport rep;
  for (std::size_t k = 0; k < n; ++k) {
    const double wk = basis.k[static_cast<Eigen::Index>(k)];
    if (std::abs(Omega - 2 * wk) < thr) rep.items.push_back({ResonanceKind::degenerate_2wk, k + 1, k + 1, 2 * wk});
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      const double wk = basis.k[static_cast<Eigen::Index>(k)];
      const double wj = basis.k[static_cast<Eigen::Index>(j)];
      if (std::abs(Omega - (wk + wj)) < thr) rep.items.push_back({ResonanceKind::sum_wk_wj, k + 1, j + 1, wk + wj});
      if (std::abs(Omega - (wj - wk)) < thr) {
        rep.items.push_back({ResonanceKind::difference_scatter, k + 1, j + 1, wj - wk});
      }
    }
  }
  return rep;
}

Eigen::MatrixXd slow_generator(const ModeBasis& basis, double Omega, double R0, double match_tol) {
  const auto N = static_cast<Eigen::Index>(basis.size());
  const double thr = match_tol * basis.k[0];
  auto hit = [thr](double x) { return std::abs(x) < thr; };
  // C+-_kj (k +- j) / (2 sqrt(kj)) g_kj written with frequencies, so spectra
  // that are not exactly n pi / R0 still use the right weights
  const auto g = coupling_M(static_cast<std::size_t>(N), R0).g;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double wk = basis.k[k];
    if (hit(Omega - 2 * wk)) {
      K(k, N + k) += -0.5 * wk;
      K(N + k, k) += -0.5 * wk;
    }
    for (Eigen::Index j = 0; j < N; ++j) {
      if (j == k) continue;
      const double wj = basis.k[j];
      const double s = 2 * std::sqrt(wk * wj);
      const double cp = g(k, j) * (wk + wj) / s;
      const double cm = g(k, j) * (wk - wj) / s;
      const double half = 0.5 * Omega;
      if (hit(Omega - wk - wj)) {
        K(k, N + j) += half * cm;
        K(N + k, j) += half * cm;
      }
      if (hit(wk - wj - Omega) || hit(wk - wj + Omega)) {
        K(k, j) += half * cp;
        K(N + k, N + j) += half * cp;
      }
    }
  }
  return K;
}

SlowAmplitudes evolve_slow(const ModeBasis& basis, double Omega, double R0, double eps,
                           double tau_max, const Eigen::MatrixXcd& alpha0,
                           const Eigen::MatrixXcd& beta0, const SlowOptions& opt) {
  if (!(Omega > 0.0)) throw DomainError("drive frequency must be positive");
  if (!(R0 > 0.0)) throw DomainError("R0 must be positive");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(tau_max >= 0.0)) throw DomainError("tau_max must be non-negative");
  if (opt.samples < 1) throw DomainError("need at least one sample");
  const auto N = static_cast<Eigen::Index>(basis.size());
  if (alpha0.rows() != N || alpha0.cols() != N || beta0.rows() != N || beta0.cols() != N) {
    throw DomainError("initial coefficient matrices must be N x N");
  }
  const Eigen::MatrixXcd K = slow_generator(basis, Omega, R0, opt.match_tol).cast<std::complex<double>>();
  Eigen::MatrixXcd y(2 * N, N);
  y.topRows(N) = alpha0.transpose();
  y.bottomRows(N) = beta0.transpose();

  const std::size_t intervals = opt.samples > 1 ? opt.samples - 1 : 1;
  const std::size_t total = std::max<std::size_t>(opt.steps ? opt.steps : 1000, 1000);
  const std::size_t per = (total + intervals - 1) / intervals;
  auto f = [&K](double, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& ds) { ds = K * s; };

  SlowAmplitudes out;
  auto record = [&](double tau) {
    out.tau.push_back(tau);
    out.t.push_back(tau / eps);
    out.alpha.push_back(y.topRows(N).transpose());
    out.beta.push_back(y.bottomRows(N).transpose());
  };
  record(0.0);
  if (opt.samples == 1) return out;
  for (std::size_t i = 0; i < intervals; ++i) {
    const double t0 = tau_max * static_cast<double>(i) / static_cast<double>(intervals);
    const double t1 = tau_max * static_cast<double>(i + 1) / static_cast<double>(intervals);
    y = ode::rk4_fixed(f, t0, y, t1, per);
    record(t1);
  }
  return out;
}

SlowAmplitudes evolve_slow(const ModeBasis& basis, double Omega, double R0, double eps,
                           double tau_max, const SlowOptions& opt) {
  const auto N = static_cast<Eigen::Index>(basis.size());
  return evolve_slow(basis, Omega, R0, eps, tau_max, Eigen::MatrixXcd::Identity(N, N),
                     Eigen::MatrixXcd::Zero(N, N), opt);
}

}  // namespace dce
