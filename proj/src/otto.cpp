#include "dcelab/otto.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "dcelab/bogoliubov.hpp"
#include "dcelab/cavity.hpp"
#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"

namespace dce {

using numerics::kPi;

StrokeShape quintic_shape() { return [](double s) { return quintic_smoothstep(s); }; }

StrokeShape polynomial_shape(double a, double b) {
  return [a, b](double s) {
    auto q = quintic_smoothstep(s);
    // p(s) = s^3 (1 - s)^3 (a + b s), expanded as a polynomial in s
    const double u = s * (1.0 - s);
    const double du = 1.0 - 2.0 * s;
    const double c = a + b * s;
    const double u3 = u * u * u;
    const double du3 = 3.0 * u * u * du;
    const double ddu3 = 6.0 * u * du * du - 6.0 * u * u;
    const double dddu3 = 6.0 * du * du * du - 36.0 * u * du;
    q.value += u3 * c;
    q.d1 += du3 * c + u3 * b;
    q.d2 += ddu3 * c + 2.0 * du3 * b;
    q.d3 += dddu3 * c + 3.0 * ddu3 * b;
    return q;
  };
}

StrokeShape reversed_shape(StrokeShape shape) {
  return [shape = std::move(shape)](double s) {
    const auto q = shape(1.0 - s);
    return Smoothstep{1.0 - q.value, q.d1, -q.d2, q.d3};
  };
}

double quintic_trajectory(double t, double tau) {
  if (!(tau > 0.0)) throw DomainError("quintic_trajectory: tau must be positive");
  if (!(t >= 0.0 && t <= tau)) throw DomainError("quintic_trajectory: t outside [0, tau]");
  return quintic_smoothstep(t / tau).value;
}

void check_admissible(const StrokeShape& shape, double tol) {
  if (!shape) throw InvalidTrajectoryError("stroke shape is empty");
  const auto a = shape(0.0), b = shape(1.0);
  auto bad = [&](const char* what) {
    throw InvalidTrajectoryError(std::string("stroke shape violates ") + what);
  };
  if (std::abs(a.value) > tol) bad("delta(0) = 0");
  if (std::abs(b.value - 1.0) > tol) bad("delta(tau) = 1");
  if (std::abs(a.d1) > tol || std::abs(b.d1) > tol) bad("zero end velocity");
  if (std::abs(a.d2) > tol || std::abs(b.d2) > tol) bad("zero end acceleration");
  for (int i = 1; i < 1024; ++i) {
    const double v = shape(i / 1024.0).value;
    if (v < -tol || v > 1.0 + tol) bad("0 <= delta <= 1");
  }
}

void CycleSpec::validate() const {
  if (!(L0 > 0.0)) throw DomainError("cycle: L0 must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("cycle: eps must lie in (0, 1)");
  if (!(beta_A > 0.0) || !(beta_C > 0.0)) throw DomainError("cycle: inverse temperatures must be positive");
  if (!(tau > 0.0)) throw DomainError("cycle: tau must be positive");
  if (!(mode_tol > 0.0)) throw DomainError("cycle: mode_tol must be positive");
  if (!(thermalization_time >= 0.0)) throw DomainError("cycle: thermalization_time must be >= 0");
  if (max_modes < 2) throw DomainError("cycle: max_modes too small");
  check_admissible(shape);
}

double CycleSpec::omega1() const { return kPi / L0; }

namespace {

double occupation(double beta, double omega) {
  if (std::isinf(beta)) return 0.0;
  return thermal_occupation(beta, omega);
}

// (omega_k' L0 / omega_k)^2; omega_k = k pi / L gives omega_k' = -omega_k / L,
// so the factor is 1 for every k.  Kept as a function for other spectra.
double squeeze_prefactor(std::size_t /*k*/, double /*L0*/) { return 1.0; }

// |D_m|^2 for nu_m = m pi / L0, m = 0..m_max, with D = int_0^1 delta'(s) e^{iXs} ds
// and X = nu tau.  Gauss-Legendre on 64 panels while a panel spans at most one
// period; beyond that Filon quadrature on the quintic Hermite interpolant of
// delta' built from its value and two derivatives at the panel ends.
std::vector<double> spectral_weights(const CycleSpec& spec, double tau, std::size_t m_max) {
  constexpr std::size_t P = 64;
  const double h = 1.0 / P;
  const auto grid = numerics::make_gl_grid(0.0, 1.0, P);
  const std::size_t K = grid.nodes.size();
  std::vector<double> f(K);
  for (std::size_t i = 0; i < K; ++i) f[i] = grid.weights[i] * spec.shape(grid.nodes[i]).d1;

  // A[p][n]: coefficients of the interpolant in t = (s - s_p) / h
  std::vector<std::array<double, 6>> A(P);
  auto q0 = spec.shape(0.0);
  for (std::size_t p = 0; p < P; ++p) {
    const auto q1 = spec.shape(static_cast<double>(p + 1) * h);
    auto& a = A[p];
    a[0] = q0.d1;
    a[1] = h * q0.d2;
    a[2] = 0.5 * h * h * q0.d3;
    const double r0 = q1.d1 - (a[0] + a[1] + a[2]);
    const double r1 = h * q1.d2 - (a[1] + 2.0 * a[2]);
    const double r2 = h * h * q1.d3 - 2.0 * a[2];
    a[3] = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
    a[4] = -15.0 * r0 + 7.0 * r1 - r2;
    a[5] = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
    q0 = q1;
  }

  std::vector<double> out(m_max + 1);
  const double scale = kPi * tau / spec.L0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double X = scale * static_cast<double>(m);
    const double Y = X * h;
    std::complex<double> d = 0.0;
    if (Y <= 2.0 * kPi) {
      for (std::size_t i = 0; i < K; ++i) d += f[i] * std::polar(1.0, X * grid.nodes[i]);
    } else {
      // mu_n = int_0^1 t^n e^{iYt} dt by upward recurrence (stable for Y > n)
      const std::complex<double> e = std::polar(1.0, Y);
      const std::complex<double> iY(0.0, Y);
      std::array<std::complex<double>, 6> mu;
      mu[0] = (e - 1.0) / iY;
      for (int n = 1; n < 6; ++n) mu[n] = (e - static_cast<double>(n) * mu[n - 1]) / iY;
      for (std::size_t p = 0; p < P; ++p) {
        std::complex<double> acc = 0.0;
        for (int n = 0; n < 6; ++n) acc += A[p][n] * mu[n];
        d += std::polar(h, Y * static_cast<double>(p)) * acc;
      }
    }
    out[m] = std::norm(d);
  }
  return out;
}

// eps^2/4 sum over k, j <= n; shell[s] collects the pairs with max(k, j) = s
std::vector<double> friction_shells(const CycleSpec& spec, double beta, double tau, std::size_t n) {
  const auto D2 = spectral_weights(spec, tau, 2 * n);
  const double w1 = spec.omega1();
  std::vector<double> occ(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) occ[k] = occupation(beta, w1 * k);
  // with g_kj^2 = 4k^2 j^2 / (k^2 - j^2)^2 the pair (k, j) plus (j, k) gives
  //   4kj w1 [ |D_{k+j}|^2 (n_k + n_j + 1) / (k+j) + |D_{k-j}|^2 (n_j - n_k) / (k-j) ]
  std::vector<double> Dm(2 * n + 1, 0.0);
  for (std::size_t m = 1; m <= 2 * n; ++m) Dm[m] = D2[m] / static_cast<double>(m);
  const double pk = squeeze_prefactor(1, spec.L0);  // k-independent for Dirichlet
  std::vector<double> shell(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double nk = occ[k];
    double acc = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
      acc += static_cast<double>(j) * (Dm[k + j] * (nk + occ[j] + 1.0) + Dm[k - j] * (occ[j] - nk));
    }
    shell[k] = w1 * kd * (pk * D2[2 * k] * (2.0 * nk + 1.0) + 4.0 * acc);
  }
  const double pre = spec.eps * spec.eps / 4.0;
  for (auto& s : shell) s *= pre;
  return shell;
}

std::size_t next_pow2(double x) {
  std::size_t n = 1;
  while (static_cast<double>(n) < x) n <<= 1;
  return n;
}

double wall_speed(const CycleSpec& spec) {
  double v = 0.0;
  for (int i = 0; i <= 1024; ++i) v = std::max(v, std::abs(spec.shape(i / 1024.0).d1));
  return spec.eps * spec.L0 * v / spec.tau;
}

}  // namespace

double friction_kernel(double t1, double t2, std::size_t k, double beta, const CycleSpec& spec) {
  if (k < 1) throw DomainError("friction_kernel: k must be >= 1");
  const std::size_t n = spec.n_modes ? spec.n_modes : 64;
  if (k > n) throw DomainError("friction_kernel: k exceeds the mode truncation");
  const double tau = spec.tau;
  if (!(t1 >= 0.0 && t1 <= tau && t2 >= 0.0 && t2 <= tau)) throw DomainError("friction_kernel: times outside [0, tau]");
  const double w1 = spec.omega1();
  const double dd = spec.shape(t1 / tau).d1 * spec.shape(t2 / tau).d1 / (tau * tau);
  const double dt = t1 - t2;
  const double wk = w1 * k;
  const double nk = occupation(beta, wk);
  double out = squeeze_prefactor(k, spec.L0) * std::cos(2.0 * wk * dt) * (2.0 * nk + 1.0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == k) continue;
    const double wj = w1 * j;
    const double nj = occupation(beta, wj);
    const double kd = static_cast<double>(k), jd = static_cast<double>(j);
    const double g = 2.0 * kd * jd / (jd * jd - kd * kd);
    out += g * g / (wj * wk) *
           ((wk - wj) * (wk - wj) * std::cos((wj + wk) * dt) * (nk + nj + 1.0) +
            (wj + wk) * (wj + wk) * std::cos((wj - wk) * dt) * (nj - nk));
  }
  return dd * out;
}

FrictionResult friction_energy_detail(const CycleSpec& spec, double beta, double tau) {
  spec.validate();
  if (!(beta > 0.0)) throw DomainError("friction_energy: beta must be positive");
  if (!(tau > 0.0)) throw DomainError("friction_energy: tau must be positive");
  const double w1 = spec.omega1();
  const bool fixed = spec.n_modes != 0;
  std::size_t n = fixed ? spec.n_modes
                        : std::max<std::size_t>({32, next_pow2(4.0 / (w1 * tau)),
                                                 std::isinf(beta) ? 1 : next_pow2(30.0 / (beta * w1))});
  n = std::min(n, spec.max_modes);
  for (;;) {
    const auto shell = friction_shells(spec, beta, tau, n);
    FrictionResult r;
    r.n_modes = n;
    double acc = 0.0;
    std::vector<std::size_t> marks;
    for (std::size_t d = 8; d >= 1; d /= 2) marks.push_back(std::max<std::size_t>(1, n / d));
    std::size_t mi = 0;
    for (std::size_t s = 1; s <= n; ++s) {
      acc += shell[s];
      while (mi < marks.size() && marks[mi] == s) {
        r.partial.push_back(acc);
        ++mi;
      }
    }
    r.value = acc;
    const double half = r.partial[r.partial.size() - 2];
    r.converged = std::abs(r.value - half) <= spec.mode_tol * std::abs(r.value);
    if (r.value == 0.0 && half == 0.0) r.converged = true;
    if (r.converged) return r;
    if (fixed || n >= spec.max_modes) {
      std::ostringstream msg;
      msg << "friction mode sum not converged at N = " << n << "; partial sums (N/8, N/4, N/2, N):";
      for (double v : r.partial) msg << ' ' << v;
      throw TruncationError(msg.str());
    }
    n = std::min(2 * n, spec.max_modes);
  }
}

double friction_energy(const CycleSpec& spec, double beta, double tau) {
  return friction_energy_detail(spec, beta, tau).value;
}

double friction_energy_ode(const CycleSpec& spec, double beta, std::size_t n_modes, double rtol) {
  spec.validate();
  const double L1 = spec.L0 * (1.0 - spec.eps);
  const auto traj = make_profile(spec.L0, L1, 0.0, spec.tau, spec.shape);
  CavitySpec cs;
  cs.length = spec.L0;
  cs.n_modes = n_modes;
  const auto bog = solve_bogoliubov(cs, *traj, rtol);
  const auto w0 = dirichlet_spectrum(spec.L0, n_modes).k;
  const auto w1 = dirichlet_spectrum(L1, n_modes).k;
  Eigen::VectorXd nin(static_cast<Eigen::Index>(n_modes));
  for (Eigen::Index k = 0; k < nin.size(); ++k) nin[k] = occupation(beta, w0[k]);
  const Eigen::VectorXd nout = photon_spectrum(bog, nin);
  return w1.dot(nout - nin);
}

namespace {

CycleResult cycle(const CycleSpec& spec, bool friction) {
  spec.validate();
  CycleResult r;
  const double w1 = spec.omega1();
  const double L1 = spec.L0 * (1.0 - spec.eps);
  const double bmin = std::min(spec.beta_A, spec.beta_C);
  const auto nth = static_cast<std::size_t>(std::ceil(60.0 / (bmin * w1 * (1.0 - spec.eps)))) + 8;

  double EA = 0, EB = 0, EC = 0, ED = 0, Wo = 0, Qo = 0, scale = 0;
  for (std::size_t k = nth; k >= 1; --k) {  // small terms first
    const double wk = w1 * k, wk1 = wk / (1.0 - spec.eps);
    const double nA = occupation(spec.beta_A, wk);
    const double nC = occupation(spec.beta_C, wk1);
    EA += wk * nA;
    EB += wk1 * nA;
    EC += wk1 * nC;
    ED += wk * nC;
    Wo += (wk1 - wk) * (nC - nA);
    Qo += wk1 * (nC - nA);
    scale += wk1 * (nC + nA);
  }
  r.W_otto = Wo;
  r.Q_otto = Qo;
  r.engine = Qo > 0.0;
  // Q_Otto at rounding level means equal occupations in every mode (the
  // reversible point); W/Q then tends to the common ratio 1 - w_k / w_k(L1)
  const bool degenerate = std::abs(Qo) <= 1e-13 * scale;
  r.eta_otto = degenerate ? 1.0 - (1.0 - spec.eps) : Wo / Qo;

  if (friction) {
    r.E_F_A = friction_energy_detail(spec, spec.beta_A, spec.tau).value;
    // occupations of the hot state sit at w_k(L1) = w_k / (1 - eps), i.e. an
    // effective inverse temperature beta_C / (1 - eps) on the L0 spectrum
    CycleSpec back = spec;
    back.shape = reversed_shape(spec.shape);
    const auto fc = friction_energy_detail(back, spec.beta_C / (1.0 - spec.eps), spec.tau);
    r.E_F_C = fc.value;
    r.n_modes = fc.n_modes;
    EB += r.E_F_A;
    ED += r.E_F_C;
  }
  if (spec.include_casimir) {
    EA += static_casimir_energy(spec.L0);
    EB += static_casimir_energy(L1);
    EC += static_casimir_energy(L1);
    ED += static_casimir_energy(spec.L0);
  }
  r.E_A = EA;
  r.E_B = EB;
  r.E_C = EC;
  r.E_D = ED;
  r.Q = EC - EB;
  r.W = (EA - EB) + (EC - ED);
  r.eta = degenerate && !friction ? r.eta_otto : r.W / r.Q;
  r.eta_first_order = degenerate ? r.eta_otto : r.eta_otto - (r.E_F_A + r.E_F_C) / Qo;
  r.cycle_time = 2.0 * spec.tau + 2.0 * spec.thermalization_time;
  r.P = r.W / r.cycle_time;
  r.subluminal = wall_speed(spec) < 1.0;
  return r;
}

}  // namespace

CycleResult adiabatic_cycle(const CycleSpec& spec) { return cycle(spec, false); }

CycleResult nonadiabatic_cycle(const CycleSpec& spec) { return cycle(spec, true); }

std::vector<PowerPoint> power_curve(const CycleSpec& spec, const std::vector<double>& tau_grid, unsigned threads) {
  for (double t : tau_grid)
    if (!(t > 0.0)) throw DomainError("power_curve: tau grid must be positive");
  std::vector<PowerPoint> out(tau_grid.size());
  numerics::parallel_for(tau_grid.size(), threads, [&](std::size_t i) {
    CycleSpec s = spec;
    s.tau = tau_grid[i];
    const auto r = nonadiabatic_cycle(s);
    out[i] = {s.tau, r.W, r.Q, r.eta, r.P};
  });
  return out;
}

std::size_t power_argmax(const std::vector<PowerPoint>& curve) {
  if (curve.empty()) throw DomainError("power_argmax: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].P > curve[best].P) best = i;
  return best;
}

}  // namespace dce
