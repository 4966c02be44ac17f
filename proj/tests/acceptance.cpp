// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dcelab/bogoliubov.hpp"
#include "dcelab/cavity.hpp"
#include "dcelab/errors.hpp"
#include "dcelab/gate.hpp"
#include "dcelab/moore.hpp"
#include "dcelab/msa.hpp"
#include "dcelab/numerics.hpp"
#include "dcelab/otto.hpp"
#include "dcelab/squid.hpp"

using namespace dce;
using numerics::kPi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [X]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}
std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1
Outcome static_null() {
  Outcome o;
  CavitySpec spec;
  spec.n_modes = 20;
  auto traj = make_static(1.0, 0.0, 25.0);
  const auto bog = solve_bogoliubov(spec, *traj, 1e-10);
  const double bmax = bog.beta.cwiseAbs().maxCoeff();
  o.require(bmax < 1e-10, fmt("max|beta| = %.3g", bmax));
  Eigen::VectorXd Nin(20);
  for (Eigen::Index k = 0; k < 20; ++k) Nin[k] = thermal_occupation(0.5, (k + 1) * kPi);
  const auto Nout = photon_spectrum(bog, Nin);
  // equality up to the rounding of |alpha|^2 N + |beta|^2 (N + 1)
  double rel = 0.0;
  for (Eigen::Index k = 0; k < 20; ++k) rel = std::max(rel, std::abs(Nout[k] - Nin[k]) / Nin[k]);
  o.require(rel <= 4 * std::numeric_limits<double>::epsilon(), fmt("max|N_out - N_in|/N_in = %.3g", rel));
  return o;
}

// ---------------------------------------------------------------- 2
Outcome symplectic() {
  Outcome o;
  CavitySpec spec;
  spec.n_modes = 20;
  const double Omega = 2 * kPi;
  auto traj = make_harmonic(1.0, 0.01, Omega, 0.0, 50.0 / Omega);
  const auto rows = symplectic_rows(solve_bogoliubov(spec, *traj, 1e-10));
  double worst = 0.0;
  for (Eigen::Index n = 0; n < 10; ++n) worst = std::max(worst, std::abs(rows[n] - 1.0));
  o.require(worst < 1e-6, fmt("max_{n<=10} |sum(|a|^2-|b|^2) - 1| = %.3g", worst));
  return o;
}

// ---------------------------------------------------------------- 3
Outcome cross_solver() {
  Outcome o;
  const double eps = 0.01, Omega = 2 * kPi, t1 = 3.0;
  auto traj = make_harmonic(1.0, eps, Omega, 0.0, t1);
  CavitySpec spec;
  spec.n_modes = 40;
  const auto ode = solve_bogoliubov(spec, *traj, 1e-10);
  const auto mf = solve_moore(traj, t1 + 1.0);
  const auto mo = bogoliubov_from_moore(mf, t1, 5);
  const double d = (ode.beta.topLeftCorner(5, 5) - mo.beta).cwiseAbs().maxCoeff();
  o.require(d <= 5 * eps * eps, fmt("ODE(N=40) vs Moore max|dbeta| = %.3g <= %.3g", d, 5 * eps * eps));

  const double e3 = 1e-3;
  for (std::size_t N : {1u, 8u}) {
    const auto basis = dirichlet_spectrum(1.0, N);
    SlowOptions opt;
    opt.samples = 5;
    const auto s = evolve_slow(basis, Omega, 1.0, e3, 1.0 / Omega, opt);
    CavitySpec sn;
    sn.n_modes = N;
    double worst = 0.0;
    for (std::size_t i = 1; i < s.tau.size(); ++i) {
      const auto h = make_harmonic(1.0, e3, Omega, 0.0, s.t[i]);
      const double a = std::abs(solve_bogoliubov(sn, *h, 1e-10).beta(0, 0));
      const double b = std::abs(s.beta[i](0, 0));
      worst = std::max(worst, std::abs(a - b) / b);
    }
    o.require(worst < 0.05, fmt("ODE vs MSA |beta_11| rel (N=%g) = %.3g", double(N), worst));
  }
  return o;
}

// ---------------------------------------------------------------- 4
Outcome casimir() {
  Outcome o;
  double e0 = 0.0, eT = 0.0;
  for (double d0 : {1.0, 1.7}) {
    const auto mf = solve_moore(make_static(d0, 0.0, 1.0), 5.0);
    for (double x : {0.0, 0.25, 0.5, 0.9}) {
      for (double t : {1.5, 3.2}) {
        e0 = std::max(e0, std::abs(energy_density(mf, 0.0, x * d0, t) + kPi / (24 * d0 * d0)));
        for (double T : {0.3, 1.2}) {
          const double ref = -kPi / (24 * d0 * d0) + thermal_Z(T * d0) / (d0 * d0);
          eT = std::max(eT, std::abs(energy_density(mf, T, x * d0, t) - ref));
        }
      }
    }
  }
  o.require(e0 < 1e-8, fmt("T=0 |T_tt + pi/(24 d0^2)| = %.3g", e0));
  o.require(eT < 1e-8, fmt("T>0 |T_tt - (-pi/24 + Z)/d0^2| = %.3g", eT));
  return o;
}

// ---------------------------------------------------------------- 5
Outcome squid() {
  Outcome o;
  // the first-order shift is n pi * 2 / b0, so at b0 = 1e6 only n <= 15 can sit
  // within 1e-4 of n pi; the first ten are checked
  const SquidCavityParams big{0.0, 1e6, 1e6, 1.0};
  const auto r = solve_spectrum(big, 10);
  double dev = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) dev = std::max(dev, std::abs(r[n].kd - (n + 1.0) * kPi));
  o.require(dev < 1e-4, fmt("b0=1e6: max_{n<=10} |kd - n pi| = %.3g", dev));
  double res = 0.0, raw = 0.0, raw_big = 0.0;
  const std::vector<SquidCavityParams> cases = {big, {0.05, 2.0, 0.5, 1.0}, {1.2, 0.7, 40.0, 2.0},
                                                {0.3, -0.8, -0.4, 1.0}, {0.0, 0.0, 5.0, 1.0}};
  for (std::size_t c = 0; c < cases.size(); ++c)
    for (const auto& root : solve_spectrum(cases[c], 20)) {
      const auto a = spectrum_residual(cases[c], root);
      const auto b = spectrum_residual_raw(cases[c], root);
      res = std::max({res, a.left, a.right});
      // the unnormalized equations scale like max(x, chi0 x^2, b0), so a root
      // exact to one ulp still leaves ~ scale * ulp(x) there; reported only
      (c == 0 ? raw_big : raw) = std::max({c == 0 ? raw_big : raw, b.left, b.right});
    }
  o.require(res < 1e-10, fmt("max normalized residual (20 roots, 5 parameter sets) = %.3g", res));
  o.detail += fmt("; unnormalized residual: %.3g (b0 <= 40), %.3g (b0 = 1e6)", raw, raw_big);
  return o;
}

// ---------------------------------------------------------------- 6
CycleSpec reference_cycle() {
  CycleSpec s;
  s.eps = 0.01;
  s.beta_A = 2.0 / kPi;
  s.beta_C = 0.2 / kPi;
  return s;
}

Outcome otto_adiabatic() {
  Outcome o;
  auto s = reference_cycle();
  const double eta = adiabatic_cycle(s).eta;
  o.require(std::abs(eta - 0.01) < 1e-12, fmt("eta - eps = %.3g", eta - 0.01));
  s.beta_C = s.beta_A * (1.0 - s.eps);
  const auto c = adiabatic_cycle(s);
  const double carnot = 1.0 - s.beta_C / s.beta_A;
  o.require(std::abs(c.eta - carnot) < 1e-12 && std::abs(carnot - s.eps) < 1e-12,
            fmt("beta_C/beta_A = 1-eps: eta - eta_Carnot = %.3g", c.eta - carnot));
  return o;
}

// ---------------------------------------------------------------- 7
StrokeShape random_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    auto sh = polynomial_shape(u(rng), u(rng));
    try {
      check_admissible(sh);
      return sh;
    } catch (const InvalidTrajectoryError&) {
    }
  }
}

Outcome friction() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  auto s = reference_cycle();
  s.tau = 0.8 / kPi;
  double emin = kInf, asym = 0.0;
  for (int i = 0; i < 20; ++i) {
    s.shape = random_shape(rng);
    auto rv = s;
    rv.shape = reversed_shape(s.shape);
    for (double b : {s.beta_A, s.beta_C}) {
      const double f = friction_energy(s, b, s.tau);
      emin = std::min(emin, f);
      asym = std::max(asym, std::abs(friction_energy(rv, b, s.tau) - f) / f);
    }
  }
  o.require(emin >= 0.0, fmt("min E_F over 20 random strokes = %.3g", emin));
  o.require(asym < 1e-6, fmt("max time-reversal rel diff = %.3g", asym));

  // eps^2 scaling: the second-order formula, and the exact mode equations
  std::vector<double> le, lf, lo;
  auto e = reference_cycle();
  e.tau = 1.0 / kPi;
  for (double eps : {0.005, 0.01, 0.02}) {
    e.eps = eps;
    le.push_back(std::log(eps));
    lf.push_back(std::log(friction_energy(e, e.beta_A, e.tau)));
    lo.push_back(std::log(friction_energy_ode(e, e.beta_A, 16)));
  }
  const double sf = numerics::fit_slope(le, lf), so = numerics::fit_slope(le, lo);
  o.require(std::abs(sf - 2.0) <= 0.05, fmt("eps slope (formula) = %.4f", sf));
  o.require(std::abs(so - 2.0) <= 0.05, fmt("eps slope (mode ODE, N=16) = %.4f", so));

  auto slow = reference_cycle();
  slow.tau = 1e3 / kPi;
  const double ef = friction_energy(slow, slow.beta_A, slow.tau);
  o.require(ef < 1e-6 * kPi * slow.eps * slow.eps, fmt("tau w1=1e3: E_F/(w1 eps^2) = %.3g", ef / (kPi * 1e-4)));
  return o;
}

// ---------------------------------------------------------------- 8
Outcome power() {
  Outcome o;
  const auto s = reference_cycle();
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(std::pow(10.0, 0.1 * i) / kPi);
  const auto curve = power_curve(s, grid);
  const auto i = power_argmax(curve);
  bool unimodal = i > 0 && i + 1 < curve.size();
  for (std::size_t j = 1; j <= i; ++j) unimodal = unimodal && curve[j].P > curve[j - 1].P;
  for (std::size_t j = i + 1; j < curve.size(); ++j) unimodal = unimodal && curve[j].P < curve[j - 1].P;
  const double ts = curve[i].tau * kPi;
  o.require(unimodal && ts >= 0.1 && ts <= 10.0, fmt("single peak at tau* w1 = %.3g", ts));

  // friction part of the power at small tau; eps = 0.002 keeps the wall subluminal
  std::vector<double> lx, ly;
  bool sub = true;
  for (double tw : {0.02, 0.03, 0.04}) {
    auto c = s;
    c.eps = 0.002;
    c.tau = tw / kPi;
    const auto r = nonadiabatic_cycle(c);
    sub = sub && r.subluminal;
    lx.push_back(std::log(c.tau));
    ly.push_back(std::log((r.E_F_A + r.E_F_C) / r.cycle_time));
  }
  const double slope = numerics::fit_slope(lx, ly);
  o.require(sub && std::abs(slope + 4.0) <= 0.3, fmt("small-tau friction power slope = %.3f", slope));
  return o;
}

// ---------------------------------------------------------------- 9
Outcome gate() {
  Outcome o;
  GateParams p;
  const double r = p.squeeze_r();
  o.require(std::abs(r - 1.5) < 1e-12, fmt("r = g_d eps_d t = %.15g", r));
  const std::size_t n = p.fock_dim();
  double worst = 1.0;
  const cplx inputs[][2] = {{1.0, 0.0}, {0.0, 1.0}, {std::sqrt(0.5), std::sqrt(0.5)},
                            {0.6, cplx(0.0, 0.8)}, {cplx(0.28, 0.96) * 0.8, -0.6}};
  for (const auto& in : inputs) {
    const auto psi = encoding_protocol(in[0], in[1], p);
    const auto tgt = encoded_target(in[0], in[1], r, p.theta + 2.0 * p.phi(), n);
    worst = std::min(worst, std::norm(tgt.dot(psi)));
  }
  o.require(worst > 1.0 - 1e-8,
            fmt("protocol overlap 1 - min = %.3g (n_max = %g, leakage %.2g)", 1.0 - worst, double(n), squeeze_leakage(r, n)));
  double dev = 0.0;
  for (double rr : {0.5, 1.0, 1.5, 2.0}) {
    const std::size_t nc = fock_cutoff(rr, 1e-10);
    for (double pz : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double a = std::sqrt(0.5 * (1 + pz)), b = std::sqrt(std::max(0.0, 0.5 * (1 - pz)));
      dev = std::max(dev, std::abs(simulated_fidelity(a, b, rr, p.theta, p.phi(), nc).average - average_fidelity(rr, pz)));
    }
  }
  o.require(dev < 1e-3, fmt("max|F_closed - P+F+ - P-F-| over (r, Pz) grid = %.3g", dev));
  bool poles = true;
  for (double rr : {0.5, 1.0, 1.5, 2.0}) poles = poles && average_fidelity(rr, 1.0) == 1.0 && average_fidelity(rr, -1.0) == 1.0;
  o.require(poles, "F(Pz = +-1) == 1");
  o.detail += fmt("; note: n_max = 80 leaks %.2g at r = 1.5", squeeze_leakage(1.5, 80));
  return o;
}

// ---------------------------------------------------------------- 10
Outcome open_system() {
  Outcome o;
  GateParams p;
  OpenRates rates;
  const double r = p.squeeze_r();
  // Bloch-sphere average over real inputs: P_z uniform on [-1, 1]
  boost::math::quadrature::gauss<double, 8> gl;
  double drift = 0.0, gap = 0.0, closed = 0.0, open = 0.0;
  double gap_eq = 0.0, gap_pole = 0.0;
  auto point = [&](double pz) {
    const double a = std::sqrt(0.5 * (1 + pz)), b = std::sqrt(std::max(0.0, 0.5 * (1 - pz)));
    const auto f = open_protocol_fidelity(a, b, p, rates, 20);
    drift = std::max(drift, std::abs(f.p_plus + f.p_minus - 1.0));
    return std::pair<double, double>{average_fidelity(r, pz), f.average};
  };
  for (std::size_t i = 0; i < gl.abscissa().size(); ++i) {
    for (double sgn : {1.0, -1.0}) {
      const double x = sgn * gl.abscissa()[i];
      if (i == 0 && sgn < 0 && x == 0.0) continue;
      const auto [c, f] = point(x);
      closed += 0.5 * gl.weights()[i] * c;
      open += 0.5 * gl.weights()[i] * f;
      if (x == 0.0) break;
    }
  }
  gap = 100.0 * (closed - open);
  {
    const auto [c, f] = point(0.0);
    gap_eq = 100.0 * (c - f);
    const auto [c1, f1] = point(1.0);
    gap_pole = 100.0 * (c1 - f1);
  }
  o.require(drift < 1e-8, fmt("trace drift = %.3g", drift));
  o.require(std::abs(gap - 1.0) <= 0.5,
            fmt("sphere-averaged closed - open = %.3f pp (closed %.5f, open %.5f)", gap, closed, open));
  o.detail += fmt("; pointwise gap: Pz=0 %.3f pp, Pz=1 %.3f pp", gap_eq, gap_pole);
  return o;
}

// ---------------------------------------------------------------- 11
Outcome rwa() {
  Outcome o;
  GateParams p;
  const auto b = rwa_branch_fidelities(p, 1e-9);
  o.require(b.squeeze_branch > 0.99 && b.rotation_branch > 0.99 && b.rotation_coherent > 0.99,
            fmt("branch fidelities: squeeze %.8f, rotation %.6f, rotation (coherent) %.6f", b.squeeze_branch,
                b.rotation_branch, b.rotation_coherent));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"static-cavity null test", static_null},
      {"symplectic identity", symplectic},
      {"cross-solver beta agreement", cross_solver},
      {"static Casimir density", casimir},
      {"SQUID spectrum", squid},
      {"Otto adiabatic efficiency", otto_adiabatic},
      {"friction properties", friction},
      {"power curve", power},
      {"gate encoding", gate},
      {"open-system gate", open_system},
      {"RWA validation", rwa},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), dt,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
