#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dcelab/errors.hpp"
#include "dcelab/gate.hpp"

using namespace dce;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXcd vacuum(std::size_t n_max) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_max) + 1);
  v[0] = 1.0;
  return v;
}

Eigen::VectorXcd coherent(cplx a, std::size_t n_max) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n_max) + 1);
  v[0] = std::exp(-0.5 * std::norm(a));
  for (Eigen::Index k = 1; k < v.size(); ++k) v[k] = v[k - 1] * a / std::sqrt(static_cast<double>(k));
  return v;
}

// <a^2> from explicit matrix elements
cplx second_moment(const Eigen::VectorXcd& psi) {
  cplx s = 0.0;
  for (Eigen::Index k = 0; k + 2 < psi.size(); ++k)
    s += std::conj(psi[k]) * std::sqrt((k + 1.0) * (k + 2.0)) * psi[k + 2];
  return s;
}

}  // namespace

TEST_CASE("squeezed vacuum: moments, parity and truncation guard") {
  CHECK((squeeze_state(0.0, 0.3, 10) - vacuum(10)).norm() < 1e-15);
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    for (double th : {0.0, 0.7, -2.1}) {
      const auto n = fock_cutoff(r, 1e-12);
      const auto v = squeeze_state(r, th, n);
      // S^dag a S = a cosh r + e^{i th} a^dag sinh r
      CHECK(std::abs(mean_photon_number(v) - std::sinh(r) * std::sinh(r)) < 1e-6);
      CHECK(std::abs(second_moment(v) - std::polar(std::sinh(r) * std::cosh(r), th)) < 1e-6);
      double odd = 0.0;
      for (Eigen::Index k = 1; k < v.size(); k += 2) odd = std::max(odd, std::abs(v[k]));
      CHECK(odd < 1e-14);
      // operator built from the generator's spectrum, applied to vacuum
      // truncation error in the vector goes as sqrt(leakage)
      const Eigen::VectorXcd w = squeeze_operator(r, th, n) * vacuum(n);
      CHECK(1.0 - std::norm(v.dot(w)) < 1e-11);
      CHECK((w - v).norm() < 1e-5);
    }
  }
  // n_max = 80 cannot hold r = 1.5 to 1e-8
  CHECK(squeeze_leakage(1.5, 80) > 1e-5);
  CHECK_THROWS_AS(squeeze_state(1.5, 0.0, 80), TruncationError);
  CHECK_THROWS_AS(squeeze_state(-0.1, 0.0, 80), DomainError);
}

TEST_CASE("Fock cutoff is the smallest even level meeting the tolerance") {
  for (double r : {0.3, 1.0, 1.5, 2.0}) {
    for (double tol : {1e-8, 1e-12}) {
      const auto n = fock_cutoff(r, tol);
      CHECK(n % 2 == 0);
      CHECK(squeeze_leakage(r, n) < tol);
      if (n > 2) CHECK(squeeze_leakage(r, n - 2) >= tol);
    }
  }
  GateParams p;
  CHECK(squeeze_leakage(p.squeeze_r(), p.fock_dim()) < 1e-10);
}

TEST_CASE("squeeze operator composes along a fixed phase") {
  const std::size_t n = fock_cutoff(1.6, 1e-13);
  const Eigen::VectorXcd a = squeeze_operator(0.7, 0.4, n) * (squeeze_operator(0.9, 0.4, n) * vacuum(n));
  CHECK(1.0 - std::norm(squeeze_state(1.6, 0.4, n).dot(a)) < 1e-11);
  // S(r, th + pi) = S(-r, th)
  const Eigen::MatrixXcd b = squeeze_operator(1.0, 0.4 + kPi, n);
  const Eigen::MatrixXcd c = squeeze_operator(-1.0, 0.4, n);
  CHECK((b - c).norm() < 1e-10);
}

TEST_CASE("encoded pair") {
  CHECK(c_plus(1.5) == doctest::Approx(std::sqrt(1.0 + 1.0 / std::sqrt(10.067661995777765))).epsilon(1e-14));
  CHECK(c_plus(1.5) == doctest::Approx(1.1468).epsilon(1e-4));
  CHECK(c_minus(1.5) == doctest::Approx(0.8276).epsilon(1e-4));
  const std::size_t n = fock_cutoff(1.5, 1e-12);
  for (double th : {0.0, 1.3}) {
    const auto e = chi_states(1.5, th, n);
    CHECK(std::abs(e.chi_plus.norm() - 1.0) < 1e-12);
    CHECK(std::abs(e.chi_minus.norm() - 1.0) < 1e-12);
    CHECK(std::abs(e.chi_plus.dot(e.chi_minus)) < 1e-10);
    double off_p = 0.0, off_m = 0.0;
    for (Eigen::Index k = 0; k < e.chi_plus.size(); ++k) {
      if (k % 4 != 0) off_p += std::norm(e.chi_plus[k]);
      if (k % 4 != 2) off_m += std::norm(e.chi_minus[k]);
    }
    CHECK(off_p < 1e-20);
    CHECK(off_m < 1e-20);
    // normalization constants: |r,t> +- |r,t+pi> has norm sqrt2 c_+-
    const auto s0 = squeeze_state(1.5, th, n), s1 = squeeze_state(1.5, th + kPi, n);
    CHECK((s0 + s1).norm() / std::sqrt(2.0) == doctest::Approx(e.c_plus).epsilon(1e-10));
    CHECK((s1 - s0).norm() / std::sqrt(2.0) == doctest::Approx(e.c_minus).epsilon(1e-10));
    // one lost photon moves chi_+ into the odd sector
    const auto lost = lower(e.chi_plus);
    const auto par = parity_measurement(lost);
    CHECK(par.odd == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(parity_measurement(e.chi_plus).even == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(chi_states(0.0, 0.0, 20), DomainError);
  const auto pv = parity_measurement(vacuum(6));
  CHECK(pv.even == 1.0);
  CHECK(pv.odd == 0.0);
}

TEST_CASE("controlled squeeze acts branchwise") {
  const std::size_t n = fock_cutoff(1.5, 1e-12);
  const auto zero = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) + 1);
  const double r = 1.5, th = 0.6, phi = -0.8;
  {
    const auto out = controlled_squeeze(joint(zero, vacuum(n)), r, th, phi);
    CHECK(branch(out, 0).norm() < 1e-15);
    CHECK(1.0 - std::norm(squeeze_state(r, th, n).dot(branch(out, 1))) < 1e-11);
  }
  {
    const auto coh = coherent(cplx(1.2, 0.3), n);
    const auto out = controlled_squeeze(joint(coh, zero), r, th, phi);
    CHECK(branch(out, 1).norm() < 1e-15);
    CHECK((branch(out, 0) - coherent(cplx(1.2, 0.3) * std::polar(1.0, phi), n)).norm() < 1e-12);
    for (Eigen::Index k = 0; k < coh.size(); ++k)
      CHECK(std::abs(std::norm(out[k]) - std::norm(coh[k])) < 1e-15);
  }
  {
    // projecting the qubit before or after gives the same vectors
    const auto psi = joint(0.6 * coherent(0.5, n), 0.8 * vacuum(n));
    const auto out = controlled_squeeze(psi, r, th, phi);
    const auto p0 = controlled_squeeze(joint(branch(psi, 0), zero), r, th, phi);
    const auto p1 = controlled_squeeze(joint(zero, branch(psi, 1)), r, th, phi);
    CHECK((out - p0 - p1).norm() < 1e-14);
  }
}

TEST_CASE("six-step protocol reproduces the encoded state") {
  GateParams p;
  CHECK(p.squeeze_r() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(p.dispersive_ok());
  const double r = p.squeeze_r(), phi = p.phi();
  const std::size_t n = p.fock_dim();
  const cplx inputs[][2] = {{1.0, 0.0}, {0.0, 1.0}, {std::sqrt(0.5), std::sqrt(0.5)},
                            {0.6, cplx(0.0, 0.8)}, {cplx(0.28, 0.96) * 0.8, -0.6}};
  for (const auto& in : inputs) {
    const auto psi = encoding_protocol(in[0], in[1], p);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    const auto tgt = encoded_target(in[0], in[1], r, p.theta + 2.0 * phi, n);
    CHECK(std::norm(tgt.dot(psi)) > 1.0 - 1e-8);
  }
  // alpha = 1: branch content is c_+ chi_+ / sqrt2 and c_- chi_- / sqrt2
  const auto psi = encoding_protocol(1.0, 0.0, p);
  const auto e = chi_states(r, p.theta + 2.0 * phi, n);
  CHECK(std::abs(e.chi_plus.dot(branch(psi, 0)) - e.c_plus / std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(e.chi_minus.dot(branch(psi, 1)) - e.c_minus / std::sqrt(2.0)) < 1e-8);
  // r = 0: identity
  const auto id = encoding_protocol(0.6, 0.8, 0.0, 0.3, 1.1, 8);
  CHECK((id - joint(0.6 * vacuum(8), 0.8 * vacuum(8))).norm() < 1e-14);
  CHECK_THROWS_AS(encoding_protocol(1.0, 0.1, p), DomainError);
  CHECK_THROWS_AS(encoding_protocol(1.0, 0.0, 1.5, 0.0, 0.0, 80), TruncationError);
}

TEST_CASE("qubit measurement") {
  GateParams p;
  const double r = p.squeeze_r();
  for (double pz : {-0.7, 0.0, 0.5, 1.0}) {
    const double a = std::sqrt(0.5 * (1 + pz)), b = std::sqrt(0.5 * (1 - pz));
    const auto m = measure_qubit(encoding_protocol(a, b, p));
    CHECK(m.p_plus == doctest::Approx(0.5 * (1 + pz / std::sqrt(std::cosh(2 * r)))).epsilon(1e-9));
    CHECK(m.p_plus + m.p_minus == doctest::Approx(1.0).epsilon(1e-12));
    // conditional states against (alpha c_+- chi_+- + beta c_-+ chi_-+) / norm
    const auto e = chi_states(r, p.theta + 2 * p.phi(), p.fock_dim());
    Eigen::VectorXcd wp = a * e.c_plus * e.chi_plus + b * e.c_minus * e.chi_minus;
    Eigen::VectorXcd wm = a * e.c_minus * e.chi_minus + b * e.c_plus * e.chi_plus;
    CHECK(std::norm(wp.normalized().dot(m.state_plus)) > 1 - 1e-8);
    CHECK(std::norm(wm.normalized().dot(m.state_minus)) > 1 - 1e-8);
  }
  const auto eq = measure_qubit(encoding_protocol(std::sqrt(0.5), std::sqrt(0.5), p));
  CHECK(std::abs(eq.p_plus - 0.5) < 1e-12);
  const auto pole = measure_qubit(encoding_protocol(1.0, 0.0, p));
  CHECK(pole.p_plus == doctest::Approx(0.6576).epsilon(1e-4));
  const std::size_t shots = 100000;
  const auto hits = static_cast<double>(sample_qubit(pole, shots, 7));
  const double sigma = std::sqrt(shots * pole.p_plus * (1 - pole.p_plus));
  CHECK(std::abs(hits - shots * pole.p_plus) < 3 * sigma);
  CHECK(sample_qubit(pole, 1000, 11) == sample_qubit(pole, 1000, 11));
}

TEST_CASE("average fidelity: closed form against the simulated protocol") {
  CHECK(average_fidelity(1.5, 1.0) == 1.0);
  CHECK(average_fidelity(0.3, -1.0) == 1.0);
  CHECK(average_fidelity(40.0, 0.2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(average_fidelity(1.5, 0.0) == doctest::Approx(0.5 * (1 + std::sqrt(1 - 1 / std::cosh(3.0)))).epsilon(1e-15));
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    const std::size_t n = fock_cutoff(r, 1e-12);
    for (double pz : {0.0, 0.5, 1.0}) {
      const double a = std::sqrt(0.5 * (1 + pz)), b = std::sqrt(0.5 * (1 - pz));
      const auto f = simulated_fidelity(a, b, r, 0.4, -3.0, n);
      CHECK(std::abs(f.average - average_fidelity(r, pz)) < 1e-3);
      CHECK(std::abs(f.average - average_fidelity(r, pz)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(average_fidelity(1.0, 1.5), DomainError);
}

TEST_CASE("bath occupation") {
  // h f / (k T) written with Planck's h and cyclic frequency
  const double h = 6.62607015e-34, kB = 1.380649e-23;
  const double f = 4e9, T = 0.06;
  CHECK(bath_occupation(2 * kPi * f, T) == doctest::Approx(1.0 / (std::exp(h * f / (kB * T)) - 1.0)).epsilon(1e-12));
  CHECK(bath_occupation(2 * kPi * f, 0.0) == 0.0);
  CHECK(bath_occupation(2 * kPi * 6e9, T) == doctest::Approx(0.0083).epsilon(0.01));
}

TEST_CASE("open evolution: trivial limits and unitary agreement") {
  GateParams p;
  p.g_d = 1e7;  // r = 0.3 keeps the check small
  p.n_max = fock_cutoff(p.squeeze_r(), 1e-12);
  OpenRates off;
  off.tau_q = off.tau_r = off.tau_phi = std::numeric_limits<double>::infinity();
  const std::size_t n = p.n_max;
  const auto psi = joint(0.6 * vacuum(n), cplx(0.0, 0.8) * vacuum(n));
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  // no rates, no drive, no duration
  CHECK((open_evolve(rho, p, off, 0.0, 0.0, 4) - rho).norm() < 1e-15);
  GateParams still = p;
  still.chi = 1e-30;  // no rotation
  still.g_d = 0.0;
  CHECK((open_evolve(rho, still, off, 0.0, 1e-7, 5, 0.0) - rho).norm() < 1e-13);
  // no rates: matches the closed gate
  const auto out = open_evolve(rho, p, off, 0.5, p.t_gate, 7);
  const auto want = controlled_squeeze(psi, p.squeeze_r(), 0.5, p.phi());
  CHECK((out - want * want.adjoint()).norm() < 1e-10);
}

TEST_CASE("open evolution: thermal relaxation rates") {
  // drive off and chi tiny: qubit and resonator relax independently
  GateParams p;
  p.chi = 1e-3;
  p.g_d = 0.0;
  p.n_max = 24;
  OpenRates rates;
  rates.tau_q = 1e-6;
  rates.tau_r = 2e-6;
  rates.tau_phi = std::numeric_limits<double>::infinity();
  rates.temperature = 0.3;
  const double nq = bath_occupation(p.omega_q, rates.temperature);
  const double nr = bath_occupation(p.omega, rates.temperature);
  const std::size_t n = p.n_max;
  Eigen::VectorXcd f1 = Eigen::VectorXcd::Zero(n + 1);
  f1[1] = 1.0;
  const auto zero = Eigen::VectorXcd::Zero(n + 1);
  const auto psi = joint(f1, zero);  // upper qubit level, one photon
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const double t = 0.7e-6;
  const auto out = open_evolve(rho, p, rates, 0.0, t, 200, 0.0);
  CHECK(std::abs(out.trace() - 1.0) < 1e-8);
  // upper population: n/(2n+1) + (1 - n/(2n+1)) e^{-(2n+1) t / tau}
  const double eq = nq / (2 * nq + 1);
  const double pu = eq + (1 - eq) * std::exp(-(2 * nq + 1) * t / rates.tau_q);
  const Eigen::Index m = static_cast<Eigen::Index>(n) + 1;
  CHECK(out.topLeftCorner(m, m).trace().real() == doctest::Approx(pu).epsilon(1e-8));
  // <N> relaxes to nr at rate 1/tau_r (24 levels hold the 0.3 K tail)
  double N = 0.0;
  for (Eigen::Index q = 0; q < 2; ++q)
    for (Eigen::Index k = 0; k < m; ++k) N += k * out(q * m + k, q * m + k).real();
  CHECK(N == doctest::Approx(nr + (1 - nr) * std::exp(-t / rates.tau_r)).epsilon(1e-6));
}

TEST_CASE("open evolution: dephasing and purity") {
  GateParams p;
  p.chi = 1e-3;
  p.g_d = 0.0;
  p.n_max = 2;
  OpenRates rates;
  rates.tau_q = rates.tau_r = std::numeric_limits<double>::infinity();
  rates.tau_phi = 1e-6;
  const std::size_t n = p.n_max;
  const auto psi = joint(std::sqrt(0.5) * vacuum(n), std::sqrt(0.5) * vacuum(n));
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const double t = 0.5e-6;
  const auto out = open_evolve(rho, p, rates, 0.0, t, 50, 0.0);
  // coherence decays as e^{-t / tau_phi}
  CHECK(std::abs(out(0, 3)) == doctest::Approx(0.5 * std::exp(-t / rates.tau_phi)).epsilon(1e-9));

  GateParams g;  // default device at reduced drive
  g.g_d = 2e7;
  g.n_max = fock_cutoff(g.squeeze_r(), 1e-10);
  OpenRates lab;
  const auto s = joint(std::sqrt(0.5) * vacuum(g.n_max), std::sqrt(0.5) * vacuum(g.n_max));
  Eigen::MatrixXcd r = s * s.adjoint();
  double last = 1.0;
  for (int k = 0; k < 4; ++k) {
    r = open_evolve(r, g, lab, 0.0, g.t_gate / 4, 10);
    const double pur = (r * r).trace().real();
    CHECK(pur <= last + 1e-14);
    CHECK(std::abs(r.trace() - 1.0) < 1e-8);
    last = pur;
  }
  CHECK(last < 1.0);
}

TEST_CASE("open protocol at default rates stays below the closed value") {
  GateParams p;
  p.g_d = 2.5e7;  // r = 0.75 keeps this quick
  OpenRates rates;
  const auto f = open_protocol_fidelity(1.0, 0.0, p, rates, 10);
  CHECK(f.p_plus + f.p_minus == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(f.average < average_fidelity(p.squeeze_r(), 1.0));
  CHECK(f.average > 0.95);
  CHECK(f.purity < 1.0);
  OpenRates off;
  off.tau_q = off.tau_r = off.tau_phi = std::numeric_limits<double>::infinity();
  const double pz = 0.5, a = std::sqrt(0.75), b = std::sqrt(0.25);
  const auto c = open_protocol_fidelity(a, b, p, off, 3);
  CHECK(c.average == doctest::Approx(average_fidelity(p.squeeze_r(), pz)).epsilon(1e-8));
  CHECK(c.purity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full Hamiltonian agrees with the branch action") {
  GateParams p;
  const auto b = rwa_branch_fidelities(p, 1e-8);
  CHECK(b.squeeze_branch > 0.99);
  CHECK(b.rotation_branch > 0.99);
  CHECK(b.rotation_coherent > 0.99);
  // without the drive correction to the rotation rate the coherent branch is worse
  GateParams bare = p;
  bare.g_d = 0.0;
  CHECK(std::abs(p.phi() - bare.phi()) > 0.05);
}

TEST_CASE("parameter validation") {
  GateParams p;
  p.t_gate = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = GateParams{};
  p.chi = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = GateParams{};
  p.g_d = 3e9;  // drive beyond the rotation rate
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = GateParams{};
  p.g_d = 4e7;
  p.chi = 2e6;
  CHECK_FALSE(p.dispersive_ok());
  OpenRates o;
  o.tau_phi = 0.0;
  CHECK_THROWS_AS(o.validate(), DomainError);
}
