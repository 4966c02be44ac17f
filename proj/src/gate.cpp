#include "dcelab/gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "dcelab/errors.hpp"
#include "dcelab/ode.hpp"

namespace dce {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHbar = 6.62607015e-34 / (2.0 * kPi);
constexpr double kBoltzmann = 1.380649e-23;

using Index = Eigen::Index;
using SpMat = Eigen::SparseMatrix<cplx>;

// populations p_m of |2m> in the squeezed vacuum, until they are negligible
std::vector<double> pair_populations(double r) {
  const double t2 = std::tanh(r) * std::tanh(r);
  std::vector<double> p;
  double pm = 1.0 / std::cosh(r);
  double rest = 1.0;
  for (std::size_t m = 0; m < 100'000'000; ++m) {
    p.push_back(pm);
    rest -= pm;
    // remaining mass is below p_m t2 / (1 - t2)
    if (pm * t2 / (1.0 - t2 + 1e-300) < 1e-30 || pm == 0.0) break;
    pm *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
  }
  (void)rest;
  return p;
}

void check_amplitudes(cplx alpha, cplx beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (!(std::abs(n - 1.0) < 1e-12)) throw DomainError("qubit amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
}

Index dim_of(const Eigen::VectorXcd& psi) {
  if (psi.size() < 2 || psi.size() % 2) throw DomainError("joint state must have even dimension 2 (n_max + 1)");
  return psi.size() / 2;
}

// S(r, theta) = R S(r, 0) R^dag with R = e^{i theta N / 2}
Eigen::MatrixXcd rotate_squeeze(const Eigen::MatrixXcd& S0, double theta) {
  Eigen::MatrixXcd S = S0;
  const Index n = S.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (S(i, j) != 0.0) S(i, j) *= std::polar(1.0, 0.5 * theta * static_cast<double>(i - j));
  return S;
}

Eigen::VectorXcd rotation_phases(double phi, Index n) {
  Eigen::VectorXcd d(n);
  for (Index k = 0; k < n; ++k) d[k] = std::polar(1.0, phi * static_cast<double>(k));
  return d;
}

Eigen::VectorXcd apply_branches(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& S, const Eigen::VectorXcd& U0) {
  const Index n = dim_of(psi);
  if (S.rows() != n) throw DomainError("squeeze operator size mismatch");
  Eigen::VectorXcd out(2 * n);
  out.head(n) = U0.cwiseProduct(psi.head(n));
  out.tail(n) = S * psi.tail(n);
  return out;
}

void require_cutoff(double r, std::size_t n_max) {
  const double leak = squeeze_leakage(r, n_max);
  if (leak > 1e-8) {
    throw TruncationError("Fock cutoff n_max=" + std::to_string(n_max) + " leaks " + std::to_string(leak) +
                          " of |r=" + std::to_string(r) + ">; enlarge n_max to at least " +
                          std::to_string(fock_cutoff(r, 1e-8)));
  }
}

// apply a 2x2 qubit unitary Q on both sides of a joint density matrix
Eigen::MatrixXcd qubit_conj(const Eigen::MatrixXcd& rho, const Eigen::Matrix2cd& Q) {
  const Index n = rho.rows() / 2;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const cplx w = Q(a, c) * std::conj(Q(b, d));
          if (w != 0.0) out.block(a * n, b * n, n, n) += w * rho.block(c * n, d * n, n, n);
        }
  return out;
}

Eigen::Matrix2cd hadamard_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd H;
  H << s, s, s, -s;
  return H;
}

Eigen::Matrix2cd flip_matrix() {
  Eigen::Matrix2cd X;
  X << 0, 1, 1, 0;
  return X;
}

double fidelity_dm(const Eigen::VectorXcd& target, const Eigen::MatrixXcd& rho) {
  return (target.adjoint() * rho * target)(0, 0).real();
}

// Lindblad operators for the joint space, plus sum L^dag L
struct Dissipator {
  std::vector<SpMat> L;
  SpMat LdL;
  bool empty() const { return L.empty(); }
};

Dissipator make_dissipator(Index n, const GateParams& p, const OpenRates& rates) {
  const Index D = 2 * n;
  Dissipator out;
  auto add = [&](double rate, const std::vector<Eigen::Triplet<cplx>>& trip) {
    if (!(rate > 0.0)) return;
    SpMat m(D, D);
    m.setFromTriplets(trip.begin(), trip.end());
    out.L.push_back(std::sqrt(rate) * m);
  };
  const double nq = bath_occupation(p.omega_q, rates.temperature);
  const double nr = bath_occupation(p.omega, rates.temperature);
  const double gq = 1.0 / rates.tau_q, kr = 1.0 / rates.tau_r, gphi = 1.0 / (2.0 * rates.tau_phi);
  std::vector<Eigen::Triplet<cplx>> down, up, a, ad, sz;
  for (Index k = 0; k < n; ++k) {
    // |0> is the upper qubit level: decay carries |0> to |1>
    down.emplace_back(n + k, k, 1.0);
    up.emplace_back(k, n + k, 1.0);
    sz.emplace_back(k, k, 1.0);
    sz.emplace_back(n + k, n + k, -1.0);
    for (Index q = 0; q < 2; ++q) {
      if (k + 1 < n) {
        a.emplace_back(q * n + k, q * n + k + 1, std::sqrt(static_cast<double>(k + 1)));
        ad.emplace_back(q * n + k + 1, q * n + k, std::sqrt(static_cast<double>(k + 1)));
      }
    }
  }
  add(gq * (nq + 1.0), down);
  add(gq * nq, up);
  add(kr * (nr + 1.0), a);
  add(kr * nr, ad);
  add(gphi, sz);
  out.LdL.resize(D, D);
  for (const auto& l : out.L) out.LdL += SpMat(l.adjoint()) * l;
  return out;
}

void apply_dissipator(const Dissipator& d, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
  out = -0.5 * (d.LdL * rho);
  out += -0.5 * (rho * d.LdL);
  for (const auto& l : d.L) {
    const Eigen::MatrixXcd lr = l * rho;
    out += (l.conjugate() * lr.transpose()).transpose();  // l rho l^dag
  }
}

}  // namespace

// ---------------------------------------------------------------- params

void GateParams::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("gate: ") + name + " must be positive");
  };
  pos(omega, "omega");
  pos(omega_q, "omega_q");
  pos(t_gate, "t_gate");
  if (!(chi != 0.0) || !std::isfinite(chi)) throw DomainError("gate: chi must be non-zero");
  if (!(g_d >= 0.0) || !(eps_d >= 0.0)) throw DomainError("gate: g_d and eps_d must be non-negative");
  if (!(omega_bar1() > 0.0)) throw DomainError("gate: omega - chi must be positive");
  if (!std::isfinite(theta)) throw DomainError("gate: theta must be finite");
  if (n_max != 0 && n_max < 2) throw DomainError("gate: n_max must be at least 2");
  const double x = g_d * eps_d / delta();
  if (!(x * x < 2.0)) throw DomainError("gate: drive too strong for the dispersive rotation");
}

double GateParams::delta_tilde() const {
  const double x = g_d * eps_d / delta();
  return delta() * (1.0 - 0.5 * x * x);
}

bool GateParams::dispersive_ok(double min_ratio) const {
  return std::abs(delta()) >= min_ratio * g_d * eps_d;
}

std::size_t GateParams::fock_dim() const { return n_max ? n_max : fock_cutoff(squeeze_r(), 1e-10); }

// ---------------------------------------------------------------- states

double squeeze_leakage(double r, std::size_t n_max) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeeze: r must be finite and non-negative");
  if (r == 0.0) return 0.0;
  const auto p = pair_populations(r);
  double tail = 0.0;
  for (std::size_t m = p.size(); m-- > 0;) {
    if (2 * m <= n_max) break;
    tail += p[m];
  }
  return tail;
}

std::size_t fock_cutoff(double r, double tol) {
  if (!(tol > 0.0)) throw DomainError("fock_cutoff: tol must be positive");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeeze: r must be finite and non-negative");
  if (r == 0.0) return 2;
  const auto p = pair_populations(r);
  double tail = 0.0;
  std::size_t m = p.size();
  // walk down until adding the next level would exceed tol
  while (m > 1 && tail + p[m - 1] < tol) tail += p[--m];
  // levels 0..2(m-1) kept; round up to an even cutoff of at least 2
  return std::max<std::size_t>(2, 2 * (m - 1));
}

Eigen::VectorXcd squeeze_state(double r, double theta, std::size_t n_max, double max_leak) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeeze: r must be finite and non-negative");
  if (n_max < 1) throw DomainError("squeeze: n_max must be positive");
  const double leak = squeeze_leakage(r, n_max);
  if (leak > max_leak) {
    throw TruncationError("squeezed vacuum leaks " + std::to_string(leak) + " above n_max=" +
                          std::to_string(n_max) + "; enlarge n_max to at least " +
                          std::to_string(fock_cutoff(r, max_leak)));
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Index>(n_max) + 1);
  const cplx z = std::polar(std::tanh(r), theta);
  cplx c = 1.0 / std::sqrt(std::cosh(r));
  for (std::size_t m = 0; 2 * m <= n_max; ++m) {
    v[static_cast<Index>(2 * m)] = c;
    c *= z * std::sqrt((2.0 * m + 1.0) / (2.0 * m + 2.0));
  }
  return v / v.norm();
}

Eigen::MatrixXcd squeeze_operator(double r, double theta, std::size_t n_max) {
  if (!std::isfinite(r)) throw DomainError("squeeze: r must be finite");
  const Index n = static_cast<Index>(n_max) + 1;
  Eigen::MatrixXcd S0 = Eigen::MatrixXcd::Zero(n, n);
  // K = i G with G = (r/2)(a^dag^2 - a^2); S(r, 0) = exp(-i K).  G keeps parity,
  // so each sector is diagonalized on its own.
  for (Index par = 0; par < 2; ++par) {
    std::vector<Index> idx;
    for (Index k = par; k < n; k += 2) idx.push_back(k);
    const Index m = static_cast<Index>(idx.size());
    if (m == 0) continue;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(m, m);
    for (Index i = 0; i + 1 < m; ++i) {
      const double k = static_cast<double>(idx[i]);
      const double g = 0.5 * r * std::sqrt((k + 1.0) * (k + 2.0));  // <k+2| G |k>
      K(i + 1, i) = cplx(0.0, g);
      K(i, i + 1) = cplx(0.0, -g);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    const Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -1.0)).array().exp();
    const Eigen::MatrixXcd blk = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) S0(idx[i], idx[j]) = blk(i, j);
  }
  return theta == 0.0 ? S0 : rotate_squeeze(S0, theta);
}

Eigen::VectorXcd lower(const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (Index k = 0; k + 1 < psi.size(); ++k) out[k] = std::sqrt(static_cast<double>(k + 1)) * psi[k + 1];
  return out;
}

double mean_photon_number(const Eigen::VectorXcd& psi) {
  double s = 0.0;
  for (Index k = 0; k < psi.size(); ++k) s += static_cast<double>(k) * std::norm(psi[k]);
  return s / psi.squaredNorm();
}

double c_plus(double r) { return std::sqrt(1.0 + 1.0 / std::sqrt(std::cosh(2.0 * r))); }
double c_minus(double r) { return std::sqrt(1.0 - 1.0 / std::sqrt(std::cosh(2.0 * r))); }

EncodedPair chi_states(double r, double theta_tilde, std::size_t n_max) {
  if (!(r > 0.0)) throw DomainError("chi_states: r = 0 leaves chi_- undefined (degenerate encoding)");
  const auto a = squeeze_state(r, theta_tilde, n_max);
  const auto b = squeeze_state(r, theta_tilde + kPi, n_max);
  EncodedPair out;
  out.c_plus = c_plus(r);
  out.c_minus = c_minus(r);
  const double s2 = std::sqrt(2.0);
  out.chi_plus = (a + b) / (s2 * out.c_plus);
  out.chi_minus = (b - a) / (s2 * out.c_minus);
  // renormalize against the truncation residue
  out.chi_plus /= out.chi_plus.norm();
  out.chi_minus /= out.chi_minus.norm();
  return out;
}

Eigen::VectorXcd joint(const Eigen::VectorXcd& branch0, const Eigen::VectorXcd& branch1) {
  if (branch0.size() != branch1.size()) throw DomainError("joint: branch sizes differ");
  Eigen::VectorXcd out(2 * branch0.size());
  out << branch0, branch1;
  return out;
}

Eigen::VectorXcd branch(const Eigen::VectorXcd& psi, int q) {
  const Index n = dim_of(psi);
  if (q != 0 && q != 1) throw DomainError("branch: qubit index must be 0 or 1");
  return psi.segment(q * n, n);
}

Eigen::VectorXcd controlled_squeeze(const Eigen::VectorXcd& psi, double r, double theta, double phi) {
  const Index n = dim_of(psi);
  return apply_branches(psi, squeeze_operator(r, theta, static_cast<std::size_t>(n - 1)), rotation_phases(phi, n));
}

Eigen::VectorXcd hadamard(const Eigen::VectorXcd& psi) {
  const Index n = dim_of(psi);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd out(2 * n);
  out.head(n) = s * (psi.head(n) + psi.tail(n));
  out.tail(n) = s * (psi.head(n) - psi.tail(n));
  return out;
}

Eigen::VectorXcd pi_rotation(const Eigen::VectorXcd& psi) {
  const Index n = dim_of(psi);
  Eigen::VectorXcd out(2 * n);
  out.head(n) = psi.tail(n);
  out.tail(n) = psi.head(n);
  return out;
}

Eigen::VectorXcd encoding_protocol(cplx alpha, cplx beta, double r, double theta, double phi, std::size_t n_max) {
  check_amplitudes(alpha, beta);
  if (!(r >= 0.0)) throw DomainError("protocol: r must be non-negative");
  require_cutoff(r, n_max);
  const Index n = static_cast<Index>(n_max) + 1;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n);
  vac[0] = 1.0;
  Eigen::VectorXcd psi = joint(alpha * vac, beta * vac);
  const Eigen::MatrixXcd S0 = squeeze_operator(r, 0.0, n_max);
  const Eigen::VectorXcd U0 = rotation_phases(phi, n);
  psi = hadamard(psi);
  psi = apply_branches(psi, rotate_squeeze(S0, theta), U0);
  psi = pi_rotation(psi);
  psi = apply_branches(psi, rotate_squeeze(S0, theta + 2.0 * phi + kPi), U0);
  psi = pi_rotation(psi);
  return hadamard(psi);
}

Eigen::VectorXcd encoding_protocol(cplx alpha, cplx beta, const GateParams& p) {
  p.validate();
  return encoding_protocol(alpha, beta, p.squeeze_r(), p.theta, p.phi(), p.fock_dim());
}

Eigen::VectorXcd encoded_target(cplx alpha, cplx beta, double r, double theta_tilde, std::size_t n_max) {
  check_amplitudes(alpha, beta);
  const auto e = chi_states(r, theta_tilde, n_max);
  const double s = 1.0 / std::sqrt(2.0);
  return joint(s * (alpha * e.c_plus * e.chi_plus + beta * e.c_minus * e.chi_minus),
               s * (alpha * e.c_minus * e.chi_minus + beta * e.c_plus * e.chi_plus));
}

QubitMeasurement measure_qubit(const Eigen::VectorXcd& psi) {
  const Index n = dim_of(psi);
  const double total = psi.squaredNorm();
  if (!(std::abs(total - 1.0) < 1e-8)) throw DomainError("measure_qubit: state is not normalized");
  QubitMeasurement m;
  m.p_plus = psi.head(n).squaredNorm();
  m.p_minus = psi.tail(n).squaredNorm();
  m.state_plus = m.p_plus > 0.0 ? Eigen::VectorXcd(psi.head(n) / std::sqrt(m.p_plus)) : Eigen::VectorXcd::Zero(n);
  m.state_minus = m.p_minus > 0.0 ? Eigen::VectorXcd(psi.tail(n) / std::sqrt(m.p_minus)) : Eigen::VectorXcd::Zero(n);
  return m;
}

std::size_t sample_qubit(const QubitMeasurement& m, std::size_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = m.p_plus / (m.p_plus + m.p_minus);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < shots; ++i) hits += u(rng) < p ? 1 : 0;
  return hits;
}

double average_fidelity(double r, double Pz) {
  if (!(r >= 0.0)) throw DomainError("average_fidelity: r must be non-negative");
  if (!(std::abs(Pz) <= 1.0)) throw DomainError("average_fidelity: |Pz| must not exceed 1");
  const double q = Pz * Pz;
  return 0.5 * (1.0 + q) + 0.5 * (1.0 - q) * std::sqrt(1.0 - 1.0 / std::cosh(2.0 * r));
}

ProtocolFidelity simulated_fidelity(cplx alpha, cplx beta, double r, double theta, double phi, std::size_t n_max) {
  const auto psi = encoding_protocol(alpha, beta, r, theta, phi, n_max);
  const auto m = measure_qubit(psi);
  const auto e = chi_states(r, theta + 2.0 * phi, n_max);
  const Eigen::VectorXcd tp = alpha * e.chi_plus + beta * e.chi_minus;
  const Eigen::VectorXcd tm = alpha * e.chi_minus + beta * e.chi_plus;
  ProtocolFidelity f;
  f.p_plus = m.p_plus;
  f.p_minus = m.p_minus;
  f.f_plus = m.p_plus > 0.0 ? std::norm(tp.dot(m.state_plus)) : 0.0;
  f.f_minus = m.p_minus > 0.0 ? std::norm(tm.dot(m.state_minus)) : 0.0;
  f.average = f.p_plus * f.f_plus + f.p_minus * f.f_minus;
  return f;
}

Parity parity_measurement(const Eigen::VectorXcd& fock) {
  Parity p;
  for (Index k = 0; k < fock.size(); ++k) (k % 2 ? p.odd : p.even) += std::norm(fock[k]);
  const double s = p.even + p.odd;
  if (!(s > 0.0)) throw DomainError("parity_measurement: zero vector");
  p.even /= s;
  p.odd /= s;
  return p;
}

Parity parity_measurement_dm(const Eigen::MatrixXcd& rho) {
  Parity p;
  for (Index k = 0; k < rho.rows(); ++k) (k % 2 ? p.odd : p.even) += rho(k, k).real();
  const double s = p.even + p.odd;
  if (!(s > 0.0)) throw DomainError("parity_measurement: zero trace");
  p.even /= s;
  p.odd /= s;
  return p;
}

// ---------------------------------------------------------------- open system

void OpenRates::validate() const {
  for (double tau : {tau_q, tau_r, tau_phi})
    if (!(tau > 0.0)) throw DomainError("open: lifetimes must be positive (use infinity to switch a channel off)");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw DomainError("open: temperature must be >= 0");
}

double bath_occupation(double omega, double T) {
  if (!(omega > 0.0)) throw DomainError("bath_occupation: omega must be positive");
  if (T == 0.0) return 0.0;
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * T));
}

Eigen::MatrixXcd open_evolve(const Eigen::MatrixXcd& rho, const GateParams& p, const OpenRates& rates, double theta,
                             double duration, std::size_t steps, double drive, bool check_positivity) {
  p.validate();
  rates.validate();
  if (rho.rows() != rho.cols() || rho.rows() < 2 || rho.rows() % 2) throw DomainError("open: bad density matrix shape");
  if (!(duration >= 0.0)) throw DomainError("open: duration must be non-negative");
  if (steps < 1) throw DomainError("open: need at least one step");
  const Index n = rho.rows() / 2;
  const double dt = duration / static_cast<double>(steps);
  // half-step unitary, blockwise: U0 on |0>, S on |1>
  const Eigen::MatrixXcd S = squeeze_operator(drive * p.g_d * p.eps_d * 0.5 * dt, theta, static_cast<std::size_t>(n - 1));
  const Eigen::VectorXcd U0 = rotation_phases(p.delta_tilde() * 0.5 * dt, n);
  const Eigen::MatrixXcd Sd = S.adjoint();
  auto unitary = [&](Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd b00 = U0.asDiagonal() * m.topLeftCorner(n, n) * U0.conjugate().asDiagonal();
    Eigen::MatrixXcd b01 = U0.asDiagonal() * (m.topRightCorner(n, n) * Sd);
    Eigen::MatrixXcd b11 = S * m.bottomRightCorner(n, n) * Sd;
    m.topLeftCorner(n, n) = b00;
    m.topRightCorner(n, n) = b01;
    m.bottomLeftCorner(n, n) = b01.adjoint();
    m.bottomRightCorner(n, n) = b11;
  };
  const auto diss = make_dissipator(n, p, rates);
  Eigen::MatrixXcd r = rho;
  Eigen::MatrixXcd k1, k2, k3, k4;
  for (std::size_t s = 0; s < steps; ++s) {
    unitary(r);
    if (!diss.empty()) {
      apply_dissipator(diss, r, k1);
      apply_dissipator(diss, r + 0.5 * dt * k1, k2);
      apply_dissipator(diss, r + 0.5 * dt * k2, k3);
      apply_dissipator(diss, r + dt * k3, k4);
      r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    unitary(r);
  }
  r = 0.5 * (r + r.adjoint()).eval();
  if (check_positivity) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw PhysicsError("open_evolve: density matrix lost positivity (min eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()) + "); use more steps");
  }
  return r;
}

OpenFidelity open_protocol_fidelity(cplx alpha, cplx beta, const GateParams& p, const OpenRates& rates,
                                    std::size_t steps_per_gate) {
  check_amplitudes(alpha, beta);
  p.validate();
  const double r = p.squeeze_r();
  const std::size_t n_max = p.fock_dim();
  require_cutoff(r, n_max);
  const Index n = static_cast<Index>(n_max) + 1;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n);
  vac[0] = 1.0;
  const Eigen::VectorXcd psi = joint(alpha * vac, beta * vac);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  const double phi = p.phi();
  rho = qubit_conj(rho, hadamard_matrix());
  rho = open_evolve(rho, p, rates, p.theta, p.t_gate, steps_per_gate, 1.0, false);
  rho = qubit_conj(rho, flip_matrix());
  rho = open_evolve(rho, p, rates, p.theta + 2.0 * phi + kPi, p.t_gate, steps_per_gate, 1.0, true);
  rho = qubit_conj(rho, flip_matrix());
  rho = qubit_conj(rho, hadamard_matrix());

  const auto e = chi_states(r, p.theta + 2.0 * phi, n_max);
  const Eigen::VectorXcd tp = alpha * e.chi_plus + beta * e.chi_minus;
  const Eigen::VectorXcd tm = alpha * e.chi_minus + beta * e.chi_plus;
  OpenFidelity f;
  const Eigen::MatrixXcd rp = rho.topLeftCorner(n, n), rm = rho.bottomRightCorner(n, n);
  f.p_plus = rp.trace().real();
  f.p_minus = rm.trace().real();
  f.f_plus = f.p_plus > 0.0 ? fidelity_dm(tp, rp) / f.p_plus : 0.0;
  f.f_minus = f.p_minus > 0.0 ? fidelity_dm(tm, rm) / f.p_minus : 0.0;
  f.average = f.p_plus * f.f_plus + f.p_minus * f.f_minus;
  f.purity = (rho * rho).trace().real();
  return f;
}

// ---------------------------------------------------------------- full Hamiltonian

Eigen::VectorXcd full_hamiltonian_evolve(const Eigen::VectorXcd& psi, const GateParams& p, double rtol) {
  p.validate();
  const Index n = dim_of(psi);
  const double w1 = p.omega_bar1(), wd = p.omega_d(), ge = p.g_d * p.eps_d;
  const double shift0 = 2.0 * p.chi;  // |0> branch in the frame rotating at omega_bar1
  Eigen::VectorXd nn(n), s2(n);                // n and sqrt((n+1)(n+2))
  for (Index k = 0; k < n; ++k) {
    nn[k] = static_cast<double>(k);
    s2[k] = std::sqrt((k + 1.0) * (k + 2.0));
  }
  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy.resize(y.size());
    const double f = ge * std::sin(wd * t - p.theta);
    const cplx up = std::polar(1.0, 2.0 * w1 * t);  // a^dag^2 carries e^{2 i w1 t}
    for (Index q = 0; q < 2; ++q) {
      const Index o = q * n;
      for (Index k = 0; k < n; ++k) {
        cplx h = f * (2.0 * nn[k] + 1.0) * y[o + k];
        if (q == 0) h += shift0 * nn[k] * y[o + k];
        if (k + 2 < n) h += f * std::conj(up) * s2[k] * y[o + k + 2];  // a^2
        if (k >= 2) h += f * up * s2[k - 2] * y[o + k - 2];             // a^dag^2
        dy[o + k] = cplx(0.0, -1.0) * h;
      }
    }
  };
  ode::Tolerances tol;
  tol.rtol = rtol;
  tol.atol = rtol * 1e-3;
  // resolve the fastest counter-rotating term
  tol.max_step = 2.0 * kPi / (wd + 2.0 * w1) / 8.0;
  ode::Dopri5<Eigen::VectorXcd> solver(rhs, tol);
  return solver.integrate(0.0, psi, p.t_gate);
}

BranchFidelities rwa_branch_fidelities(const GateParams& p, double rtol) {
  p.validate();
  const std::size_t n_max = p.fock_dim();
  const Index n = static_cast<Index>(n_max) + 1;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n), zero = Eigen::VectorXcd::Zero(n);
  vac[0] = 1.0;
  // coherent |alpha = 1>
  Eigen::VectorXcd coh(n);
  coh[0] = std::exp(-0.5);
  for (Index k = 1; k < n; ++k) coh[k] = coh[k - 1] / std::sqrt(static_cast<double>(k));
  const double r = p.squeeze_r(), phi = p.phi();
  BranchFidelities out;
  {
    const auto fin = full_hamiltonian_evolve(joint(zero, vac), p, rtol);
    const auto want = joint(zero, squeeze_state(r, p.theta, n_max));
    out.squeeze_branch = std::norm(want.dot(fin));
  }
  {
    const auto fin = full_hamiltonian_evolve(joint(vac, zero), p, rtol);
    out.rotation_branch = std::norm(fin[0]);
  }
  {
    const auto fin = full_hamiltonian_evolve(joint(coh, zero), p, rtol);
    const auto want = joint(rotation_phases(phi, n).cwiseProduct(coh), zero);
    out.rotation_coherent = std::norm(want.dot(fin));
  }
  return out;
}

}  // namespace dce
