#include "dcelab/bogoliubov.hpp"

#include <cmath>
#include <complex>

#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"

namespace dce {

using cd = std::complex<double>;
using numerics::kPi;

namespace {

// C^{+-}_kj = g_kj (k +- j) / (2 sqrt(kj)); independent of R for Dirichlet walls.
struct Couplings {
  Eigen::MatrixXd Cp, Cm;
  Eigen::VectorXd idx;  // k = 1..N
};

Couplings make_couplings(std::size_t n) {
  const auto c = coupling_M(n, 1.0);
  Couplings out;
  const auto N = static_cast<Eigen::Index>(n);
  out.Cp.resize(N, N);
  out.Cm.resize(N, N);
  out.idx.resize(N);
  for (Eigen::Index a = 0; a < N; ++a) {
    out.idx[a] = static_cast<double>(a + 1);
    for (Eigen::Index b = 0; b < N; ++b) {
      const double k = a + 1.0, j = b + 1.0;
      const double s = 2.0 * std::sqrt(k * j);
      out.Cp(a, b) = c.g(a, b) * (k + j) / s;
      out.Cm(a, b) = c.g(a, b) * (k - j) / s;
    }
  }
  return out;
}

// state layout: columns [0, N) hold A, [N, 2N) hold B, column 2N holds theta_k
using State = Eigen::MatrixXcd;

State pack(const ModeAmplitudes& m) {
  const auto N = m.A.rows();
  State y(N, 2 * N + 1);
  y.leftCols(N) = m.A;
  y.middleCols(N, N) = m.B;
  y.col(2 * N) = m.theta.cast<cd>();
  return y;
}

void fill_physical(ModeAmplitudes& m, const WallTrajectory& traj) {
  const auto N = m.A.rows();
  const auto s = traj.state(m.t);
  m.R = s.R;
  m.wall_at_rest = s.Rdot == 0.0;
  const auto basis = dirichlet_spectrum(s.R, static_cast<std::size_t>(N));
  const auto cm = coupling_M(static_cast<std::size_t>(N), s.R);
  Eigen::MatrixXcd a(N, N), b(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const cd ph = std::polar(1.0, -m.theta[k]);
    a.row(k) = ph * m.A.row(k);
    b.row(k) = std::conj(ph) * m.B.row(k);
  }
  m.Q.resize(N, N);
  Eigen::MatrixXcd P(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = basis.k[k];
    m.Q.row(k) = (a.row(k) + b.row(k)) / std::sqrt(2.0 * w);
    P.row(k) = cd(0.0, -std::sqrt(w / 2.0)) * (a.row(k) - b.row(k));
  }
  m.Qdot = P + s.Rdot * (cm.M.cast<cd>() * m.Q);
}

ModeAmplitudes unpack(const State& y, double t, const WallTrajectory& traj) {
  const auto N = y.rows();
  ModeAmplitudes m;
  m.t = t;
  m.A = y.leftCols(N);
  m.B = y.middleCols(N, N);
  m.theta = y.col(2 * N).real();
  fill_physical(m, traj);
  return m;
}

struct Rhs {
  const WallTrajectory* traj;
  Couplings c;

  void operator()(double t, const State& y, State& dy) const {
    const auto N = y.rows();
    const auto s = traj->state(t);
    dy.resize(N, 2 * N + 1);
    dy.col(2 * N) = (c.idx * (kPi / s.R)).cast<cd>();
    if (s.Rdot == 0.0) {
      dy.leftCols(2 * N).setZero();
      return;
    }
    const double lam = s.Rdot / s.R;
    Eigen::VectorXcd e(N);
    for (Eigen::Index k = 0; k < N; ++k) e[k] = std::polar(1.0, y(k, 2 * N).real());
    // back to Schroedinger-picture a, b, apply the couplings, rotate again
    const Eigen::MatrixXcd a = e.conjugate().asDiagonal() * y.leftCols(N);
    const Eigen::MatrixXcd b = e.asDiagonal() * y.middleCols(N, N);
    Eigen::MatrixXcd da = c.Cp * a + c.Cm * b - 0.5 * b;
    Eigen::MatrixXcd db = c.Cm * a + c.Cp * b - 0.5 * a;
    dy.leftCols(N) = lam * (e.asDiagonal() * da);
    dy.middleCols(N, N) = lam * (e.conjugate().asDiagonal() * db);
  }
};

ode::Tolerances make_tol(double rtol) {
  if (!(rtol > 0.0)) throw DomainError("integration tolerance must be positive");
  ode::Tolerances tol;
  tol.rtol = rtol;
  tol.atol = rtol * 1e-3;
  return tol;
}

void check_trajectory(const WallTrajectory& traj) {
  if (!(traj.min_position() > 0.0)) throw DomainError("wall position must stay positive");
  if (!(traj.max_speed() < 1.0)) throw DomainError("wall speed must stay below c");
}

}  // namespace

ModeAmplitudes initial_amplitudes(std::size_t n_modes, double R, double t) {
  if (n_modes < 1) throw DomainError("need at least one mode");
  const auto N = static_cast<Eigen::Index>(n_modes);
  const auto basis = dirichlet_spectrum(R, n_modes);
  ModeAmplitudes m;
  m.t = t;
  m.R = R;
  m.A = Eigen::MatrixXcd::Identity(N, N);
  m.B = Eigen::MatrixXcd::Zero(N, N);
  m.theta = basis.k * t;
  m.Q = Eigen::MatrixXcd::Zero(N, N);
  m.Qdot = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = basis.k[k];
    const cd ph = std::polar(1.0, -w * t);
    m.Q(k, k) = ph / std::sqrt(2.0 * w);
    m.Qdot(k, k) = cd(0.0, -w) * ph / std::sqrt(2.0 * w);
  }
  return m;
}

ModeAmplitudes propagate(const WallTrajectory& traj, const ModeAmplitudes& amps, double t_target,
                         double rtol, ode::Stats* stats) {
  check_trajectory(traj);
  const auto N = static_cast<std::size_t>(amps.A.rows());
  ode::Dopri5<State> solver(Rhs{&traj, make_couplings(N)}, make_tol(rtol));
  State y = solver.integrate(amps.t, pack(amps), t_target);
  if (stats) *stats = solver.stats();
  return unpack(y, t_target, traj);
}

ModeAmplitudes integrate_modes(const CavitySpec& spec, const WallTrajectory& traj, double tol) {
  spec.validate();
  if (spec.boundary != Boundary::dirichlet) {
    throw DomainError("mode integration supports Dirichlet walls only");
  }
  const auto init = initial_amplitudes(spec.n_modes, traj.R(traj.t_start()), traj.t_start());
  return propagate(traj, init, traj.t_end(), tol);
}

BogoliubovMatrices extract_bogoliubov(const ModeAmplitudes& amps, const ModeBasis& basis) {
  if (!amps.wall_at_rest) throw DomainError("extraction needs a resting wall");
  const auto N = amps.Q.rows();
  if (static_cast<Eigen::Index>(basis.size()) != N) throw DomainError("basis size mismatch");
  BogoliubovMatrices out;
  out.alpha.resize(N, N);
  out.beta.resize(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = basis.k[k];
    const double nrm = 1.0 / std::sqrt(2.0 * w);
    const cd ph = std::polar(1.0, w * amps.t);
    for (Eigen::Index n = 0; n < N; ++n) {
      const cd q = amps.Q(k, n), p = amps.Qdot(k, n);
      out.alpha(n, k) = (w * q + cd(0, 1) * p) * nrm * ph;
      out.beta(n, k) = (w * q - cd(0, 1) * p) * nrm * std::conj(ph);
    }
  }
  return out;
}

BogoliubovMatrices solve_bogoliubov(const CavitySpec& spec, const WallTrajectory& traj, double tol) {
  const auto amps = integrate_modes(spec, traj, tol);
  return extract_bogoliubov(amps, dirichlet_spectrum(amps.R, spec.n_modes));
}

Eigen::VectorXd photon_spectrum(const BogoliubovMatrices& bog, const Eigen::VectorXd& N_in) {
  if (N_in.size() != bog.alpha.rows()) throw DomainError("occupation vector size mismatch");
  if ((N_in.array() < 0.0).any()) throw DomainError("occupations must be non-negative");
  const Eigen::MatrixXd a2 = bog.alpha.cwiseAbs2();
  const Eigen::MatrixXd b2 = bog.beta.cwiseAbs2();
  return a2.transpose() * N_in + b2.transpose() * (N_in.array() + 1.0).matrix();
}

Eigen::VectorXd symplectic_rows(const BogoliubovMatrices& bog) {
  return (bog.alpha.cwiseAbs2() - bog.beta.cwiseAbs2()).rowwise().sum();
}

PhotonSeries photon_series(const CavitySpec& spec, const WallTrajectory& traj,
                           const std::vector<double>& times, double tol) {
  spec.validate();
  check_trajectory(traj);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < traj.t_start() || times[i] > traj.t_end() || (i && times[i] < times[i - 1])) {
      throw DomainError("sample times must be increasing and inside the motion window");
    }
  }
  const auto init = initial_amplitudes(spec.n_modes, traj.R(traj.t_start()), traj.t_start());
  const auto N = static_cast<Eigen::Index>(spec.n_modes);
  PhotonSeries out;
  ode::Dopri5<State> solver(Rhs{&traj, make_couplings(spec.n_modes)}, make_tol(tol));
  solver.integrate(traj.t_start(), pack(init), traj.t_end(), times, [&](double t, const State& y) {
    out.t.push_back(t);
    // |beta_nk|^2 summed over n; phases drop out of the modulus
    out.N.push_back(y.middleCols(N, N).cwiseAbs2().rowwise().sum());
  });
  return out;
}

}  // namespace dce
