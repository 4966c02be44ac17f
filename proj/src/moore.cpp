#include "dcelab/moore.hpp"

#include <algorithm>
#include <cmath>

#include "dcelab/cavity.hpp"
#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"

namespace dce {

using cd = std::complex<double>;
using numerics::kPi;

namespace {

// jet of x(z) composed with a map m whose derivatives are taken at x
struct Chain {
  double x, x1 = 1.0, x2 = 0.0, x3 = 0.0;
  void apply(double m0, double m1, double m2, double m3) {
    const double n1 = m1 * x1;
    const double n2 = m2 * x1 * x1 + m1 * x2;
    const double n3 = m3 * x1 * x1 * x1 + 3.0 * m2 * x1 * x2 + m1 * x3;
    x = m0;
    x1 = n1;
    x2 = n2;
    x3 = n3;
  }
};

double root_tol(double x) { return 1e-15 * (1.0 + std::abs(x)); }
// widens the far end of a bracket whose residual is zero up to rounding
double margin(double x) { return 1e-12 * (1.0 + std::abs(x)); }

}  // namespace

MooreFunction::MooreFunction(TrajectoryPtr right, TrajectoryPtr left, double t_max, MooreOptions opt)
    : right_(std::move(right)), left_(std::move(left)), t_max_(t_max) {
  if (!right_) throw DomainError("moore: right wall trajectory missing");
  if (right_->max_speed() >= 1.0) throw InvalidTrajectoryError("moore: right wall reaches |Rdot| >= 1");
  if (left_ && left_->max_speed() >= 1.0) throw InvalidTrajectoryError("moore: left wall reaches |Ldot| >= 1");
  t_static_ = right_->t_start();
  if (left_) t_static_ = std::min(t_static_, left_->t_start());
  if (!(t_max >= t_static_)) throw DomainError("moore: t_max precedes the start of the motion");
  R0_ = right_->R(t_static_);
  L0_ = left_ ? left_->R(t_static_) : 0.0;
  if (left_ && !(left_->max_position() < right_->min_position())) {
    throw InvalidTrajectoryError("moore: walls may cross");
  }
  if (!left_ && !(right_->min_position() > 0.0)) throw InvalidTrajectoryError("moore: wall reaches x = 0");
  d0_ = R0_ - L0_;
  z_hi_ = t_max_ + right_->max_position();
  spacing_ = opt.grid_spacing > 0.0 ? std::min(opt.grid_spacing, d0_ / 512.0) : d0_ / 512.0;

  // F is needed down to t_static - R0 and up to t_max - L(t)
  const double v_lo = t_static_ - R0_;
  const double v_hi = left_ ? t_max_ - left_->min_position() : z_hi_;
  const auto n = static_cast<std::size_t>(std::ceil((v_hi - v_lo) / spacing_)) + 1;
  z_.resize(n);
  F_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    z_[i] = std::min(v_hi, v_lo + static_cast<double>(i) * spacing_);
    const auto j = F(z_[i]);
    if (!(j.d1 > 0.0)) throw InvalidTrajectoryError("moore: F lost monotonicity");
    F_[i] = j.value;
  }
}

WallState MooreFunction::left_state(double t) const {
  return left_ ? left_->state(t) : WallState{};
}

MooreJet MooreFunction::G(double z) const {
  if (z > z_hi_ * (1.0 + 1e-14) + 1e-14) throw DomainError("moore: G argument beyond solved range");
  return G_impl(z);
}

MooreJet MooreFunction::F(double v) const {
  const double v_hi = left_ ? t_max_ - left_->min_position() : z_hi_;
  if (v > v_hi * (1.0 + 1e-14) + 1e-14) throw DomainError("moore: F argument beyond solved range");
  return F_impl(v);
}

MooreJet MooreFunction::G_impl(double z) const {
  Chain c{z};
  double offset = 0.0;
  auto finish_G = [&]() {
    return MooreJet{offset + (c.x - L0_) / d0_, c.x1 / d0_, c.x2 / d0_, c.x3 / d0_};
  };
  auto finish_F = [&]() {
    return MooreJet{offset + (c.x + L0_) / d0_, c.x1 / d0_, c.x2 / d0_, c.x3 / d0_};
  };
  const double r_lo = right_->min_position();
  for (;;) {
    // evaluating G at c.x
    if (c.x <= t_static_ + R0_) return finish_G();
    const double zz = c.x;
    const double t = numerics::find_root([&](double s) { return s + right_->R(s) - zz; }, t_static_,
                                         zz - r_lo + margin(zz), root_tol(zz));
    const auto s = right_->state(t);
    const double a = 1.0 + s.Rdot;
    c.apply(t - s.R, (1.0 - s.Rdot) / a, -2.0 * s.Rddot / (a * a * a),
            (-2.0 * s.Rdddot / (a * a * a) + 6.0 * s.Rddot * s.Rddot / (a * a * a * a)) / a);
    offset += 2.0;
    // evaluating F at c.x
    if (!left_) continue;
    if (c.x <= t_static_ - L0_) return finish_F();
    const double vv = c.x;
    const double tl = numerics::find_root([&](double s) { return s - left_->R(s) - vv; }, t_static_,
                                          vv + left_->max_position() + margin(vv), root_tol(vv));
    const auto l = left_->state(tl);
    const double b = 1.0 - l.Rdot;
    c.apply(tl + l.R, (1.0 + l.Rdot) / b, 2.0 * l.Rddot / (b * b * b),
            (2.0 * l.Rdddot / (b * b * b) + 6.0 * l.Rddot * l.Rddot / (b * b * b * b)) / b);
  }
}

MooreJet MooreFunction::F_impl(double v) const {
  if (!left_) return G_impl(v);
  if (v <= t_static_ - L0_) return {(v + L0_) / d0_, 1.0 / d0_, 0.0, 0.0};
  const double tl = numerics::find_root([&](double s) { return s - left_->R(s) - v; }, t_static_,
                                        v + left_->max_position() + margin(v), root_tol(v));
  const auto l = left_->state(tl);
  const double b = 1.0 - l.Rdot;
  const double m1 = (1.0 + l.Rdot) / b;
  const double m2 = 2.0 * l.Rddot / (b * b * b);
  const double m3 = (2.0 * l.Rdddot / (b * b * b) + 6.0 * l.Rddot * l.Rddot / (b * b * b * b)) / b;
  const auto g = G_impl(tl + l.R);
  return {g.value, g.d1 * m1, g.d2 * m1 * m1 + g.d1 * m2, g.d3 * m1 * m1 * m1 + 3.0 * g.d2 * m1 * m2 + g.d1 * m3};
}

double MooreFunction::residual() const {
  const auto n = z_.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_static_ + (t_max_ - t_static_) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double R = right_->R(t);
    worst = std::max(worst, std::abs(G(t + R).value - F(t - R).value - 2.0));
    if (left_) {
      const double L = left_->R(t);
      worst = std::max(worst, std::abs(G(t + L).value - F(t - L).value));
    }
  }
  return worst;
}

MooreFunction solve_moore(TrajectoryPtr traj, double t_max, MooreOptions opt) {
  return MooreFunction(std::move(traj), nullptr, t_max, opt);
}

MooreFunction solve_moore(TrajectoryPtr left, TrajectoryPtr right, double t_max, MooreOptions opt) {
  return MooreFunction(std::move(right), std::move(left), t_max, opt);
}

namespace {

void check_inside(const MooreFunction& mf, double x, double t) {
  const double L = mf.left_state(t).R;
  const double R = mf.right().R(t);
  const double slack = 1e-12 * (1.0 + std::abs(R));
  if (x < L - slack || x > R + slack) throw DomainError("moore: x outside the cavity");
}

}  // namespace

cd moore_mode(const MooreFunction& mf, std::size_t n, double x, double t) {
  if (n < 1) throw DomainError("moore: mode index starts at 1");
  check_inside(mf, x, t);
  const double nn = static_cast<double>(n);
  const double g = mf.G(t + x).value;
  const double f = mf.F(t - x).value;
  return cd(0.0, 1.0 / std::sqrt(4.0 * kPi * nn)) * (std::polar(1.0, -nn * kPi * g) - std::polar(1.0, -nn * kPi * f));
}

cd moore_mode_dt(const MooreFunction& mf, std::size_t n, double x, double t) {
  if (n < 1) throw DomainError("moore: mode index starts at 1");
  check_inside(mf, x, t);
  const double nn = static_cast<double>(n);
  const auto g = mf.G(t + x);
  const auto f = mf.F(t - x);
  return (nn * kPi / std::sqrt(4.0 * kPi * nn)) *
         (g.d1 * std::polar(1.0, -nn * kPi * g.value) - f.d1 * std::polar(1.0, -nn * kPi * f.value));
}

namespace {

double density_part(const MooreJet& j, double thermal) {
  if (!(j.d1 > 0.0)) throw InvalidTrajectoryError("moore: non-positive derivative in energy density");
  const double r2 = j.d2 / j.d1;
  return -(j.d3 / j.d1 - 1.5 * r2 * r2) / (24.0 * kPi) + 0.5 * j.d1 * j.d1 * (-kPi / 24.0 + thermal);
}

}  // namespace

double energy_density(const MooreFunction& mf, double T, double x, double t) {
  if (T < 0.0) throw DomainError("moore: negative temperature");
  check_inside(mf, x, t);
  const double Z = thermal_Z(T * mf.d0());
  return density_part(mf.G(t + x), Z) + density_part(mf.F(t - x), Z);
}

BogoliubovMatrices bogoliubov_from_moore(const MooreFunction& mf, double t, std::size_t n_modes,
                                         std::size_t panels) {
  if (n_modes < 1) throw DomainError("moore: need at least one mode");
  const auto ls = mf.left_state(t);
  const auto rs = mf.right().state(t);
  const bool stopped = t >= mf.right().t_end() && (!mf.left() || t >= mf.left()->t_end());
  if (!stopped) {
    throw DomainError("moore: overlap slice must lie after the walls have stopped");
  }
  if (t > mf.t_max()) throw DomainError("moore: slice beyond the solved range");
  const double L = ls.R, R = rs.R, d = R - L;
  const auto N = static_cast<Eigen::Index>(n_modes);
  if (panels == 0) panels = 16 + 4 * n_modes;
  const auto grid = numerics::make_gl_grid(L, R, panels);

  ModeAmplitudes amps;
  amps.t = t;
  amps.R = d;
  amps.wall_at_rest = true;
  amps.Q = Eigen::MatrixXcd::Zero(N, N);
  amps.Qdot = Eigen::MatrixXcd::Zero(N, N);
  const double amp = std::sqrt(2.0 / d);
  for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
    const double x = grid.nodes[q];
    const double w = grid.weights[q];
    const auto g = mf.G(t + x);
    const auto f = mf.F(t - x);
    for (Eigen::Index n = 0; n < N; ++n) {
      const double nn = static_cast<double>(n + 1);
      const cd eg = std::polar(1.0, -nn * kPi * g.value);
      const cd ef = std::polar(1.0, -nn * kPi * f.value);
      const double norm = 1.0 / std::sqrt(4.0 * kPi * nn);
      const cd v = cd(0.0, norm) * (eg - ef);
      const cd vt = nn * kPi * norm * (g.d1 * eg - f.d1 * ef);
      for (Eigen::Index k = 0; k < N; ++k) {
        const double psi = amp * std::sin(static_cast<double>(k + 1) * kPi * (x - L) / d);
        amps.Q(k, n) += w * psi * v;
        amps.Qdot(k, n) += w * psi * vt;
      }
    }
  }
  return extract_bogoliubov(amps, dirichlet_spectrum(d, n_modes));
}

DensityGrid energy_density_grid(const MooreFunction& mf, double T, std::size_t nt, std::size_t nx,
                                unsigned threads) {
  if (nt < 1 || nx < 2) throw DomainError("moore: density grid needs nt >= 1, nx >= 2");
  const double t0 = std::min(mf.right().t_start(), mf.t_max());
  DensityGrid out;
  out.t.resize(nt * nx);
  out.x.resize(nt * nx);
  out.T_tt.resize(nt * nx);
  numerics::parallel_for(nt, threads, [&](std::size_t i) {
    const double t = nt == 1 ? mf.t_max()
                             : t0 + (mf.t_max() - t0) * static_cast<double>(i) / static_cast<double>(nt - 1);
    const double L = mf.left_state(t).R, R = mf.right().R(t);
    for (std::size_t j = 0; j < nx; ++j) {
      const double x = L + (R - L) * static_cast<double>(j) / static_cast<double>(nx - 1);
      out.t[i * nx + j] = t;
      out.x[i * nx + j] = x;
      out.T_tt[i * nx + j] = energy_density(mf, T, x, t);
    }
  });
  return out;
}

}  // namespace dce
