#include "dcelab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dcelab/errors.hpp"

namespace dce {

WallTrajectory::WallTrajectory(double t_start, double t_end) : t_start_(t_start), t_end_(t_end) {
  if (!(t_end >= t_start)) throw DomainError("trajectory: t_end must not precede t_start");
}

WallState WallTrajectory::state(double t) const {
  if (t <= t_start_) return {moving_state(t_start_).R, 0.0, 0.0, 0.0};
  if (t >= t_end_) return {moving_state(t_end_).R, 0.0, 0.0, 0.0};
  return moving_state(t);
}

Smoothstep quintic_smoothstep(double s) {
  const double s2 = s * s;
  return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * (1.0 - s) * (1.0 - s),
          60.0 * s * (1.0 - s) * (1.0 - 2.0 * s), 60.0 * (1.0 - 6.0 * s + 6.0 * s2)};
}

namespace {

class StaticWall final : public WallTrajectory {
 public:
  StaticWall(double R0, double t0, double t1) : WallTrajectory(t0, t1), R0_(R0) {
    if (!(R0 > 0.0)) throw DomainError("static wall: R0 must be positive");
  }
  double max_speed() const override { return 0.0; }
  double min_position() const override { return R0_; }
  double max_position() const override { return R0_; }
  bool is_static() const override { return true; }
  std::string kind() const override { return "static"; }

 protected:
  WallState moving_state(double) const override { return {R0_, 0.0, 0.0, 0.0}; }

 private:
  double R0_;
};

class HarmonicWall final : public WallTrajectory {
 public:
  HarmonicWall(double R0, double eps, double Omega, double t0, double t1)
      : WallTrajectory(t0, t1), R0_(R0), eps_(eps), Omega_(Omega) {
    if (!(R0 > 0.0)) throw DomainError("harmonic wall: R0 must be positive");
    if (!(std::abs(eps) < 1.0)) throw DomainError("harmonic wall: |eps| must be < 1");
    if (!(Omega >= 0.0)) throw DomainError("harmonic wall: Omega must be non-negative");
  }
  double max_speed() const override { return R0_ * std::abs(eps_) * Omega_; }
  double min_position() const override { return R0_ * (1.0 - std::abs(eps_)); }
  double max_position() const override { return R0_ * (1.0 + std::abs(eps_)); }
  bool is_static() const override { return eps_ == 0.0 || Omega_ == 0.0; }
  std::string kind() const override { return "harmonic"; }

 protected:
  WallState moving_state(double t) const override {
    const double ph = Omega_ * (t - t_start());
    const double s = std::sin(ph);
    const double c = std::cos(ph);
    const double a = R0_ * eps_;
    return {R0_ + a * s, a * Omega_ * c, -a * Omega_ * Omega_ * s, -a * Omega_ * Omega_ * Omega_ * c};
  }

 private:
  double R0_, eps_, Omega_;
};

class QuinticStroke final : public WallTrajectory {
 public:
  QuinticStroke(double Ra, double Rb, double t0, double t1)
      : WallTrajectory(t0, t1), Ra_(Ra), Rb_(Rb) {
    if (!(Ra > 0.0) || !(Rb > 0.0)) throw DomainError("stroke: endpoints must be positive");
    if (!(t1 > t0)) throw DomainError("stroke: duration must be positive");
  }
  // peak of delta' is 15/8 at s = 1/2
  double max_speed() const override {
    return std::abs(Rb_ - Ra_) * 15.0 / 8.0 / (t_end() - t_start());
  }
  double min_position() const override { return std::min(Ra_, Rb_); }
  double max_position() const override { return std::max(Ra_, Rb_); }
  bool is_static() const override { return Ra_ == Rb_; }
  std::string kind() const override { return "quintic"; }

 protected:
  WallState moving_state(double t) const override {
    const double tau = t_end() - t_start();
    const auto d = quintic_smoothstep(std::clamp((t - t_start()) / tau, 0.0, 1.0));
    const double D = Rb_ - Ra_;
    return {Ra_ + D * d.value, D * d.d1 / tau, D * d.d2 / (tau * tau), D * d.d3 / (tau * tau * tau)};
  }

 private:
  double Ra_, Rb_;
};

class ProfileWall final : public WallTrajectory {
 public:
  ProfileWall(double Ra, double Rb, double t0, double t1, StrokeShape shape)
      : WallTrajectory(t0, t1), Ra_(Ra), Rb_(Rb), shape_(std::move(shape)) {
    if (!(Ra > 0.0) || !(Rb > 0.0)) throw DomainError("profile: endpoints must be positive");
    if (!(t1 > t0)) throw DomainError("profile: duration must be positive");
    if (!shape_) throw DomainError("profile: empty shape");
    vmax_ = 0.0;
    rmin_ = std::min(Ra, Rb);
    rmax_ = std::max(Ra, Rb);
    for (int i = 0; i <= 4096; ++i) {
      const auto w = moving_state(t0 + (t1 - t0) * i / 4096.0);
      vmax_ = std::max(vmax_, std::abs(w.Rdot));
      rmin_ = std::min(rmin_, w.R);
      rmax_ = std::max(rmax_, w.R);
    }
  }
  double max_speed() const override { return vmax_; }
  double min_position() const override { return rmin_; }
  double max_position() const override { return rmax_; }
  bool is_static() const override { return Ra_ == Rb_ && vmax_ == 0.0; }
  std::string kind() const override { return "profile"; }

 protected:
  WallState moving_state(double t) const override {
    const double tau = t_end() - t_start();
    const auto d = shape_(std::clamp((t - t_start()) / tau, 0.0, 1.0));
    const double D = Rb_ - Ra_;
    return {Ra_ + D * d.value, D * d.d1 / tau, D * d.d2 / (tau * tau), D * d.d3 / (tau * tau * tau)};
  }

 private:
  double Ra_, Rb_;
  StrokeShape shape_;
  double vmax_, rmin_, rmax_;
};

class TabulatedWall final : public WallTrajectory {
 public:
  TabulatedWall(std::vector<double> t, std::vector<double> R)
      : WallTrajectory(t.empty() ? 0.0 : t.front(), t.empty() ? 0.0 : t.back()),
        t_(std::move(t)),
        R_(std::move(R)) {
    if (t_.size() < 2 || t_.size() != R_.size()) {
      throw DomainError("tabulated wall: need matching t and R arrays with >= 2 samples");
    }
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (!(t_[i] > t_[i - 1])) throw DomainError("tabulated wall: times must increase");
    for (double r : R_)
      if (!(r > 0.0)) throw DomainError("tabulated wall: positions must be positive");
    build_spline();
  }
  double max_speed() const override {
    double v = 0.0;
    // |Rdot| of a cubic piece peaks at an end or at its single stationary point
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
      const double h = t_[i + 1] - t_[i];
      for (int k = 0; k <= 16; ++k) {
        v = std::max(v, std::abs(moving_state(t_[i] + h * k / 16.0).Rdot));
      }
    }
    return v;
  }
  double min_position() const override { return extreme(-1.0); }
  double max_position() const override { return extreme(1.0); }
  std::string kind() const override { return "tabulated"; }

 protected:
  WallState moving_state(double t) const override {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (i + 1 >= t_.size()) i = t_.size() - 2;
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h;
    const double b = (t - t_[i]) / h;
    const double m0 = m_[i], m1 = m_[i + 1];
    const double R = a * R_[i] + b * R_[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
    const double Rd = (R_[i + 1] - R_[i]) / h + (-(3 * a * a - 1) * m0 + (3 * b * b - 1) * m1) * h / 6.0;
    const double Rdd = a * m0 + b * m1;
    const double Rddd = (m1 - m0) / h;
    return {R, Rd, Rdd, Rddd};
  }

 private:
  // sampled extreme of R; sign = +1 for the maximum
  double extreme(double sign) const {
    double m = sign * R_[0];
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
      const double h = t_[i + 1] - t_[i];
      for (int k = 0; k <= 16; ++k) m = std::max(m, sign * moving_state(t_[i] + h * k / 16.0).R);
    }
    return sign * m;
  }

  // second derivatives of a natural spline (tridiagonal solve)
  void build_spline() {
    const std::size_t n = t_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      const double rhs = 6.0 * ((R_[i + 1] - R_[i]) / h1 - (R_[i] - R_[i - 1]) / h0);
      const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
      c[i] = h1 / diag;
      d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  std::vector<double> t_, R_, m_;
};

}  // namespace

TrajectoryPtr make_static(double R0, double t_start, double t_end) {
  return std::make_shared<StaticWall>(R0, t_start, t_end);
}

TrajectoryPtr make_harmonic(double R0, double eps, double Omega, double t_start, double t_end) {
  return std::make_shared<HarmonicWall>(R0, eps, Omega, t_start, t_end);
}

TrajectoryPtr make_quintic_stroke(double R_from, double R_to, double t_start, double t_end) {
  return std::make_shared<QuinticStroke>(R_from, R_to, t_start, t_end);
}

TrajectoryPtr make_profile(double R_from, double R_to, double t_start, double t_end, StrokeShape shape) {
  return std::make_shared<ProfileWall>(R_from, R_to, t_start, t_end, std::move(shape));
}

TrajectoryPtr make_tabulated(std::vector<double> t, std::vector<double> R) {
  return std::make_shared<TabulatedWall>(std::move(t), std::move(R));
}

}  // namespace dce
