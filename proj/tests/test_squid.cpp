#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dcelab/errors.hpp"
#include "dcelab/numerics.hpp"
#include "dcelab/squid.hpp"

using namespace dce;
using numerics::kPi;

namespace {

// Independent root finder: the right-wall equation multiplied through by
// cos(x + phi) has no poles, so plain bisection on a fine grid finds every
// simple root.
std::vector<double> brute_roots(const SquidCavityParams& p, std::size_t n) {
  auto F = [&](double x) {
    const double phi = std::atan((p.chi0 * x * x - p.b0L) / x);
    return x * std::sin(x + phi) + (p.chi0 * x * x - p.b0R) * std::cos(x + phi);
  };
  std::vector<double> out;
  const double h = 1e-4;
  double x0 = 1e-7, f0 = F(x0);
  while (out.size() < n) {
    const double x1 = x0 + h, f1 = F(x1);
    if ((f0 < 0) != (f1 < 0)) {
      double a = x0, b = x1, fa = f0;
      for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
        const double m = 0.5 * (a + b), fm = F(m);
        if ((fa < 0) == (fm < 0)) { a = m; fa = fm; } else { b = m; }
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace

TEST_CASE("open ends give the Dirichlet-like spectrum exactly") {
  const auto r = solve_spectrum({0.0, 0.0, 0.0, 1.0}, 8);
  REQUIRE(r.size() == 8);
  for (std::size_t n = 0; n < r.size(); ++n) {
    CHECK(r[n].phi == 0.0);
    CHECK(r[n].kd == doctest::Approx((n + 1) * kPi).epsilon(1e-14));
  }
}

TEST_CASE("large b0 reproduces the rigid-wall spectrum") {
  const double b = 1e6;
  const SquidCavityParams p{0.0, b, b, 1.0};
  const auto r = solve_spectrum(p, 10);
  for (std::size_t n = 0; n < r.size(); ++n) {
    const double nd = n + 1.0;
    CHECK(std::abs(r[n].kd - nd * kPi) < 1e-4);
    // to first order in 1/b the two walls each shift the phase by x/b
    CHECK(r[n].kd == doctest::Approx(nd * kPi / (1.0 + 2.0 / b)).epsilon(1e-12));
    const auto res = spectrum_residual(p, r[n]);
    CHECK(res.right < 1e-10);
    CHECK(res.left < 1e-10);
  }
}

TEST_CASE("roots agree with an independent bisection and satisfy both equations") {
  const std::vector<SquidCavityParams> cases = {
      {0.05, 2.0, 0.5, 1.0}, {0.0, 3.0, 3.0, 1.0}, {1.2, 0.7, 40.0, 2.0},
      {0.1, -0.3, 0.5, 1.0}, {0.3, -0.8, -0.4, 1.0}, {0.0, 0.0, 5.0, 1.0}};
  for (const auto& p : cases) {
    const auto r = solve_spectrum(p, 7);
    const auto ref = brute_roots(p, 7);
    for (std::size_t n = 0; n < r.size(); ++n) {
      CHECK(r[n].kd == doctest::Approx(ref[n]).epsilon(1e-12));
      if (n) CHECK(r[n].kd > r[n - 1].kd);
      CHECK(r[n].phi > -kPi / 2);
      CHECK(r[n].phi <= kPi / 2);
      const auto raw = spectrum_residual_raw(p, r[n]);
      CHECK(raw.right < 1e-10);
      CHECK(raw.left < 1e-10);
      const auto res = spectrum_residual(p, r[n]);
      CHECK(res.right < 1e-10);
      CHECK(res.left < 1e-10);
    }
  }
}

TEST_CASE("roots move continuously with b0") {
  const std::size_t n = 6;
  for (double chi : {0.0, 0.2}) {
    auto prev = solve_spectrum({chi, 0.5, 0.5, 1.0}, n);
    for (double b = 0.5; b < 20.0; b += 0.01) {
      const double db = 0.01;
      const auto next = solve_spectrum({chi, b + db, b + db, 1.0}, n);
      for (std::size_t i = 0; i < n; ++i) {
        // dkd/db0 is bounded by 2/x^2 times the mode slope; 5 |db| is generous
        CHECK(std::abs(next[i].kd - prev[i].kd) < 5.0 * db);
      }
      prev = next;
    }
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(solve_spectrum({-0.1, 1.0, 1.0, 1.0}, 3), DomainError);
  CHECK_THROWS_AS(solve_spectrum({0.0, 1.0, 1.0, 0.0}, 3), DomainError);
  CHECK_THROWS_AS(solve_spectrum({0.0, 1.0, 1.0, 1.0}, 0), DomainError);
}

TEST_CASE("effective length") {
  const double L0 = 1.3, El = 0.2, EJ = 4.0;
  CHECK(effective_length(L0, El, EJ, 0.0) == doctest::Approx(L0 * (1.0 + El / (2.0 * EJ))));
  CHECK(effective_length(L0, 1e-12, EJ, 0.4) == doctest::Approx(L0).epsilon(1e-12));
  CHECK_THROWS_AS(effective_length(L0, El, EJ, kPi / 2 - 1e-4), DomainError);
  CHECK_THROWS_AS(effective_length(L0, El, 0.0, 0.0), DomainError);
  CHECK_NOTHROW(effective_length(L0, El, EJ, kPi / 2 - 2e-3));

  // f = eps sin(w t): 1/cos f = 1 + f^2/2 + ..., so the modulation depth is
  // E_lcav L0 eps^2 / (4 E_J) at leading order
  for (double eps : {1e-2, 1e-3}) {
    double dev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double f = eps * std::sin(2.0 * kPi * i / 400.0);
      dev = std::max(dev, effective_length(L0, El, EJ, f) - effective_length(L0, El, EJ, 0.0));
    }
    CHECK(dev / (eps * eps) == doctest::Approx(El * L0 / (4.0 * EJ)).epsilon(1e-3));
  }
}

TEST_CASE("drive frequencies") {
  const std::vector<SpectrumRoot> two = {{kPi, 0.0}, {2.0 * kPi, 0.0}};
  const auto f = resonance_frequencies(two, 1.0);
  REQUIRE(f.size() == 4);
  CHECK(f[0].Omega == doctest::Approx(2 * kPi));
  CHECK(f[1].Omega == doctest::Approx(4 * kPi));
  CHECK(f[2].Omega == doctest::Approx(3 * kPi));
  CHECK(f[3].Omega == doctest::Approx(kPi));
  CHECK(f[3].kind == DriveKind::difference);

  const auto one = resonance_frequencies({{1.7, 0.1}}, 2.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].Omega == doctest::Approx(1.7));

  // equidistant spectrum: 2k_2 coincides with k_1 + k_3 and is listed once
  const std::vector<SpectrumRoot> three = {{kPi, 0.0}, {2 * kPi, 0.0}, {3 * kPi, 0.0}};
  const auto f3 = resonance_frequencies(three, 1.0);
  for (std::size_t i = 0; i < f3.size(); ++i)
    for (std::size_t j = i + 1; j < f3.size(); ++j) CHECK(std::abs(f3[i].Omega - f3[j].Omega) > 1e-6);
  // 2pi..6pi from doubles and sums, pi and 2pi from differences
  CHECK(f3.size() == 6);

  const auto only_sum = resonance_frequencies(three, 1.0, static_cast<unsigned>(DriveKind::sum));
  CHECK(only_sum.size() == 3);
  CHECK_THROWS_AS(resonance_frequencies(three, 0.0), DomainError);
}

TEST_CASE("equidistance detector") {
  CHECK(is_equidistant(solve_spectrum({0.0, 1e6, 1e6, 1.0}, 10)));
  CHECK(is_equidistant(solve_spectrum({0.0, 0.0, 0.0, 1.0}, 10)));
  CHECK_FALSE(is_equidistant(solve_spectrum({0.05, 2.0, 0.5, 1.0}, 10)));
  CHECK_FALSE(is_equidistant(solve_spectrum({0.5, 1e3, 1e3, 1.0}, 10)));

  // same check by scanning gaps directly
  const auto r = solve_spectrum({0.05, 2.0, 0.5, 1.0}, 10);
  double spread = 0.0;
  for (std::size_t i = 2; i < r.size(); ++i)
    spread = std::max(spread, std::abs((r[i].kd - r[i - 1].kd) - (r[1].kd - r[0].kd)));
  CHECK(spread > 1e-3);
}
