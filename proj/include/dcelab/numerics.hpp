#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "dcelab/errors.hpp"

namespace dce::numerics {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Composite Gauss-Legendre rule with `panels` equal panels of 15 nodes each.
/// Exact for piecewise polynomials of degree 29 on the panel grid.
template <class F>
auto integrate_gl(F&& f, double a, double b, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 15>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double h = (b - a) / static_cast<double>(panels);
  using Value = decltype(f(a));
  Value sum = Value{} * 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    // node 0 sits at the panel midpoint; the rest come in +- pairs
    Value panel = w[0] * f(mid);
    for (std::size_t i = 1; i < x.size(); ++i) {
      panel = panel + w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
    }
    sum = sum + half * panel;
  }
  return sum;
}

/// Nodes and weights of the composite rule above, for callers that need to
/// evaluate several integrands on a shared grid.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureGrid make_gl_grid(double a, double b, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 15>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  QuadratureGrid g;
  g.nodes.reserve(panels * 15);
  g.weights.reserve(panels * 15);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    g.nodes.push_back(mid);
    g.weights.push_back(half * w[0]);
    for (std::size_t i = 1; i < x.size(); ++i) {
      g.nodes.push_back(mid + half * x[i]);
      g.weights.push_back(half * w[i]);
      g.nodes.push_back(mid - half * x[i]);
      g.weights.push_back(half * w[i]);
    }
  }
  return g;
}

/// Root of f on [a, b]; f(a) and f(b) must have opposite signs (or vanish).
template <class F>
double find_root(F&& f, double a, double b, double xtol = 0.0) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw RootFindingError("root not bracketed on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "], f = " + std::to_string(fa) + ", " + std::to_string(fb));
  }
  const double tol_abs = xtol > 0.0 ? xtol : 4.0 * std::numeric_limits<double>::epsilon() *
                                                  std::max(std::abs(a), std::abs(b));
  auto term = [tol_abs](double lo, double hi) { return std::abs(hi - lo) <= tol_abs; };
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, term, iters);
  // pick the endpoint with the smaller residual
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers.  Each index is
/// handled exactly once; callers write into pre-sized slots so the result
/// order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dce::numerics
