#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "mevsim/dynamics.hpp"
#include "mevsim/rng.hpp"

namespace test_support {

// Adaptive Simpson quadrature; independent of any library evaluation path.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Golden-section minimizer used by grid oracles.
template <typename F>
double golden_min_x(F f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Independent maximizer for the beta kernel: dense grid (endpoints included)
// plus golden-section refinement around the best cell. Never consults the
// closed-form critical point.
inline double grid_kernel_max(double a, double b, double p, double q,
                              long long n = 1000000) {
  const auto kernel = [&](double x) {
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
  };
  double best = -1.0;
  long long best_i = 0;
  for (long long i = 0; i <= n; ++i) {
    const double x = p + (q - p) * static_cast<double>(i) / n;
    const double v = kernel(x);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double h = (q - p) / n;
  const double lo = std::max(p, p + (best_i - 1) * h);
  const double hi = std::min(q, p + (best_i + 1) * h);
  const double xr = golden_min_x([&](double x) { return -kernel(x); }, lo, hi);
  return std::max(best, kernel(xr));
}

// Random instance pool: Beta shapes in [1.5,6], overlapping Uniform
// sub-intervals, truncated Normals. Rejects draws whose target gap is not
// strictly decreasing or whose fixed point sits too close to a boundary.
inline mevsim::ToleranceDistribution random_distribution(mevsim::Rng& rng) {
  switch (rng.next_u64() % 3) {
    case 0:
      return mevsim::ToleranceDistribution::beta(rng.uniform(1.5, 6.0),
                                                 rng.uniform(1.5, 6.0));
    case 1: {
      const double c = rng.uniform(0.35, 0.65);
      const double r = rng.uniform(0.2, 0.33);
      return mevsim::ToleranceDistribution::uniform(std::max(0.02, c - r),
                                                    std::min(0.98, c + r));
    }
    default: {
      const double mu = rng.uniform(0.25, 0.75);
      const double sigma = rng.uniform(0.1, 0.3);
      return mevsim::ToleranceDistribution::truncated_normal(mu, sigma * sigma);
    }
  }
}

inline mevsim::MarketInstance random_instance(mevsim::Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    mevsim::MarketInstance inst(random_distribution(rng),
                                random_distribution(rng),
                                rng.uniform(0.5, 2.0));
    const double ls = inst.lambda_star();
    if (ls < 0.12 || ls > 0.88) continue;
    bool decreasing = true;
    double prev = inst.delta(0.0);
    for (int i = 1; i <= 1000 && decreasing; ++i) {
      const double d = inst.delta(i / 1000.0);
      if (d >= prev) decreasing = false;
      prev = d;
    }
    if (decreasing) return inst;
  }
  throw std::runtime_error("random_instance: rejection loop exhausted");
}

}  // namespace test_support
