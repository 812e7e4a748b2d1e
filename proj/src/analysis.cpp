#include "mevsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mevsim/special_functions.hpp"

namespace mevsim {

double liveness_threshold(const MarketInstance& inst) {
  const double ls = inst.lambda_star();
  return std::min(1.0 / (inst.w() * (1.0 - ls)), 1.0 / ls);
}

namespace {

// Golden-section minimization on [lo, hi].
template <typename F>
double golden_min(F f, double lo, double hi, double best_so_far) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  double best = std::min({best_so_far, f1, f2});
  for (int i = 0; i < 120 && hi - lo > 1e-13; ++i) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

}  // namespace

double convergence_threshold(const MarketInstance& inst, std::int64_t grid_n) {
  if (grid_n < 10000)
    throw std::invalid_argument("convergence_threshold: grid_n must be >= 10^4");
  const double ls = inst.lambda_star();
  const double w = inst.w();
  const double kref = inst.reference_k();
  // |K| at lambda* from the density limit of delta(lambda)/(lambda-lambda*).
  const double k_limit =
      inst.users().pdf(ls) + w * kref * inst.miners().pdf(kref * ls);

  const auto expr = [&](double lam) {
    double abs_k;
    if (std::fabs(lam - ls) < 1e-8) {
      abs_k = k_limit;
    } else {
      abs_k = std::fabs(inst.delta(lam) / (lam - ls));
    }
    return (ls + lam) / (lam * lam * (1.0 - lam) * abs_k);
  };

  // The expression diverges at both endpoints, so a small margin loses
  // nothing and keeps Beta densities with shapes < 1 off the boundary.
  constexpr double kMargin = 1e-9;
  const double span = 1.0 - 2.0 * kMargin;
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_i = 1;
  for (std::int64_t i = 1; i < grid_n; ++i) {
    const double lam = kMargin + span * static_cast<double>(i) / grid_n;
    const double v = expr(lam);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double h = span / grid_n;
  const double lo = kMargin + h * std::max<std::int64_t>(best_i - 1, 0);
  const double hi = kMargin + h * std::min(best_i + 1, grid_n);
  return golden_min(expr, lo, hi, best);
}

std::pair<double, double> attracting_range(const MarketInstance& inst,
                                           double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("attracting_range: eta must be positive");
  const double ls = inst.lambda_star();
  return {std::max(0.0, ls - inst.w() * eta / 4.0),
          std::min(ls + eta / 4.0, 1.0)};
}

double deviation_bound(const MarketInstance& inst, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("deviation_bound: eta must be positive");
  if (inst.users().kind() != DistKind::Beta ||
      inst.miners().kind() != DistKind::Beta)
    throw std::invalid_argument(
        "deviation_bound: requires Beta tolerances on both sides");
  const double ls = inst.lambda_star();
  const double w = inst.w();
  const double p = ls - w * eta / 4.0;
  const double q = ls + eta / 4.0;
  if (!(p > 0.0))
    throw std::invalid_argument(
        "deviation_bound: hypothesis violated on the lower side "
        "(lambda* - w eta/4 <= 0)");
  if (!(q < 1.0))
    throw std::invalid_argument(
        "deviation_bound: hypothesis violated on the upper side "
        "(lambda* + eta/4 >= 1)");
  const double au = inst.users().param1(), bu = inst.users().param2();
  const double am = inst.miners().param1(), bm = inst.miners().param2();
  const double max_f =
      beta_kernel_max(au, bu, p, q).value / std::exp(log_beta(au, bu));
  const double max_g =
      beta_kernel_max(am, bm, p, q).value / std::exp(log_beta(am, bm));
  return eta * (1.0 + w) / 4.0 * (max_f + w * max_g);
}

ThresholdReport report(const MarketInstance& inst, double eta,
                       std::int64_t grid_n) {
  ThresholdReport r;
  r.lambda_star = inst.lambda_star();
  r.liveness_eta_max = liveness_threshold(inst);
  r.convergence_eta_max = convergence_threshold(inst, grid_n);
  std::tie(r.attracting_lo, r.attracting_hi) = attracting_range(inst, eta);
  r.eta_used = eta;
  try {
    r.deviation_bound = deviation_bound(inst, eta);
  } catch (const std::invalid_argument& e) {
    r.deviation_note = std::string("absent: ") + e.what();
  }
  return r;
}

}  // namespace mevsim
