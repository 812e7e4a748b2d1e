#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "mevsim/dynamics.hpp"

namespace mevsim {

// Closed-form bounds for one instance at a given intensity.
struct ThresholdReport {
  double lambda_star = 0.0;
  double liveness_eta_max = 0.0;
  double convergence_eta_max = 0.0;
  double attracting_lo = 0.0;
  double attracting_hi = 1.0;
  std::optional<double> deviation_bound;
  std::string deviation_note;  // reason when the bound is absent
  double eta_used = 0.0;

  bool liveness_exceeded() const { return !(eta_used < liveness_eta_max); }
};

// Orbits never reach {0,1} for eta below min{1/(w(1-lambda*)), 1/lambda*}.
double liveness_threshold(const MarketInstance& inst);

// Sufficient intensity for convergence to lambda*: the infimum over
// lambda in (0,1)\{lambda*} of (lambda* + lambda) / (lambda^2 (1-lambda) |K|)
// with K(lambda) = delta(lambda)/(lambda - lambda*) and the density limit
// -f(lambda*) - w g(lambda*) substituted within 1e-8 of lambda*. Evaluated
// as a uniform grid minimum plus golden-section refinement; the result is an
// upper estimate of the exact infimum that tightens as grid_n grows.
double convergence_threshold(const MarketInstance& inst,
                             std::int64_t grid_n = 1000000);

// Forward-invariant band [max{0, lambda* - w eta/4}, min{lambda* + eta/4, 1}].
std::pair<double, double> attracting_range(const MarketInstance& inst,
                                           double eta);

// Closed-form bound on |delta(lambda_t)| inside the attracting band:
// eta (1+w)/4 * (max f + w max g) over (p,q) = the unclamped band, each
// density maximum from beta_kernel_max. Requires Beta tolerances on both
// sides and 0 < lambda* - w eta/4, lambda* + eta/4 < 1; throws
// std::invalid_argument naming the violated side otherwise.
double deviation_bound(const MarketInstance& inst, double eta);

ThresholdReport report(const MarketInstance& inst, double eta,
                       std::int64_t grid_n = 1000000);

}  // namespace mevsim
