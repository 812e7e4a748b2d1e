#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mevsim/distributions.hpp"

namespace mevsim {

// Fraction of the allocated MEV share that block producers actually retain;
// the rest is burned. Sampled mode redraws k every step from U[lo,hi].
struct BurnPolicy {
  enum class Mode { None, Constant, Sampled };

  Mode mode = Mode::None;
  double k = 1.0;             // Constant
  double lo = 1.0, hi = 1.0;  // Sampled
  std::uint64_t seed = 0;

  static BurnPolicy none();
  static BurnPolicy constant(double k);
  static BurnPolicy sampled(double lo, double hi, std::uint64_t seed);

  // Burn fraction used for fixed-point and derivative computations:
  // 1 (None), k (Constant), or the midpoint of [lo,hi] (Sampled; reference
  // value only).
  double reference_k() const;
  std::string describe() const;
};

enum class UpdateRule { Full, MinerScaled, UserScaled, Plain };

const char* rule_name(UpdateRule rule);

// The market tuple (F, G, w) plus burn policy. Owns the target gap
// Delta_w(lambda) = survival_F(lambda) - w cdf_G(k lambda) and its unique
// interior zero lambda*. Immutable; safe for concurrent reads.
class MarketInstance {
 public:
  MarketInstance(ToleranceDistribution users, ToleranceDistribution miners,
                 double w, BurnPolicy burn = BurnPolicy::none());

  double delta(double lambda) const { return delta(lambda, ref_k_); }
  double delta(double lambda, double k) const;

  // Bisection root of delta in (0,1), computed at construction down to
  // machine resolution so step() holds it exactly stationary.
  double lambda_star() const { return lambda_star_; }

  const ToleranceDistribution& users() const { return users_; }
  const ToleranceDistribution& miners() const { return miners_; }
  double w() const { return w_; }
  const BurnPolicy& burn() const { return burn_; }
  double reference_k() const { return ref_k_; }
  std::string describe() const;

 private:
  ToleranceDistribution users_;
  ToleranceDistribution miners_;
  double w_;
  BurnPolicy burn_;
  double ref_k_ = 1.0;
  double lambda_star_ = 0.5;
};

// Bisection root of delta on [0,1] at interval tolerance tol.
double lambda_star(const MarketInstance& inst, double tol = 1e-12);

// Per-step MEV level m_t; the effective intensity is eta_t = eta * m_t.
struct MevSequence {
  enum class Mode { Constant, Series, Sampled };

  Mode mode = Mode::Constant;
  double m = 1.0;
  std::vector<double> values;
  double lo = 1.0, hi = 1.0;
  std::uint64_t seed = 0;

  static MevSequence constant(double m = 1.0);
  static MevSequence series(std::vector<double> values);
  static MevSequence sampled(double lo, double hi, std::uint64_t seed);
};

// Time series of one simulation run. Row t holds the state lambda_t together
// with the target gap and effective intensity in effect at that tick (row T
// carries the values that the next step would have used).
struct OrbitTrace {
  std::vector<double> lambdas;
  std::vector<double> deltas;
  std::vector<double> etas;
  UpdateRule rule = UpdateRule::Full;
  std::string instance;

  std::size_t size() const { return lambdas.size(); }
};

bool lambda_admissible(UpdateRule rule, double lambda);
std::string admissible_range(UpdateRule rule);

// One update of the chosen rule at effective intensity eta_t and burn
// fraction k, then the rule's projection: Full clamps to [0,1], MinerScaled
// clamps below at 0, UserScaled clamps above at 1, Plain is unprojected.
// Returns lambda unchanged when |delta| < 1e-15 so the interior fixed point
// never drifts.
double step(const MarketInstance& inst, UpdateRule rule, double lambda,
            double eta_t, double k);
double step(const MarketInstance& inst, UpdateRule rule, double lambda,
            double eta_t);

// Iterates step `steps` times from lambda0 with eta_t = eta * m_t;
// bit-deterministic given the seeds carried by mev and the burn policy.
OrbitTrace simulate(const MarketInstance& inst, UpdateRule rule, double lambda0,
                    double eta, const MevSequence& mev, int steps);

// Phi(lambda) = (ln lambda - ln lambda*)^2, defined on (0,1).
double potential(const MarketInstance& inst, double lambda);

// Analytic derivative of the unprojected update map at lambda, using
// delta'(lambda) = -f(lambda) - w k g(k lambda).
double rule_derivative(const MarketInstance& inst, UpdateRule rule,
                       double lambda, double eta);

}  // namespace mevsim
