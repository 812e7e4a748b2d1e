#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mevsim/dynamics.hpp"

namespace mevsim {

struct RegimeSpec {
  MarketInstance market;
  double eta;
};

// Two-regime market switched on a lambda threshold: lambda_t <= theta selects
// regime 1 (tie goes to regime 1), the regime is read from lambda_t before
// the update.
struct RegimeConfig {
  RegimeSpec regime1;
  RegimeSpec regime2;
  double theta = 0.5;
  int total_steps = 5000;
  int epoch_len = 50;
};

struct StressConfig {
  int n_epochs = 100;
  int blocks_per_epoch = 50;
  double eta_lo = 0.4, eta_hi = 1.0;
  double w_lo = 0.5, w_hi = 2.0;
  int beta_perturb_every = 10;
  // All four Beta shapes (a_u, b_u, a_m, b_m) redraw uniformly from this
  // range; shapes above 1 keep both densities bounded.
  double shape_lo = 1.5, shape_hi = 6.0;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;
  double eta = 0.0;
  double w = 0.0;
  int regime_id = 0;
  double a_u = 0.0, b_u = 0.0, a_m = 0.0, b_m = 0.0;  // Beta shapes (stress)
};

// Maximal run of steps over which (eta, w, F, G) are all constant, with the
// attracting band of that parameter set.
struct SegmentRecord {
  int t_begin = 0, t_end = 0;  // step indices [t_begin, t_end)
  double eta = 0.0;
  double w = 0.0;
  double lambda_star = 0.0;
  double band_lo = 0.0, band_hi = 1.0;
};

struct ScenarioResult {
  OrbitTrace trace;
  std::vector<int> regime_ids;  // one per trace row
  std::vector<EpochRecord> epochs;
  std::vector<SegmentRecord> segments;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double max_abs_delta = 0.0;
  std::vector<double> in_band_fraction;  // per epoch
};

ScenarioResult run_regime(const RegimeConfig& cfg, double lambda0,
                          std::uint64_t seed);

ScenarioResult run_stress(const StressConfig& cfg, double lambda0);

ScenarioResult run_burn(const MarketInstance& inst, const BurnPolicy& burn,
                        double eta, double lambda0, int steps,
                        std::uint64_t seed);

// All four update rules from identical initial conditions, aligned traces.
std::map<UpdateRule, OrbitTrace> run_rule_comparison(const MarketInstance& inst,
                                                     double eta, double lambda0,
                                                     int steps);

}  // namespace mevsim
