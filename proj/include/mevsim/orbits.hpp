#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevsim/dynamics.hpp"

namespace mevsim {

// k-fold composition of step at constant intensity eta.
double iterate_k(const MarketInstance& inst, UpdateRule rule, double eta,
                 int k, double lambda);

enum class CycleStability { Stable, Unstable, Marginal };

const char* stability_name(CycleStability s);

struct PeriodicPoint {
  double point = 0.0;
  int least_period = 1;
  CycleStability stability = CycleStability::Stable;
  double multiplier = 0.0;  // product of h' along the least-period orbit
};

// Fixed points of h^k in (0,1) with least periods and cycle stability.
struct PeriodReport {
  int k = 1;
  std::vector<PeriodicPoint> points;  // ascending by point
  // Set when |h^k - id| < tol at a grid point without a bracketing sign
  // change: a tangential fixed point may have been missed by the scan.
  bool tangency_suspected = false;
};

std::int64_t default_period_grid(int k);

// Scans g = h^k - id for sign changes on a uniform grid over
// (1e-6, 1-1e-6) and refines each bracket by bisection down to adjacent
// doubles, so orbit residuals stay within 10*tol even for strongly unstable
// cycles. Roots closer than 10*tol are merged, least periods classified
// over the divisors of k at the same tolerance, and a cycle is marked
// stable when |prod h'(x_i)| < 1 (marginal within 1e-8 of 1). grid_n = 0
// selects default_period_grid(k).
PeriodReport find_periodic_points(const MarketInstance& inst, UpdateRule rule,
                                  double eta, int k, std::int64_t grid_n = 0,
                                  double tol = 1e-10);

// Does a least period m force a least period l (strictly after m in the
// Sharkovsky order 3 > 5 > 7 > ... > 2*3 > 2*5 > ... > 2^n > ... > 2 > 1)?
bool sharkovsky_implied(int m, int l);

// Certified period-3 bracket for the piecewise update map with
// F = G = Uniform[a,b]: lambda3 <= lambda0 < lambda1 < lambda2 where each
// lambda is an iterate of its predecessor.
struct ChaosWitness {
  double a = 0.0, b = 0.0;
  double lambda0 = 0.0, lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  double eta = 0.0, w = 0.0;

  MarketInstance instance() const;
};

class WitnessSearchExhausted : public std::runtime_error {
 public:
  WitnessSearchExhausted(const std::string& msg, ChaosWitness last)
      : std::runtime_error(msg), last_(last) {}
  const ChaosWitness& last_state() const { return last_; }

 private:
  ChaosWitness last_;
};

// Searches for the bracket by shrinking b toward a geometrically
// (b_j = a + (b0-a) 2^-j, b0 = min(1, a+1/2)); a shrinks from a0 only as far
// as needed to keep h(a) interior. At each b the anchor lambda1 is tuned
// within [a, h(a-)) with the classical anchor lambda1 = a tried first;
// lambda0 is the bisected preimage of lambda1 under the lower branch.
// Throws WitnessSearchExhausted after search_steps failures.
ChaosWitness chaos_witness(double eta, double w, double a0 = 0.1,
                           int search_steps = 200);

// Evaluates the same inequalities on an arbitrary instance/step path; used
// to revalidate a witness through the distribution machinery.
bool witness_valid(const ChaosWitness& wit, double tol = 1e-10);

struct ScanAxis {
  enum class Type { Eta, ToleranceRange };

  Type type = Type::Eta;
  double min = 0.0, max = 1.0;
  int count = 2;
  // ToleranceRange family: F = Uniform[uc-r, uc+r], G = Uniform[mc-r, mc+r]
  // at fixed eta, sweeping r.
  double eta = 1.0;
  double user_center = 0.5;
  double miner_center = 0.4;
};

struct ScanRecord {
  double param = 0.0;
  std::vector<double> lambdas;  // lambda_{burn_in+1} ... lambda_{burn_in+n_record}
  std::vector<double> deltas;
  double lambda_mean = 0.0;
  double delta_mean = 0.0;

  double band_width() const;  // max - min of the recorded lambdas
};

struct BifurcationScan {
  ScanAxis axis;
  int burn_in = 200;
  int n_record = 200;
  double lambda0 = 0.3;
  std::vector<ScanRecord> rows;  // ascending by param
};

// For each parameter value, runs burn_in + n_record deterministic steps from
// lambda0 and records the trailing n_record (lambda, delta) pairs.
BifurcationScan bifurcation_scan(const MarketInstance& inst, UpdateRule rule,
                                 const ScanAxis& axis, int burn_in = 200,
                                 int n_record = 200, double lambda0 = 0.3);

}  // namespace mevsim
