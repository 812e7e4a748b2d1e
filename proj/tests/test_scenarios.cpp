#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mevsim/analysis.hpp"
#include "mevsim/scenarios.hpp"
#include "test_support.hpp"

using namespace mevsim;

namespace {

MarketInstance symmetric_betas(double w) {
  return MarketInstance(ToleranceDistribution::beta(2, 2),
                        ToleranceDistribution::beta(2, 2), w);
}

}  // namespace

TEST_CASE("regime run with identical regimes equals plain simulate") {
  const MarketInstance inst = symmetric_betas(1.0);
  RegimeConfig cfg{RegimeSpec{inst, 0.7}, RegimeSpec{inst, 0.7}, 0.408, 400, 50};
  const ScenarioResult res = run_regime(cfg, 0.3, 0);
  const OrbitTrace plain =
      simulate(inst, UpdateRule::Full, 0.3, 0.7, MevSequence::constant(), 400);
  CHECK(res.trace.lambdas == plain.lambdas);
  CHECK(res.trace.deltas == plain.deltas);
}

TEST_CASE("regime tie goes to regime 1") {
  // crafted so the orbit starts exactly on the threshold
  const MarketInstance r1 = symmetric_betas(1.1);
  const MarketInstance r2 = symmetric_betas(1.0);
  RegimeConfig cfg{RegimeSpec{r1, 0.9}, RegimeSpec{r2, 1.0}, 0.408, 10, 5};
  const ScenarioResult res = run_regime(cfg, 0.408, 0);
  CHECK(res.regime_ids.front() == 1);
  CHECK(res.trace.deltas.front() == doctest::Approx(r1.delta(0.408)));
  CHECK(res.trace.etas.front() == 0.9);
}

TEST_CASE("regime run settles on one side of the threshold") {
  RegimeConfig cfg{RegimeSpec{symmetric_betas(1.1), 0.9},
                   RegimeSpec{symmetric_betas(1.0), 1.0}, 0.408, 5000, 50};
  const ScenarioResult res = run_regime(cfg, 0.3, 0);
  REQUIRE(res.trace.size() == 5001);
  const int last_regime = res.regime_ids.back();
  for (std::size_t t = res.trace.size() - 1000; t < res.trace.size(); ++t) {
    CHECK(res.regime_ids[t] == last_regime);
  }
}

TEST_CASE("stress run is reproducible and degenerate ranges are deterministic") {
  StressConfig cfg;
  cfg.n_epochs = 6;
  cfg.blocks_per_epoch = 50;
  cfg.seed = 2024;
  const ScenarioResult a = run_stress(cfg, 0.5);
  const ScenarioResult b = run_stress(cfg, 0.5);
  CHECK(a.trace.lambdas == b.trace.lambdas);
  CHECK(a.trace.etas == b.trace.etas);
  REQUIRE(a.epochs.size() == 6);
  REQUIRE(a.trace.size() == 301);

  // zero-width ranges reduce to a fixed-parameter run
  StressConfig fixed;
  fixed.n_epochs = 2;
  fixed.blocks_per_epoch = 30;
  fixed.eta_lo = fixed.eta_hi = 0.6;
  fixed.w_lo = fixed.w_hi = 1.3;
  fixed.shape_lo = fixed.shape_hi = 2.0;
  fixed.seed = 7;
  const ScenarioResult c = run_stress(fixed, 0.4);
  const MarketInstance inst(ToleranceDistribution::beta(2, 2),
                            ToleranceDistribution::beta(2, 2), 1.3);
  const OrbitTrace plain =
      simulate(inst, UpdateRule::Full, 0.4, 0.6, MevSequence::constant(), 60);
  CHECK(c.trace.lambdas == plain.lambdas);
}

TEST_CASE("stress epochs carry the parameters that generated the steps") {
  StressConfig cfg;
  cfg.n_epochs = 4;
  cfg.blocks_per_epoch = 20;
  cfg.beta_perturb_every = 10;
  cfg.seed = 5;
  const ScenarioResult res = run_stress(cfg, 0.5);
  REQUIRE(res.epochs.size() == 4);
  for (const EpochRecord& e : res.epochs) {
    CHECK(e.eta >= cfg.eta_lo);
    CHECK(e.eta <= cfg.eta_hi);
    CHECK(e.w >= cfg.w_lo);
    CHECK(e.w <= cfg.w_hi);
    CHECK(e.a_u >= cfg.shape_lo);
    CHECK(e.b_m <= cfg.shape_hi);
  }
  // segments tile the run and carry consistent bands
  int covered = 0;
  for (const SegmentRecord& s : res.segments) covered += s.t_end - s.t_begin;
  CHECK(covered == static_cast<int>(res.trace.size()));
  for (const SegmentRecord& s : res.segments) {
    CHECK(s.band_lo <= s.lambda_star);
    CHECK(s.lambda_star <= s.band_hi);
  }
}

TEST_CASE("burn run: constant k = 1 matches the unburned trace") {
  const MarketInstance inst(ToleranceDistribution::beta(2, 5),
                            ToleranceDistribution::uniform(0.2, 0.8), 1.3);
  const ScenarioResult res =
      run_burn(inst, BurnPolicy::constant(1.0), 0.7, 0.3, 1500, 0);
  const OrbitTrace plain =
      simulate(inst, UpdateRule::Full, 0.3, 0.7, MevSequence::constant(), 1500);
  CHECK(res.trace.lambdas == plain.lambdas);
  CHECK(res.trace.deltas == plain.deltas);
  CHECK_THROWS_AS(run_burn(inst, BurnPolicy::none(), 0.7, 0.3, 10, 0),
                  std::invalid_argument);
}

TEST_CASE("burn run: sampled k stays interior below the worst-case liveness") {
  const MarketInstance inst(ToleranceDistribution::beta(2, 3),
                            ToleranceDistribution::beta(3, 2), 1.2);
  // worst case: the instance burned at the lower end of the range
  const MarketInstance worst(inst.users(), inst.miners(), 1.2,
                             BurnPolicy::constant(0.8));
  const double eta = 0.99 * liveness_threshold(worst);
  const ScenarioResult res =
      run_burn(inst, BurnPolicy::sampled(0.8, 0.95, 11), eta, 0.3, 20000, 11);
  CHECK(res.lambda_min > 0.0);
  CHECK(res.lambda_max < 1.0);
}

TEST_CASE("rule comparison: aligned traces, common fixed point, step ordering") {
  const MarketInstance inst(ToleranceDistribution::truncated_normal(0.4, 0.01),
                            ToleranceDistribution::truncated_normal(0.5, 0.01),
                            1.6);
  const auto traces = run_rule_comparison(inst, 1.0, 0.3, 200);
  REQUIRE(traces.size() == 4);
  for (const auto& [rule, tr] : traces) {
    (void)rule;
    CHECK(tr.size() == 201);
    CHECK(tr.lambdas.front() == 0.3);
  }

  // common fixed point: all four traces constant at lambda*
  const double ls = inst.lambda_star();
  for (const auto& [rule, tr] : run_rule_comparison(inst, 0.8, ls, 50)) {
    (void)rule;
    for (double v : tr.lambdas) CHECK(v == ls);
  }

  // per-step magnitude ordering at interior points with a common gap sign
  mevsim::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double lam = rng.uniform(0.02, 0.98);
    const double eta = rng.uniform(0.05, 1.5);
    const double full = std::fabs(step(inst, UpdateRule::Full, lam, eta) - lam);
    const double miner =
        std::fabs(step(inst, UpdateRule::MinerScaled, lam, eta) - lam);
    const double user =
        std::fabs(step(inst, UpdateRule::UserScaled, lam, eta) - lam);
    CHECK(full <= miner + 1e-15);
    CHECK(full <= user + 1e-15);
  }
}
