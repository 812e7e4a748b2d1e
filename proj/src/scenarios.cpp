#include "mevsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "mevsim/analysis.hpp"
#include "mevsim/rng.hpp"

namespace mevsim {

namespace {

void require_interior(double lambda0) {
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw std::invalid_argument("scenario: lambda0 must lie in (0,1)");
}

void finish_stats(ScenarioResult& result) {
  const auto& lam = result.trace.lambdas;
  const auto [mn, mx] = std::minmax_element(lam.begin(), lam.end());
  result.lambda_min = *mn;
  result.lambda_max = *mx;
  double mad = 0.0;
  for (double d : result.trace.deltas) mad = std::max(mad, std::fabs(d));
  result.max_abs_delta = mad;
}

// Fraction of rows t in [t0, t1) whose lambda lies inside the band of the
// segment covering t.
void fill_band_fractions(ScenarioResult& result, int epoch_len) {
  const int total = static_cast<int>(result.trace.size());
  std::vector<double> in_band(total, 0.0);
  for (const SegmentRecord& seg : result.segments) {
    for (int t = seg.t_begin; t < std::min(seg.t_end, total); ++t) {
      const double l = result.trace.lambdas[t];
      in_band[t] = (l >= seg.band_lo && l <= seg.band_hi) ? 1.0 : 0.0;
    }
  }
  for (int start = 0; start < total; start += epoch_len) {
    const int end = std::min(start + epoch_len, total);
    double acc = 0.0;
    for (int t = start; t < end; ++t) acc += in_band[t];
    result.in_band_fraction.push_back(acc / (end - start));
  }
}

SegmentRecord make_segment(const MarketInstance& inst, double eta, int t_begin,
                           int t_end) {
  SegmentRecord seg;
  seg.t_begin = t_begin;
  seg.t_end = t_end;
  seg.eta = eta;
  seg.w = inst.w();
  seg.lambda_star = inst.lambda_star();
  std::tie(seg.band_lo, seg.band_hi) = attracting_range(inst, eta);
  return seg;
}

}  // namespace

ScenarioResult run_regime(const RegimeConfig& cfg, double lambda0,
                          std::uint64_t seed) {
  require_interior(lambda0);
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
    throw std::invalid_argument("run_regime: theta must lie strictly inside (0,1)");
  if (cfg.total_steps < 1 || cfg.epoch_len < 1)
    throw std::invalid_argument("run_regime: steps and epoch_len must be >= 1");
  (void)seed;  // regime runs are deterministic; kept for interface symmetry

  ScenarioResult result;
  result.trace.rule = UpdateRule::Full;
  result.trace.instance = "regime(theta=" + std::to_string(cfg.theta) + ")";

  double lam = lambda0;
  int seg_begin = 0;
  int seg_regime = 0;
  for (int t = 0; t <= cfg.total_steps; ++t) {
    const int regime = lam <= cfg.theta ? 1 : 2;
    const RegimeSpec& spec = regime == 1 ? cfg.regime1 : cfg.regime2;
    result.trace.lambdas.push_back(lam);
    result.trace.deltas.push_back(spec.market.delta(lam));
    result.trace.etas.push_back(spec.eta);
    result.regime_ids.push_back(regime);
    if (t == 0) {
      seg_regime = regime;
    } else if (regime != seg_regime) {
      const RegimeSpec& sspec = seg_regime == 1 ? cfg.regime1 : cfg.regime2;
      result.segments.push_back(
          make_segment(sspec.market, sspec.eta, seg_begin, t));
      seg_begin = t;
      seg_regime = regime;
    }
    if (t == cfg.total_steps) {
      const RegimeSpec& sspec = seg_regime == 1 ? cfg.regime1 : cfg.regime2;
      result.segments.push_back(
          make_segment(sspec.market, sspec.eta, seg_begin, t + 1));
    }
    if (t % cfg.epoch_len == 0 && t < cfg.total_steps) {
      EpochRecord er;
      er.epoch = t / cfg.epoch_len;
      er.eta = spec.eta;
      er.w = spec.market.w();
      er.regime_id = regime;
      result.epochs.push_back(er);
    }
    if (t < cfg.total_steps)
      lam = step(spec.market, UpdateRule::Full, lam, spec.eta);
  }
  finish_stats(result);
  fill_band_fractions(result, cfg.epoch_len);
  return result;
}

ScenarioResult run_stress(const StressConfig& cfg, double lambda0) {
  require_interior(lambda0);
  if (cfg.n_epochs < 1 || cfg.blocks_per_epoch < 1 || cfg.beta_perturb_every < 1)
    throw std::invalid_argument("run_stress: epoch and block counts must be >= 1");
  if (!(cfg.eta_lo > 0.0 && cfg.eta_lo <= cfg.eta_hi) ||
      !(cfg.w_lo > 0.0 && cfg.w_lo <= cfg.w_hi) ||
      !(cfg.shape_lo > 0.0 && cfg.shape_lo <= cfg.shape_hi))
    throw std::invalid_argument("run_stress: empty or invalid parameter range");

  const Rng root(cfg.seed);
  const int total = cfg.n_epochs * cfg.blocks_per_epoch;

  ScenarioResult result;
  result.trace.rule = UpdateRule::Full;
  result.trace.instance = "stress";

  // Substream 2e draws epoch e's (eta, w); substream 2p+1 draws perturbation
  // event p's four Beta shapes. Recording never shifts either stream.
  double eta = 0.0, w = 1.0;
  double au = 2.0, bu = 2.0, am = 2.0, bm = 2.0;
  std::uint64_t perturb_events = 0;
  std::optional<MarketInstance> inst;

  double lam = lambda0;
  int seg_begin = 0;
  for (int t = 0; t <= total; ++t) {
    bool changed = t == 0;
    if (t < total && t % cfg.blocks_per_epoch == 0) {
      const int epoch = t / cfg.blocks_per_epoch;
      Rng er = root.substream(2 * static_cast<std::uint64_t>(epoch));
      eta = er.uniform(cfg.eta_lo, cfg.eta_hi);
      w = er.uniform(cfg.w_lo, cfg.w_hi);
      changed = true;
    }
    if (t < total && t % cfg.beta_perturb_every == 0) {
      Rng pr = root.substream(2 * perturb_events + 1);
      ++perturb_events;
      au = pr.uniform(cfg.shape_lo, cfg.shape_hi);
      bu = pr.uniform(cfg.shape_lo, cfg.shape_hi);
      am = pr.uniform(cfg.shape_lo, cfg.shape_hi);
      bm = pr.uniform(cfg.shape_lo, cfg.shape_hi);
      changed = true;
    }
    if (changed && t < total) {
      if (t > 0)
        result.segments.push_back(
            make_segment(*inst, result.trace.etas[seg_begin], seg_begin, t));
      inst.emplace(ToleranceDistribution::beta(au, bu),
                   ToleranceDistribution::beta(am, bm), w);
      seg_begin = t;
    }
    if (t < total && t % cfg.blocks_per_epoch == 0) {
      EpochRecord er;
      er.epoch = t / cfg.blocks_per_epoch;
      er.eta = eta;
      er.w = w;
      er.regime_id = er.epoch;
      er.a_u = au;
      er.b_u = bu;
      er.a_m = am;
      er.b_m = bm;
      result.epochs.push_back(er);
    }
    result.trace.lambdas.push_back(lam);
    result.trace.deltas.push_back(inst->delta(lam));
    result.trace.etas.push_back(eta);
    if (t < total) lam = step(*inst, UpdateRule::Full, lam, eta);
  }
  result.segments.push_back(make_segment(*inst, eta, seg_begin, total + 1));
  finish_stats(result);
  fill_band_fractions(result, cfg.blocks_per_epoch);
  return result;
}

ScenarioResult run_burn(const MarketInstance& inst, const BurnPolicy& burn,
                        double eta, double lambda0, int steps,
                        std::uint64_t seed) {
  if (burn.mode == BurnPolicy::Mode::None)
    throw std::invalid_argument("run_burn: burn mode must not be none");
  require_interior(lambda0);
  BurnPolicy effective = burn;
  if (effective.mode == BurnPolicy::Mode::Sampled) effective.seed = seed;
  const MarketInstance burned(inst.users(), inst.miners(), inst.w(), effective);

  ScenarioResult result;
  result.trace = simulate(burned, UpdateRule::Full, lambda0, eta,
                          MevSequence::constant(), steps);
  result.regime_ids.assign(result.trace.size(), 0);
  result.segments.push_back(
      make_segment(burned, eta, 0, static_cast<int>(result.trace.size())));
  finish_stats(result);
  fill_band_fractions(result, static_cast<int>(result.trace.size()));
  return result;
}

std::map<UpdateRule, OrbitTrace> run_rule_comparison(const MarketInstance& inst,
                                                     double eta, double lambda0,
                                                     int steps) {
  require_interior(lambda0);
  std::map<UpdateRule, OrbitTrace> traces;
  for (UpdateRule rule : {UpdateRule::Full, UpdateRule::MinerScaled,
                          UpdateRule::UserScaled, UpdateRule::Plain}) {
    traces.emplace(rule, simulate(inst, rule, lambda0, eta,
                                  MevSequence::constant(), steps));
  }
  return traces;
}

}  // namespace mevsim
