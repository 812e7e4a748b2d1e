#include "mevsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mevsim/rng.hpp"

namespace mevsim {

namespace {
constexpr double kFixedPointGuard = 1e-15;
}

BurnPolicy BurnPolicy::none() { return BurnPolicy{}; }

BurnPolicy BurnPolicy::constant(double k) {
  if (!(k > 0.0 && k <= 1.0))
    throw std::invalid_argument("burn fraction k must lie in (0,1]");
  BurnPolicy p;
  p.mode = Mode::Constant;
  p.k = k;
  return p;
}

BurnPolicy BurnPolicy::sampled(double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0 && lo <= hi && hi <= 1.0))
    throw std::invalid_argument("burn range must satisfy 0 < lo <= hi <= 1");
  BurnPolicy p;
  p.mode = Mode::Sampled;
  p.lo = lo;
  p.hi = hi;
  p.seed = seed;
  return p;
}

double BurnPolicy::reference_k() const {
  switch (mode) {
    case Mode::None: return 1.0;
    case Mode::Constant: return k;
    case Mode::Sampled: return 0.5 * (lo + hi);
  }
  return 1.0;
}

std::string BurnPolicy::describe() const {
  std::ostringstream os;
  switch (mode) {
    case Mode::None: os << "none"; break;
    case Mode::Constant: os << "constant(" << k << ")"; break;
    case Mode::Sampled: os << "sampled[" << lo << "," << hi << "]"; break;
  }
  return os.str();
}

const char* rule_name(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::Full: return "full";
    case UpdateRule::MinerScaled: return "miner-scaled";
    case UpdateRule::UserScaled: return "user-scaled";
    case UpdateRule::Plain: return "plain";
  }
  return "?";
}

MarketInstance::MarketInstance(ToleranceDistribution users,
                               ToleranceDistribution miners, double w,
                               BurnPolicy burn)
    : users_(std::move(users)), miners_(std::move(miners)), w_(w),
      burn_(burn), ref_k_(burn.reference_k()) {
  if (!(std::isfinite(w) && w > 0.0))
    throw std::invalid_argument("target ratio w must be positive");
  if (!(delta(1.0, ref_k_) < 0.0))
    throw std::invalid_argument(
        "burn policy leaves delta(1) >= 0; miners' tolerance has no mass "
        "below the retained fraction");
  lambda_star_ = mevsim::lambda_star(*this, 0.0);
}

double MarketInstance::delta(double lambda, double k) const {
  return users_.survival(lambda) - w_ * miners_.cdf(k * lambda);
}

std::string MarketInstance::describe() const {
  std::ostringstream os;
  os << "F=" << users_.describe() << " G=" << miners_.describe()
     << " w=" << w_ << " burn=" << burn_.describe();
  return os.str();
}

double lambda_star(const MarketInstance& inst, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("lambda_star: tol must be nonnegative");
  // delta(0) = 1 > 0 and delta(1) < 0 (checked at construction), so the
  // root is bracketed; delta is strictly decreasing. The bracket shrinks
  // down to adjacent doubles so the residual |delta| is as small as the
  // evaluation allows, which keeps the fixed point exactly stationary
  // under step()'s |delta| < 1e-15 guard.
  double lo = 0.0, hi = 1.0;
  double dlo = 1.0, dhi = -inst.w();
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // machine resolution reached
    const double d = inst.delta(mid);
    if (d == 0.0) return mid;
    if (d > 0.0) {
      lo = mid;
      dlo = d;
    } else {
      hi = mid;
      dhi = d;
    }
  }
  return std::fabs(dlo) <= std::fabs(dhi) ? lo : hi;
}

MevSequence MevSequence::constant(double m) {
  if (!(m > 0.0)) throw std::invalid_argument("MEV level must be positive");
  MevSequence s;
  s.m = m;
  return s;
}

MevSequence MevSequence::series(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("MEV series must be nonempty");
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument("MEV levels must be positive");
  MevSequence s;
  s.mode = Mode::Series;
  s.values = std::move(values);
  return s;
}

MevSequence MevSequence::sampled(double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0 && lo <= hi))
    throw std::invalid_argument("MEV range must satisfy 0 < lo <= hi");
  MevSequence s;
  s.mode = Mode::Sampled;
  s.lo = lo;
  s.hi = hi;
  s.seed = seed;
  return s;
}

bool lambda_admissible(UpdateRule rule, double lambda) {
  switch (rule) {
    case UpdateRule::Full: return lambda >= 0.0 && lambda <= 1.0;
    case UpdateRule::MinerScaled: return lambda >= 0.0;
    case UpdateRule::UserScaled: return lambda <= 1.0;
    case UpdateRule::Plain: return std::isfinite(lambda);
  }
  return false;
}

std::string admissible_range(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::Full: return "[0,1]";
    case UpdateRule::MinerScaled: return "[0,inf)";
    case UpdateRule::UserScaled: return "(-inf,1]";
    case UpdateRule::Plain: return "(-inf,inf)";
  }
  return "";
}

double step(const MarketInstance& inst, UpdateRule rule, double lambda,
            double eta_t, double k) {
  const double d = inst.delta(lambda, k);
  if (std::fabs(d) < kFixedPointGuard) return lambda;
  double next = lambda;
  switch (rule) {
    case UpdateRule::Full:
      next = lambda + eta_t * lambda * (1.0 - lambda) * d;
      return std::clamp(next, 0.0, 1.0);
    case UpdateRule::MinerScaled:
      next = lambda + eta_t * lambda * d;
      return std::max(next, 0.0);
    case UpdateRule::UserScaled:
      next = lambda + eta_t * (1.0 - lambda) * d;
      return std::min(next, 1.0);
    case UpdateRule::Plain:
      return lambda + eta_t * d;
  }
  return next;
}

double step(const MarketInstance& inst, UpdateRule rule, double lambda,
            double eta_t) {
  return step(inst, rule, lambda, eta_t, inst.reference_k());
}

OrbitTrace simulate(const MarketInstance& inst, UpdateRule rule, double lambda0,
                    double eta, const MevSequence& mev, int steps) {
  if (steps < 1) throw std::invalid_argument("simulate: need at least one step");
  if (!(eta > 0.0)) throw std::invalid_argument("simulate: eta must be positive");
  if (!lambda_admissible(rule, lambda0)) {
    std::ostringstream os;
    os << "simulate: lambda0 = " << lambda0 << " outside the admissible range "
       << admissible_range(rule) << " of rule " << rule_name(rule);
    throw std::invalid_argument(os.str());
  }

  Rng mev_rng(mev.seed);
  Rng burn_rng(inst.burn().seed);
  const auto mev_at = [&](int t) {
    switch (mev.mode) {
      case MevSequence::Mode::Constant: return mev.m;
      case MevSequence::Mode::Series:
        return mev.values[std::min<std::size_t>(t, mev.values.size() - 1)];
      case MevSequence::Mode::Sampled: return mev_rng.uniform(mev.lo, mev.hi);
    }
    return 1.0;
  };
  const auto burn_at = [&]() {
    switch (inst.burn().mode) {
      case BurnPolicy::Mode::None: return 1.0;
      case BurnPolicy::Mode::Constant: return inst.burn().k;
      case BurnPolicy::Mode::Sampled:
        return burn_rng.uniform(inst.burn().lo, inst.burn().hi);
    }
    return 1.0;
  };

  OrbitTrace trace;
  trace.rule = rule;
  trace.instance = inst.describe();
  trace.lambdas.reserve(steps + 1);
  trace.deltas.reserve(steps + 1);
  trace.etas.reserve(steps + 1);

  double lam = lambda0;
  for (int t = 0; t <= steps; ++t) {
    const double eta_t = eta * mev_at(t);
    const double k_t = burn_at();
    trace.lambdas.push_back(lam);
    trace.deltas.push_back(inst.delta(lam, k_t));
    trace.etas.push_back(eta_t);
    if (t < steps) lam = step(inst, rule, lam, eta_t, k_t);
  }
  return trace;
}

double potential(const MarketInstance& inst, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("potential: lambda must lie in (0,1)");
  const double d = std::log(lambda) - std::log(inst.lambda_star());
  return d * d;
}

double rule_derivative(const MarketInstance& inst, UpdateRule rule,
                       double lambda, double eta) {
  const double k = inst.reference_k();
  const double d = inst.delta(lambda, k);
  const double dprime =
      -inst.users().pdf(lambda) - inst.w() * k * inst.miners().pdf(k * lambda);
  switch (rule) {
    case UpdateRule::Full:
      return 1.0 + eta * ((1.0 - 2.0 * lambda) * d +
                          lambda * (1.0 - lambda) * dprime);
    case UpdateRule::MinerScaled:
      return 1.0 + eta * (d + lambda * dprime);
    case UpdateRule::UserScaled:
      return 1.0 + eta * (-d + (1.0 - lambda) * dprime);
    case UpdateRule::Plain:
      return 1.0 + eta * dprime;
  }
  return 1.0;
}

}  // namespace mevsim
