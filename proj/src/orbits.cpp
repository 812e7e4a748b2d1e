#include "mevsim/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace mevsim {

double iterate_k(const MarketInstance& inst, UpdateRule rule, double eta,
                 int k, double lambda) {
  if (k < 1) throw std::invalid_argument("iterate_k: k must be >= 1");
  const double burn_k = inst.reference_k();
  double lam = lambda;
  for (int i = 0; i < k; ++i) lam = step(inst, rule, lam, eta, burn_k);
  return lam;
}

const char* stability_name(CycleStability s) {
  switch (s) {
    case CycleStability::Stable: return "1";
    case CycleStability::Unstable: return "0";
    case CycleStability::Marginal: return "marginal";
  }
  return "?";
}

std::int64_t default_period_grid(int k) {
  // The oscillation count of h^k grows with k, so the scan density does too;
  // the floor keeps the scan above the documented minimum resolution.
  std::int64_t mult = 1;
  while (mult < k) mult *= 2;
  return std::max<std::int64_t>(1000, 200 * mult);
}

namespace {

double bisect_root(const MarketInstance& inst, UpdateRule rule, double eta,
                   int k, double lo, double glo, double hi) {
  // g(lo) and g(hi) have opposite signs (or one is zero). The bracket is
  // driven to adjacent doubles: residuals along unstable orbits grow with
  // the cycle multiplier, so the root itself must carry no slack.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = iterate_k(inst, rule, eta, k, mid) - mid;
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PeriodReport find_periodic_points(const MarketInstance& inst, UpdateRule rule,
                                  double eta, int k, std::int64_t grid_n,
                                  double tol) {
  if (k < 1) throw std::invalid_argument("find_periodic_points: k must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("find_periodic_points: tol must be positive");
  if (grid_n == 0) grid_n = default_period_grid(k);
  if (grid_n < 1000)
    throw std::invalid_argument("find_periodic_points: grid_n must be >= 10^3");

  constexpr double kEdge = 1e-6;
  const double span = 1.0 - 2.0 * kEdge;
  const auto g = [&](double x) { return iterate_k(inst, rule, eta, k, x) - x; };

  PeriodReport report;
  report.k = k;

  std::vector<double> roots;
  double x_prev = kEdge;
  double g_prev = g(x_prev);
  bool prev_flat = std::fabs(g_prev) < tol;
  bool left_change = false;  // did [i-2, i-1] bracket a sign change
  for (std::int64_t i = 1; i <= grid_n; ++i) {
    const double x = kEdge + span * static_cast<double>(i) / grid_n;
    const double gx = g(x);
    const bool change = (g_prev > 0.0 && gx <= 0.0) ||
                        (g_prev < 0.0 && gx >= 0.0) || g_prev == 0.0;
    if (change) {
      roots.push_back(g_prev == 0.0
                          ? x_prev
                          : bisect_root(inst, rule, eta, k, x_prev, g_prev, x));
    }
    if (prev_flat && !change && !left_change) report.tangency_suspected = true;
    left_change = change;
    x_prev = x;
    g_prev = gx;
    prev_flat = std::fabs(gx) < tol;
  }

  std::sort(roots.begin(), roots.end());
  const double merge_tol = 10.0 * tol;
  std::vector<double> unique_roots;
  for (double r : roots) {
    if (unique_roots.empty() || r - unique_roots.back() > merge_tol)
      unique_roots.push_back(r);
  }

  const double burn_k = inst.reference_k();
  for (double x : unique_roots) {
    PeriodicPoint pt;
    pt.point = x;
    pt.least_period = k;
    for (int d = 1; d <= k; ++d) {
      if (k % d != 0) continue;
      if (std::fabs(iterate_k(inst, rule, eta, d, x) - x) <= merge_tol) {
        pt.least_period = d;
        break;
      }
    }
    double mult = 1.0;
    double y = x;
    for (int i = 0; i < pt.least_period; ++i) {
      mult *= rule_derivative(inst, rule, y, eta);
      y = step(inst, rule, y, eta, burn_k);
    }
    pt.multiplier = mult;
    const double am = std::fabs(mult);
    if (am < 1.0 - 1e-8) pt.stability = CycleStability::Stable;
    else if (am > 1.0 + 1e-8) pt.stability = CycleStability::Unstable;
    else pt.stability = CycleStability::Marginal;
    report.points.push_back(pt);
  }
  return report;
}

bool sharkovsky_implied(int m, int l) {
  if (m < 1 || l < 1)
    throw std::invalid_argument("sharkovsky_implied: periods must be positive");
  if (m == l) return false;
  const auto decompose = [](int n) {
    int s = 0;
    while (n % 2 == 0) {
      n /= 2;
      ++s;
    }
    return std::pair<int, int>{s, n};  // n = 2^s * odd
  };
  const auto [sm, qm] = decompose(m);
  const auto [sl, ql] = decompose(l);
  const bool m_pow2 = qm == 1, l_pow2 = ql == 1;
  if (m_pow2 != l_pow2) return l_pow2;  // powers of two come last
  if (m_pow2) return sm > sl;           // ... > 2^n > ... > 4 > 2 > 1
  if (sm != sl) return sm < sl;         // 2^s blocks in ascending s
  return qm < ql;                       // 3 > 5 > 7 > ... within a block
}

namespace {

// Update map with F = G = Uniform[a,b]: delta is 1 below a, the linear
// segment on [a,b), and -w above; the Full rule clamps to [0,1].
struct BandMap {
  double a, b, eta, w;

  double delta(double lam) const {
    if (lam < a) return 1.0;
    if (lam < b) return (b + w * a - lam * (1.0 + w)) / (b - a);
    return -w;
  }
  double operator()(double lam) const {
    const double raw = lam + eta * lam * (1.0 - lam) * delta(lam);
    return std::clamp(raw, 0.0, 1.0);
  }
  // The lower branch lam (1 + eta (1 - lam)) is increasing on [0,a); bisect
  // its preimage of target in (0, a).
  double lower_preimage(double target) const {
    double lo = 0.0, hi = a;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double val = mid * (1.0 + eta * (1.0 - mid));
      if (val == target) return mid;
      (val < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

}  // namespace

MarketInstance ChaosWitness::instance() const {
  const ToleranceDistribution tol = ToleranceDistribution::uniform(a, b);
  return MarketInstance(tol, tol, w);
}

ChaosWitness chaos_witness(double eta, double w, double a0, int search_steps) {
  if (!(eta > 0.0)) throw std::invalid_argument("chaos_witness: eta must be positive");
  if (!(w > 0.0)) throw std::invalid_argument("chaos_witness: w must be positive");
  if (!(a0 > 0.0 && a0 < 1.0))
    throw std::invalid_argument("chaos_witness: a0 must lie in (0,1)");
  if (search_steps < 1)
    throw std::invalid_argument("chaos_witness: search_steps must be >= 1");

  // Shrink a until h(a) = a + eta a (1-a) stays interior and the lower
  // branch is increasing up to a.
  double a = a0;
  while (a + eta * a * (1.0 - a) >= 1.0 ||
         (eta > 1.0 && a >= (1.0 + eta) / (2.0 * eta)))
    a *= 0.5;

  const double b0 = std::min(1.0, a + 0.5);
  const double h_sup = a + eta * a * (1.0 - a);  // sup of the lower branch
  ChaosWitness last{};
  last.eta = eta;
  last.w = w;
  last.a = a;

  for (int j = 0; j < search_steps; ++j) {
    const double b = a + (b0 - a) * std::ldexp(1.0, -j);
    if (!(b > a)) break;
    const BandMap h{a, b, eta, w};
    // Anchor candidates: the proof's lambda1 = a first, then a sweep of the
    // band below its delta zero (the rise at lambda1 must be positive).
    const double zero = (b + w * a) / (1.0 + w);
    const double lim = std::min({b, zero, h_sup});
    std::vector<double> anchors{a};
    constexpr int kSweep = 64;
    for (int i = 1; i < kSweep; ++i)
      anchors.push_back(a + (lim - a) * i / kSweep);

    bool found = false;
    ChaosWitness bestw{};
    double best_margin = 0.0;
    for (double lam1 : anchors) {
      if (!(lam1 >= a && lam1 < lim)) continue;
      const double lam0 = h.lower_preimage(lam1);
      const double lam2 = h(lam1);
      const double lam3 = h(lam2);
      last.b = b;
      last.lambda0 = lam0;
      last.lambda1 = lam1;
      last.lambda2 = lam2;
      last.lambda3 = lam3;
      if (!(lam0 < lam1 && lam1 < lam2)) continue;
      const double margin = lam0 - lam3;
      if (margin >= 0.0 && (!found || margin > best_margin)) {
        found = true;
        best_margin = margin;
        bestw = ChaosWitness{a, b, lam0, lam1, lam2, lam3, eta, w};
        if (lam1 == a) break;  // classical anchor; keep it when it works
      }
    }
    if (found) return bestw;
  }
  std::ostringstream os;
  os << "chaos_witness: no period-3 bracket after " << search_steps
     << " band contractions (eta=" << eta << ", w=" << w << ", a=" << a << ")";
  throw WitnessSearchExhausted(os.str(), last);
}

bool witness_valid(const ChaosWitness& wit, double tol) {
  const MarketInstance inst = wit.instance();
  const double l1 = step(inst, UpdateRule::Full, wit.lambda0, wit.eta);
  const double l2 = step(inst, UpdateRule::Full, wit.lambda1, wit.eta);
  const double l3 = step(inst, UpdateRule::Full, wit.lambda2, wit.eta);
  return std::fabs(l1 - wit.lambda1) <= tol && std::fabs(l2 - wit.lambda2) <= tol &&
         std::fabs(l3 - wit.lambda3) <= tol && wit.lambda3 <= wit.lambda0 + tol &&
         wit.lambda0 < wit.lambda1 && wit.lambda1 < wit.lambda2;
}

double ScanRecord::band_width() const {
  if (lambdas.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
  return *hi - *lo;
}

BifurcationScan bifurcation_scan(const MarketInstance& inst, UpdateRule rule,
                                 const ScanAxis& axis, int burn_in,
                                 int n_record, double lambda0) {
  if (axis.count < 2) throw std::invalid_argument("bifurcation_scan: need at least 2 parameter values");
  if (burn_in < 1 || n_record < 1)
    throw std::invalid_argument("bifurcation_scan: burn_in and n_record must be >= 1");
  if (axis.type == ScanAxis::Type::ToleranceRange) {
    const double r = axis.max;
    if (!(axis.min > 0.0) ||
        axis.user_center - r < 0.0 || axis.user_center + r > 1.0 ||
        axis.miner_center - r < 0.0 || axis.miner_center + r > 1.0)
      throw std::invalid_argument(
          "bifurcation_scan: tolerance ranges must keep both supports inside [0,1]");
  }

  BifurcationScan scan;
  scan.axis = axis;
  scan.burn_in = burn_in;
  scan.n_record = n_record;
  scan.lambda0 = lambda0;
  scan.rows.reserve(axis.count);

  const int total = burn_in + n_record;
  for (int p = 0; p < axis.count; ++p) {
    const double param =
        axis.min + (axis.max - axis.min) * p / (axis.count - 1);
    double eta = axis.eta;
    const MarketInstance* run_inst = &inst;
    std::optional<MarketInstance> family;
    if (axis.type == ScanAxis::Type::Eta) {
      eta = param;
    } else {
      family.emplace(
          ToleranceDistribution::uniform(axis.user_center - param,
                                         axis.user_center + param),
          ToleranceDistribution::uniform(axis.miner_center - param,
                                         axis.miner_center + param),
          inst.w(), inst.burn());
      run_inst = &*family;
    }
    const OrbitTrace trace =
        simulate(*run_inst, rule, lambda0, eta, MevSequence::constant(), total);
    ScanRecord row;
    row.param = param;
    row.lambdas.assign(trace.lambdas.begin() + burn_in + 1, trace.lambdas.end());
    row.deltas.assign(trace.deltas.begin() + burn_in + 1, trace.deltas.end());
    double lsum = 0.0, dsum = 0.0;
    for (double v : row.lambdas) lsum += v;
    for (double v : row.deltas) dsum += v;
    row.lambda_mean = lsum / row.lambdas.size();
    row.delta_mean = dsum / row.deltas.size();
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

}  // namespace mevsim
