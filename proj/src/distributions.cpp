#include "mevsim/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mevsim/special_functions.hpp"

namespace mevsim {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

double log_kernel(double a, double b, double x) {
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
}

}  // namespace

ToleranceDistribution::ToleranceDistribution(DistKind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2) {}

ToleranceDistribution ToleranceDistribution::beta(double a, double b) {
  check_finite(a, "beta shape a");
  check_finite(b, "beta shape b");
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("beta shapes must be positive");
  ToleranceDistribution d(DistKind::Beta, a, b);
  d.c1_ = log_beta(a, b);
  return d;
}

ToleranceDistribution ToleranceDistribution::uniform(double lo, double hi) {
  check_finite(lo, "uniform lower bound");
  check_finite(hi, "uniform upper bound");
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("uniform support must satisfy 0 <= lo < hi <= 1");
  ToleranceDistribution d(DistKind::Uniform, lo, hi);
  d.c1_ = 1.0 / (hi - lo);
  return d;
}

ToleranceDistribution ToleranceDistribution::truncated_normal(double mu, double sigma2) {
  check_finite(mu, "normal mean");
  check_finite(sigma2, "normal variance");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("normal variance must be positive");
  ToleranceDistribution d(DistKind::TruncatedNormal, mu, sigma2);
  const double sigma = std::sqrt(sigma2);
  const double phi_lo = normal_cdf((0.0 - mu) / sigma);
  const double phi_hi = normal_cdf((1.0 - mu) / sigma);
  const double mass = phi_hi - phi_lo;
  if (!(mass > 0.0))
    throw std::invalid_argument("normal has no mass on [0,1] after truncation");
  d.c1_ = phi_lo;
  d.c2_ = mass;
  d.c3_ = 1.0 / sigma;
  return d;
}

double ToleranceDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (kind_) {
    case DistKind::Beta:
      return reg_inc_beta(p1_, p2_, x);
    case DistKind::Uniform: {
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) * c1_;
    }
    case DistKind::TruncatedNormal:
      return (normal_cdf((x - p1_) * c3_) - c1_) / c2_;
  }
  return 0.0;  // unreachable
}

double ToleranceDistribution::pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  switch (kind_) {
    case DistKind::Beta: {
      if (x == 0.0) {
        if (p1_ < 1.0) throw std::domain_error("beta density diverges at 0");
        if (p1_ > 1.0) return 0.0;
        return std::exp(-c1_);  // a = 1
      }
      if (x == 1.0) {
        if (p2_ < 1.0) throw std::domain_error("beta density diverges at 1");
        if (p2_ > 1.0) return 0.0;
        return std::exp(-c1_);  // b = 1
      }
      return std::exp(log_kernel(p1_, p2_, x) - c1_);
    }
    case DistKind::Uniform:
      return (x >= p1_ && x <= p2_) ? c1_ : 0.0;
    case DistKind::TruncatedNormal:
      return normal_pdf((x - p1_) * c3_) * c3_ / c2_;
  }
  return 0.0;  // unreachable
}

std::string ToleranceDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DistKind::Beta:
      os << "Beta(" << p1_ << "," << p2_ << ")";
      break;
    case DistKind::Uniform:
      os << "Uniform(" << p1_ << "," << p2_ << ")";
      break;
    case DistKind::TruncatedNormal:
      os << "TruncNormal(" << p1_ << "," << p2_ << ")";
      break;
  }
  return os.str();
}

BetaKernelMax beta_kernel_max(double a, double b, double p, double q) {
  if (!(0.0 < p && p < q && q < 1.0))
    throw std::invalid_argument("beta_kernel_max: need 0 < p < q < 1");
  const auto at = [&](double x) {
    return BetaKernelMax{x, std::exp(log_kernel(a, b, x))};
  };
  const double s = a + b;
  if (s == 2.0) {
    if (a > 1.0) return at(q);  // kernel increasing
    if (a < 1.0) return at(p);  // kernel decreasing
    return {p, 1.0};            // a = b = 1: constant kernel
  }
  const double zeta = (1.0 - a) / (2.0 - s);
  if (s < 2.0) {
    // Interior critical point is a minimum; maximum sits at an endpoint.
    if (zeta < p) return at(q);
    if (zeta > q) return at(p);
    const BetaKernelMax fp = at(p);
    const BetaKernelMax fq = at(q);
    return fp.value >= fq.value ? fp : fq;
  }
  // a + b > 2: interior critical point is the maximum.
  if (zeta < p) return at(p);
  if (zeta > q) return at(q);
  return at(zeta);
}

}  // namespace mevsim
