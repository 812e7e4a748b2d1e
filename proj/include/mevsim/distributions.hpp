#pragma once

#include <string>

namespace mevsim {

enum class DistKind { Beta, Uniform, TruncatedNormal };

// A tolerance law on [0,1]. Immutable after construction; safe to share
// across any number of reader threads.
class ToleranceDistribution {
 public:
  static ToleranceDistribution beta(double a, double b);
  static ToleranceDistribution uniform(double lo, double hi);
  // Normal(mu, sigma2) truncated to [0,1] and renormalized, so cdf(0) = 0
  // and cdf(1) = 1 hold exactly.
  static ToleranceDistribution truncated_normal(double mu, double sigma2);

  DistKind kind() const { return kind_; }
  double param1() const { return p1_; }  // a | lo | mu
  double param2() const { return p2_; }  // b | hi | sigma2

  // CDF, extended continuously outside [0,1]: 0 below, 1 above.
  double cdf(double x) const;
  // Same floating path as 1 - cdf(x) by construction.
  double survival(double x) const { return 1.0 - cdf(x); }
  // Density; zero outside the support. Throws std::domain_error at an
  // endpoint where the density diverges (Beta shape < 1).
  double pdf(double x) const;

  std::string describe() const;

 private:
  ToleranceDistribution(DistKind kind, double p1, double p2);

  DistKind kind_;
  double p1_ = 0.0, p2_ = 0.0;
  // Cached per kind: Beta -> ln B(a,b); Uniform -> 1/(hi-lo);
  // TruncatedNormal -> Phi((0-mu)/sigma), truncated mass, 1/sigma.
  double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
};

struct BetaKernelMax {
  double argmax = 0.0;
  double value = 0.0;
};

// Maximum of the unnormalized kernel x^(a-1) (1-x)^(b-1) over [p,q] with
// 0 < p < q < 1, resolved by the closed-form case analysis on the critical
// point zeta = (1-a)/(2-a-b): for a+b < 2 the interior critical point is a
// minimum, for a+b > 2 a maximum, for a+b = 2 the kernel is monotone.
BetaKernelMax beta_kernel_max(double a, double b, double p, double q);

}  // namespace mevsim
