#pragma once

namespace mevsim {

// Natural log of the gamma function, x > 0. Lanczos approximation (g = 7,
// nine terms), relative error below 1e-13 over the shape ranges used here.
double log_gamma(double x);

// ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b). Continued fraction (modified Lentz)
// with the standard symmetry split at x = (a+1)/(a+b+2); absolute error
// well under 1e-12.
double reg_inc_beta(double a, double b, double x);

// Standard normal CDF and density.
double normal_cdf(double z);
double normal_pdf(double z);

}  // namespace mevsim
