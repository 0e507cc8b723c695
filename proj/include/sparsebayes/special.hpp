#ifndef SPARSEBAYES_SPECIAL_HPP
#define SPARSEBAYES_SPECIAL_HPP

#include <cmath>

namespace sparsebayes {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// log Gamma(x) for x > 0 (avoids the signgam global of ::lgamma).
double lgamma_pos(double x);

/// log B(a, b) for a, b > 0.
inline double log_beta(double a, double b) {
  return lgamma_pos(a) + lgamma_pos(b) - lgamma_pos(a + b);
}

/// log C(n, s) via log-gamma.
inline double log_binomial(double n, double s) {
  return lgamma_pos(n + 1) - lgamma_pos(s + 1) - lgamma_pos(n - s + 1);
}

/// Standard normal log density.
inline double log_normal_pdf(double x) { return -0.5 * x * x - 0.5 * kLogTwoPi; }

/// log Phi(x), accurate over the whole real line (asymptotic expansion in
/// the far left tail where erfc underflows).
double log_normal_cdf(double x);

/// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

/// log(e^x + e^y) on plain doubles.
double log_sum_exp(double x, double y);

}  // namespace sparsebayes

#endif
