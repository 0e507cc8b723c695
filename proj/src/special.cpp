#include "sparsebayes/special.hpp"

#include <boost/math/distributions/normal.hpp>

#include <limits>
#include <stdexcept>

namespace sparsebayes {

double lgamma_pos(double x) {
  if (!(x > 0)) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("lgamma_pos: nonpositive argument");
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_normal_cdf(double x) {
  constexpr double kInvSqrt2 = 0.7071067811865475244;
  if (x >= 0.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  if (x > -37.0) return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  // Far left tail: Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
  double inv2 = 1.0 / (x * x);
  double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
  return -0.5 * x * x - std::log(-x) - 0.5 * kLogTwoPi + std::log(series);
}

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(std_normal, p);
}

double log_sum_exp(double x, double y) {
  const double inf = std::numeric_limits<double>::infinity();
  if (x == inf || y == inf) return inf;
  if (x == -inf) return y;
  if (y == -inf) return x;
  double hi = x >= y ? x : y, lo = x >= y ? y : x;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace sparsebayes
