#include "sparsebayes/lognum.hpp"

#include <algorithm>

namespace sparsebayes {

namespace rounded {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_down(double v) { return std::nextafter(v, -kInf); }
inline double next_up(double v) { return std::nextafter(v, kInf); }

// libm results are widened by two representable steps; glibc's documented
// worst case for these functions is below 2 ulp.
inline double widen_down(double v) { return next_down(next_down(v)); }
inline double widen_up(double v) { return next_up(next_up(v)); }

}  // namespace

double add_down(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) {
    // +inf from finite operands is an overflow: round down to the largest
    // finite double. A genuine infinity (or -inf) is already a valid bound.
    if (s > 0 && std::isfinite(a) && std::isfinite(b))
      return std::numeric_limits<double>::max();
    return s;
  }
  double ap = s - b;
  double bp = s - ap;
  if (!std::isfinite(ap) || !std::isfinite(bp)) return next_down(s);
  double err = (a - ap) + (b - bp);  // exact rounding residual (2Sum)
  return err >= 0 ? s : next_down(s);
}

double add_up(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) {
    if (s < 0 && std::isfinite(a) && std::isfinite(b))
      return -std::numeric_limits<double>::max();
    return s;
  }
  double ap = s - b;
  double bp = s - ap;
  if (!std::isfinite(ap) || !std::isfinite(bp)) return next_up(s);
  double err = (a - ap) + (b - bp);
  return err <= 0 ? s : next_up(s);
}

double mul_down(double a, double b) {
  double p = a * b;
  if (std::isinf(p)) {
    if (p > 0 && std::isfinite(a) && std::isfinite(b))
      return std::numeric_limits<double>::max();
    return p;
  }
  double err = std::fma(a, b, -p);  // exact product residual
  return err >= 0 ? p : next_down(p);
}

double mul_up(double a, double b) {
  double p = a * b;
  if (std::isinf(p)) {
    if (p < 0 && std::isfinite(a) && std::isfinite(b))
      return -std::numeric_limits<double>::max();
    return p;
  }
  double err = std::fma(a, b, -p);
  return err <= 0 ? p : next_up(p);
}

double exp_down(double x) {
  double v = std::exp(x);
  if (v == 0.0 || std::isinf(v)) return v == 0.0 ? 0.0 : std::numeric_limits<double>::max();
  return std::max(0.0, widen_down(v));
}

double exp_up(double x) {
  double v = std::exp(x);
  if (std::isinf(v)) return v;
  return widen_up(v);
}

double expm1_down(double x) {
  double v = std::expm1(x);
  if (std::isinf(v)) return v > 0 ? std::numeric_limits<double>::max() : v;
  return std::max(-1.0, widen_down(v));
}

double expm1_up(double x) {
  double v = std::expm1(x);
  if (std::isinf(v)) return v;
  return widen_up(v);
}

double log1p_down(double x) {
  double v = std::log1p(x);
  if (std::isinf(v)) return v;
  return widen_down(v);
}

double log1p_up(double x) {
  double v = std::log1p(x);
  if (std::isinf(v)) return v;
  return widen_up(v);
}

double log_down(double x) {
  double v = std::log(x);
  if (std::isinf(v)) return v;
  return widen_down(v);
}

double log_up(double x) {
  double v = std::log(x);
  if (std::isinf(v)) return v;
  return widen_up(v);
}

}  // namespace rounded

namespace detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;

inline void check_not_nan(double x, double y) {
  if (std::isnan(x) || std::isnan(y)) throw DomainError("lognum: NaN operand");
}

// ln(1 - e^d) for d <= 0, switching formulation to limit cancellation.
inline double log1mexp(double d) {
  return d > -kLn2 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d));
}
}  // namespace

double log_add(double x, double y) {
  check_not_nan(x, y);
  if (x == kInf || y == kInf) return kInf;
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sub(double x, double y) {
  check_not_nan(x, y);
  if (x < y) throw DomainError("log_sub: negative result");
  if (x == y) {
    if (x == kInf) throw DomainError("log_sub: inf - inf");
    return -kInf;  // equal operands, including the 0 - 0 case
  }
  if (y == -kInf || x == kInf) return x;
  return x + log1mexp(y - x);
}

double log_mul(double x, double y) {
  check_not_nan(x, y);
  if ((x == -kInf && y == kInf) || (x == kInf && y == -kInf))
    throw DomainError("log_mul: 0 * inf");
  return x + y;
}

double log_div(double x, double y) {
  check_not_nan(x, y);
  if (x == y && std::isinf(x)) throw DomainError("log_div: indeterminate quotient");
  return x - y;
}

}  // namespace detail

LogValue pow(LogValue a, double c) {
  if (std::isnan(c)) throw DomainError("pow: NaN exponent");
  if (c == 0.0) return LogValue::one();
  if (std::isinf(a.log()) && std::isinf(c)) throw DomainError("pow: indeterminate");
  return LogValue::from_log(a.log() * c);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Directed scalar log-add: f(p, d) = p + log1p(e^d) with d = q - p <= 0 is
// increasing in both p and d, so rounding d, the transcendentals and the
// final addition in one direction bounds the exact result.
double log_add_dir(double x, double y, bool down) {
  if (x == kInf || y == kInf) return kInf;
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  double p = std::max(x, y), q = std::min(x, y);
  using namespace rounded;
  if (down) {
    double d = sub_down(q, p);
    return add_down(p, log1p_down(exp_down(d)));
  }
  double d = sub_up(q, p);
  return add_up(p, log1p_up(exp_up(d)));
}

// Directed scalar log-sub, requiring x >= y. g(d) = 1 - e^d is decreasing
// in d = y - x <= 0, so the down-rounded result takes d rounded up and the
// up-rounded result takes d rounded down.
double log_sub_dir(double x, double y, bool down) {
  if (x == y) {
    if (x == kInf) throw DomainError("log_sub: inf - inf");
    return -kInf;
  }
  if (y == -kInf || x == kInf) return x;
  using namespace rounded;
  constexpr double kLn2 = 0.6931471805599453;
  if (down) {
    double d = sub_up(y, x);
    if (d >= 0) return -kInf;  // rounding crossed the zero difference
    double lg;
    if (d > -kLn2) {
      double g = -expm1_up(d);
      if (!(g > 0)) return -kInf;
      lg = log_down(g);
    } else {
      lg = log1p_down(-exp_up(d));
    }
    return add_down(x, lg);
  }
  double d = sub_down(y, x);
  double lg = d > -kLn2 ? log_up(-expm1_down(d)) : log1p_up(-exp_down(d));
  return add_up(x, lg);
}

}  // namespace

LogInterval operator+(const LogInterval& a, const LogInterval& b) {
  return LogInterval::from_log_bounds(log_add_dir(a.lo_, b.lo_, true),
                                      log_add_dir(a.hi_, b.hi_, false),
                                      a.partial_ || b.partial_);
}

LogInterval operator*(const LogInterval& a, const LogInterval& b) {
  // member-pair indeterminacy: 0 * inf needs a value 0 on one side (lo at
  // -inf) against a value inf on the other (hi at +inf)
  bool has_zero_a = a.lo_ == -kInf, has_inf_a = a.hi_ == kInf;
  bool has_zero_b = b.lo_ == -kInf, has_inf_b = b.hi_ == kInf;
  bool some_bad = (has_zero_a && has_inf_b) || (has_inf_a && has_zero_b);
  bool all_bad = (a.hi_ == -kInf && b.lo_ == kInf) || (a.lo_ == kInf && b.hi_ == -kInf);
  if (all_bad) throw DomainError("LogInterval: 0 * inf");
  bool partial = a.partial_ || b.partial_ || some_bad;
  double lo = (a.lo_ == -kInf || b.lo_ == -kInf) ? -kInf : rounded::add_down(a.lo_, b.lo_);
  double hi = (a.hi_ == kInf || b.hi_ == kInf) ? kInf : rounded::add_up(a.hi_, b.hi_);
  return LogInterval::from_log_bounds(lo, hi, partial);
}

LogInterval operator/(const LogInterval& a, const LogInterval& b) {
  bool has_zero_a = a.lo_ == -kInf, has_inf_a = a.hi_ == kInf;
  bool has_zero_b = b.lo_ == -kInf, has_inf_b = b.hi_ == kInf;
  bool some_bad = (has_zero_a && has_zero_b) || (has_inf_a && has_inf_b);
  bool all_bad = (a.hi_ == -kInf && b.hi_ == -kInf) || (a.lo_ == kInf && b.lo_ == kInf);
  if (all_bad) throw DomainError("LogInterval: indeterminate quotient");
  bool partial = a.partial_ || b.partial_ || some_bad;
  double lo = (a.lo_ == -kInf || b.hi_ == kInf) ? -kInf : rounded::sub_down(a.lo_, b.hi_);
  double hi = (a.hi_ == kInf || b.lo_ == -kInf) ? kInf : rounded::sub_up(a.hi_, b.lo_);
  return LogInterval::from_log_bounds(lo, hi, partial);
}

LogInterval operator-(const LogInterval& a, const LogInterval& b) {
  if (a.hi_ < b.lo_) throw DomainError("LogInterval: negative difference");
  bool partial = a.partial_ || b.partial_;
  double hi = log_sub_dir(a.hi_, b.lo_, false);
  double lo;
  if (a.lo_ >= b.hi_) {
    lo = log_sub_dir(a.lo_, b.hi_, true);
  } else {
    lo = -kInf;  // some member pairs have a negative difference
    partial = true;
  }
  if (lo > hi) lo = hi;
  return LogInterval::from_log_bounds(lo, hi, partial);
}

LogInterval pow(const LogInterval& a, double c) {
  if (std::isnan(c)) throw DomainError("pow: NaN exponent");
  if (c == 0.0) return LogInterval(LogValue::one());
  double l = rounded::mul_down(c >= 0 ? a.lo() : a.hi(), c);
  double h = rounded::mul_up(c >= 0 ? a.hi() : a.lo(), c);
  return LogInterval::from_log_bounds(l, h, a.partial());
}

}  // namespace sparsebayes
