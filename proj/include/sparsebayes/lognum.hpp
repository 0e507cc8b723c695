#ifndef SPARSEBAYES_LOGNUM_HPP
#define SPARSEBAYES_LOGNUM_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sparsebayes {

/// Arithmetic left its mathematical domain (negative difference,
/// 0*inf, inf-inf, NaN input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative numeric routine failed to reach its tolerance. Carries the
/// tolerance that was actually achieved.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

namespace rounded {

// Directed-rounding primitives used by LogInterval. Addition, subtraction
// and multiplication are rounded exactly in the requested direction (the
// rounding residual is recovered with 2Sum / fma). Transcendentals are
// widened by two representable steps around the libm result, which covers
// the documented worst-case libm error.

double add_down(double a, double b);
double add_up(double a, double b);
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }
double mul_down(double a, double b);
double mul_up(double a, double b);
double exp_down(double x);
double exp_up(double x);
double expm1_down(double x);
double expm1_up(double x);
double log1p_down(double x);
double log1p_up(double x);
double log_down(double x);
double log_up(double x);

}  // namespace rounded

namespace detail {

double log_add(double x, double y);
double log_sub(double x, double y);
double log_mul(double x, double y);
double log_div(double x, double y);

}  // namespace detail

/// A nonnegative extended real a stored as ln(a) in [-inf, +inf].
/// ln(a) = -inf means a = 0, +inf means a = infinity; NaN never escapes a
/// defined operation. Arithmetic operators act on the represented values,
/// not on the logs.
class LogValue {
 public:
  /// Mantissa precision of the underlying representation.
  static constexpr int kPrecisionBits = std::numeric_limits<double>::digits;

  LogValue() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogValue from_log(double x) {
    if (std::isnan(x)) throw DomainError("LogValue: NaN log");
    LogValue v;
    v.log_ = x;
    return v;
  }
  static LogValue from_real(double a) {
    if (std::isnan(a) || a < 0) throw DomainError("LogValue: negative or NaN value");
    return from_log(std::log(a));
  }
  static LogValue zero() { return LogValue(); }
  static LogValue one() { return from_log(0.0); }
  static LogValue infinity() { return from_log(std::numeric_limits<double>::infinity()); }

  double log() const { return log_; }
  double real() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }
  bool is_infinite() const { return std::isinf(log_) && log_ > 0; }

  friend LogValue operator+(LogValue a, LogValue b) {
    return from_log(detail::log_add(a.log_, b.log_));
  }
  friend LogValue operator-(LogValue a, LogValue b) {
    return from_log(detail::log_sub(a.log_, b.log_));
  }
  friend LogValue operator*(LogValue a, LogValue b) {
    return from_log(detail::log_mul(a.log_, b.log_));
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    return from_log(detail::log_div(a.log_, b.log_));
  }
  LogValue& operator+=(LogValue o) { return *this = *this + o; }
  LogValue& operator-=(LogValue o) { return *this = *this - o; }
  LogValue& operator*=(LogValue o) { return *this = *this * o; }
  LogValue& operator/=(LogValue o) { return *this = *this / o; }

  friend bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }
  friend bool operator!=(LogValue a, LogValue b) { return a.log_ != b.log_; }
  friend bool operator<(LogValue a, LogValue b) { return a.log_ < b.log_; }
  friend bool operator<=(LogValue a, LogValue b) { return a.log_ <= b.log_; }
  friend bool operator>(LogValue a, LogValue b) { return a.log_ > b.log_; }
  friend bool operator>=(LogValue a, LogValue b) { return a.log_ >= b.log_; }

 private:
  double log_;
};

/// a^c for a LogValue and real exponent c.
LogValue pow(LogValue a, double c);

/// Rigorous bracket [lo, hi] on the log of an exact nonnegative quantity.
/// Every operation returns an interval containing the exact result for any
/// members of the inputs; endpoints are computed with outward rounding.
/// When an operation is undefined for some but not all member pairs
/// (subtraction with overlapping operands), the result is widened to the
/// valid part and carries a sticky `partial` flag.
class LogInterval {
 public:
  LogInterval() : lo_(-inf()), hi_(-inf()), partial_(false) {}
  LogInterval(LogValue v) : lo_(v.log()), hi_(v.log()), partial_(false) {}

  static LogInterval from_log_bounds(double lo, double hi, bool partial = false) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw DomainError("LogInterval: invalid bounds");
    LogInterval r;
    r.lo_ = lo;
    r.hi_ = hi;
    r.partial_ = partial;
    return r;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool partial() const { return partial_; }

  /// Width of the bracket in log space.
  double log_width() const {
    if (lo_ == hi_) return 0.0;  // covers the two degenerate infinite cases
    return hi_ - lo_;
  }
  /// Width of the bracket on the represented value.
  double real_width() const {
    if (lo_ == hi_) return 0.0;
    return std::exp(hi_) - std::exp(lo_);
  }
  /// Log of the midpoint is not meaningful for brackets on probabilities;
  /// this is the log-space midpoint used as a point summary.
  double log_mid() const {
    if (lo_ == hi_) return lo_;
    if (std::isinf(lo_) && std::isinf(hi_)) return 0.0;
    if (std::isinf(lo_)) return hi_;
    if (std::isinf(hi_)) return lo_;
    return 0.5 * (lo_ + hi_);
  }

  bool contains_log(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(LogValue v) const { return contains_log(v.log()); }

  friend LogInterval operator+(const LogInterval& a, const LogInterval& b);
  friend LogInterval operator-(const LogInterval& a, const LogInterval& b);
  friend LogInterval operator*(const LogInterval& a, const LogInterval& b);
  friend LogInterval operator/(const LogInterval& a, const LogInterval& b);
  LogInterval& operator+=(const LogInterval& o) { return *this = *this + o; }
  LogInterval& operator-=(const LogInterval& o) { return *this = *this - o; }
  LogInterval& operator*=(const LogInterval& o) { return *this = *this * o; }
  LogInterval& operator/=(const LogInterval& o) { return *this = *this / o; }

 private:
  static double inf() { return std::numeric_limits<double>::infinity(); }
  double lo_, hi_;
  bool partial_;
};

LogInterval pow(const LogInterval& a, double c);

}  // namespace sparsebayes

#endif
