#include "sparsebayes/slab.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsebayes/special.hpp"

namespace sparsebayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SignedLog make_signed(double coefficient, double log_scale) {
  SignedLog s;
  if (coefficient == 0.0) return s;
  s.sign = coefficient > 0 ? 1 : -1;
  s.magnitude = LogValue::from_log(std::log(std::abs(coefficient)) + log_scale);
  return s;
}

}  // namespace

SignedLog SignedLog::from_real(double x) {
  if (std::isnan(x)) throw DomainError("SignedLog: NaN");
  return make_signed(x, 0.0);
}

SignedLog operator+(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  SignedLog r;
  if (a.sign == b.sign) {
    r.sign = a.sign;
    r.magnitude = a.magnitude + b.magnitude;
    return r;
  }
  if (a.magnitude == b.magnitude) return r;  // exact cancellation
  const SignedLog& big = a.magnitude > b.magnitude ? a : b;
  const SignedLog& small = a.magnitude > b.magnitude ? b : a;
  r.sign = big.sign;
  r.magnitude = big.magnitude - small.magnitude;
  return r;
}

SignedLog operator-(const SignedLog& a, const SignedLog& b) {
  SignedLog nb = b;
  nb.sign = -nb.sign;
  return a + nb;
}

namespace quadrature {

double log_integral(const std::function<double(double)>& f, double lo, double hi,
                    const std::vector<double>& splits, const QuadratureConfig& cfg,
                    double* achieved_out) {
  if (achieved_out) *achieved_out = 0.0;
  if (!(lo < hi)) return -kInf;

  std::vector<double> pts;
  if (std::isfinite(lo)) pts.push_back(lo);
  for (double s : splits)
    if (s > lo && s < hi) pts.push_back(s);
  if (std::isfinite(hi)) pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Probe the integrand to pick a rescaling that keeps panel integrals in
  // the representable range.
  double fmax = 0.0;
  auto probe = [&](double t) {
    if (t > lo && t < hi) fmax = std::max(fmax, f(t));
  };
  for (double p : pts) probe(p);
  for (size_t i = 0; i + 1 < pts.size(); ++i) probe(0.5 * (pts[i] + pts[i + 1]));
  if (!pts.empty()) {
    for (double off : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      probe(pts.front() - off);
      probe(pts.back() + off);
    }
  }
  if (fmax <= 0.0 || !std::isfinite(fmax)) {
    if (!std::isfinite(fmax)) throw NumericalError("quadrature: integrand not finite", kInf);
    return -kInf;
  }
  const double scale = fmax;
  auto g = [&](double t) { return f(t) / scale; };

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  std::vector<double> segs;
  segs.push_back(lo);
  for (double p : pts)
    if (p > lo && p < hi) segs.push_back(p);
  segs.push_back(hi);

  double total = 0.0, err_total = 0.0;
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    double err = 0.0, l1 = 0.0;
    double part = GK::integrate(g, segs[i], segs[i + 1], cfg.max_depth, cfg.rel_tolerance,
                                &err, &l1);
    total += part;
    err_total += err;
  }
  if (!(total >= 0.0)) total = 0.0;
  if (total == 0.0) return -kInf;
  double achieved = err_total / total;
  if (achieved_out)
    *achieved_out = achieved;
  else if (achieved > cfg.rel_tolerance * 10)
    throw NumericalError("quadrature: tolerance not reached", achieved);
  return std::log(total) + std::log(scale);
}

double log_integral_logf(const std::function<double(double)>& log_f, double lo, double hi,
                         const std::vector<double>& splits, const QuadratureConfig& cfg,
                         double* achieved_out) {
  if (achieved_out) *achieved_out = 0.0;
  if (!(lo < hi)) return -kInf;

  std::vector<double> pts;
  if (std::isfinite(lo)) pts.push_back(lo);
  for (double s : splits)
    if (s > lo && s < hi) pts.push_back(s);
  if (std::isfinite(hi)) pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double log_max = -kInf;
  auto probe = [&](double t) {
    if (t > lo && t < hi) log_max = std::max(log_max, log_f(t));
  };
  for (double p : pts) probe(p);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    probe(0.5 * (a + b));
    probe(a + 0.25 * (b - a));
    probe(a + 0.75 * (b - a));
  }
  if (!pts.empty()) {
    for (double off : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      probe(pts.front() - off);
      probe(pts.back() + off);
    }
  }
  if (log_max == -kInf) return -kInf;
  if (std::isnan(log_max) || log_max == kInf)
    throw NumericalError("quadrature: integrand not finite", kInf);

  auto g = [&](double t) {
    double l = log_f(t) - log_max;
    return l == -kInf ? 0.0 : std::exp(l);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  std::vector<double> segs;
  segs.push_back(lo);
  for (double p : pts)
    if (p > lo && p < hi) segs.push_back(p);
  segs.push_back(hi);

  double total = 0.0, err_total = 0.0;
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    double err = 0.0, l1 = 0.0;
    double part = GK::integrate(g, segs[i], segs[i + 1], cfg.max_depth, cfg.rel_tolerance,
                                &err, &l1);
    total += part;
    err_total += err;
  }
  if (!(total > 0.0)) return -kInf;
  double achieved = err_total / total;
  if (achieved_out)
    *achieved_out = achieved;
  else if (achieved > cfg.rel_tolerance * 10)
    throw NumericalError("quadrature: tolerance not reached", achieved);
  return std::log(total) + log_max;
}

}  // namespace quadrature

double Slab::h_inverse(double y, double v) const {
  if (v <= 0.0) return -kInf;
  if (v >= 1.0) return kInf;
  const double log_target = std::log(v) + psi(y).log();
  auto below = [&](double u) { return psi_partial(y, u).log() < log_target; };

  double lo = std::min(y, 0.0) - 1.0, hi = std::max(y, 0.0) + 1.0;
  double step = 1.0;
  for (int k = 0; !below(lo); ++k) {
    if (k > 200) throw NumericalError("h_inverse: no lower bracket", lo);
    lo -= step;
    step *= 2;
  }
  step = 1.0;
  for (int k = 0; below(hi); ++k) {
    if (k > 200) throw NumericalError("h_inverse: no upper bracket", hi);
    hi += step;
    step *= 2;
  }
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Laplace slab. Completing the square in phi(y - t) e^{-+at} gives, with
// E-(y) = e^{a^2/2 - ay} Phi(y - a) and E+(y) = e^{a^2/2 + ay} Phi(-y - a):
//   psi(y)  = (a/2) [E-(y) + E+(y)]
//   zeta(y) = (a/2) [(y - a) E-(y) + (y + a) E+(y)]
// and the partial integral splits at the kink t = 0.

LaplaceSlab::LaplaceSlab(double scale) : a_(scale) {
  if (!(scale > 0)) throw DomainError("LaplaceSlab: scale must be positive");
}

namespace {
inline double laplace_minus(double a, double y) {  // log E-(y)
  return 0.5 * a * a - a * y + log_normal_cdf(y - a);
}
inline double laplace_plus(double a, double y) {  // log E+(y)
  return 0.5 * a * a + a * y + log_normal_cdf(-y - a);
}
}  // namespace

LogValue LaplaceSlab::psi(double y) const {
  double lg = std::log(0.5 * a_) + log_sum_exp(laplace_minus(a_, y), laplace_plus(a_, y));
  return LogValue::from_log(lg);
}

SignedLog LaplaceSlab::zeta(double y) const {
  double base = std::log(0.5 * a_);
  SignedLog t1 = make_signed(y - a_, base + laplace_minus(a_, y));
  SignedLog t2 = make_signed(y + a_, base + laplace_plus(a_, y));
  return t1 + t2;
}

LogValue LaplaceSlab::psi_partial(double y, double u) const {
  double base = std::log(0.5 * a_);
  double below_zero = base + 0.5 * a_ * a_ + a_ * y + log_normal_cdf(std::min(u, 0.0) - y - a_);
  if (u <= 0.0) return LogValue::from_log(below_zero);
  LogValue head = LogValue::from_log(log_normal_cdf(u - y + a_));
  LogValue tail = LogValue::from_log(log_normal_cdf(a_ - y));
  double above = base + 0.5 * a_ * a_ - a_ * y + (head - tail).log();
  return LogValue::from_log(log_sum_exp(below_zero, above));
}

std::string LaplaceSlab::describe() const { return "laplace(" + std::to_string(a_) + ")"; }

// ---------------------------------------------------------------------------
// Gaussian slab: the convolution is N(0, 1 + v) and the conditional posterior
// for theta given Y = y is N(y v/(1+v), v/(1+v)).

GaussianSlab::GaussianSlab(double variance) : v_(variance) {
  if (!(variance > 0)) throw DomainError("GaussianSlab: variance must be positive");
}

LogValue GaussianSlab::psi(double y) const {
  double s2 = 1.0 + v_;
  return LogValue::from_log(-0.5 * y * y / s2 - 0.5 * (kLogTwoPi + std::log(s2)));
}

SignedLog GaussianSlab::zeta(double y) const {
  return make_signed(y * v_ / (1.0 + v_), psi(y).log());
}

LogValue GaussianSlab::psi_partial(double y, double u) const {
  double mu = y * v_ / (1.0 + v_);
  double sd = std::sqrt(v_ / (1.0 + v_));
  double z = std::isinf(u) ? u : (u - mu) / sd;
  return LogValue::from_log(psi(y).log() + log_normal_cdf(z));
}

double GaussianSlab::h_inverse(double y, double v) const {
  if (v <= 0.0) return -kInf;
  if (v >= 1.0) return kInf;
  double mu = y * v_ / (1.0 + v_);
  double sd = std::sqrt(v_ / (1.0 + v_));
  return mu + sd * normal_quantile(v);
}

std::string GaussianSlab::describe() const { return "gauss(" + std::to_string(v_) + ")"; }

// ---------------------------------------------------------------------------
// Quadrature-backed slabs. zeta is computed as the difference of the two
// single-signed half-line integrals, mirrored so that a symmetric slab at
// y = 0 cancels exactly.

namespace {

LogValue quad_psi(const std::function<double(double)>& g, double lo, double hi, double y,
                  const QuadratureConfig& cfg) {
  auto f = [&](double t) { return std::exp(log_normal_pdf(y - t)) * g(t); };
  return LogValue::from_log(quadrature::log_integral(f, lo, hi, {0.0, y}, cfg));
}

SignedLog quad_zeta(const std::function<double(double)>& g, double lo, double hi, double y,
                    const QuadratureConfig& cfg) {
  auto f_pos = [&](double t) { return t * std::exp(log_normal_pdf(y - t)) * g(t); };
  auto f_neg = [&](double t) { return t * std::exp(log_normal_pdf(y + t)) * g(-t); };
  double log_pos = quadrature::log_integral(f_pos, std::max(lo, 0.0), hi, {y}, cfg);
  double log_neg =
      quadrature::log_integral(f_neg, std::max(-hi, 0.0), -lo, {-y}, cfg);
  SignedLog r;
  if (log_pos == log_neg) return r;
  r.sign = log_pos > log_neg ? 1 : -1;
  r.magnitude = LogValue::from_log(log_pos > log_neg
                                       ? detail::log_sub(log_pos, log_neg)
                                       : detail::log_sub(log_neg, log_pos));
  return r;
}

LogValue quad_psi_partial(const std::function<double(double)>& g, double lo, double hi,
                          double y, double u, const QuadratureConfig& cfg) {
  if (u <= lo) return LogValue::zero();
  auto f = [&](double t) { return std::exp(log_normal_pdf(y - t)) * g(t); };
  return LogValue::from_log(
      quadrature::log_integral(f, lo, std::min(u, hi), {0.0, y}, cfg));
}

}  // namespace

CauchySlab::CauchySlab(double gamma, QuadratureConfig quad) : gamma_(gamma), quad_(quad) {
  if (!(gamma > 0)) throw DomainError("CauchySlab: scale must be positive");
}

LogValue CauchySlab::psi(double y) const {
  auto g = [this](double t) { return gamma_ / (M_PI * (t * t + gamma_ * gamma_)); };
  return quad_psi(g, -kInf, kInf, y, quad_);
}

SignedLog CauchySlab::zeta(double y) const {
  auto g = [this](double t) { return gamma_ / (M_PI * (t * t + gamma_ * gamma_)); };
  return quad_zeta(g, -kInf, kInf, y, quad_);
}

LogValue CauchySlab::psi_partial(double y, double u) const {
  auto g = [this](double t) { return gamma_ / (M_PI * (t * t + gamma_ * gamma_)); };
  return quad_psi_partial(g, -kInf, kInf, y, u, quad_);
}

std::string CauchySlab::describe() const { return "cauchy(" + std::to_string(gamma_) + ")"; }

CustomSlab::CustomSlab(std::function<double(double)> density, double support_lo,
                       double support_hi, bool is_symmetric, QuadratureConfig quad)
    : density_(std::move(density)),
      lo_(support_lo),
      hi_(support_hi),
      symmetric_(is_symmetric),
      quad_(quad) {
  if (!(lo_ < hi_)) throw DomainError("CustomSlab: empty support");
  double log_mass = quadrature::log_integral(density_, lo_, hi_, {0.0}, quad_);
  if (std::abs(std::expm1(log_mass)) > 1e-8)
    throw DomainError("CustomSlab: density does not integrate to 1");
}

LogValue CustomSlab::psi(double y) const { return quad_psi(density_, lo_, hi_, y, quad_); }

SignedLog CustomSlab::zeta(double y) const {
  return quad_zeta(density_, lo_, hi_, y, quad_);
}

LogValue CustomSlab::psi_partial(double y, double u) const {
  return quad_psi_partial(density_, lo_, hi_, y, u, quad_);
}

std::string CustomSlab::describe() const { return "custom"; }

}  // namespace sparsebayes
