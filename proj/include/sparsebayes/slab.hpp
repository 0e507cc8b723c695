#ifndef SPARSEBAYES_SLAB_HPP
#define SPARSEBAYES_SLAB_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sparsebayes/lognum.hpp"

namespace sparsebayes {

/// A signed real carried as sign * e^{log of magnitude}.
struct SignedLog {
  LogValue magnitude = LogValue::zero();
  int sign = 0;  // -1, 0, +1

  double real() const { return sign == 0 ? 0.0 : sign * magnitude.real(); }
  static SignedLog from_real(double x);
};

SignedLog operator+(const SignedLog& a, const SignedLog& b);
SignedLog operator-(const SignedLog& a, const SignedLog& b);

struct QuadratureConfig {
  double rel_tolerance = 1e-12;
  unsigned max_depth = 14;  // adaptive bisection depth (~1e4 panels)
};

/// One-dimensional slab distribution G with the convolution functionals
/// against the standard normal kernel used everywhere downstream:
///   psi(y)           = int phi(y-t) g(t) dt
///   zeta(y)          = int t phi(y-t) g(t) dt
///   psi_partial(y,u) = int_{-inf}^{u} phi(y-t) g(t) dt
class Slab {
 public:
  virtual ~Slab() = default;

  virtual LogValue psi(double y) const = 0;
  virtual SignedLog zeta(double y) const = 0;
  virtual LogValue psi_partial(double y, double u) const = 0;
  virtual bool symmetric() const { return true; }
  virtual std::string describe() const = 0;
  virtual std::unique_ptr<Slab> clone() const = 0;

  /// u with psi_partial(y, u)/psi(y) = v. Conventions: v <= 0 -> -inf,
  /// v >= 1 -> +inf. Bracketing bisection to 1e-10 in u unless a subclass
  /// has a closed form.
  virtual double h_inverse(double y, double v) const;
};

/// Laplace slab g(t) = (a/2) e^{-a|t|}; all functionals in closed form via
/// the normal CDF.
class LaplaceSlab final : public Slab {
 public:
  explicit LaplaceSlab(double scale);

  LogValue psi(double y) const override;
  SignedLog zeta(double y) const override;
  LogValue psi_partial(double y, double u) const override;
  std::string describe() const override;
  std::unique_ptr<Slab> clone() const override { return std::make_unique<LaplaceSlab>(*this); }

  double scale() const { return a_; }

 private:
  double a_;
};

/// Gaussian slab N(0, v); the convolution is again Gaussian.
class GaussianSlab final : public Slab {
 public:
  explicit GaussianSlab(double variance);

  LogValue psi(double y) const override;
  SignedLog zeta(double y) const override;
  LogValue psi_partial(double y, double u) const override;
  double h_inverse(double y, double v) const override;
  std::string describe() const override;
  std::unique_ptr<Slab> clone() const override { return std::make_unique<GaussianSlab>(*this); }

  double variance() const { return v_; }

 private:
  double v_;
};

/// Cauchy slab with scale gamma; functionals by adaptive quadrature.
class CauchySlab final : public Slab {
 public:
  explicit CauchySlab(double gamma, QuadratureConfig quad = {});

  LogValue psi(double y) const override;
  SignedLog zeta(double y) const override;
  LogValue psi_partial(double y, double u) const override;
  std::string describe() const override;
  std::unique_ptr<Slab> clone() const override { return std::make_unique<CauchySlab>(*this); }

 private:
  double gamma_;
  QuadratureConfig quad_;
};

/// User-supplied density with optional finite support; functionals by
/// adaptive quadrature. The density must integrate to 1 within the
/// quadrature tolerance (checked at construction).
class CustomSlab final : public Slab {
 public:
  CustomSlab(std::function<double(double)> density, double support_lo, double support_hi,
             bool is_symmetric = false, QuadratureConfig quad = {});

  LogValue psi(double y) const override;
  SignedLog zeta(double y) const override;
  LogValue psi_partial(double y, double u) const override;
  bool symmetric() const override { return symmetric_; }
  std::string describe() const override;
  std::unique_ptr<Slab> clone() const override { return std::make_unique<CustomSlab>(*this); }

 private:
  std::function<double(double)> density_;
  double lo_, hi_;
  bool symmetric_;
  QuadratureConfig quad_;
};

namespace quadrature {

/// log of the integral of a nonnegative function over (lo, hi), with
/// interior split points; the integrand is rescaled by its largest probed
/// value so tiny integrals survive in the linear domain. Throws
/// NumericalError when the error estimate exceeds the relative tolerance,
/// unless `achieved` is supplied, in which case the estimate is written
/// there and the value returned regardless.
double log_integral(const std::function<double(double)>& f, double lo, double hi,
                    const std::vector<double>& splits, const QuadratureConfig& cfg,
                    double* achieved = nullptr);

/// Same, but the integrand is supplied as its log; used where the linear
/// values underflow even before rescaling.
double log_integral_logf(const std::function<double(double)>& log_f, double lo, double hi,
                         const std::vector<double>& splits, const QuadratureConfig& cfg,
                         double* achieved = nullptr);

}  // namespace quadrature

}  // namespace sparsebayes

#endif
