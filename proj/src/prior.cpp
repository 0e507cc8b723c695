#include "sparsebayes/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsebayes/slab.hpp"
#include "sparsebayes/special.hpp"

namespace sparsebayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalizes log weights in place to a proper log pmf.
std::vector<LogValue> normalize(std::vector<double> logw) {
  double mx = -kInf;
  for (double w : logw) mx = std::max(mx, w);
  if (mx == -kInf) throw DomainError("prior: all weights are zero");
  double sum = 0.0;
  for (double w : logw) sum += std::exp(w - mx);
  double log_total = mx + std::log(sum);
  std::vector<LogValue> out(logw.size());
  for (size_t s = 0; s < logw.size(); ++s)
    out[s] = LogValue::from_log(logw[s] - log_total);
  return out;
}

std::vector<LogValue> point_mass(int n, int at) {
  std::vector<LogValue> pmf(n + 1, LogValue::zero());
  pmf[at] = LogValue::one();
  return pmf;
}

}  // namespace

VTable::VTable(const std::vector<LogValue>& log_pmf) {
  n_ = static_cast<int>(log_pmf.size()) - 1;
  if (n_ < 1) throw DomainError("VTable: need n >= 1");
  data_.assign(offset(n_ + 1), LogValue::zero());
  for (int m = 0; m <= n_; ++m)
    data_[offset(n_) + m] = LogValue::from_log(log_pmf[m].log() - log_binomial(n_, m));
  for (int i = n_ - 1; i >= 0; --i)
    for (int m = 0; m <= i; ++m)
      data_[offset(i) + m] = data_[offset(i + 1) + m] + data_[offset(i + 1) + m + 1];
}

ModelSelectionPrior::ModelSelectionPrior(PriorFamily family, std::vector<LogValue> log_pmf,
                                         std::string description)
    : family_(family), log_pmf_(std::move(log_pmf)), description_(std::move(description)) {
  n_ = static_cast<int>(log_pmf_.size()) - 1;
  if (n_ < 1) throw DomainError("ModelSelectionPrior: need n >= 1");
}

ModelSelectionPrior ModelSelectionPrior::beta_binomial(int n, double kappa, double lambda) {
  if (kappa < 0 || lambda < 0 || (kappa == 0 && lambda == 0))
    throw DomainError("beta_binomial: invalid hyper-parameters");
  std::string desc = "beta-binomial(" + std::to_string(kappa) + "," + std::to_string(lambda) + ")";
  if (kappa == 0) return ModelSelectionPrior(PriorFamily::kBetaBinomial, point_mass(n, 0), desc);
  if (lambda == 0) return ModelSelectionPrior(PriorFamily::kBetaBinomial, point_mass(n, n), desc);
  std::vector<double> logw(n + 1);
  double lb0 = log_beta(kappa, lambda);
  for (int s = 0; s <= n; ++s)
    logw[s] = log_binomial(n, s) + log_beta(kappa + s, lambda + n - s) - lb0;
  ModelSelectionPrior p(PriorFamily::kBetaBinomial, normalize(std::move(logw)), desc);
  p.kappa_ = kappa;
  p.lambda_ = lambda;
  return p;
}

ModelSelectionPrior ModelSelectionPrior::binomial(int n, double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("binomial: p outside [0, 1]");
  std::string desc = "binomial(" + std::to_string(p) + ")";
  if (p == 0) return ModelSelectionPrior(PriorFamily::kBinomial, point_mass(n, 0), desc);
  if (p == 1) return ModelSelectionPrior(PriorFamily::kBinomial, point_mass(n, n), desc);
  std::vector<double> logw(n + 1);
  for (int s = 0; s <= n; ++s)
    logw[s] = log_binomial(n, s) + s * std::log(p) + (n - s) * std::log1p(-p);
  return ModelSelectionPrior(PriorFamily::kBinomial, normalize(std::move(logw)), desc);
}

ModelSelectionPrior ModelSelectionPrior::poisson_truncated(int n, double rate) {
  if (!(rate > 0)) throw DomainError("poisson_truncated: rate must be positive");
  std::vector<double> logw(n + 1);
  for (int s = 0; s <= n; ++s) logw[s] = s * std::log(rate) - lgamma_pos(s + 1.0);
  return ModelSelectionPrior(PriorFamily::kPoissonTruncated, normalize(std::move(logw)),
                             "poisson(" + std::to_string(rate) + ")");
}

ModelSelectionPrior ModelSelectionPrior::poly_tail(int n, double exponent) {
  if (!(exponent > 1)) throw DomainError("poly_tail: exponent must exceed 1");
  std::vector<double> logw(n + 1);
  logw[0] = 0.0;
  for (int s = 1; s <= n; ++s) logw[s] = -exponent * std::log(static_cast<double>(s));
  return ModelSelectionPrior(PriorFamily::kPolyTail, normalize(std::move(logw)),
                             "polytail(" + std::to_string(exponent) + ")");
}

ModelSelectionPrior ModelSelectionPrior::sub_exponential(int n, double exponent) {
  if (!(exponent > 0)) throw DomainError("sub_exponential: exponent must be positive");
  std::vector<double> logw(n + 1);
  for (int s = 0; s <= n; ++s) logw[s] = -std::pow(static_cast<double>(s), exponent);
  return ModelSelectionPrior(PriorFamily::kSubExponential, normalize(std::move(logw)),
                             "subexp(" + std::to_string(exponent) + ")");
}

ModelSelectionPrior ModelSelectionPrior::from_weights(const std::vector<double>& weights) {
  std::vector<double> logw(weights.size());
  for (size_t s = 0; s < weights.size(); ++s) {
    if (std::isnan(weights[s]) || weights[s] < 0)
      throw DomainError("from_weights: negative weight");
    logw[s] = std::log(weights[s]);
  }
  return ModelSelectionPrior(PriorFamily::kCustom, normalize(std::move(logw)), "custom");
}

ModelSelectionPrior ModelSelectionPrior::from_log_weights(std::vector<double> log_weights) {
  return ModelSelectionPrior(PriorFamily::kCustom, normalize(std::move(log_weights)), "custom");
}

bool ModelSelectionPrior::has_closed_form_transitions() const {
  return family_ == PriorFamily::kBetaBinomial && kappa_ > 0 && lambda_ > 0;
}

LogValue ModelSelectionPrior::transition(int i, int m, int b) const {
  if (i < 0 || i >= n_ || m < 0 || m > i || (b != 0 && b != 1))
    throw DomainError("transition: state out of range");
  if (has_closed_form_transitions()) {
    double denom = kappa_ + lambda_ + i;
    double num = b == 1 ? kappa_ + m : lambda_ + i - m;
    return LogValue::from_log(std::log(num) - std::log(denom));
  }
  const VTable& v = v_table();
  LogValue p_prefix = v.at(i, m);
  LogValue p_next = v.at(i + 1, m + b);
  if (p_prefix.is_zero()) {
    if (p_next.is_zero()) return LogValue::zero();  // unreachable state
    throw DomainError("transition: inconsistent prior (zero-probability prefix extends)");
  }
  return p_next / p_prefix;
}

const VTable& ModelSelectionPrior::v_table() const {
  // Built on first use and then read-only. Do the first call before fanning
  // out across threads.
  if (!vtable_) {
    auto* self = const_cast<ModelSelectionPrior*>(this);
    self->vtable_ = std::make_shared<const VTable>(log_pmf_);
  }
  return *vtable_;
}

MixingPrior MixingPrior::beta(double kappa, double lambda) {
  if (!(kappa > 0) || !(lambda > 0)) throw DomainError("MixingPrior: invalid Beta parameters");
  MixingPrior m;
  m.kind_ = Kind::kBeta;
  m.kappa_ = kappa;
  m.lambda_ = lambda;
  return m;
}

MixingPrior MixingPrior::custom(std::function<double(double)> density, double lipschitz) {
  MixingPrior m;
  m.kind_ = Kind::kCustom;
  m.density_ = std::move(density);
  m.lipschitz_ = lipschitz;
  // Check normalization in the arcsine parametrization, where densities with
  // Beta(1/2,1/2)-like endpoint behaviour stay bounded.
  auto log_gamma_density = [&m](double beta) {
    double a = std::sin(beta), c = std::cos(beta);
    double alpha = a * a;
    double d = m.density_(alpha);
    if (d < 0) throw DomainError("MixingPrior: negative density");
    return std::log(2.0) + std::log(d) + std::log(a) + std::log(c);
  };
  double log_mass = quadrature::log_integral_logf(log_gamma_density, 0.0, M_PI / 2,
                                                  {M_PI / 4}, QuadratureConfig{1e-10, 14});
  if (std::abs(std::expm1(log_mass)) > 1e-6)
    throw DomainError("MixingPrior: density does not integrate to 1");
  return m;
}

double MixingPrior::density(double alpha) const {
  if (!(alpha >= 0 && alpha <= 1)) throw DomainError("MixingPrior: alpha outside [0, 1]");
  if (kind_ == Kind::kBeta) {
    return std::exp((kappa_ - 1) * std::log(alpha) + (lambda_ - 1) * std::log1p(-alpha) -
                    log_beta(kappa_, lambda_));
  }
  return density_(alpha);
}

std::string MixingPrior::describe() const {
  if (kind_ == Kind::kBeta)
    return "beta(" + std::to_string(kappa_) + "," + std::to_string(lambda_) + ")";
  return "custom-mixing";
}

ModelSelectionPrior MixingPrior::induced_prior(int n) const {
  if (kind_ == Kind::kBeta) return ModelSelectionPrior::beta_binomial(n, kappa_, lambda_);
  std::vector<double> logw(n + 1);
  for (int s = 0; s <= n; ++s) {
    double mode = std::asin(std::sqrt(static_cast<double>(s) / n));
    auto log_f = [&](double beta) {
      double sa = std::sin(beta), ca = std::cos(beta);
      double alpha = sa * sa;
      double d = density_(alpha);
      if (d <= 0) return -kInf;
      return 2 * s * std::log(sa) + 2 * (n - s) * std::log(ca) + std::log(2.0) +
             std::log(d) + std::log(sa) + std::log(ca);
    };
    double log_moment = quadrature::log_integral_logf(log_f, 0.0, M_PI / 2, {mode},
                                                      QuadratureConfig{1e-10, 14});
    logw[s] = log_binomial(n, s) + log_moment;
  }
  return ModelSelectionPrior::from_log_weights(std::move(logw));
}

}  // namespace sparsebayes
