#include "sparsebayes/baselines.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <chrono>
#include <cmath>

#include "sparsebayes/philox.hpp"
#include "sparsebayes/special.hpp"

namespace sparsebayes::baselines {

namespace {

// log psi(y_i) - log phi(y_i) for every coordinate.
std::vector<double> log_bayes_factors(const std::vector<double>& y, const Slab& slab) {
  std::vector<double> r(y.size());
  for (size_t i = 0; i < y.size(); ++i)
    r[i] = slab.psi(y[i]).log() - log_normal_pdf(y[i]);
  return r;
}

inline double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

ApproxResult gibbs(const std::vector<double>& y, double kappa, double lambda,
                   const Slab& slab, const GibbsConfig& cfg) {
  if (cfg.iterations < 2) throw DomainError("gibbs: need at least 2 iterations");
  if (!(kappa > 0) || !(lambda > 0)) throw DomainError("gibbs: invalid hyper-parameters");
  auto t0 = std::chrono::steady_clock::now();

  const size_t n = y.size();
  const long burn_in = cfg.iterations / 2;
  std::vector<double> lbf = log_bayes_factors(y, slab);

  PhiloxRng rng(cfg.seed);
  double alpha = rng.next_beta(kappa, lambda);
  std::vector<uint8_t> b(n, 0);
  std::vector<long> counts(n, 0);

  for (long it = 0; it < cfg.iterations; ++it) {
    double logit_alpha = std::log(alpha) - std::log1p(-alpha);
    long ones = 0;
    for (size_t i = 0; i < n; ++i) {
      double p = sigmoid(logit_alpha + lbf[i]);
      b[i] = rng.next_double() < p ? 1 : 0;
      ones += b[i];
    }
    alpha = rng.next_beta(kappa + ones, lambda + static_cast<double>(n) - ones);
    // keep alpha interior so the logit stays finite
    alpha = std::min(std::max(alpha, 1e-300), 1.0 - 1e-16);
    if (it >= burn_in)
      for (size_t i = 0; i < n; ++i) counts[i] += b[i];
  }

  ApproxResult r;
  const double draws = static_cast<double>(cfg.iterations - burn_in);
  r.q.resize(n);
  for (size_t i = 0; i < n; ++i) r.q[i] = counts[i] / draws;
  r.iterations = cfg.iterations;
  r.config = "gibbs(it=" + std::to_string(cfg.iterations) +
             ",seed=" + std::to_string(cfg.seed) + ")";
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ApproxResult vb_componentwise(const std::vector<double>& y, double kappa, double lambda,
                              const GaussianSlab& slab, const VbConfig& cfg,
                              std::vector<double>* elbo_trace) {
  if (!(kappa > 0) || !(lambda > 0)) throw DomainError("vb: invalid hyper-parameters");
  auto t0 = std::chrono::steady_clock::now();
  const size_t n = y.size();
  const double v = slab.variance();

  // q(B_i) = Bern(gamma_i), q(theta_i) = N(mu_i, s2_i), q(alpha) = Beta(a, b)
  std::vector<double> gamma(n, kappa / (kappa + lambda));
  std::vector<double> mu(y);  // slab means initialized at the observations
  std::vector<double> s2(n, v / (1.0 + v));
  double a = kappa, b = lambda;

  auto entropy_term = [](double g) {
    double h = 0;
    if (g > 0) h -= g * std::log(g);
    if (g < 1) h -= (1 - g) * std::log1p(-g);
    return h;
  };
  auto alpha_logit = [&]() {
    if (cfg.learn_alpha) return boost::math::digamma(a) - boost::math::digamma(b);
    return std::log(kappa) - std::log(lambda);  // logit of the prior mean
  };
  auto elbo = [&]() {
    double e_la, e_l1a;
    if (cfg.learn_alpha) {
      e_la = boost::math::digamma(a) - boost::math::digamma(a + b);
      e_l1a = boost::math::digamma(b) - boost::math::digamma(a + b);
    } else {
      e_la = std::log(kappa / (kappa + lambda));
      e_l1a = std::log(lambda / (kappa + lambda));
    }
    double value = 0;
    for (size_t i = 0; i < n; ++i) {
      double quad = (y[i] - mu[i]) * (y[i] - mu[i]) + s2[i];
      value += gamma[i] * (-0.5 * quad) + (1 - gamma[i]) * (-0.5 * y[i] * y[i]) -
               0.5 * kLogTwoPi;
      value += -0.5 * (mu[i] * mu[i] + s2[i]) / v - 0.5 * std::log(v) +
               0.5 * std::log(s2[i]) + 0.5;  // E log p(theta) + H(q(theta))
      value += gamma[i] * e_la + (1 - gamma[i]) * e_l1a + entropy_term(gamma[i]);
    }
    if (cfg.learn_alpha) {
      value += (kappa - 1) * e_la + (lambda - 1) * e_l1a - log_beta(kappa, lambda);
      value -= (a - 1) * boost::math::digamma(a) + (b - 1) * boost::math::digamma(b) -
               (a + b - 2) * boost::math::digamma(a + b) - log_beta(a, b);
    }
    return value;
  };

  ApproxResult r;
  r.converged = false;
  double prev = -std::numeric_limits<double>::infinity();
  long it = 0;
  for (; it < cfg.max_iter; ++it) {
    double logit_prior = alpha_logit();
    for (size_t i = 0; i < n; ++i) {
      // q(B_i): E_theta of the log likelihood ratio between slab and spike
      double odds = y[i] * mu[i] - 0.5 * (mu[i] * mu[i] + s2[i]);
      gamma[i] = sigmoid(logit_prior + odds);
      // q(theta_i): precision gamma_i from the likelihood plus 1/v
      double rho = gamma[i] + 1.0 / v;
      mu[i] = gamma[i] * y[i] / rho;
      s2[i] = 1.0 / rho;
    }
    if (cfg.learn_alpha) {
      double total = 0;
      for (double g : gamma) total += g;
      a = kappa + total;
      b = lambda + static_cast<double>(n) - total;
    }
    double cur = elbo();
    if (elbo_trace) elbo_trace->push_back(cur);
    if (std::abs(cur - prev) < cfg.tol) {
      r.converged = true;
      ++it;
      break;
    }
    prev = cur;
  }

  r.q = std::move(gamma);
  r.iterations = it;
  r.config = std::string("vb(tol=") + std::to_string(cfg.tol) +
             ",init=prior-mean,learn_alpha=" + (cfg.learn_alpha ? "1" : "0") + ")";
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double approx_error(const std::vector<double>& q_exact, const std::vector<double>& q_approx) {
  if (q_exact.size() != q_approx.size()) throw DomainError("approx_error: length mismatch");
  double m = 0;
  for (size_t i = 0; i < q_exact.size(); ++i)
    m = std::max(m, std::abs(q_exact[i] - q_approx[i]));
  return m;
}

}  // namespace sparsebayes::baselines
