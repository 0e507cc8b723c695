#ifndef SPARSEBAYES_BASELINES_HPP
#define SPARSEBAYES_BASELINES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sparsebayes/slab.hpp"

namespace sparsebayes::baselines {

struct GibbsConfig {
  long iterations = 10000;  // first half is burn-in
  uint64_t seed = 1;
};

struct ApproxResult {
  std::vector<double> q;
  double runtime_seconds = 0;
  std::string config;
  long iterations = 0;
  bool converged = true;  // VB only; Gibbs always true
};

/// Collapsed two-block Gibbs sampler for the spike-and-slab model with
/// Beta(kappa, lambda) mixing: B_i | alpha from the per-coordinate posterior
/// odds alpha psi(Y_i) : (1-alpha) phi(Y_i), then alpha | B conjugate.
ApproxResult gibbs(const std::vector<double>& y, double kappa, double lambda,
                   const Slab& slab, const GibbsConfig& cfg);

struct VbConfig {
  double tol = 1e-10;   // stop when the evidence lower bound moves less
  long max_iter = 10000;
  bool learn_alpha = true;  // false: alpha pinned at the prior mean
};

/// Component-wise (mean-field) variational Bayes with a Gaussian slab on the
/// multiplicative parametrization Y_i = B_i theta_i + eps_i: q factorizes as
/// q(alpha) prod_i q(B_i) q(theta_i) with q(B_i) Bernoulli(gamma_i) and
/// q(theta_i) Gaussian. Deterministic given the initialization gamma_i =
/// kappa / (kappa + lambda), slab means = Y_i. Optionally records the
/// evidence lower bound after every coordinate-ascent sweep.
ApproxResult vb_componentwise(const std::vector<double>& y, double kappa, double lambda,
                              const GaussianSlab& slab, const VbConfig& cfg = {},
                              std::vector<double>* elbo_trace = nullptr);

/// max_i |q_i - q~_i|.
double approx_error(const std::vector<double>& q_exact, const std::vector<double>& q_approx);

}  // namespace sparsebayes::baselines

#endif
