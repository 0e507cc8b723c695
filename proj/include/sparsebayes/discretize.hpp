#ifndef SPARSEBAYES_DISCRETIZE_HPP
#define SPARSEBAYES_DISCRETIZE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsebayes/lognum.hpp"
#include "sparsebayes/prior.hpp"

namespace sparsebayes::discretize {

/// Arcsine-spaced discretization of the mixing weight: k = 2(m+1)ceil(sqrt(n_eff))+1
/// points beta_j = (2j-1) delta/2 with delta = pi/(2k), alpha_j = sin^2 beta_j.
/// The grid is symmetric: 1 - alpha_j = alpha_{k+1-j} exactly.
struct Grid {
  int n = 0;          // data dimension
  int accuracy_m = 0;
  int k = 0;
  double delta = 0;
  double n_eff = 0;   // n, or n + kappa + lambda - 1 in fast-forward mode
  std::vector<double> beta;       // 1-based values stored at [0..k-1]
  std::vector<double> alpha;
  std::vector<double> log_alpha;      // 2 log sin(beta_j)
  std::vector<double> log_1m_alpha;   // 2 log sin(beta_{k+1-j})
};

Grid build_grid(int n, int m);
/// Grid at the effective sample size n' = n + kappa + lambda - 1 used by the
/// fake-observation construction; kappa, lambda >= 1/2.
Grid build_grid(int n, int m, double kappa, double lambda);

/// Mixing prior collapsed onto the grid points.
struct DiscreteMixing {
  Grid grid;
  std::vector<LogValue> log_w;  // sums to 1
  bool fastforward = false;     // built by beta_fastforward
  double kappa = 0, lambda = 0; // meaningful when fastforward or Beta source
};

/// Bin masses Lambda([alpha(beta_j - delta/2), alpha(beta_j + delta/2)]);
/// closed form via regularized incomplete beta differences for Beta mixing,
/// per-bin quadrature otherwise.
DiscreteMixing discretize_mixing(const MixingPrior& mix, const Grid& grid);

/// Weights proportional to alpha_j^{kappa-1/2} (1-alpha_j)^{lambda-1/2}: the
/// grid-point posterior of the uniform (in beta) prior after kappa-1/2 fake
/// ones and lambda-1/2 fake zeros.
DiscreteMixing beta_fastforward(double kappa, double lambda, const Grid& grid);

struct Options {
  bool parallel = true;
};

struct Result {
  std::vector<LogValue> q;
  LogValue log_marginal;
};
struct TrackedResult {
  std::vector<LogInterval> q;
  LogInterval log_marginal;
};

/// Posterior over grid points in O(kn), then every q_i in O(k): O(n^{3/2})
/// in total for the default grid.
Result q_all(const DiscreteMixing& dm, const std::vector<LogValue>& log_psi,
             const std::vector<LogValue>& log_phi, Options opt = {});
TrackedResult q_all_tracked(const DiscreteMixing& dm, const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt = {});

struct EpsilonReport {
  double epsilon = 0;      // the value entering the posterior-ratio bound
  double raw_epsilon = 0;  // before the fast-forward correction (equal when plain)
  bool fastforward_mode = false;

  /// max_i |q~_i - q_i| implied by the posterior-ratio sandwich for a
  /// probability p: 2 eps/(1-eps) * min(p, 1-p), capped at the vacuous 1.
  double q_error_bound(double p) const {
    if (!(epsilon < 1)) return 1.0;
    return std::min(1.0, 2 * epsilon / (1 - epsilon) * std::min(p, 1 - p));
  }
};

/// Numerically tightest epsilon with the prior-likelihood ratio inside
/// [1-eps, 1+eps] over the realizable sparsity configurations s = 0..n.
/// For a fast-forward mixing the ratio is evaluated at the effective sample
/// size for the uniform-in-beta prior and the reported epsilon is
/// 2 eps/(1-eps).
EpsilonReport epsilon_bound(const MixingPrior& mix, const DiscreteMixing& dm);

}  // namespace sparsebayes::discretize

#endif
