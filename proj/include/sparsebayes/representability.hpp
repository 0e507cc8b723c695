#ifndef SPARSEBAYES_REPRESENTABILITY_HPP
#define SPARSEBAYES_REPRESENTABILITY_HPP

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "sparsebayes/prior.hpp"

namespace sparsebayes::representability {

/// (k+1) x (k+1) Hankel matrix [mu_{i+j}]; mu must have at least 2k+1 entries.
Eigen::MatrixXd hankel(const std::vector<double>& mu, int k);

/// mu_s = pi_n(s) / C(n, s) for s < n, and mu_n = c.
std::vector<double> moment_vector(const ModelSelectionPrior& prior, double c);

enum class Condition { kNone, kHankelPsd, kShiftedHankelPsd, kRangeInclusion };

struct Diagnostics {
  double min_eig_hankel = 0;    // smallest eigenvalue of H_k(mu), Frobenius-normalized
  double min_eig_shifted = 0;   // same for the shifted Hankel matrix
  double range_residual = 0;    // relative least-squares residual
  double leading_minor2 = 0;    // det of the order-2 leading minor of H_k(mu)
  double margin = 0;            // aggregate signed feasibility margin
};

struct Tolerances {
  double psd = 1e-10;    // eigenvalue >= -psd * (1 + ||H||_F)
  double range = 1e-8;   // relative residual threshold
};

/// Checks the spike-and-slab moment conditions at a fixed c in [0, pi_n(n)]:
/// two positive-semidefiniteness conditions and one range inclusion, with the
/// odd/even dispatch on n.
std::pair<bool, Diagnostics> check_at(const ModelSelectionPrior& prior, double c,
                                      Tolerances tol = {});

struct Verdict {
  bool representable = false;
  double witness_c = 0;                    // meaningful when representable
  Condition violated = Condition::kNone;   // strongest violation otherwise
  Diagnostics diagnostics;                 // at the witness / least-infeasible c
  double best_c = 0;
};

/// Decides whether the model selection prior admits a spike-and-slab
/// representation by scanning c over a uniform grid on [0, pi_n(n)]
/// (endpoints included) and refining with golden-section search on the
/// smallest-eigenvalue margin. Near-degenerate cases inside tolerance come
/// back representable = false with the margin in the diagnostics.
Verdict is_spike_slab(const ModelSelectionPrior& prior, Tolerances tol = {},
                      int grid_size = 1001);

}  // namespace sparsebayes::representability

#endif
