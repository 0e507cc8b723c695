#ifndef SPARSEBAYES_POSTERIOR_HPP
#define SPARSEBAYES_POSTERIOR_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sparsebayes/lognum.hpp"
#include "sparsebayes/prior.hpp"
#include "sparsebayes/slab.hpp"

namespace sparsebayes {

/// Per-coordinate spike and slab data densities (log domain). All algorithms
/// consume only these, so any likelihood model that factorizes this way can
/// be plugged in.
struct LikelihoodPair {
  LogValue log_phi;  // density of Y_i when theta_i = 0
  LogValue log_psi;  // density of Y_i when theta_i != 0
};

std::vector<LikelihoodPair> make_likelihoods(const Slab& slab, const std::vector<double>& y);

enum class Algorithm { kCvdv, kLongDivision, kHmm, kDiscrete };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct ComputeOptions {
  Algorithm algorithm = Algorithm::kHmm;
  bool tracked = false;   // interval arithmetic through the whole computation
  int discrete_m = 20;    // grid accuracy for the discretized algorithm
  double selection_threshold = 0.5;
  bool parallel = true;
  bool medians = true;
  bool epsilon = true;    // report the numeric epsilon bound (discrete only)
};

/// Everything downstream consumers need about the marginal posterior.
struct PosteriorSummary {
  int n = 0;
  std::vector<double> y;
  std::vector<double> q;             // marginal inclusion probabilities
  std::vector<double> q_lo, q_hi;    // rigorous bounds (tracked mode only)
  std::vector<double> mean;
  std::vector<double> median;
  std::vector<bool> selected;        // q_i >= threshold (ties selected)
  double threshold = 0.5;
  double log_marginal = 0;
  bool tracked = false;
  double max_interval_width = 0;     // probability scale
  std::optional<double> epsilon;     // discretization bound, when applicable
  std::string algorithm, prior, slab;
  std::optional<uint64_t> seed;
  double runtime_seconds = 0;

  /// Posterior level-p quantile of theta_i.
  double quantile(int i, double p) const;

  std::shared_ptr<const Slab> slab_model;  // backs the quantile accessor
};

/// Exact posterior for a model selection prior. The discrete algorithm needs
/// a mixing prior; use the MixingPrior overload for it.
PosteriorSummary compute(const ModelSelectionPrior& prior, const Slab& slab,
                         const std::vector<double>& y, ComputeOptions opt = {});

/// Spike-and-slab prior given by its mixing distribution; supports every
/// algorithm (the exact ones run on the induced dimension prior).
PosteriorSummary compute(const MixingPrior& mixing, const Slab& slab,
                         const std::vector<double>& y, ComputeOptions opt = {});

/// Marginal statistics from q_{n,i} and the slab functionals.
double marginal_mean(double q, double y, const Slab& slab);
double marginal_median(double q, double y, const Slab& slab);
double marginal_cdf(double q, double y, const Slab& slab, double u);
double marginal_quantile(double q, double y, const Slab& slab, double p);

struct GeneralResult {
  std::vector<double> q;
  LogValue log_marginal;
};

/// q_{n,i} from arbitrary per-coordinate density pairs (heterogeneous models);
/// algorithm must be kCvdv or kHmm.
GeneralResult compute_general(const ModelSelectionPrior& prior,
                              const std::vector<LikelihoodPair>& pairs,
                              Algorithm algorithm = Algorithm::kHmm, bool parallel = true);

/// Same for a spike-and-slab prior via the discretized algorithm.
GeneralResult compute_general(const MixingPrior& mixing, int n,
                              const std::vector<LikelihoodPair>& pairs, int m = 20,
                              bool parallel = true);

}  // namespace sparsebayes

#endif
