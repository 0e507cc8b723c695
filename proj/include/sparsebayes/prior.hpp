#ifndef SPARSEBAYES_PRIOR_HPP
#define SPARSEBAYES_PRIOR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sparsebayes/lognum.hpp"

namespace sparsebayes {

enum class PriorFamily {
  kBetaBinomial,
  kBinomial,
  kPoissonTruncated,
  kPolyTail,
  kSubExponential,
  kCustom,
};

/// v_i(m): the joint prior probability of any fixed binary prefix of length
/// i containing m ones, for 0 <= i <= n, 0 <= m <= i. Row i = 0 is the empty
/// prefix with v_0(0) = 1.
class VTable {
 public:
  explicit VTable(const std::vector<LogValue>& log_pmf);

  int n() const { return n_; }
  LogValue at(int i, int m) const { return data_[offset(i) + m]; }

 private:
  static size_t offset(int i) { return static_cast<size_t>(i) * (i + 1) / 2; }
  int n_;
  std::vector<LogValue> data_;
};

/// Dimension-level prior pi_n on the sparsity level {0, ..., n} together
/// with the conditional transition law that drives the sequential
/// algorithms. Immutable after construction.
class ModelSelectionPrior {
 public:
  static ModelSelectionPrior beta_binomial(int n, double kappa, double lambda);
  static ModelSelectionPrior binomial(int n, double p);
  static ModelSelectionPrior poisson_truncated(int n, double rate);
  static ModelSelectionPrior poly_tail(int n, double exponent);        // exponent > 1
  static ModelSelectionPrior sub_exponential(int n, double exponent);  // exponent > 0
  /// Raw nonnegative weights, normalized internally; zeros permitted.
  static ModelSelectionPrior from_weights(const std::vector<double>& weights);
  static ModelSelectionPrior from_log_weights(std::vector<double> log_weights);

  int n() const { return n_; }
  PriorFamily family() const { return family_; }
  LogValue pmf(int s) const { return log_pmf_[s]; }
  const std::vector<LogValue>& log_pmf() const { return log_pmf_; }

  /// Beta-binomial hyper-parameters (meaningful only for that family).
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  bool has_closed_form_transitions() const;

  /// Pi_n(B_{i+1} = b | M_i = m) for 0 <= m <= i < n.
  LogValue transition(int i, int m, int b) const;

  /// The v-table backing transition() (built on demand for the
  /// beta-binomial family, which normally uses the closed form).
  const VTable& v_table() const;

  std::string describe() const { return description_; }

 private:
  ModelSelectionPrior(PriorFamily family, std::vector<LogValue> log_pmf,
                      std::string description);

  PriorFamily family_;
  int n_;
  std::vector<LogValue> log_pmf_;
  double kappa_ = 0, lambda_ = 0;
  std::string description_;
  std::shared_ptr<const VTable> vtable_;
};

/// Hyper-prior on the spike-and-slab mixing weight alpha in [0, 1].
class MixingPrior {
 public:
  enum class Kind { kBeta, kCustom };

  static MixingPrior beta(double kappa, double lambda);
  /// density(alpha) on (0, 1); must integrate to 1 (checked). The optional
  /// Lipschitz constant is informational only.
  static MixingPrior custom(std::function<double(double)> density, double lipschitz = 0.0);

  Kind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  double lipschitz() const { return lipschitz_; }
  double density(double alpha) const;
  std::string describe() const;

  /// The induced dimension prior: pi_n(s) = C(n,s) int a^s (1-a)^{n-s} dLambda.
  ModelSelectionPrior induced_prior(int n) const;

 private:
  MixingPrior() = default;
  Kind kind_ = Kind::kBeta;
  double kappa_ = 1, lambda_ = 1;
  double lipschitz_ = 0;
  std::function<double(double)> density_;
};

}  // namespace sparsebayes

#endif
