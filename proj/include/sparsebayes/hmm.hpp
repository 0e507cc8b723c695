#ifndef SPARSEBAYES_HMM_HPP
#define SPARSEBAYES_HMM_HPP

#include <vector>

#include "sparsebayes/lognum.hpp"
#include "sparsebayes/prior.hpp"

namespace sparsebayes::hmm {

struct Options {
  bool parallel = true;
  /// Forward-state storage during the backward combination. kRetained keeps
  /// the whole O(n^2) trellis; kStreaming keeps sqrt(n)-spaced checkpoints
  /// and replays forward blocks (identical arithmetic, one extra forward
  /// pass). kAuto switches to streaming when the retained trellis would be
  /// large.
  enum class Trellis { kAuto, kRetained, kStreaming };
  Trellis trellis = Trellis::kAuto;
};

struct Result {
  std::vector<LogValue> q;
  LogValue log_marginal;
};

struct TrackedResult {
  std::vector<LogInterval> q;
  LogInterval log_marginal;
};

/// Marginal inclusion probabilities q_{n,i} for any model selection prior by
/// Forward-Backward over the hidden states (B_i, M_i), in O(n^2) operations.
Result q_all(const ModelSelectionPrior& prior, const std::vector<LogValue>& log_psi,
             const std::vector<LogValue>& log_phi, Options opt = {});

TrackedResult q_all_tracked(const ModelSelectionPrior& prior,
                            const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt = {});

/// Q_n from the forward pass alone (two rolling columns, O(n) memory).
LogValue marginal_likelihood(const ModelSelectionPrior& prior,
                             const std::vector<LogValue>& log_psi,
                             const std::vector<LogValue>& log_phi, Options opt = {});

/// Full trellis with the bit component collapsed: forward[i][m] =
/// p(Y_1^i, M_i = m) and backward[i][m] = p(Y_{i+1}^n | M_i = m), for
/// i = 0..n (column i has i+1 entries; forward[0] = {1} is the empty
/// prefix). Intended for tests and small n.
struct Trellis {
  std::vector<std::vector<LogValue>> forward;
  std::vector<std::vector<LogValue>> backward;
  LogValue log_marginal;
};

Trellis forward_backward(const ModelSelectionPrior& prior,
                         const std::vector<LogValue>& log_psi,
                         const std::vector<LogValue>& log_phi);

/// p(Y_1^i, B_i = b, M_i = m) reconstructed from a collapsed trellis.
LogValue forward_state(const Trellis& t, const ModelSelectionPrior& prior,
                       const std::vector<LogValue>& log_psi,
                       const std::vector<LogValue>& log_phi, int i, int b, int m);

}  // namespace sparsebayes::hmm

#endif
