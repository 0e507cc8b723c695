#ifndef SPARSEBAYES_CVDV_HPP
#define SPARSEBAYES_CVDV_HPP

#include <vector>

#include "sparsebayes/lognum.hpp"
#include "sparsebayes/prior.hpp"

namespace sparsebayes::cvdv {

/// Coefficients of prod_i (a_i Z + b_i), degree n, computed term by term in
/// O(n^2) log-domain operations. All inputs are nonnegative.
std::vector<LogValue> poly_coeffs(const std::vector<LogValue>& a,
                                  const std::vector<LogValue>& b);
std::vector<LogInterval> poly_coeffs_tracked(const std::vector<LogInterval>& a,
                                             const std::vector<LogInterval>& b);

/// Marginal likelihood Q_n = sum_s pi_n(s)/C(n,s) C_s(Psi, Phi).
LogValue marginal_likelihood(const ModelSelectionPrior& prior,
                             const std::vector<LogValue>& log_psi,
                             const std::vector<LogValue>& log_phi);

struct Options {
  bool parallel = true;  // the n per-coordinate polynomial builds are independent
};

/// All marginal inclusion probabilities q_{n,i} by rebuilding the coefficient
/// polynomial once per coordinate: O(n^3) total.
std::vector<LogValue> q_all(const ModelSelectionPrior& prior,
                            const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt = {});
std::vector<LogInterval> q_all_tracked(const ModelSelectionPrior& prior,
                                       const std::vector<LogValue>& log_psi,
                                       const std::vector<LogValue>& log_phi,
                                       Options opt = {});

/// Which row of the overdetermined bidiagonal system is discarded before
/// back-substitution. kFirst is plain long division.
enum class DropRow { kFirst, kLast, kMiddle };

struct LongDivisionOptions {
  DropRow drop = DropRow::kFirst;
  bool parallel = true;
};

/// The O(n^2) long-division variant. Numerically unstable by construction;
/// it therefore only exists in tracked form, and the instability shows up as
/// interval width (a coordinate whose solve degenerates entirely comes back
/// as the trivial enclosure [0, 1], flagged partial).
std::vector<LogInterval> q_all_long_division(const ModelSelectionPrior& prior,
                                             const std::vector<LogValue>& log_psi,
                                             const std::vector<LogValue>& log_phi,
                                             LongDivisionOptions opt = {});

}  // namespace sparsebayes::cvdv

#endif
