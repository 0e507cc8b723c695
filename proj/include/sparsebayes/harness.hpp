#ifndef SPARSEBAYES_HARNESS_HPP
#define SPARSEBAYES_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsebayes/posterior.hpp"

namespace sparsebayes::harness {

/// The simulation designs reproduced by the harness:
///  kAccuracy: 20% nonzero components of value 4 sqrt(2 ln n)
///  kApprox:   the same signal design (used for the approximation study)
///  kA1:       s = 10,            theta_i ~ U(1, 10)
///  kA2:       s = ceil(n^{1/3}), theta_i = 2 sqrt(2 ln n)
///  kA3:       s = 25,            theta_i ~ U(5, 10)
enum class Experiment { kAccuracy, kApprox, kA1, kA2, kA3 };

std::optional<Experiment> experiment_from_name(const std::string& name);
std::string experiment_name(Experiment e);
int nonzero_count(Experiment e, int n);

struct SimulatedData {
  std::vector<double> y;
  std::vector<double> theta;
  std::vector<bool> support;
  int s = 0;
};

struct SimulateOptions {
  bool permuted_support = false;  // default: support on the first s coordinates
};

SimulatedData simulate(Experiment e, int n, uint64_t seed, SimulateOptions opt = {});

struct MetricsRow {
  double l2_error = 0;
  double fdr = 0;
  double tpr = 0;
  double runtime_seconds = 0;
  double max_interval_width = 0;
};

/// l2 distance of the posterior mean from the truth, plus selection FDR/TPR
/// at the summary's threshold. Empty selection has FDR 0.
MetricsRow metrics(const PosteriorSummary& summary, const std::vector<double>& theta_true,
                   const std::vector<bool>& support);

/// Least-squares slope of log(t) against log(n).
double log_log_slope(const std::vector<double>& sizes, const std::vector<double>& times);

}  // namespace sparsebayes::harness

#endif
