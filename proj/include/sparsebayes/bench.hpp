#ifndef SPARSEBAYES_BENCH_HPP
#define SPARSEBAYES_BENCH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sparsebayes/harness.hpp"

namespace sparsebayes::harness {

/// Hyper-parameter rules for the beta-binomial / Beta mixing prior.
enum class HyperSetting {
  kUniform,               // kappa = 1,  lambda = 1
  kMildShrinkage,         // kappa = 1,  lambda = sqrt(n)
  kRecommended,           // kappa = 1,  lambda = n + 1
  kHeavyShrinkage,        // kappa = 1,  lambda = n^2
  kSparsityDiscouraging,  // kappa = n,  lambda = 1
};

std::pair<double, double> hyper_parameters(HyperSetting h, int n);
std::string hyper_name(HyperSetting h);

struct ScalingSpec {
  std::vector<std::string> algorithms{"hmm", "discrete"};
  std::vector<int> sizes{1000, 2000, 4000, 8000};
  uint64_t seed = 1;
  double laplace_scale = 1.0;
  HyperSetting hyper = HyperSetting::kRecommended;
  int m = 20;
  bool tracked = false;
  double time_limit_seconds = 1800;
  bool parallel = true;
  bool compare_serial = false;       // additionally time the serial reference
  std::string reference;             // algorithm to score errors against ("" = none)
};

struct ScalingCell {
  std::string algorithm;
  int n = 0;
  double seconds = -1;
  double serial_seconds = -1;
  double max_interval_width = 0;
  double max_error_vs_reference = -1;
  bool terminated = false;  // exceeded the time limit; larger sizes skipped
};

/// Timed grid over (algorithm, n) on the accuracy-experiment data, with an
/// optional cross-algorithm error column and an optional serial rerun.
std::vector<ScalingCell> run_scaling(const ScalingSpec& spec);

struct ExperimentSpec {
  Experiment experiment = Experiment::kA1;
  int n = 1000;
  int replications = 20;
  uint64_t seed = 1;
  HyperSetting hyper = HyperSetting::kRecommended;
  double laplace_scale = 1.0;
  std::string algorithm = "hmm";
  int m = 20;
  bool permuted_support = false;
  bool parallel = true;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // one per replication
  MetricsRow mean, sd;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

struct ApproxStudySpec {
  int n = 1000;
  int seeds = 5;
  uint64_t seed0 = 1;
  int m = 20;
  long vb_max_iter = 10000;
};

struct ApproxStudyRow {
  std::string method;
  double mean_error = 0;   // max-norm error against the exact engine
  double mean_seconds = 0;
};

/// Mean approximation errors of the discretized engine, the Gibbs sampler at
/// 1e3/1e4/1e5 iterations and variational Bayes against the exact posterior
/// (Gaussian slab, recommended hyper-parameters), averaged over seeds.
std::vector<ApproxStudyRow> run_approx_study(const ApproxStudySpec& spec);

}  // namespace sparsebayes::harness

#endif
