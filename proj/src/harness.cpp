#include "sparsebayes/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsebayes/philox.hpp"

namespace sparsebayes::harness {

std::optional<Experiment> experiment_from_name(const std::string& name) {
  if (name == "accuracy") return Experiment::kAccuracy;
  if (name == "approx") return Experiment::kApprox;
  if (name == "A1" || name == "a1") return Experiment::kA1;
  if (name == "A2" || name == "a2") return Experiment::kA2;
  if (name == "A3" || name == "a3") return Experiment::kA3;
  return std::nullopt;
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kAccuracy: return "accuracy";
    case Experiment::kApprox: return "approx";
    case Experiment::kA1: return "A1";
    case Experiment::kA2: return "A2";
    case Experiment::kA3: return "A3";
  }
  return "?";
}

int nonzero_count(Experiment e, int n) {
  switch (e) {
    case Experiment::kAccuracy:
    case Experiment::kApprox:
      return static_cast<int>(std::llround(0.2 * n));
    case Experiment::kA1: return 10;
    case Experiment::kA2: return static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
    case Experiment::kA3: return 25;
  }
  return 0;
}

SimulatedData simulate(Experiment e, int n, uint64_t seed, SimulateOptions opt) {
  const int s = nonzero_count(e, n);
  if (n < 1 || s > n) throw DomainError("simulate: dimension too small for the design");

  SimulatedData d;
  d.s = s;
  d.theta.assign(n, 0.0);
  d.support.assign(n, false);

  std::vector<int> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  PhiloxRng rng(seed);
  if (opt.permuted_support) {
    // Fisher-Yates on a dedicated stream so the signal draws stay aligned
    // with the unpermuted run.
    PhiloxRng perm(seed, 0x7065726d);
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(perm.next_u64() % static_cast<uint64_t>(i + 1));
      std::swap(positions[i], positions[j]);
    }
  }

  for (int idx = 0; idx < s; ++idx) {
    double value = 0;
    switch (e) {
      case Experiment::kAccuracy:
      case Experiment::kApprox:
        value = 4.0 * std::sqrt(2.0 * std::log(static_cast<double>(n)));
        break;
      case Experiment::kA1:
        value = 1.0 + 9.0 * rng.next_double();
        break;
      case Experiment::kA2:
        value = 2.0 * std::sqrt(2.0 * std::log(static_cast<double>(n)));
        break;
      case Experiment::kA3:
        value = 5.0 + 5.0 * rng.next_double();
        break;
    }
    d.theta[positions[idx]] = value;
    d.support[positions[idx]] = true;
  }

  d.y.resize(n);
  for (int i = 0; i < n; ++i) d.y[i] = d.theta[i] + rng.next_gaussian();
  return d;
}

MetricsRow metrics(const PosteriorSummary& summary, const std::vector<double>& theta_true,
                   const std::vector<bool>& support) {
  if (theta_true.size() != summary.mean.size() || support.size() != theta_true.size())
    throw DomainError("metrics: size mismatch");
  MetricsRow row;
  double sq = 0;
  long tp = 0, fp = 0, s = 0;
  for (size_t i = 0; i < theta_true.size(); ++i) {
    double d = summary.mean[i] - theta_true[i];
    sq += d * d;
    if (support[i]) ++s;
    if (summary.selected[i]) (support[i] ? tp : fp)++;
  }
  row.l2_error = std::sqrt(sq);
  row.fdr = static_cast<double>(fp) / std::max<long>(fp + tp, 1);
  row.tpr = static_cast<double>(tp) / std::max<long>(s, 1);
  row.runtime_seconds = summary.runtime_seconds;
  row.max_interval_width = summary.max_interval_width;
  return row;
}

double log_log_slope(const std::vector<double>& sizes, const std::vector<double>& times) {
  if (sizes.size() != times.size() || sizes.size() < 2)
    throw DomainError("log_log_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i) {
    double x = std::log(sizes[i]), y = std::log(times[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sparsebayes::harness
