#include "sparsebayes/bench.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "sparsebayes/baselines.hpp"
#include "sparsebayes/cvdv.hpp"
#include "sparsebayes/discretize.hpp"
#include "sparsebayes/hmm.hpp"

namespace sparsebayes::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct AlgoRun {
  std::vector<double> q;
  double seconds = 0;
  double max_width = 0;
};

AlgoRun run_algorithm(const std::string& algorithm, int n, double kappa, double lambda,
                      const std::vector<LogValue>& psi, const std::vector<LogValue>& phi,
                      int m, bool tracked, bool parallel) {
  AlgoRun out;
  auto t0 = Clock::now();
  if (algorithm == "hmm" || algorithm == "cvdv") {
    auto prior = ModelSelectionPrior::beta_binomial(n, kappa, lambda);
    if (algorithm == "hmm") {
      hmm::Options o;
      o.parallel = parallel;
      if (tracked) {
        auto r = hmm::q_all_tracked(prior, psi, phi, o);
        out.seconds = seconds_since(t0);
        out.q.reserve(n);
        for (auto& v : r.q) {
          out.q.push_back(0.5 * (std::exp(v.lo()) + std::exp(v.hi())));
          out.max_width = std::max(out.max_width, std::exp(v.hi()) - std::exp(v.lo()));
        }
      } else {
        auto r = hmm::q_all(prior, psi, phi, o);
        out.seconds = seconds_since(t0);
        for (auto& v : r.q) out.q.push_back(std::min(1.0, v.real()));
      }
    } else {
      cvdv::Options o{parallel};
      if (tracked) {
        auto q = cvdv::q_all_tracked(prior, psi, phi, o);
        out.seconds = seconds_since(t0);
        for (auto& v : q) {
          out.q.push_back(0.5 * (std::exp(v.lo()) + std::exp(v.hi())));
          out.max_width = std::max(out.max_width, std::exp(v.hi()) - std::exp(v.lo()));
        }
      } else {
        auto q = cvdv::q_all(prior, psi, phi, o);
        out.seconds = seconds_since(t0);
        for (auto& v : q) out.q.push_back(std::min(1.0, v.real()));
      }
    }
    return out;
  }
  if (algorithm == "longdiv") {
    auto prior = ModelSelectionPrior::beta_binomial(n, kappa, lambda);
    auto q = cvdv::q_all_long_division(prior, psi, phi, {cvdv::DropRow::kFirst, parallel});
    out.seconds = seconds_since(t0);
    for (auto& v : q) {
      out.q.push_back(0.5 * (std::exp(v.lo()) + std::exp(v.hi())));
      out.max_width = std::max(out.max_width, std::exp(v.hi()) - std::exp(v.lo()));
    }
    return out;
  }
  if (algorithm == "discrete") {
    auto grid = discretize::build_grid(n, m, kappa, lambda);
    auto dm = discretize::beta_fastforward(kappa, lambda, grid);
    discretize::Options o{parallel};
    if (tracked) {
      auto r = discretize::q_all_tracked(dm, psi, phi, o);
      out.seconds = seconds_since(t0);
      for (auto& v : r.q) {
        out.q.push_back(0.5 * (std::exp(v.lo()) + std::exp(v.hi())));
        out.max_width = std::max(out.max_width, std::exp(v.hi()) - std::exp(v.lo()));
      }
    } else {
      auto r = discretize::q_all(dm, psi, phi, o);
      out.seconds = seconds_since(t0);
      for (auto& v : r.q) out.q.push_back(std::min(1.0, v.real()));
    }
    return out;
  }
  throw DomainError("run_scaling: unknown algorithm " + algorithm);
}

}  // namespace

std::pair<double, double> hyper_parameters(HyperSetting h, int n) {
  switch (h) {
    case HyperSetting::kUniform: return {1.0, 1.0};
    case HyperSetting::kMildShrinkage: return {1.0, std::sqrt(static_cast<double>(n))};
    case HyperSetting::kRecommended: return {1.0, static_cast<double>(n) + 1.0};
    case HyperSetting::kHeavyShrinkage: return {1.0, static_cast<double>(n) * n};
    case HyperSetting::kSparsityDiscouraging: return {static_cast<double>(n), 1.0};
  }
  throw DomainError("unknown hyper setting");
}

std::string hyper_name(HyperSetting h) {
  switch (h) {
    case HyperSetting::kUniform: return "i";
    case HyperSetting::kMildShrinkage: return "ii";
    case HyperSetting::kRecommended: return "iii";
    case HyperSetting::kHeavyShrinkage: return "iv";
    case HyperSetting::kSparsityDiscouraging: return "v";
  }
  return "?";
}

std::vector<ScalingCell> run_scaling(const ScalingSpec& spec) {
  std::vector<ScalingCell> cells;
  LaplaceSlab slab(spec.laplace_scale);

  // data and reference answers are shared across algorithms per size
  std::map<int, std::pair<std::vector<LogValue>, std::vector<LogValue>>> likelihoods;
  std::map<int, std::vector<double>> reference_q;
  for (int n : spec.sizes) {
    auto data = simulate(Experiment::kAccuracy, n, spec.seed + n);
    auto pairs = make_likelihoods(slab, data.y);
    std::vector<LogValue> psi(n), phi(n);
    for (int i = 0; i < n; ++i) {
      psi[i] = pairs[i].log_psi;
      phi[i] = pairs[i].log_phi;
    }
    likelihoods[n] = {std::move(psi), std::move(phi)};
  }
  if (!spec.reference.empty()) {
    for (int n : spec.sizes) {
      auto [kappa, lambda] = hyper_parameters(spec.hyper, n);
      const auto& [psi, phi] = likelihoods[n];
      reference_q[n] =
          run_algorithm(spec.reference, n, kappa, lambda, psi, phi, spec.m, false, spec.parallel)
              .q;
    }
  }

  for (const std::string& algorithm : spec.algorithms) {
    bool terminated = false;
    for (int n : spec.sizes) {
      ScalingCell cell;
      cell.algorithm = algorithm;
      cell.n = n;
      if (terminated) {
        cell.terminated = true;
        cells.push_back(cell);
        continue;
      }
      auto [kappa, lambda] = hyper_parameters(spec.hyper, n);
      const auto& [psi, phi] = likelihoods[n];
      AlgoRun run = run_algorithm(algorithm, n, kappa, lambda, psi, phi, spec.m, spec.tracked,
                                  spec.parallel);
      cell.seconds = run.seconds;
      cell.max_interval_width = run.max_width;
      if (spec.compare_serial) {
        AlgoRun serial =
            run_algorithm(algorithm, n, kappa, lambda, psi, phi, spec.m, spec.tracked, false);
        cell.serial_seconds = serial.seconds;
      }
      if (!spec.reference.empty() && algorithm != spec.reference)
        cell.max_error_vs_reference = baselines::approx_error(reference_q[n], run.q);
      if (run.seconds > spec.time_limit_seconds) terminated = true;
      cells.push_back(cell);
    }
  }
  return cells;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  auto [kappa, lambda] = hyper_parameters(spec.hyper, spec.n);
  LaplaceSlab slab(spec.laplace_scale);
  auto mixing = MixingPrior::beta(kappa, lambda);

  ComputeOptions opt;
  auto algo = algorithm_from_name(spec.algorithm);
  if (!algo) throw DomainError("run_experiment: unknown algorithm " + spec.algorithm);
  opt.algorithm = *algo;
  opt.discrete_m = spec.m;
  opt.parallel = spec.parallel;
  opt.medians = false;
  opt.epsilon = false;

  for (int rep = 0; rep < spec.replications; ++rep) {
    auto data = simulate(spec.experiment, spec.n, spec.seed + rep, {spec.permuted_support});
    PosteriorSummary s = compute(mixing, slab, data.y, opt);
    result.rows.push_back(metrics(s, data.theta, data.support));
  }

  auto agg = [&](auto field) {
    double mean = 0;
    for (const auto& r : result.rows) mean += field(r);
    mean /= static_cast<double>(result.rows.size());
    double var = 0;
    for (const auto& r : result.rows) var += (field(r) - mean) * (field(r) - mean);
    double sd = result.rows.size() > 1
                    ? std::sqrt(var / (static_cast<double>(result.rows.size()) - 1))
                    : 0.0;
    return std::pair<double, double>(mean, sd);
  };
  std::tie(result.mean.l2_error, result.sd.l2_error) =
      agg([](const MetricsRow& r) { return r.l2_error; });
  std::tie(result.mean.fdr, result.sd.fdr) = agg([](const MetricsRow& r) { return r.fdr; });
  std::tie(result.mean.tpr, result.sd.tpr) = agg([](const MetricsRow& r) { return r.tpr; });
  std::tie(result.mean.runtime_seconds, result.sd.runtime_seconds) =
      agg([](const MetricsRow& r) { return r.runtime_seconds; });
  return result;
}

std::vector<ApproxStudyRow> run_approx_study(const ApproxStudySpec& spec) {
  const int n = spec.n;
  GaussianSlab slab(1.0);
  std::vector<ApproxStudyRow> rows{{"discrete(m=" + std::to_string(spec.m) + ")"},
                                   {"gibbs(it=1e3)"},
                                   {"gibbs(it=1e4)"},
                                   {"gibbs(it=1e5)"},
                                   {"vb"}};
  for (int s = 0; s < spec.seeds; ++s) {
    uint64_t seed = spec.seed0 + s;
    auto data = simulate(Experiment::kApprox, n, seed);
    auto pairs = make_likelihoods(slab, data.y);
    std::vector<LogValue> psi(n), phi(n);
    for (int i = 0; i < n; ++i) {
      psi[i] = pairs[i].log_psi;
      phi[i] = pairs[i].log_phi;
    }
    auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
    auto exact = hmm::q_all(prior, psi, phi);
    std::vector<double> qe;
    for (auto& v : exact.q) qe.push_back(std::min(1.0, v.real()));

    auto add = [&](int row, const std::vector<double>& q, double seconds) {
      rows[row].mean_error += baselines::approx_error(qe, q) / spec.seeds;
      rows[row].mean_seconds += seconds / spec.seeds;
    };

    auto t0 = std::chrono::steady_clock::now();
    auto grid = discretize::build_grid(n, spec.m, 1.0, n + 1.0);
    auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
    auto qd = discretize::q_all(dm, psi, phi);
    std::vector<double> qdv;
    for (auto& v : qd.q) qdv.push_back(std::min(1.0, v.real()));
    add(0, qdv, seconds_since(t0));

    long its[] = {1000, 10000, 100000};
    for (int k = 0; k < 3; ++k) {
      auto r = baselines::gibbs(data.y, 1.0, n + 1.0, slab, {its[k], seed});
      add(1 + k, r.q, r.runtime_seconds);
    }
    auto vb = baselines::vb_componentwise(data.y, 1.0, n + 1.0, slab,
                                          {1e-10, spec.vb_max_iter, true});
    add(4, vb.q, vb.runtime_seconds);
  }
  return rows;
}

}  // namespace sparsebayes::harness
