#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sparsebayes/baselines.hpp"
#include "sparsebayes/bench.hpp"
#include "sparsebayes/harness.hpp"
#include "sparsebayes/io.hpp"
#include "sparsebayes/posterior.hpp"
#include "sparsebayes/representability.hpp"
#include "sparsebayes/zscore.hpp"

namespace sb = sparsebayes;
namespace sbh = sparsebayes::harness;

namespace {

// Hyper-parameter tokens may reference the data dimension: "n", "n+1",
// "sqrt(n)", "n^2", or any literal number.
double parse_param(const std::string& tok, int n) {
  if (tok == "n") return n;
  if (tok == "n+1") return n + 1.0;
  if (tok == "sqrt(n)") return std::sqrt(static_cast<double>(n));
  if (tok == "n^2") return static_cast<double>(n) * n;
  return std::stod(tok);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

struct PriorChoice {
  std::optional<sb::ModelSelectionPrior> dimension;
  std::optional<sb::MixingPrior> mixing;  // set for beta-binomial specs

  const sb::ModelSelectionPrior& require_dimension() const {
    if (!dimension) throw sb::DomainError("prior: dimension prior unavailable");
    return *dimension;
  }
};

// Formats: beta-binomial:k,l  binomial:p  poisson:rate  polytail:exp
//          subexp:exp  file:PATH (one raw weight per line)
PriorChoice parse_prior(const std::string& spec, int n) {
  auto colon = spec.find(':');
  std::string family = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  PriorChoice out;
  if (family == "beta-binomial") {
    auto parts = split(args, ',');
    if (parts.size() != 2) throw sb::DomainError("prior: beta-binomial needs kappa,lambda");
    double kappa = parse_param(parts[0], n), lambda = parse_param(parts[1], n);
    out.mixing = sb::MixingPrior::beta(kappa, lambda);
    out.dimension = sb::ModelSelectionPrior::beta_binomial(n, kappa, lambda);
    return out;
  }
  if (family == "binomial") {
    out.dimension = sb::ModelSelectionPrior::binomial(n, parse_param(args, n));
    return out;
  }
  if (family == "poisson") {
    out.dimension = sb::ModelSelectionPrior::poisson_truncated(n, parse_param(args, n));
    return out;
  }
  if (family == "polytail") {
    out.dimension = sb::ModelSelectionPrior::poly_tail(n, parse_param(args, n));
    return out;
  }
  if (family == "subexp") {
    out.dimension = sb::ModelSelectionPrior::sub_exponential(n, parse_param(args, n));
    return out;
  }
  if (family == "file") {
    auto w = sbh::read_data_vector_file(args);
    if (static_cast<int>(w.size()) != n + 1)
      throw sb::DomainError("prior: weight file must have n+1 rows");
    out.dimension = sb::ModelSelectionPrior::from_weights(w);
    return out;
  }
  throw sb::DomainError("prior: unknown family '" + family + "'");
}

// Formats: laplace:a  gauss:v  cauchy:g
std::unique_ptr<sb::Slab> parse_slab(const std::string& spec) {
  auto colon = spec.find(':');
  std::string family = spec.substr(0, colon);
  double arg = colon == std::string::npos ? 1.0 : std::stod(spec.substr(colon + 1));
  if (family == "laplace") return std::make_unique<sb::LaplaceSlab>(arg);
  if (family == "gauss" || family == "gaussian") return std::make_unique<sb::GaussianSlab>(arg);
  if (family == "cauchy") return std::make_unique<sb::CauchySlab>(arg);
  throw sb::DomainError("slab: unknown family '" + family + "'");
}

std::vector<double> read_data(const std::string& path) {
  if (path == "-") return sbh::read_data_vector(std::cin);
  return sbh::read_data_vector_file(path);
}

sbh::HyperSetting parse_hyper(const std::string& name) {
  if (name == "i") return sbh::HyperSetting::kUniform;
  if (name == "ii") return sbh::HyperSetting::kMildShrinkage;
  if (name == "iii") return sbh::HyperSetting::kRecommended;
  if (name == "iv") return sbh::HyperSetting::kHeavyShrinkage;
  if (name == "v") return sbh::HyperSetting::kSparsityDiscouraging;
  throw sb::DomainError("hyper: expected one of i, ii, iii, iv, v");
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw sb::DomainError("cannot open " + path);
  writer(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Bayesian inference for model selection priors in the sparse "
               "normal sequence model"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file");
  app.failure_message(CLI::FailureMessage::help);

  // ---- posterior -----------------------------------------------------------
  auto* post = app.add_subcommand("posterior", "Marginal posterior summaries");
  std::string p_data = "-", p_prior = "beta-binomial:1,n+1", p_slab = "laplace:1";
  std::string p_algorithm = "hmm", p_output;
  int p_m = 20;
  bool p_tracked = false, p_serial = false, p_no_epsilon = false;
  double p_threshold = 0.5;
  std::optional<uint64_t> p_seed;
  uint64_t p_seed_raw = 0;
  post->add_option("--data", p_data, "Data file, or - for stdin")->capture_default_str();
  post->add_option("--prior", p_prior, "Prior spec")->capture_default_str();
  post->add_option("--slab", p_slab, "Slab spec")->capture_default_str();
  post->add_option("--algorithm", p_algorithm, "cvdv | longdiv | hmm | discrete")
      ->capture_default_str();
  post->add_option("--m", p_m, "Grid accuracy for the discrete algorithm")
      ->capture_default_str();
  post->add_flag("--tracked", p_tracked, "Interval-tracked arithmetic");
  post->add_flag("--serial", p_serial, "Serial reference kernels");
  post->add_flag("--no-epsilon", p_no_epsilon, "Skip the discretization error bound");
  post->add_option("--threshold", p_threshold, "Selection threshold on q")
      ->capture_default_str();
  auto* seed_opt = post->add_option("--seed", p_seed_raw, "Seed recorded in the output");
  post->add_option("--output", p_output, "Summary file (stdout when omitted)");

  // ---- simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Draw data from an experiment design");
  std::string s_experiment = "accuracy", s_output;
  int s_n = 1000;
  uint64_t s_seed = 1;
  bool s_permuted = false;
  sim->add_option("--experiment", s_experiment, "accuracy | A1 | A2 | A3")
      ->capture_default_str();
  sim->add_option("--n", s_n, "Dimension")->capture_default_str();
  sim->add_option("--seed", s_seed, "RNG seed")->capture_default_str();
  sim->add_flag("--permuted", s_permuted, "Place the support at random positions");
  sim->add_option("--output", s_output, "Output file (stdout when omitted)");

  // ---- zscore ---------------------------------------------------------------
  auto* zsc = app.add_subcommand("zscore", "Per-gene z-scores between two groups");
  std::string z_a, z_b, z_output;
  zsc->add_option("--group-a", z_a, "Matrix of group A")->required();
  zsc->add_option("--group-b", z_b, "Matrix of group B")->required();
  zsc->add_option("--output", z_output, "Output file (stdout when omitted)");

  // ---- soft-convert ----------------------------------------------------------
  auto* soft = app.add_subcommand("soft-convert", "Split a GEO SOFT dataset table");
  std::string f_soft, f_type = "disease state", f_label_a, f_label_b, f_out_a, f_out_b;
  soft->add_option("--soft", f_soft, "SOFT file")->required();
  soft->add_option("--subset-type", f_type, "Subset type")->capture_default_str();
  soft->add_option("--group-a", f_label_a, "Subset label of group A")->required();
  soft->add_option("--group-b", f_label_b, "Subset label of group B")->required();
  soft->add_option("--out-a", f_out_a, "Matrix file of group A")->required();
  soft->add_option("--out-b", f_out_b, "Matrix file of group B")->required();

  // ---- bench -----------------------------------------------------------------
  auto* ben = app.add_subcommand("bench", "Runtime scaling and experiment reproduction");
  std::string b_mode = "scaling", b_algorithms = "hmm,discrete", b_sizes = "1000,2000,4000,8000";
  std::string b_reference, b_experiment = "A1", b_hyper = "iii";
  uint64_t b_seed = 1;
  int b_m = 20, b_replications = 20, b_n = 1000;
  bool b_tracked = false, b_compare_serial = false;
  double b_time_limit = 1800, b_laplace = 1.0;
  ben->add_option("--mode", b_mode, "scaling | experiment | approx")->capture_default_str();
  ben->add_option("--algorithms", b_algorithms, "Comma-separated list")->capture_default_str();
  ben->add_option("--sizes", b_sizes, "Comma-separated n values")->capture_default_str();
  ben->add_option("--reference", b_reference, "Algorithm to score errors against");
  ben->add_option("--seed", b_seed, "Seed")->capture_default_str();
  ben->add_option("--m", b_m, "Discrete grid accuracy")->capture_default_str();
  ben->add_option("--hyper", b_hyper, "Hyper setting: i..v")->capture_default_str();
  ben->add_option("--laplace", b_laplace, "Laplace slab scale")->capture_default_str();
  ben->add_flag("--tracked", b_tracked, "Interval-tracked runs");
  ben->add_flag("--compare-serial", b_compare_serial, "Also time the serial kernels");
  ben->add_option("--time-limit", b_time_limit, "Per-run limit in seconds")
      ->capture_default_str();
  ben->add_option("--experiment", b_experiment, "Experiment for --mode experiment")
      ->capture_default_str();
  ben->add_option("--n", b_n, "Dimension for --mode experiment")->capture_default_str();
  ben->add_option("--replications", b_replications, "Replications for --mode experiment")
      ->capture_default_str();

  // ---- represent ---------------------------------------------------------------
  auto* rep = app.add_subcommand("represent", "Spike-and-slab representability verdict");
  std::string r_prior = "binomial:0.5";
  int r_n = 10, r_grid = 1001;
  rep->add_option("--prior", r_prior, "Prior spec")->capture_default_str();
  rep->add_option("--n", r_n, "Dimension")->capture_default_str();
  rep->add_option("--grid-size", r_grid, "c-grid resolution")->capture_default_str();

  // ---- compare -------------------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "Score an external q vector against exact");
  std::string c_data, c_prior = "beta-binomial:1,n+1", c_slab = "gauss:1";
  std::string c_algorithm = "hmm", c_external;
  int c_m = 20;
  cmp->add_option("--data", c_data, "Data file, or - for stdin")->required();
  cmp->add_option("--external", c_external, "File with one q value per line")->required();
  cmp->add_option("--prior", c_prior, "Prior spec")->capture_default_str();
  cmp->add_option("--slab", c_slab, "Slab spec")->capture_default_str();
  cmp->add_option("--algorithm", c_algorithm, "Exact algorithm")->capture_default_str();
  cmp->add_option("--m", c_m, "Discrete grid accuracy")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (post->parsed()) {
      auto y = read_data(p_data);
      const int n = static_cast<int>(y.size());
      if (n == 0) throw sb::DomainError("posterior: empty data");
      auto slab = parse_slab(p_slab);
      auto prior = parse_prior(p_prior, n);
      sb::ComputeOptions opt;
      auto algo = sb::algorithm_from_name(p_algorithm);
      if (!algo) throw sb::DomainError("unknown algorithm " + p_algorithm);
      opt.algorithm = *algo;
      opt.tracked = p_tracked;
      opt.discrete_m = p_m;
      opt.selection_threshold = p_threshold;
      opt.parallel = !p_serial;
      opt.epsilon = !p_no_epsilon;
      sb::PosteriorSummary summary =
          prior.mixing ? sb::compute(*prior.mixing, *slab, y, opt)
                       : sb::compute(prior.require_dimension(), *slab, y, opt);
      if (seed_opt->count() > 0) summary.seed = p_seed_raw;
      emit(p_output, [&](std::ostream& os) { sbh::write_summary(os, summary); });
      return 0;
    }

    if (sim->parsed()) {
      auto exp = sbh::experiment_from_name(s_experiment);
      if (!exp) throw sb::DomainError("unknown experiment " + s_experiment);
      auto d = sbh::simulate(*exp, s_n, s_seed, {s_permuted});
      emit(s_output, [&](std::ostream& os) { sbh::write_simulated(os, d); });
      return 0;
    }

    if (zsc->parsed()) {
      auto a = sbh::read_matrix_file(z_a);
      auto b = sbh::read_matrix_file(z_b);
      auto z = sbh::z_scores(a, b);
      emit(z_output, [&](std::ostream& os) { sbh::write_vector(os, z); });
      return 0;
    }

    if (soft->parsed()) {
      auto [a, b] = sbh::soft_split(f_soft, f_type, f_label_a, f_label_b);
      emit(f_out_a, [&](std::ostream& os) { sbh::write_matrix(os, a); });
      emit(f_out_b, [&](std::ostream& os) { sbh::write_matrix(os, b); });
      std::cout << "wrote " << a.patients() << " + " << b.patients() << " patients, "
                << a.genes() << " genes\n";
      return 0;
    }

    if (ben->parsed()) {
      if (b_mode == "approx") {
        sbh::ApproxStudySpec spec;
        spec.n = b_n;
        spec.seed0 = b_seed;
        spec.m = b_m;
        auto rows = sbh::run_approx_study(spec);
        std::printf("# approximation errors vs the exact engine, n=%d, 5 seeds\n", b_n);
        std::printf("method\tmean_max_error\tmean_seconds\n");
        for (const auto& r : rows)
          std::printf("%s\t%.3e\t%.3g\n", r.method.c_str(), r.mean_error, r.mean_seconds);
        return 0;
      }
      if (b_mode == "experiment") {
        sbh::ExperimentSpec spec;
        auto exp = sbh::experiment_from_name(b_experiment);
        if (!exp) throw sb::DomainError("unknown experiment " + b_experiment);
        spec.experiment = *exp;
        spec.n = b_n;
        spec.replications = b_replications;
        spec.seed = b_seed;
        spec.hyper = parse_hyper(b_hyper);
        spec.laplace_scale = b_laplace;
        spec.algorithm = split(b_algorithms, ',').front();
        spec.m = b_m;
        auto r = sbh::run_experiment(spec);
        std::printf("# experiment %s n=%d replications=%d hyper=%s algorithm=%s\n",
                    b_experiment.c_str(), b_n, b_replications, b_hyper.c_str(),
                    spec.algorithm.c_str());
        std::printf("metric\tmean\tsd\n");
        std::printf("l2\t%.6g\t%.6g\n", r.mean.l2_error, r.sd.l2_error);
        std::printf("fdr\t%.6g\t%.6g\n", r.mean.fdr, r.sd.fdr);
        std::printf("tpr\t%.6g\t%.6g\n", r.mean.tpr, r.sd.tpr);
        std::printf("runtime\t%.6g\t%.6g\n", r.mean.runtime_seconds, r.sd.runtime_seconds);
        return 0;
      }
      sbh::ScalingSpec spec;
      spec.algorithms = split(b_algorithms, ',');
      spec.sizes.clear();
      for (const auto& s : split(b_sizes, ',')) spec.sizes.push_back(std::stoi(s));
      spec.seed = b_seed;
      spec.laplace_scale = b_laplace;
      spec.hyper = parse_hyper(b_hyper);
      spec.m = b_m;
      spec.tracked = b_tracked;
      spec.time_limit_seconds = b_time_limit;
      spec.compare_serial = b_compare_serial;
      spec.reference = b_reference;
      auto cells = sbh::run_scaling(spec);
      std::printf("algorithm\tn\tseconds\tserial_seconds\tmax_width\tmax_error\tterminated\n");
      for (const auto& c : cells)
        std::printf("%s\t%d\t%.6g\t%.6g\t%.3e\t%.3e\t%d\n", c.algorithm.c_str(), c.n,
                    c.seconds, c.serial_seconds, c.max_interval_width,
                    c.max_error_vs_reference, c.terminated ? 1 : 0);
      // per-algorithm slopes over the completed sizes
      for (const auto& a : spec.algorithms) {
        std::vector<double> ns, ts;
        for (const auto& c : cells)
          if (c.algorithm == a && c.seconds > 0 && !c.terminated) {
            ns.push_back(c.n);
            ts.push_back(c.seconds);
          }
        if (ns.size() >= 2)
          std::printf("# slope %s %.3f\n", a.c_str(), sbh::log_log_slope(ns, ts));
      }
      return 0;
    }

    if (rep->parsed()) {
      auto prior = parse_prior(r_prior, r_n);
      auto v = sb::representability::is_spike_slab(prior.require_dimension(), {}, r_grid);
      std::printf("prior: %s  n: %d\n", prior.require_dimension().describe().c_str(), r_n);
      std::printf("representable: %s\n", v.representable ? "yes" : "no");
      if (v.representable) {
        std::printf("witness_c: %.17g\n", v.witness_c);
      } else {
        const char* cond = v.violated == sb::representability::Condition::kHankelPsd
                               ? "hankel-psd"
                           : v.violated == sb::representability::Condition::kShiftedHankelPsd
                               ? "shifted-hankel-psd"
                               : "range-inclusion";
        std::printf("violated: %s\n", cond);
      }
      std::printf("min_eig_hankel: %.6e\n", v.diagnostics.min_eig_hankel);
      std::printf("min_eig_shifted: %.6e\n", v.diagnostics.min_eig_shifted);
      std::printf("range_residual: %.6e\n", v.diagnostics.range_residual);
      std::printf("leading_minor2: %.6e\n", v.diagnostics.leading_minor2);
      std::printf("margin: %.6e\n", v.diagnostics.margin);
      return 0;
    }

    if (cmp->parsed()) {
      auto y = read_data(c_data);
      const int n = static_cast<int>(y.size());
      auto slab = parse_slab(c_slab);
      auto prior = parse_prior(c_prior, n);
      auto external = sbh::read_data_vector_file(c_external);
      sb::ComputeOptions opt;
      auto algo = sb::algorithm_from_name(c_algorithm);
      if (!algo) throw sb::DomainError("unknown algorithm " + c_algorithm);
      opt.algorithm = *algo;
      opt.discrete_m = c_m;
      opt.medians = false;
      opt.epsilon = false;
      sb::PosteriorSummary summary =
          prior.mixing ? sb::compute(*prior.mixing, *slab, y, opt)
                       : sb::compute(prior.require_dimension(), *slab, y, opt);
      double err = sb::baselines::approx_error(summary.q, external);
      std::printf("max_error: %.17g\n", err);
      return 0;
    }
  } catch (const sb::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s (achieved %.3e)\n", e.what(),
                 e.achieved_tolerance);
    return 2;
  } catch (const sb::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
