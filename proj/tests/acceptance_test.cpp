// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Criterion 10 needs the locally supplied
// gene expression matrices and is skipped when they are absent.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "oracle.hpp"
#include "sparsebayes/baselines.hpp"
#include "sparsebayes/bench.hpp"
#include "sparsebayes/cvdv.hpp"
#include "sparsebayes/discretize.hpp"
#include "sparsebayes/harness.hpp"
#include "sparsebayes/hmm.hpp"
#include "sparsebayes/posterior.hpp"
#include "sparsebayes/representability.hpp"
#include "sparsebayes/special.hpp"
#include "sparsebayes/zscore.hpp"

using namespace sparsebayes;
using Big = oracle::BigFloat;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  (%s)\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

struct Pairs {
  std::vector<LogValue> psi, phi;
  std::vector<double> lpsi, lphi;
};

Pairs make_pairs(const std::vector<double>& y, const Slab& slab) {
  Pairs p;
  for (double yi : y) {
    p.psi.push_back(slab.psi(yi));
    p.phi.push_back(LogValue::from_log(log_normal_pdf(yi)));
    p.lpsi.push_back(p.psi.back().log());
    p.lphi.push_back(p.phi.back().log());
  }
  return p;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("criterion 1: brute-force equivalence on random small instances") {
  auto t0 = Clock::now();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ys(-6.0, 6.0);
  std::uniform_real_distribution<double> ks(0.5, 4.0);
  double worst = 0;
  for (int inst = 0; inst < 50; ++inst) {
    int n = 1 + static_cast<int>(rng() % 14);
    std::vector<double> y(n);
    for (auto& v : y) v = ys(rng);
    std::unique_ptr<Slab> slab;
    if (inst % 2 == 0)
      slab = std::make_unique<LaplaceSlab>(1.0);
    else
      slab = std::make_unique<GaussianSlab>(1.0);
    auto prior = inst % 3 == 0
                     ? ModelSelectionPrior::beta_binomial(n, ks(rng), ks(rng))
                     : (inst % 3 == 1 ? ModelSelectionPrior::poisson_truncated(n, 1.0 + ks(rng))
                                      : [&] {
                                          std::vector<double> w(n + 1);
                                          for (auto& x : w) x = 0.25 + ys(rng) + 6.25;
                                          return ModelSelectionPrior::from_weights(w);
                                        }());
    auto p = make_pairs(y, *slab);
    std::vector<Big> pmf(n + 1);
    for (int s = 0; s <= n; ++s) pmf[s] = exp(Big(prior.pmf(s).log()));
    auto ref = oracle::brute_force_q(pmf, p.lpsi, p.lphi);

    auto q_cvdv = cvdv::q_all(prior, p.psi, p.phi);
    auto q_hmm = hmm::q_all(prior, p.psi, p.phi);
    for (int i = 0; i < n; ++i) {
      double r = static_cast<double>(ref.q[i]);
      worst = std::max(worst, std::abs(q_cvdv[i].real() - r));
      worst = std::max(worst, std::abs(q_hmm.q[i].real() - r));
    }
  }
  double dt = seconds_since(t0);
  bool ok = worst <= 1e-10 && dt < 60;
  char buf[160];
  snprintf(buf, sizeof buf, "max |q - oracle| = %.2e <= 1e-10 over 50 instances, %.1fs < 60s",
           worst, dt);
  report(1, ok, buf);
  CHECK(worst <= 1e-10);
  CHECK(dt < 60);
}

TEST_CASE("criterion 2: cvdv and hmm agree at n = 500") {
  auto t0 = Clock::now();
  const int n = 500;
  auto data = harness::simulate(harness::Experiment::kAccuracy, n, 31);
  LaplaceSlab slab(1.0);
  auto p = make_pairs(data.y, slab);
  auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto q_cvdv = cvdv::q_all(prior, p.psi, p.phi);
  auto q_hmm = hmm::q_all(prior, p.psi, p.phi);
  double worst = 0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(q_cvdv[i].real() - q_hmm.q[i].real()));
  double dt = seconds_since(t0);
  bool ok = worst <= 1e-8 && dt < 120;
  char buf[160];
  snprintf(buf, sizeof buf, "max |q_cvdv - q_hmm| = %.2e <= 1e-8, %.1fs < 120s", worst, dt);
  report(2, ok, buf);
  CHECK(worst <= 1e-8);
  CHECK(dt < 120);
}

TEST_CASE("criterion 3: discretization accuracy at n = 1000") {
  auto t0 = Clock::now();
  const int n = 1000;
  auto data = harness::simulate(harness::Experiment::kAccuracy, n, 57);
  GaussianSlab slab(1.0);
  auto p = make_pairs(data.y, slab);
  auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto q_hmm = hmm::q_all(prior, p.psi, p.phi);

  auto grid = discretize::build_grid(n, 20, 1.0, n + 1.0);
  auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
  auto q_disc = discretize::q_all(dm, p.psi, p.phi);
  double worst = 0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(q_disc.q[i].real() - q_hmm.q[i].real()));
  double dt = seconds_since(t0);
  bool ok = worst <= 1e-7 && dt < 30;
  char buf[160];
  snprintf(buf, sizeof buf, "max |q~ - q_hmm| = %.2e <= 1e-7, %.1fs < 30s", worst, dt);
  report(3, ok, buf);
  CHECK(worst <= 1e-7);
  CHECK(dt < 30);
}

TEST_CASE("criterion 4: epsilon bound is monotone in m and dominates the error") {
  const int n = 500;
  auto data = harness::simulate(harness::Experiment::kAccuracy, n, 77);
  GaussianSlab slab(1.0);
  auto p = make_pairs(data.y, slab);
  auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto q_hmm = hmm::q_all(prior, p.psi, p.phi);

  bool eps_monotone = true, err_monotone = true;
  double prev_eps = std::numeric_limits<double>::infinity();
  double prev_err = std::numeric_limits<double>::infinity();
  std::string trail;
  for (int m : {10, 20, 40}) {
    auto grid = discretize::build_grid(n, m, 1.0, n + 1.0);
    auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
    auto rep_eps = discretize::epsilon_bound(MixingPrior::beta(1.0, n + 1.0), dm);
    auto q = discretize::q_all(dm, p.psi, p.phi);
    double err = 0;
    for (int i = 0; i < n; ++i)
      err = std::max(err, std::abs(q.q[i].real() - q_hmm.q[i].real()));
    eps_monotone = eps_monotone && rep_eps.epsilon <= prev_eps;
    // the measured error sits on the double-precision noise floor here, so
    // monotonicity is asserted up to that floor
    err_monotone = err_monotone && err <= prev_err + 1e-11;
    prev_eps = rep_eps.epsilon;
    prev_err = err;
    char buf[80];
    snprintf(buf, sizeof buf, " m=%d eps=%.2e err=%.2e", m, rep_eps.epsilon, err);
    trail += buf;
  }

  // oracle-scale instances: measured error within the posterior-ratio bound
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ys(-5.0, 5.0);
  bool within_bound = true;
  for (int inst = 0; inst < 8; ++inst) {
    int nn = 4 + static_cast<int>(rng() % 11);
    std::vector<double> y(nn);
    for (auto& v : y) v = ys(rng);
    auto pp = make_pairs(y, slab);
    double kappa = 1.0, lambda = inst % 2 == 0 ? 2.0 : nn + 1.0;
    auto grid = discretize::build_grid(nn, 20, kappa, lambda);
    auto dm = discretize::beta_fastforward(kappa, lambda, grid);
    auto q = discretize::q_all(dm, pp.psi, pp.phi);
    auto rep_eps = discretize::epsilon_bound(MixingPrior::beta(kappa, lambda), dm);
    auto ref = oracle::brute_force_mixture(kappa, lambda, pp.lpsi, pp.lphi);
    for (int i = 0; i < nn; ++i) {
      double err = std::abs(q.q[i].real() - static_cast<double>(ref.q[i]));
      within_bound = within_bound && err <= rep_eps.q_error_bound(q.q[i].real()) + 1e-12;
    }
  }
  bool ok = eps_monotone && err_monotone && within_bound;
  report(4, ok,
         "eps monotone=" + std::to_string(eps_monotone) +
             " err monotone=" + std::to_string(err_monotone) +
             " oracle within ratio bound=" + std::to_string(within_bound) + ";" + trail);
  CHECK(eps_monotone);
  CHECK(err_monotone);
  CHECK(within_bound);
}

TEST_CASE("criterion 5: tracked accuracy and the long-division instability") {
  auto t0 = Clock::now();
  // HMM interval widths at n = 10^4
  const int big = 10000;
  auto data = harness::simulate(harness::Experiment::kAccuracy, big, 93);
  LaplaceSlab slab(1.0);
  auto p = make_pairs(data.y, slab);
  auto prior = ModelSelectionPrior::beta_binomial(big, 1.0, big + 1.0);
  auto tracked = hmm::q_all_tracked(prior, p.psi, p.phi);
  double hmm_width_big = 0;
  for (auto& q : tracked.q) hmm_width_big = std::max(hmm_width_big, q.real_width());

  // long division vs hmm widths at n = 500
  const int n = 500;
  auto data5 = harness::simulate(harness::Experiment::kAccuracy, n, 94);
  auto p5 = make_pairs(data5.y, slab);
  auto prior5 = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto hmm5 = hmm::q_all_tracked(prior5, p5.psi, p5.phi);
  auto ld5 = cvdv::q_all_long_division(prior5, p5.psi, p5.phi);
  double w_hmm = 0, w_ld = 0;
  for (auto& q : hmm5.q) w_hmm = std::max(w_hmm, q.real_width());
  for (auto& q : ld5) w_ld = std::max(w_ld, q.real_width());

  double dt = seconds_since(t0);
  bool ok = hmm_width_big <= 1e-5 && w_ld >= 1e3 * w_hmm;
  char buf[200];
  snprintf(buf, sizeof buf,
           "hmm width(n=1e4) = %.2e <= 1e-5; longdiv width(n=500) = %.2e >= 1e3 * %.2e, %.0fs",
           hmm_width_big, w_ld, w_hmm, dt);
  report(5, ok, buf);
  CHECK(hmm_width_big <= 1e-5);
  CHECK(w_ld >= 1e3 * w_hmm);
}

TEST_CASE("criterion 6: complexity slopes") {
  auto t0 = Clock::now();
  auto slope_for = [](const std::vector<int>& sizes, const std::string& algorithm) {
    harness::ScalingSpec spec;
    spec.algorithms = {algorithm};
    spec.sizes = sizes;
    spec.seed = 7;
    spec.time_limit_seconds = 2400;
    auto cells = harness::run_scaling(spec);
    std::vector<double> ns, ts;
    for (auto& c : cells)
      if (c.seconds > 0) {
        ns.push_back(c.n);
        ts.push_back(c.seconds);
      }
    return harness::log_log_slope(ns, ts);
  };

  double s_hmm = slope_for({1000, 2000, 4000, 8000}, "hmm");
  double s_disc = slope_for({10000, 25000, 50000, 100000}, "discrete");
  double s_cvdv = slope_for({250, 500, 1000, 2000}, "cvdv");
  double dt = seconds_since(t0);

  bool ok = s_hmm >= 1.7 && s_hmm <= 2.3 && s_disc >= 1.2 && s_disc <= 1.8 &&
            s_cvdv >= 2.6 && s_cvdv <= 3.4 && dt < 2700;
  char buf[200];
  snprintf(buf, sizeof buf,
           "hmm slope %.2f in [1.7,2.3]; discrete %.2f in [1.2,1.8]; cvdv %.2f in [2.6,3.4]; "
           "%.0fs < 2700s",
           s_hmm, s_disc, s_cvdv, dt);
  report(6, ok, buf);
  CHECK(s_hmm >= 1.7);
  CHECK(s_hmm <= 2.3);
  CHECK(s_disc >= 1.2);
  CHECK(s_disc <= 1.8);
  CHECK(s_cvdv >= 2.6);
  CHECK(s_cvdv <= 3.4);
  CHECK(dt < 2700);
}

TEST_CASE("criterion 7: representability verdicts") {
  auto t0 = Clock::now();
  namespace rep = representability;
  bool ok = true;
  for (double pp : {0.1, 0.5, 0.9, 1.0})
    for (int n = 3; n <= 12; ++n)
      ok = ok && rep::is_spike_slab(ModelSelectionPrior::binomial(n, pp)).representable;
  for (double rate : {0.5, 1.0, 5.0})
    for (int n = 3; n <= 12; ++n)
      ok = ok && rep::is_spike_slab(ModelSelectionPrior::poisson_truncated(n, rate)).representable;

  auto v3 = rep::is_spike_slab(ModelSelectionPrior::poly_tail(10, 2.0));
  bool ex3 = !v3.representable && v3.violated == rep::Condition::kHankelPsd &&
             v3.diagnostics.leading_minor2 < 0;
  auto v4 = rep::is_spike_slab(ModelSelectionPrior::sub_exponential(10, 2.0));
  bool ex4 = !v4.representable;

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ks(0.5, 5.0);
  bool round_trip = true;
  for (int i = 0; i < 100; ++i) {
    int n = 2 + static_cast<int>(rng() % 11);
    auto prior = ModelSelectionPrior::beta_binomial(n, ks(rng), ks(rng));
    round_trip = round_trip && rep::is_spike_slab(prior).representable;
  }
  double dt = seconds_since(t0);
  bool all = ok && ex3 && ex4 && round_trip && dt < 60;
  char buf[200];
  snprintf(buf, sizeof buf,
           "examples 1-2 pass=%d; example 3 flags order-2 minor=%d; example 4=%d; "
           "100 beta-binomial round trips=%d; %.1fs < 60s",
           ok, ex3, ex4, round_trip, dt);
  report(7, all, buf);
  CHECK(ok);
  CHECK(ex3);
  CHECK(ex4);
  CHECK(round_trip);
  CHECK(dt < 60);
}

TEST_CASE("criterion 8: approximation-error ordering") {
  auto t0 = Clock::now();
  const int n = 1000;
  GaussianSlab slab(1.0);

  double err_disc = 0, err_g3 = 0, err_g4 = 0, err_g5 = 0, err_vb = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto data = harness::simulate(harness::Experiment::kAccuracy, n, 1000 + seed);
    auto p = make_pairs(data.y, slab);
    auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
    auto exact = hmm::q_all(prior, p.psi, p.phi);
    std::vector<double> qe;
    for (auto& v : exact.q) qe.push_back(std::min(1.0, v.real()));

    auto grid = discretize::build_grid(n, 20, 1.0, n + 1.0);
    auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
    auto qd = discretize::q_all(dm, p.psi, p.phi);
    std::vector<double> qdv;
    for (auto& v : qd.q) qdv.push_back(std::min(1.0, v.real()));
    err_disc += baselines::approx_error(qe, qdv) / 5;

    err_g3 += baselines::approx_error(
                  qe, baselines::gibbs(data.y, 1.0, n + 1.0, slab, {1000, seed}).q) /
              5;
    err_g4 += baselines::approx_error(
                  qe, baselines::gibbs(data.y, 1.0, n + 1.0, slab, {10000, seed}).q) /
              5;
    err_g5 += baselines::approx_error(
                  qe, baselines::gibbs(data.y, 1.0, n + 1.0, slab, {100000, seed}).q) /
              5;
    err_vb += baselines::approx_error(
                  qe, baselines::vb_componentwise(data.y, 1.0, n + 1.0, slab).q) /
              5;
  }
  double dt = seconds_since(t0);
  bool ordering = err_disc < err_g5 && err_g5 < err_g3;
  bool gibbs_band = err_g4 >= 1e-3 && err_g4 <= 1e-1;
  bool vb_band = err_vb >= 3.33e-1 / 3 && err_vb <= 3.33e-1 * 3;
  bool ok = ordering && gibbs_band && vb_band && dt < 900;
  char buf[240];
  snprintf(buf, sizeof buf,
           "disc %.1e < gibbs1e5 %.1e < gibbs1e3 %.1e: %d; gibbs1e4 %.2e in [1e-3,1e-1]; "
           "vb %.2e in [0.111,1.0]; %.0fs < 900s",
           err_disc, err_g5, err_g3, ordering, err_g4, err_vb, dt);
  report(8, ok, buf);
  CHECK(ordering);
  CHECK(gibbs_band);
  CHECK(vb_band);
  CHECK(dt < 900);
}

TEST_CASE("criterion 9: experiment A1 desk-scale reproduction") {
  auto t0 = Clock::now();
  harness::ExperimentSpec spec;
  spec.experiment = harness::Experiment::kA1;
  spec.n = 1000;
  spec.replications = 20;
  spec.seed = 101;
  spec.hyper = harness::HyperSetting::kRecommended;
  spec.algorithm = "hmm";
  auto iii = harness::run_experiment(spec);

  spec.hyper = harness::HyperSetting::kSparsityDiscouraging;
  auto v = harness::run_experiment(spec);
  double dt = seconds_since(t0);

  bool l2_ok = iii.mean.l2_error >= 4.0 && iii.mean.l2_error <= 6.5;
  bool fdr_ok = iii.mean.fdr <= 0.05;
  bool tpr_ok = iii.mean.tpr >= 0.5 && iii.mean.tpr <= 0.9;
  bool v_ok = v.mean.fdr >= 0.95;
  bool ok = l2_ok && fdr_ok && tpr_ok && v_ok && dt < 600;
  char buf[240];
  snprintf(buf, sizeof buf,
           "iii: l2 %.2f in [4.0,6.5], fdr %.3f <= 0.05, tpr %.2f in [0.5,0.9]; "
           "v: fdr %.3f >= 0.95; %.0fs < 600s",
           iii.mean.l2_error, iii.mean.fdr, iii.mean.tpr, v.mean.fdr, dt);
  report(9, ok, buf);
  CHECK(l2_ok);
  CHECK(fdr_ok);
  CHECK(tpr_ok);
  CHECK(v_ok);
  CHECK(dt < 600);
}

TEST_CASE("criterion 10: gene-expression reproduction (conditional)") {
  const char* env = std::getenv("SPARSEBAYES_GDS1615_DIR");
  std::string dir = env ? env : "data";
  std::string path_a = dir + "/GDS1615_ulcerative_colitis.txt";
  std::string path_b = dir + "/GDS1615_crohns_disease.txt";
  if (!std::ifstream(path_a) || !std::ifstream(path_b)) {
    report(10, true, "SKIPPED: gene expression matrices not present under '" + dir + "'");
    return;
  }

  auto a = harness::read_matrix_file(path_a);
  auto b = harness::read_matrix_file(path_b);
  auto z = harness::z_scores(a, b);
  bool len_ok = z.size() == 22283;

  const int n = static_cast<int>(z.size());
  LaplaceSlab slab(0.5);
  auto p = make_pairs(z, slab);

  auto grid = discretize::build_grid(n, 20, 1.0, n + 1.0);
  auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
  auto qd = discretize::q_all(dm, p.psi, p.phi);
  std::set<int> sel_disc;
  for (int i = 0; i < n; ++i)
    if (qd.q[i].real() >= 0.5) sel_disc.insert(i);

  auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto qh = hmm::q_all(prior, p.psi, p.phi);
  std::set<int> sel_hmm;
  for (int i = 0; i < n; ++i)
    if (qh.q[i].real() >= 0.5) sel_hmm.insert(i);

  auto uniform_prior = ModelSelectionPrior::beta_binomial(n, 1.0, 1.0);
  auto qu = hmm::q_all(uniform_prior, p.psi, p.phi);
  long count_uniform = 0;
  for (int i = 0; i < n; ++i)
    if (qu.q[i].real() >= 0.5) ++count_uniform;

  bool counts_ok = sel_hmm.size() == 674 && count_uniform == 3169;
  bool same_sets = sel_disc == sel_hmm;
  bool ok = len_ok && counts_ok && same_sets;
  char buf[240];
  snprintf(buf, sizeof buf,
           "n=%zu (22283); selected beta(1,n+1)=%zu (674), beta(1,1)=%ld (3169); "
           "discrete==hmm sets: %d",
           z.size(), sel_hmm.size(), count_uniform, same_sets);
  report(10, ok, buf);
  CHECK(len_ok);
  CHECK(counts_ok);
  CHECK(same_sets);
}
