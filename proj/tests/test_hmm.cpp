#include "sparsebayes/hmm.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sparsebayes/cvdv.hpp"
#include "sparsebayes/harness.hpp"
#include "sparsebayes/slab.hpp"
#include "sparsebayes/special.hpp"

using namespace sparsebayes;
using Big = oracle::BigFloat;

namespace {

struct Pairs {
  std::vector<LogValue> psi, phi;
};

Pairs make_pairs(const std::vector<double>& y, const Slab& slab) {
  Pairs p;
  for (double yi : y) {
    p.psi.push_back(slab.psi(yi));
    p.phi.push_back(LogValue::from_log(log_normal_pdf(yi)));
  }
  return p;
}

Pairs random_pairs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ys(-6.0, 6.0);
  std::vector<double> y(n);
  for (auto& v : y) v = ys(rng);
  LaplaceSlab slab(1.0);
  return make_pairs(y, slab);
}

}  // namespace

TEST_CASE("n = 1 closed forms") {
  auto prior = ModelSelectionPrior::beta_binomial(1, 1.5, 2.5);
  LaplaceSlab slab(1.0);
  auto p = make_pairs({0.9}, slab);
  auto r = hmm::q_all(prior, p.psi, p.phi);
  double pi1 = prior.pmf(1).real();
  double expect_q = pi1 * p.psi[0].real() /
                    ((1 - pi1) * p.phi[0].real() + pi1 * p.psi[0].real());
  CHECK(r.q[0].real() == doctest::Approx(expect_q).epsilon(1e-13));

  auto t = hmm::forward_backward(prior, p.psi, p.phi);
  CHECK(hmm::forward_state(t, prior, p.psi, p.phi, 1, 0, 0).real() ==
        doctest::Approx((1 - pi1) * p.phi[0].real()).epsilon(1e-13));
  CHECK(hmm::forward_state(t, prior, p.psi, p.phi, 1, 1, 1).real() ==
        doctest::Approx(pi1 * p.psi[0].real()).epsilon(1e-13));
}

TEST_CASE("backward terminal column is one and joint sums are constant") {
  std::mt19937_64 rng(3);
  auto prior = ModelSelectionPrior::poisson_truncated(20, 1.5);
  auto p = random_pairs(rng, 20);
  auto t = hmm::forward_backward(prior, p.psi, p.phi);
  for (int m = 0; m <= 20; ++m) CHECK(t.backward[20][m].log() == 0.0);

  // sum_m forward[i][m] backward[i][m] = Q_n for every i, and the posterior
  // over states at any i is normalized
  for (int i = 1; i <= 20; ++i) {
    LogValue s = LogValue::zero();
    for (int m = 0; m <= i; ++m) s += t.forward[i][m] * t.backward[i][m];
    CHECK(std::abs(s.log() - t.log_marginal.log()) <= 1e-12);
  }
}

TEST_CASE("hand-computable backward column at n = 2") {
  auto prior = ModelSelectionPrior::beta_binomial(2, 1.0, 1.0);
  LaplaceSlab slab(0.8);
  auto p = make_pairs({0.4, -1.1}, slab);
  auto t = hmm::forward_backward(prior, p.psi, p.phi);
  // p(Y_2 | M_1 = m) = sum_b Pi(B_2 = b | M_1 = m) dens_b(Y_2)
  for (int m = 0; m <= 1; ++m) {
    double expect = prior.transition(1, m, 0).real() * p.phi[1].real() +
                    prior.transition(1, m, 1).real() * p.psi[1].real();
    CHECK(t.backward[1][m].real() == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("agreement with the polynomial algorithm and the oracle") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    int n = 2 + static_cast<int>(rng() % 13);
    auto p = random_pairs(rng, n);
    auto prior = rep % 2 == 0 ? ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0)
                              : ModelSelectionPrior::poly_tail(n, 2.0);
    auto r = hmm::q_all(prior, p.psi, p.phi);

    std::vector<Big> pmf(n + 1);
    std::vector<double> lpsi(n), lphi(n);
    for (int s = 0; s <= n; ++s) pmf[s] = exp(Big(prior.pmf(s).log()));
    for (int i = 0; i < n; ++i) {
      lpsi[i] = p.psi[i].log();
      lphi[i] = p.phi[i].log();
    }
    auto ref = oracle::brute_force_q(pmf, lpsi, lphi);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(r.q[i].real() - static_cast<double>(ref.q[i])) <= 1e-10);

    auto q_poly = cvdv::q_all(prior, p.psi, p.phi);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(r.q[i].real() - q_poly[i].real()) <= 1e-10);
    CHECK(std::abs(hmm::marginal_likelihood(prior, p.psi, p.phi).log() -
                   cvdv::marginal_likelihood(prior, p.psi, p.phi).log()) <= 1e-10);
  }
}

TEST_CASE("marginal likelihood matches the polynomial route at n = 200") {
  std::mt19937_64 rng(23);
  auto p = random_pairs(rng, 200);
  auto prior = ModelSelectionPrior::beta_binomial(200, 1.0, 201.0);
  CHECK(std::abs(hmm::marginal_likelihood(prior, p.psi, p.phi).log() -
                 cvdv::marginal_likelihood(prior, p.psi, p.phi).log()) <= 1e-10);
}

TEST_CASE("degenerate priors") {
  std::mt19937_64 rng(29);
  auto p = random_pairs(rng, 7);
  auto all_spike = ModelSelectionPrior::from_weights({1, 0, 0, 0, 0, 0, 0, 0});
  auto r = hmm::q_all(all_spike, p.psi, p.phi);
  double prod = 0;
  for (auto& v : p.phi) prod += v.log();
  CHECK(r.log_marginal.log() == doctest::Approx(prod).epsilon(1e-12));
  for (auto& q : r.q) CHECK(q.is_zero());

  std::vector<double> w(8, 0.0);
  w[7] = 1.0;
  auto all_slab = ModelSelectionPrior::from_weights(w);
  auto r2 = hmm::q_all(all_slab, p.psi, p.phi);
  for (auto& q : r2.q) CHECK(q.real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exchangeable data gives equal q") {
  auto prior = ModelSelectionPrior::beta_binomial(30, 1.0, 31.0);
  LaplaceSlab slab(1.0);
  std::vector<double> y(30, 1.7);
  auto p = make_pairs(y, slab);
  auto r = hmm::q_all(prior, p.psi, p.phi);
  for (int i = 1; i < 30; ++i)
    CHECK(std::abs(r.q[i].real() - r.q[0].real()) <= 1e-12);
}

TEST_CASE("marginal likelihood is permutation invariant") {
  std::mt19937_64 rng(31);
  auto p = random_pairs(rng, 25);
  auto prior = ModelSelectionPrior::poisson_truncated(25, 2.0);
  double q0 = hmm::marginal_likelihood(prior, p.psi, p.phi).log();
  std::vector<LogValue> psi = p.psi, phi = p.phi;
  std::mt19937_64 shuffle_rng(1);
  for (int i = 24; i > 0; --i) {
    int j = static_cast<int>(shuffle_rng() % (i + 1));
    std::swap(psi[i], psi[j]);
    std::swap(phi[i], phi[j]);
  }
  CHECK(std::abs(hmm::marginal_likelihood(prior, psi, phi).log() - q0) <= 1e-12);
}

TEST_CASE("serial, parallel, retained and streaming all agree bitwise") {
  std::mt19937_64 rng(37);
  auto p = random_pairs(rng, 120);
  auto prior = ModelSelectionPrior::beta_binomial(120, 1.0, 121.0);

  hmm::Options base;
  base.parallel = false;
  base.trellis = hmm::Options::Trellis::kRetained;
  auto ref = hmm::q_all(prior, p.psi, p.phi, base);

  for (bool parallel : {false, true}) {
    for (auto mode : {hmm::Options::Trellis::kRetained, hmm::Options::Trellis::kStreaming}) {
      hmm::Options o;
      o.parallel = parallel;
      o.trellis = mode;
      auto r = hmm::q_all(prior, p.psi, p.phi, o);
      CHECK(r.log_marginal.log() == ref.log_marginal.log());
      for (int i = 0; i < 120; ++i) CHECK(r.q[i].log() == ref.q[i].log());
    }
  }
}

TEST_CASE("tracked intervals contain the plain values") {
  std::mt19937_64 rng(41);
  auto p = random_pairs(rng, 60);
  auto prior = ModelSelectionPrior::beta_binomial(60, 1.0, 61.0);
  auto plain = hmm::q_all(prior, p.psi, p.phi);
  auto tracked = hmm::q_all_tracked(prior, p.psi, p.phi);
  double max_width = 0;
  for (int i = 0; i < 60; ++i) {
    CHECK(tracked.q[i].contains(plain.q[i]));
    max_width = std::max(max_width, tracked.q[i].real_width());
  }
  CHECK(max_width <= 1e-10);
  CHECK(tracked.log_marginal.contains(plain.log_marginal));
}

TEST_CASE("runtime grows quadratically") {
  // smoke check on small sizes; the full regression lives in the acceptance suite
  std::vector<double> sizes, times;
  for (int n : {400, 800, 1600}) {
    std::mt19937_64 rng(n);
    auto p = random_pairs(rng, n);
    auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
    auto t0 = std::chrono::steady_clock::now();
    hmm::q_all(prior, p.psi, p.phi);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sizes.push_back(n);
    times.push_back(std::max(dt, 1e-6));
  }
  double slope = harness::log_log_slope(sizes, times);
  CHECK(slope > 1.2);
  CHECK(slope < 3.0);
}
