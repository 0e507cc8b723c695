#include "sparsebayes/baselines.hpp"

#include <cmath>

#include "doctest.h"
#include "sparsebayes/harness.hpp"
#include "sparsebayes/hmm.hpp"
#include "sparsebayes/philox.hpp"
#include "sparsebayes/posterior.hpp"
#include "sparsebayes/special.hpp"

using namespace sparsebayes;

TEST_CASE("philox known-answer vectors") {
  // Random123 published vectors for philox4x32-10
  auto zero = PhiloxRng::block({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  auto ff = PhiloxRng::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             {0xffffffffu, 0xffffffffu});
  CHECK(ff[0] == 0x408f276du);
  CHECK(ff[1] == 0x41c83b0eu);
  CHECK(ff[2] == 0xa20bc7c6u);
  CHECK(ff[3] == 0x6d5451fdu);
}

TEST_CASE("philox draws behave") {
  PhiloxRng a(42), b(42), c(43);
  bool same = true, differ = false;
  for (int i = 0; i < 1000; ++i) {
    double x = a.next_double();
    same = same && x == b.next_double();
    differ = differ || x != c.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(same);
  CHECK(differ);

  // gamma and beta moments, loose sanity bounds
  PhiloxRng g(7);
  double mean = 0;
  const int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) mean += g.next_gamma(3.0);
  mean /= kDraws;
  CHECK(std::abs(mean - 3.0) < 0.06);
  double bmean = 0;
  for (int i = 0; i < kDraws; ++i) bmean += g.next_beta(2.0, 6.0);
  bmean /= kDraws;
  CHECK(std::abs(bmean - 0.25) < 0.01);
}

TEST_CASE("gibbs sampler is reproducible and in the right neighbourhood") {
  auto data = harness::simulate(harness::Experiment::kAccuracy, 100, 5);
  GaussianSlab slab(1.0);

  auto r1 = baselines::gibbs(data.y, 1.0, 101.0, slab, {10000, 99});
  auto r2 = baselines::gibbs(data.y, 1.0, 101.0, slab, {10000, 99});
  CHECK(r1.q == r2.q);

  auto exact = compute(MixingPrior::beta(1.0, 101.0), slab, data.y,
                       {.algorithm = Algorithm::kHmm});
  double err = baselines::approx_error(exact.q, r1.q);
  CHECK(err > 1e-4);
  CHECK(err < 0.2);
}

TEST_CASE("gibbs targets the fixed-alpha posterior under a degenerate prior") {
  auto data = harness::simulate(harness::Experiment::kAccuracy, 20, 11);
  GaussianSlab slab(1.0);
  const double alpha = 0.2, conc = 1e9;
  auto r = baselines::gibbs(data.y, conc * alpha, conc * (1 - alpha), slab, {200000, 3});
  for (int i = 0; i < 20; ++i) {
    double lbf = slab.psi(data.y[i]).log() - log_normal_pdf(data.y[i]);
    double t = std::log(alpha / (1 - alpha)) + lbf;
    double expect = 1.0 / (1.0 + std::exp(-t));
    CHECK(std::abs(r.q[i] - expect) < 0.02);
  }
}

TEST_CASE("gibbs error shrinks with iterations") {
  auto data = harness::simulate(harness::Experiment::kAccuracy, 200, 21);
  GaussianSlab slab(1.0);
  auto exact = compute(MixingPrior::beta(1.0, 201.0), slab, data.y,
                       {.algorithm = Algorithm::kHmm});
  double few = 0, many = 0;
  for (uint64_t seed : {1u, 2u, 3u}) {
    few += baselines::approx_error(
        exact.q, baselines::gibbs(data.y, 1.0, 201.0, slab, {1000, seed}).q);
    many += baselines::approx_error(
        exact.q, baselines::gibbs(data.y, 1.0, 201.0, slab, {100000, seed}).q);
  }
  CHECK(many < few);
}

TEST_CASE("variational bayes is deterministic with a monotone objective") {
  auto data = harness::simulate(harness::Experiment::kAccuracy, 300, 8);
  GaussianSlab slab(1.0);
  std::vector<double> trace;
  auto r = baselines::vb_componentwise(data.y, 1.0, 301.0, slab, {}, &trace);
  CHECK(r.converged);
  REQUIRE(trace.size() >= 2);
  for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-10);

  auto r2 = baselines::vb_componentwise(data.y, 1.0, 301.0, slab);
  CHECK(r.q == r2.q);
  for (double q : r.q) {
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("approx_error") {
  CHECK(baselines::approx_error({0.1, 0.9}, {0.1, 0.9}) == 0.0);
  CHECK(baselines::approx_error({0.0, 1.0}, {1.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(baselines::approx_error({0.1}, {0.1, 0.2}), DomainError);
}
