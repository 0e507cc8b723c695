#include "sparsebayes/prior.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "sparsebayes/special.hpp"

using namespace sparsebayes;

TEST_CASE("pmf construction") {
  auto bb = ModelSelectionPrior::beta_binomial(2, 1.0, 1.0);
  for (int s = 0; s <= 2; ++s)
    CHECK(bb.pmf(s).real() == doctest::Approx(1.0 / 3).epsilon(1e-13));

  auto bin = ModelSelectionPrior::binomial(1, 0.3);
  CHECK(bin.pmf(0).real() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(bin.pmf(1).real() == doctest::Approx(0.3).epsilon(1e-14));

  auto poi = ModelSelectionPrior::poisson_truncated(2, 1.0);
  CHECK(poi.pmf(0).real() == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(poi.pmf(1).real() == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(poi.pmf(2).real() == doctest::Approx(0.2).epsilon(1e-13));

  for (auto& p : {ModelSelectionPrior::poly_tail(9, 2.0),
                  ModelSelectionPrior::sub_exponential(9, 2.0),
                  ModelSelectionPrior::from_weights({0.0, 1.0, 2.0, 0.0, 1.0})}) {
    double total = 0;
    for (int s = 0; s <= p.n(); ++s) total += p.pmf(s).real();
    CHECK(std::abs(std::log(total)) <= 1e-12);
  }

  CHECK_THROWS_AS(ModelSelectionPrior::poly_tail(5, 1.0), DomainError);
  CHECK_THROWS_AS(ModelSelectionPrior::from_weights({0.0, 0.0}), DomainError);
  CHECK(ModelSelectionPrior::binomial(4, 1.0).pmf(4).real() == 1.0);
}

TEST_CASE("v-table recursion and reconstruction") {
  auto any = ModelSelectionPrior::poisson_truncated(1, 2.0);
  const VTable& v1 = any.v_table();
  CHECK(v1.at(1, 0).log() == any.pmf(0).log());
  CHECK(v1.at(1, 1).log() == any.pmf(1).log());

  auto bb = ModelSelectionPrior::beta_binomial(2, 1.0, 1.0);
  const VTable& v2 = bb.v_table();
  CHECK(v2.at(1, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(v2.at(1, 1).real() == doctest::Approx(0.5).epsilon(1e-13));

  // total probability along every row
  auto p = ModelSelectionPrior::poly_tail(17, 2.5);
  const VTable& v = p.v_table();
  for (int i = 0; i <= 17; ++i) {
    double total = 0;
    for (int m = 0; m <= i; ++m)
      total += std::exp(log_binomial(i, m) + v.at(i, m).log());
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transition law") {
  auto bb = ModelSelectionPrior::beta_binomial(6, 1.0, 1.0);
  CHECK(bb.transition(0, 0, 1).real() == doctest::Approx(0.5).epsilon(1e-14));

  int n = 10;
  auto cv = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  CHECK(cv.transition(0, 0, 1).real() == doctest::Approx(1.0 / (n + 2)).epsilon(1e-13));
  CHECK(cv.transition(1, 0, 1).real() == doctest::Approx(1.0 / (n + 3)).epsilon(1e-13));

  // normalization of every conditional
  auto poi = ModelSelectionPrior::poisson_truncated(12, 1.5);
  for (int i = 0; i < 12; ++i)
    for (int m = 0; m <= i; ++m) {
      double total = poi.transition(i, m, 0).real() + poi.transition(i, m, 1).real();
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("closed-form transitions match the v-table") {
  for (int n : {20, 200}) {
    auto bb = ModelSelectionPrior::beta_binomial(n, 2.5, 0.5 * n);
    VTable v(bb.log_pmf());
    for (int i = 0; i < n; ++i)
      for (int m = 0; m <= i; ++m)
        for (int b : {0, 1}) {
          double closed = bb.transition(i, m, b).log();
          double table = (v.at(i + 1, m + b) / v.at(i, m)).log();
          CHECK(std::abs(closed - table) <= 1e-12);
        }
  }
}

TEST_CASE("transition products telescope to subset probabilities") {
  const int n = 16;
  auto p = ModelSelectionPrior::poisson_truncated(n, 0.8);
  for (unsigned mask = 0; mask < (1u << n); mask += 37) {
    LogValue prod = LogValue::one();
    int m = 0;
    for (int i = 0; i < n; ++i) {
      int b = (mask >> i) & 1;
      prod *= p.transition(i, m, b);
      m += b;
    }
    double expect = p.pmf(m).log() - log_binomial(n, m);
    CHECK(prod.log() == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("zero-weight sparsity levels prune states") {
  // hard cap: at most one nonzero
  auto capped = ModelSelectionPrior::from_weights({1.0, 1.0, 0.0, 0.0});
  CHECK(capped.transition(1, 1, 1).is_zero());
  CHECK(capped.transition(2, 2, 0).is_zero());  // unreachable prefix
}

TEST_CASE("custom mixing prior integrates and induces the matching pmf") {
  auto beta23 = MixingPrior::custom([](double a) {
    return std::exp(std::log(a) + std::log1p(-a) * 2 - log_beta(2.0, 3.0));
  });
  auto induced = beta23.induced_prior(8);
  auto direct = ModelSelectionPrior::beta_binomial(8, 2.0, 3.0);
  for (int s = 0; s <= 8; ++s)
    CHECK(induced.pmf(s).log() == doctest::Approx(direct.pmf(s).log()).epsilon(1e-8));

  CHECK_THROWS_AS(MixingPrior::custom([](double) { return 2.0; }), DomainError);
}
