#include "sparsebayes/discretize.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sparsebayes/hmm.hpp"
#include "sparsebayes/slab.hpp"
#include "sparsebayes/special.hpp"

using namespace sparsebayes;
using Big = oracle::BigFloat;

namespace {

struct Pairs {
  std::vector<LogValue> psi, phi;
  std::vector<double> lpsi, lphi;
};

Pairs random_pairs(std::mt19937_64& rng, int n, const Slab& slab) {
  std::uniform_real_distribution<double> ys(-6.0, 6.0);
  Pairs p;
  for (int i = 0; i < n; ++i) {
    double y = ys(rng);
    p.psi.push_back(slab.psi(y));
    p.phi.push_back(LogValue::from_log(log_normal_pdf(y)));
    p.lpsi.push_back(p.psi.back().log());
    p.lphi.push_back(p.phi.back().log());
  }
  return p;
}

}  // namespace

TEST_CASE("grid formulas") {
  auto g = discretize::build_grid(100, 20);
  CHECK(g.k == 421);
  CHECK(g.delta == doctest::Approx(M_PI / 842.0).epsilon(1e-15));
  CHECK(g.beta.front() == doctest::Approx(g.delta / 2).epsilon(1e-15));
  CHECK(g.beta.back() == doctest::Approx(M_PI / 2 - g.delta / 2).epsilon(1e-13));
  CHECK(g.alpha.front() > 0.0);
  CHECK(g.alpha.back() < 1.0);
  for (int j = 1; j < g.k; ++j) CHECK(g.alpha[j] > g.alpha[j - 1]);

  auto gb = discretize::build_grid(100, 20, 1.0, 101.0);
  CHECK(gb.n_eff == doctest::Approx(201.0));
  CHECK(gb.k == 631);

  // stored points reproduce their defining formulas exactly
  for (int j = 1; j <= g.k; ++j) {
    double beta = (2 * j - 1) * g.delta / 2;
    CHECK(g.beta[j - 1] == beta);
    double s = std::sin(beta);
    CHECK(std::abs(g.alpha[j - 1] - s * s) <=
          std::ldexp(1.0, std::ilogb(s * s) - 52));  // one ulp
  }
}

TEST_CASE("discretized mixing masses") {
  auto g = discretize::build_grid(50, 5);

  // Jeffreys prior is uniform in the arcsine parametrization
  auto dj = discretize::discretize_mixing(MixingPrior::beta(0.5, 0.5), g);
  for (auto& w : dj.log_w)
    CHECK(w.log() == doctest::Approx(-std::log(static_cast<double>(g.k))).epsilon(1e-12));

  // Lebesgue: bin mass is the alpha-length of the bin
  auto du = discretize::discretize_mixing(MixingPrior::beta(1.0, 1.0), g);
  for (int j = 1; j <= g.k; ++j) {
    double lo = std::pow(std::sin((j - 1) * g.delta), 2);
    double hi = j == g.k ? 1.0 : std::pow(std::sin(j * g.delta), 2);
    CHECK(du.log_w[j - 1].real() == doctest::Approx(hi - lo).epsilon(1e-10));
  }

  // custom density route agrees with the closed form
  auto dc = discretize::discretize_mixing(
      MixingPrior::custom([](double a) {
        return std::exp(2 * std::log1p(-a) - log_beta(1.0, 3.0));
      }),
      g);
  auto db = discretize::discretize_mixing(MixingPrior::beta(1.0, 3.0), g);
  for (int j = 0; j < g.k; ++j) {
    // absolute comparison: bins near alpha = 1 carry masses below the
    // cancellation floor of the closed-form route
    CHECK(std::abs(dc.log_w[j].real() - db.log_w[j].real()) <= 1e-12);
  }

  for (auto* dm : {&dj, &du, &db}) {
    LogValue total = LogValue::zero();
    for (auto& w : dm->log_w) total += w;
    CHECK(std::abs(total.log()) <= 1e-12);
  }
}

TEST_CASE("beta fast-forward weights") {
  auto g = discretize::build_grid(50, 5, 0.5, 0.5);
  auto d0 = discretize::beta_fastforward(0.5, 0.5, g);
  for (auto& w : d0.log_w)
    CHECK(w.log() == doctest::Approx(-std::log(static_cast<double>(g.k))).epsilon(1e-13));

  auto g1 = discretize::build_grid(50, 5, 1.0, 1.0);
  auto d1 = discretize::beta_fastforward(1.0, 1.0, g1);
  // proportional to sqrt(alpha (1 - alpha))
  double c0 = d1.log_w[0].log() -
              0.5 * (g1.log_alpha[0] + g1.log_1m_alpha[0]);
  for (int j = 1; j < g1.k; ++j) {
    double c = d1.log_w[j].log() - 0.5 * (g1.log_alpha[j] + g1.log_1m_alpha[j]);
    CHECK(c == doctest::Approx(c0).epsilon(1e-12));
  }

  LogValue total = LogValue::zero();
  for (auto& w : d1.log_w) total += w;
  CHECK(std::abs(total.log()) <= 1e-12);

  CHECK_THROWS_AS(discretize::beta_fastforward(1.0, 50.0, g1), DomainError);
}

TEST_CASE("single grid point reduces to the fixed-alpha posterior") {
  discretize::Grid g;
  g.n = 4;
  g.accuracy_m = 1;
  g.k = 1;
  g.delta = M_PI / 2;
  double beta = M_PI / 6;  // alpha = 1/4
  g.beta = {beta};
  g.alpha = {std::pow(std::sin(beta), 2)};
  g.log_alpha = {2 * std::log(std::sin(beta))};
  g.log_1m_alpha = {2 * std::log(std::cos(beta))};
  g.n_eff = 4;
  discretize::DiscreteMixing dm;
  dm.grid = g;
  dm.log_w = {LogValue::one()};

  std::mt19937_64 rng(3);
  LaplaceSlab slab(1.0);
  auto p = random_pairs(rng, 4, slab);
  auto r = discretize::q_all(dm, p.psi, p.phi);
  double a = g.alpha[0];
  for (int i = 0; i < 4; ++i) {
    double expect = a * p.psi[i].real() / ((1 - a) * p.phi[i].real() + a * p.psi[i].real());
    CHECK(r.q[i].real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("oracle comparison stays within the epsilon-implied bound") {
  std::mt19937_64 rng(2025);
  for (int rep = 0; rep < 4; ++rep) {
    int n = 6 + static_cast<int>(rng() % 9);
    double kappa = 1.0, lambda = rep % 2 == 0 ? 1.0 : n + 1.0;
    GaussianSlab slab(1.0);
    auto p = random_pairs(rng, n, slab);

    auto grid = discretize::build_grid(n, 20, kappa, lambda);
    auto dm = discretize::beta_fastforward(kappa, lambda, grid);
    auto r = discretize::q_all(dm, p.psi, p.phi);
    auto rep_eps = discretize::epsilon_bound(MixingPrior::beta(kappa, lambda), dm);

    auto ref = oracle::brute_force_mixture(kappa, lambda, p.lpsi, p.lphi);
    for (int i = 0; i < n; ++i) {
      double err = std::abs(r.q[i].real() - static_cast<double>(ref.q[i]));
      CHECK(err <= rep_eps.q_error_bound(r.q[i].real()) + 1e-12);
    }
  }
}

TEST_CASE("epsilon bound internals") {
  int n = 200;
  auto grid = discretize::build_grid(n, 20, 1.0, n + 1.0);
  auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
  auto rep = discretize::epsilon_bound(MixingPrior::beta(1.0, n + 1.0), dm);
  CHECK(rep.fastforward_mode);
  CHECK(rep.raw_epsilon > 0);
  CHECK(rep.epsilon ==
        doctest::Approx(2 * rep.raw_epsilon / (1 - rep.raw_epsilon)).epsilon(1e-14));

  // doubling m tightens the bound
  auto grid40 = discretize::build_grid(n, 40, 1.0, n + 1.0);
  auto dm40 = discretize::beta_fastforward(1.0, n + 1.0, grid40);
  auto rep40 = discretize::epsilon_bound(MixingPrior::beta(1.0, n + 1.0), dm40);
  CHECK(rep40.epsilon <= rep.epsilon);

  // plain mode for a slowly varying density
  auto gplain = discretize::build_grid(n, 20);
  auto dplain = discretize::discretize_mixing(MixingPrior::beta(2.0, 3.0), gplain);
  auto rp = discretize::epsilon_bound(MixingPrior::beta(2.0, 3.0), dplain);
  CHECK_FALSE(rp.fastforward_mode);
  CHECK(rp.epsilon == rp.raw_epsilon);
  CHECK(rp.epsilon < 0.05);
}

TEST_CASE("error against the exact algorithm shrinks as m doubles") {
  const int n = 500;
  GaussianSlab slab(1.0);
  std::mt19937_64 rng(500);
  std::vector<double> y(n);
  std::uniform_real_distribution<double> ys(-4.0, 7.0);
  for (auto& v : y) v = ys(rng);
  Pairs p;
  for (double yi : y) {
    p.psi.push_back(slab.psi(yi));
    p.phi.push_back(LogValue::from_log(log_normal_pdf(yi)));
  }
  auto prior = ModelSelectionPrior::beta_binomial(n, 1.0, n + 1.0);
  auto exact = hmm::q_all(prior, p.psi, p.phi);

  double prev_err = std::numeric_limits<double>::infinity();
  for (int m : {20, 40, 80}) {
    auto grid = discretize::build_grid(n, m, 1.0, n + 1.0);
    auto dm = discretize::beta_fastforward(1.0, n + 1.0, grid);
    auto r = discretize::q_all(dm, p.psi, p.phi);
    double err = 0;
    for (int i = 0; i < n; ++i)
      err = std::max(err, std::abs(r.q[i].real() - exact.q[i].real()));
    // nonincreasing up to the double-precision noise floor, which this
    // comparison sits on once the mathematical error drops below ~1e-11
    CHECK(err <= prev_err + 1e-11);
    prev_err = err;
  }
}

TEST_CASE("serial and parallel agree bitwise; tracked contains plain") {
  std::mt19937_64 rng(55);
  GaussianSlab slab(1.0);
  auto p = random_pairs(rng, 300, slab);
  auto grid = discretize::build_grid(300, 10, 1.0, 301.0);
  auto dm = discretize::beta_fastforward(1.0, 301.0, grid);
  auto a = discretize::q_all(dm, p.psi, p.phi, {true});
  auto b = discretize::q_all(dm, p.psi, p.phi, {false});
  CHECK(a.log_marginal.log() == b.log_marginal.log());
  for (int i = 0; i < 300; ++i) CHECK(a.q[i].log() == b.q[i].log());

  auto t = discretize::q_all_tracked(dm, p.psi, p.phi);
  for (int i = 0; i < 300; ++i) CHECK(t.q[i].contains(a.q[i]));
}
