#include "sparsebayes/discretize.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <limits>

#include "sparsebayes/slab.hpp"
#include "sparsebayes/special.hpp"

namespace sparsebayes::discretize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Scalar>
std::vector<Scalar> lift(const std::vector<LogValue>& v) {
  return std::vector<Scalar>(v.begin(), v.end());
}
template <>
std::vector<LogValue> lift<LogValue>(const std::vector<LogValue>& v) {
  return v;
}

Grid build_grid_impl(int n, int m, double n_eff) {
  if (n < 1 || m < 1 || !(n_eff >= 1)) throw DomainError("build_grid: invalid parameters");
  Grid g;
  g.n = n;
  g.accuracy_m = m;
  g.n_eff = n_eff;
  g.k = 2 * (m + 1) * static_cast<int>(std::ceil(std::sqrt(n_eff))) + 1;
  g.delta = M_PI / (2.0 * g.k);
  g.beta.resize(g.k);
  g.alpha.resize(g.k);
  g.log_alpha.resize(g.k);
  g.log_1m_alpha.resize(g.k);
  std::vector<double> log_sin(g.k);
  for (int j = 1; j <= g.k; ++j) {
    double beta = (2 * j - 1) * g.delta / 2;
    double s = std::sin(beta);
    g.beta[j - 1] = beta;
    g.alpha[j - 1] = s * s;
    log_sin[j - 1] = std::log(s);
  }
  for (int j = 1; j <= g.k; ++j) {
    g.log_alpha[j - 1] = 2 * log_sin[j - 1];
    g.log_1m_alpha[j - 1] = 2 * log_sin[g.k - j];  // cos(beta_j) = sin(beta_{k+1-j})
  }
  return g;
}

std::vector<LogValue> normalize_logs(std::vector<double> logw) {
  double mx = -kInf;
  for (double w : logw) mx = std::max(mx, w);
  if (mx == -kInf) throw DomainError("discretize: zero prior mass on the grid");
  double sum = 0;
  for (double w : logw) sum += std::exp(w - mx);
  double total = mx + std::log(sum);
  std::vector<LogValue> out(logw.size());
  for (size_t j = 0; j < logw.size(); ++j) out[j] = LogValue::from_log(logw[j] - total);
  return out;
}

}  // namespace

Grid build_grid(int n, int m) { return build_grid_impl(n, m, static_cast<double>(n)); }

Grid build_grid(int n, int m, double kappa, double lambda) {
  if (!(kappa >= 0.5) || !(lambda >= 0.5))
    throw DomainError("build_grid: fast-forward requires kappa, lambda >= 1/2");
  return build_grid_impl(n, m, n + kappa + lambda - 1);
}

DiscreteMixing discretize_mixing(const MixingPrior& mix, const Grid& grid) {
  DiscreteMixing dm;
  dm.grid = grid;
  const int k = grid.k;
  std::vector<double> logw(k);
  if (mix.kind() == MixingPrior::Kind::kBeta) {
    // Telescoping regularized incomplete beta differences over the bin edges.
    double prev = 0.0;
    for (int j = 1; j <= k; ++j) {
      double edge = j == k ? 1.0 : std::pow(std::sin(j * grid.delta), 2);
      double cur = boost::math::ibeta(mix.kappa(), mix.lambda(), edge);
      double w = std::max(cur - prev, 0.0);
      logw[j - 1] = std::log(w);
      prev = cur;
    }
    dm.kappa = mix.kappa();
    dm.lambda = mix.lambda();
  } else {
    auto log_gamma_density = [&mix](double beta) {
      double sa = std::sin(beta), ca = std::cos(beta);
      double d = mix.density(sa * sa);
      if (d <= 0) return -kInf;
      return std::log(2.0) + std::log(d) + std::log(sa) + std::log(ca);
    };
    // Bin masses only need accuracy relative to the total mass; a callback
    // evaluated near alpha = 1 cannot deliver high relative precision on
    // bins carrying negligible weight.
    std::vector<double> bin_err(k);
    for (int j = 1; j <= k; ++j) {
      double lo = (j - 1) * grid.delta, hi = j * grid.delta;
      logw[j - 1] = quadrature::log_integral_logf(log_gamma_density, lo, hi, {},
                                                  QuadratureConfig{1e-12, 12}, &bin_err[j - 1]);
    }
    double mx = -kInf;
    for (double w : logw) mx = std::max(mx, w);
    double total = 0, abs_err = 0;
    for (int j = 0; j < k; ++j) {
      double w = std::exp(logw[j] - mx);
      total += w;
      abs_err += w * bin_err[j];
    }
    if (abs_err / total > 1e-9)
      throw NumericalError("discretize_mixing: bin quadrature too inaccurate",
                           abs_err / total);
  }
  dm.log_w = normalize_logs(std::move(logw));
  return dm;
}

DiscreteMixing beta_fastforward(double kappa, double lambda, const Grid& grid) {
  if (!(kappa >= 0.5) || !(lambda >= 0.5))
    throw DomainError("beta_fastforward: kappa, lambda >= 1/2 required");
  if (std::abs(grid.n_eff - (grid.n + kappa + lambda - 1)) > 1e-9)
    throw DomainError("beta_fastforward: grid was not built for these hyper-parameters");
  std::vector<double> logw(grid.k);
  for (int j = 0; j < grid.k; ++j)
    logw[j] = (kappa - 0.5) * grid.log_alpha[j] + (lambda - 0.5) * grid.log_1m_alpha[j];
  DiscreteMixing dm;
  dm.grid = grid;
  dm.log_w = normalize_logs(std::move(logw));
  dm.fastforward = true;
  dm.kappa = kappa;
  dm.lambda = lambda;
  return dm;
}

namespace {

template <typename Scalar>
void q_all_impl(const DiscreteMixing& dm, const std::vector<LogValue>& log_psi,
                const std::vector<LogValue>& log_phi, bool parallel,
                std::vector<Scalar>& q_out, Scalar& marginal_out) {
  const Grid& grid = dm.grid;
  const int n = grid.n, k = grid.k;
  if (static_cast<int>(log_psi.size()) != n || log_psi.size() != log_phi.size())
    throw DomainError("discretize: data length does not match the grid");

  auto psi = lift<Scalar>(log_psi);
  auto phi = lift<Scalar>(log_phi);
  std::vector<LogValue> la(k), l1a(k);
  for (int j = 0; j < k; ++j) {
    la[j] = LogValue::from_log(grid.log_alpha[j]);
    l1a[j] = LogValue::from_log(grid.log_1m_alpha[j]);
  }

  // per-point joint weight w_j * prod_i ((1-a_j) phi_i + a_j psi_i)
  std::vector<Scalar> joint(k, Scalar(LogValue::zero()));
#pragma omp parallel for schedule(static) if (parallel && n > 256)
  for (int j = 0; j < k; ++j) {
    if (dm.log_w[j].is_zero()) continue;
    Scalar lik{LogValue::one()};
    Scalar a{la[j]}, b{l1a[j]};
    for (int i = 0; i < n; ++i) lik *= b * phi[i] + a * psi[i];
    joint[j] = Scalar(dm.log_w[j]) * lik;
  }
  Scalar q_n{LogValue::zero()};
  for (int j = 0; j < k; ++j) q_n += joint[j];
  marginal_out = q_n;

  q_out.assign(n, Scalar(LogValue::zero()));
#pragma omp parallel for schedule(static) if (parallel && n > 256)
  for (int i = 0; i < n; ++i) {
    Scalar acc{LogValue::zero()};
    for (int j = 0; j < k; ++j) {
      if (dm.log_w[j].is_zero()) continue;
      Scalar slab_part = Scalar(la[j]) * psi[i];
      Scalar mix = Scalar(l1a[j]) * phi[i] + slab_part;
      acc += joint[j] * slab_part / mix;
    }
    q_out[i] = acc / q_n;
  }
}

}  // namespace

Result q_all(const DiscreteMixing& dm, const std::vector<LogValue>& log_psi,
             const std::vector<LogValue>& log_phi, Options opt) {
  Result r;
  q_all_impl<LogValue>(dm, log_psi, log_phi, opt.parallel, r.q, r.log_marginal);
  return r;
}

TrackedResult q_all_tracked(const DiscreteMixing& dm, const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt) {
  TrackedResult r;
  q_all_impl<LogInterval>(dm, log_psi, log_phi, opt.parallel, r.q, r.log_marginal);
  for (LogInterval& q : r.q) {
    double hi = std::min(q.hi(), 0.0);
    double lo = std::min(q.lo(), hi);
    q = LogInterval::from_log_bounds(lo, hi, q.partial());
  }
  return r;
}

EpsilonReport epsilon_bound(const MixingPrior& mix, const DiscreteMixing& dm) {
  const Grid& grid = dm.grid;
  const int n = grid.n, k = grid.k;
  EpsilonReport rep;
  rep.fastforward_mode = dm.fastforward;

  double eps_raw = 0.0;
  for (int s = 0; s <= n; ++s) {
    double log_num, a_exp, b_exp;
    if (dm.fastforward) {
      // ratio at effective sample size n' for the uniform-in-beta prior,
      // evaluated at the realizable configuration with s real ones
      a_exp = s + dm.kappa - 0.5;
      b_exp = n - s + dm.lambda - 0.5;
      log_num = log_beta(s + dm.kappa, n - s + dm.lambda) - log_beta(0.5, 0.5);
    } else {
      a_exp = s;
      b_exp = n - s;
      if (mix.kind() == MixingPrior::Kind::kBeta) {
        log_num = log_beta(s + mix.kappa(), n - s + mix.lambda()) -
                  log_beta(mix.kappa(), mix.lambda());
      } else {
        double mode = std::asin(std::sqrt(static_cast<double>(s) / n));
        auto log_f = [&](double beta) {
          double sa = std::sin(beta), ca = std::cos(beta);
          double d = mix.density(sa * sa);
          if (d <= 0) return -kInf;
          return 2 * s * std::log(sa) + 2 * (n - s) * std::log(ca) + std::log(2.0) +
                 std::log(d) + std::log(sa) + std::log(ca);
        };
        log_num = quadrature::log_integral_logf(log_f, 0.0, M_PI / 2, {mode},
                                                QuadratureConfig{1e-12, 14});
      }
    }

    // weights entering the comparison: the uniform 1/k prior on the grid in
    // fast-forward mode (the fake observations already live in the exponents),
    // the discretized masses otherwise
    const double log_uniform = -std::log(static_cast<double>(k));
    double mx = -kInf;
    std::vector<double> terms(k);
    for (int j = 0; j < k; ++j) {
      double logw = dm.fastforward ? log_uniform : dm.log_w[j].log();
      terms[j] = logw + a_exp * grid.log_alpha[j] + b_exp * grid.log_1m_alpha[j];
      mx = std::max(mx, terms[j]);
    }
    double sum = 0;
    for (int j = 0; j < k; ++j) sum += std::exp(terms[j] - mx);
    double log_den = mx + std::log(sum);

    double r = log_num - log_den;
    eps_raw = std::max(eps_raw, std::abs(std::expm1(r)));
  }

  rep.raw_epsilon = eps_raw;
  if (dm.fastforward)
    rep.epsilon = eps_raw < 1 ? 2 * eps_raw / (1 - eps_raw) : kInf;
  else
    rep.epsilon = eps_raw;
  return rep;
}

}  // namespace sparsebayes::discretize
