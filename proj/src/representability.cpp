#include "sparsebayes/representability.hpp"

#include <algorithm>
#include <cmath>

#include "sparsebayes/special.hpp"

namespace sparsebayes::representability {

namespace {

struct Parts {
  Eigen::MatrixXd h1, h2;  // H_k(mu) and the shifted matrix
  Eigen::VectorXd v;       // range-condition right-hand side
  bool range_in_h1 = true; // odd n: range of H_k(mu); even n: range of H_{k-1}(F mu)
};

Parts assemble(const std::vector<double>& mu) {
  const int n = static_cast<int>(mu.size()) - 1;
  Parts p;
  if (n % 2 == 1) {
    int k = (n - 1) / 2;
    p.h1 = hankel(mu, k);
    std::vector<double> shifted(mu.begin() + 1, mu.end());
    p.h2 = hankel(shifted, k);
    p.v = Eigen::Map<const Eigen::VectorXd>(mu.data() + k + 1, k + 1);
    p.range_in_h1 = true;
  } else {
    int k = n / 2;
    p.h1 = hankel(mu, k);
    std::vector<double> shifted(mu.begin() + 1, mu.end());
    p.h2 = hankel(shifted, k - 1);
    p.v = Eigen::Map<const Eigen::VectorXd>(mu.data() + k + 1, k);
    p.range_in_h1 = false;
  }
  return p;
}

double normalized_min_eig(const Eigen::MatrixXd& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / (1.0 + h.norm());
}

double range_residual(const Eigen::MatrixXd& h, const Eigen::VectorXd& v) {
  double vn = v.norm();
  if (vn == 0.0) return 0.0;
  if (h.rows() == 0) return 1.0;
  Eigen::VectorXd x = h.completeOrthogonalDecomposition().solve(v);
  return (h * x - v).norm() / vn;
}

Diagnostics diagnose(const ModelSelectionPrior& prior, double c, const Tolerances& tol) {
  auto mu = moment_vector(prior, c);
  Parts p = assemble(mu);
  Diagnostics d;
  d.min_eig_hankel = normalized_min_eig(p.h1);
  d.min_eig_shifted = normalized_min_eig(p.h2);
  d.range_residual = range_residual(p.range_in_h1 ? p.h1 : p.h2, p.v);
  d.leading_minor2 = p.h1.rows() >= 2
                         ? p.h1(0, 0) * p.h1(1, 1) - p.h1(0, 1) * p.h1(1, 0)
                         : (p.h1.rows() == 1 ? p.h1(0, 0) : 0.0);
  d.margin = std::min({d.min_eig_hankel + tol.psd, d.min_eig_shifted + tol.psd,
                       tol.range - d.range_residual});
  return d;
}

bool feasible(const Diagnostics& d) { return d.margin >= 0.0; }

}  // namespace

Eigen::MatrixXd hankel(const std::vector<double>& mu, int k) {
  if (k < 0) return Eigen::MatrixXd(0, 0);
  if (static_cast<int>(mu.size()) < 2 * k + 1)
    throw DomainError("hankel: moment vector too short");
  Eigen::MatrixXd h(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) h(i, j) = mu[i + j];
  return h;
}

std::vector<double> moment_vector(const ModelSelectionPrior& prior, double c) {
  const int n = prior.n();
  std::vector<double> mu(n + 1);
  for (int s = 0; s < n; ++s)
    mu[s] = std::exp(prior.pmf(s).log() - log_binomial(n, s));
  mu[n] = c;
  return mu;
}

std::pair<bool, Diagnostics> check_at(const ModelSelectionPrior& prior, double c,
                                      Tolerances tol) {
  double cmax = prior.pmf(prior.n()).real();
  if (c < -1e-15 || c > cmax * (1 + 1e-12) + 1e-300)
    throw DomainError("check_at: c outside [0, pi_n(n)]");
  Diagnostics d = diagnose(prior, c, tol);
  return {feasible(d), d};
}

Verdict is_spike_slab(const ModelSelectionPrior& prior, Tolerances tol, int grid_size) {
  if (grid_size < 2) grid_size = 2;
  const double cmax = prior.pmf(prior.n()).real();

  std::vector<double> cs;
  if (cmax <= 0.0) {
    cs.push_back(0.0);
  } else {
    cs.reserve(grid_size);
    for (int t = 0; t < grid_size; ++t)
      cs.push_back(cmax * static_cast<double>(t) / (grid_size - 1));
  }

  std::vector<Diagnostics> diag(cs.size());
#pragma omp parallel for schedule(static) if (cs.size() > 64)
  for (size_t t = 0; t < cs.size(); ++t) diag[t] = diagnose(prior, cs[t], tol);

  size_t best = 0;
  for (size_t t = 1; t < cs.size(); ++t)
    if (diag[t].margin > diag[best].margin) best = t;

  // golden-section refinement of the margin around the best grid point
  double bc = cs[best];
  Diagnostics bd = diag[best];
  if (cs.size() > 1) {
    double lo = cs[best == 0 ? 0 : best - 1];
    double hi = cs[std::min(best + 1, cs.size() - 1)];
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    Diagnostics d1 = diagnose(prior, x1, tol), d2 = diagnose(prior, x2, tol);
    for (int it = 0; it < 200 && (b - a) > 1e-10 * (1 + cmax); ++it) {
      if (d1.margin >= d2.margin) {
        b = x2;
        x2 = x1;
        d2 = d1;
        x1 = b - kInvPhi * (b - a);
        d1 = diagnose(prior, x1, tol);
      } else {
        a = x1;
        x1 = x2;
        d1 = d2;
        x2 = a + kInvPhi * (b - a);
        d2 = diagnose(prior, x2, tol);
      }
    }
    const Diagnostics& dr = d1.margin >= d2.margin ? d1 : d2;
    double cr = d1.margin >= d2.margin ? x1 : x2;
    if (dr.margin > bd.margin) {
      bd = dr;
      bc = cr;
    }
  }

  Verdict v;
  v.best_c = bc;
  v.diagnostics = bd;
  if (feasible(bd)) {
    v.representable = true;
    v.witness_c = bc;
    return v;
  }
  if (bd.min_eig_hankel + tol.psd < 0)
    v.violated = Condition::kHankelPsd;
  else if (bd.min_eig_shifted + tol.psd < 0)
    v.violated = Condition::kShiftedHankelPsd;
  else
    v.violated = Condition::kRangeInclusion;
  return v;
}

}  // namespace sparsebayes::representability
