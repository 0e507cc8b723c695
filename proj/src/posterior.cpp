#include "sparsebayes/posterior.hpp"

#include <chrono>
#include <cmath>

#include "sparsebayes/cvdv.hpp"
#include "sparsebayes/discretize.hpp"
#include "sparsebayes/hmm.hpp"
#include "sparsebayes/special.hpp"

namespace sparsebayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::vector<LogValue>, std::vector<LogValue>> split_pairs(
    const std::vector<LikelihoodPair>& pairs) {
  std::vector<LogValue> psi(pairs.size()), phi(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].log_phi.is_zero() || pairs[i].log_psi.is_zero() ||
        pairs[i].log_phi.is_infinite() || pairs[i].log_psi.is_infinite())
      throw DomainError("likelihood pair not strictly positive and finite");
    psi[i] = pairs[i].log_psi;
    phi[i] = pairs[i].log_phi;
  }
  return {std::move(psi), std::move(phi)};
}

struct QResult {
  std::vector<double> q, q_lo, q_hi;
  double log_marginal = 0;
  double max_width = 0;
};

QResult from_plain(const std::vector<LogValue>& q, LogValue marginal) {
  QResult r;
  r.q.reserve(q.size());
  for (const LogValue& v : q) r.q.push_back(std::min(1.0, v.real()));
  r.log_marginal = marginal.log();
  return r;
}

QResult from_tracked(const std::vector<LogInterval>& q, const LogInterval& marginal) {
  QResult r;
  r.q.reserve(q.size());
  r.q_lo.reserve(q.size());
  r.q_hi.reserve(q.size());
  for (const LogInterval& v : q) {
    // a probability: the enclosure can be intersected with [0, 1]
    double hi_log = std::min(v.hi(), 0.0);
    double lo_log = std::min(v.lo(), hi_log);
    double lo = std::exp(lo_log), hi = std::exp(hi_log);
    r.q_lo.push_back(lo);
    r.q_hi.push_back(hi);
    r.q.push_back(0.5 * (lo + hi));
    r.max_width = std::max(r.max_width, hi - lo);
  }
  r.log_marginal = marginal.log_mid();
  return r;
}

}  // namespace

std::vector<LikelihoodPair> make_likelihoods(const Slab& slab, const std::vector<double>& y) {
  std::vector<LikelihoodPair> pairs(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw DomainError("make_likelihoods: non-finite observation");
    pairs[i].log_phi = LogValue::from_log(log_normal_pdf(y[i]));
    pairs[i].log_psi = slab.psi(y[i]);
  }
  return pairs;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kCvdv: return "cvdv";
    case Algorithm::kLongDivision: return "longdiv";
    case Algorithm::kHmm: return "hmm";
    case Algorithm::kDiscrete: return "discrete";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "cvdv") return Algorithm::kCvdv;
  if (name == "longdiv") return Algorithm::kLongDivision;
  if (name == "hmm") return Algorithm::kHmm;
  if (name == "discrete") return Algorithm::kDiscrete;
  return std::nullopt;
}

double marginal_mean(double q, double y, const Slab& slab) {
  if (q <= 0.0) return 0.0;
  SignedLog z = slab.zeta(y);
  if (z.sign == 0) return 0.0;
  return z.sign * std::exp(std::log(q) + z.magnitude.log() - slab.psi(y).log());
}

double marginal_median(double q, double y, const Slab& slab) {
  if (q <= 0.5) return 0.0;  // both brackets vanish under the conventions
  double lower = std::min(slab.h_inverse(y, 1.0 / (2.0 * q)), 0.0);
  double upper = std::max(slab.h_inverse(y, 1.0 - 1.0 / (2.0 * q)), 0.0);
  return lower + upper;
}

double marginal_cdf(double q, double y, const Slab& slab, double u) {
  double atom = u >= 0.0 ? 1.0 - q : 0.0;
  if (u == -kInf) return 0.0;
  if (u == kInf) return 1.0;
  double slab_part = q * std::exp(slab.psi_partial(y, u).log() - slab.psi(y).log());
  return atom + slab_part;
}

double marginal_quantile(double q, double y, const Slab& slab, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal_quantile: level outside (0,1)");
  if (q <= 0.0) return 0.0;
  double h0 = std::exp(slab.psi_partial(y, 0.0).log() - slab.psi(y).log());
  if (p <= q * h0) return slab.h_inverse(y, p / q);
  if (p <= q * h0 + (1.0 - q)) return 0.0;
  return slab.h_inverse(y, (p - (1.0 - q)) / q);
}

double PosteriorSummary::quantile(int i, double p) const {
  if (!slab_model) throw DomainError("quantile: summary carries no slab model");
  return marginal_quantile(q.at(i), y.at(i), *slab_model, p);
}

namespace {

PosteriorSummary finish(QResult qr, const Slab& slab, const std::vector<double>& y,
                        const ComputeOptions& opt, std::string prior_desc,
                        std::chrono::steady_clock::time_point t0) {
  PosteriorSummary s;
  s.n = static_cast<int>(y.size());
  s.y = y;
  s.q = std::move(qr.q);
  s.q_lo = std::move(qr.q_lo);
  s.q_hi = std::move(qr.q_hi);
  s.log_marginal = qr.log_marginal;
  s.tracked = opt.tracked;
  s.max_interval_width = qr.max_width;
  s.threshold = opt.selection_threshold;
  s.algorithm = algorithm_name(opt.algorithm);
  s.prior = std::move(prior_desc);
  s.slab = slab.describe();
  s.slab_model = std::shared_ptr<const Slab>(slab.clone());

  s.mean.resize(s.n);
  s.median.resize(s.n);
  s.selected.resize(s.n);
  for (int i = 0; i < s.n; ++i) {
    s.mean[i] = marginal_mean(s.q[i], y[i], slab);
    s.median[i] = opt.medians ? marginal_median(s.q[i], y[i], slab) : 0.0;
    s.selected[i] = s.q[i] >= s.threshold;
  }
  s.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

QResult dispatch_exact(const ModelSelectionPrior& prior, const std::vector<LogValue>& psi,
                       const std::vector<LogValue>& phi, const ComputeOptions& opt) {
  switch (opt.algorithm) {
    case Algorithm::kCvdv: {
      cvdv::Options o{opt.parallel};
      if (opt.tracked) {
        auto q = cvdv::q_all_tracked(prior, psi, phi, o);
        LogInterval m = LogInterval(cvdv::marginal_likelihood(prior, psi, phi));
        return from_tracked(q, m);
      }
      auto q = cvdv::q_all(prior, psi, phi, o);
      return from_plain(q, cvdv::marginal_likelihood(prior, psi, phi));
    }
    case Algorithm::kLongDivision: {
      auto q = cvdv::q_all_long_division(prior, psi, phi, {cvdv::DropRow::kFirst, opt.parallel});
      return from_tracked(q, LogInterval(cvdv::marginal_likelihood(prior, psi, phi)));
    }
    case Algorithm::kHmm: {
      hmm::Options o;
      o.parallel = opt.parallel;
      if (opt.tracked) {
        auto r = hmm::q_all_tracked(prior, psi, phi, o);
        return from_tracked(r.q, r.log_marginal);
      }
      auto r = hmm::q_all(prior, psi, phi, o);
      return from_plain(r.q, r.log_marginal);
    }
    case Algorithm::kDiscrete:
      throw DomainError("discrete algorithm requires a spike-and-slab (mixing) prior");
  }
  throw DomainError("unknown algorithm");
}

}  // namespace

PosteriorSummary compute(const ModelSelectionPrior& prior, const Slab& slab,
                         const std::vector<double>& y, ComputeOptions opt) {
  auto t0 = std::chrono::steady_clock::now();
  if (static_cast<int>(y.size()) != prior.n())
    throw DomainError("compute: data length does not match prior dimension");
  auto [psi, phi] = split_pairs(make_likelihoods(slab, y));
  if (opt.algorithm == Algorithm::kLongDivision) opt.tracked = true;
  QResult qr = dispatch_exact(prior, psi, phi, opt);
  return finish(std::move(qr), slab, y, opt, prior.describe(), t0);
}

PosteriorSummary compute(const MixingPrior& mixing, const Slab& slab,
                         const std::vector<double>& y, ComputeOptions opt) {
  auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(y.size());
  if (n < 1) throw DomainError("compute: empty data");
  auto [psi, phi] = split_pairs(make_likelihoods(slab, y));

  if (opt.algorithm != Algorithm::kDiscrete) {
    ModelSelectionPrior induced = mixing.induced_prior(n);
    if (opt.algorithm == Algorithm::kLongDivision) opt.tracked = true;
    QResult qr = dispatch_exact(induced, psi, phi, opt);
    return finish(std::move(qr), slab, y, opt, induced.describe(), t0);
  }

  discretize::DiscreteMixing dm;
  if (mixing.kind() == MixingPrior::Kind::kBeta) {
    auto grid = discretize::build_grid(n, opt.discrete_m, mixing.kappa(), mixing.lambda());
    dm = discretize::beta_fastforward(mixing.kappa(), mixing.lambda(), grid);
  } else {
    auto grid = discretize::build_grid(n, opt.discrete_m);
    dm = discretize::discretize_mixing(mixing, grid);
  }
  discretize::Options dopt{opt.parallel};
  QResult qr;
  if (opt.tracked) {
    auto r = discretize::q_all_tracked(dm, psi, phi, dopt);
    qr = from_tracked(r.q, r.log_marginal);
  } else {
    auto r = discretize::q_all(dm, psi, phi, dopt);
    qr = from_plain(r.q, r.log_marginal);
  }
  PosteriorSummary s = finish(std::move(qr), slab, y, opt,
                              "spike-slab(" + mixing.describe() + ")", t0);
  if (opt.epsilon) s.epsilon = discretize::epsilon_bound(mixing, dm).epsilon;
  return s;
}

GeneralResult compute_general(const ModelSelectionPrior& prior,
                              const std::vector<LikelihoodPair>& pairs, Algorithm algorithm,
                              bool parallel) {
  auto [psi, phi] = split_pairs(pairs);
  GeneralResult out;
  if (algorithm == Algorithm::kHmm) {
    hmm::Options o;
    o.parallel = parallel;
    auto r = hmm::q_all(prior, psi, phi, o);
    out.log_marginal = r.log_marginal;
    out.q.reserve(r.q.size());
    for (const LogValue& v : r.q) out.q.push_back(std::min(1.0, v.real()));
    return out;
  }
  if (algorithm == Algorithm::kCvdv) {
    auto q = cvdv::q_all(prior, psi, phi, {parallel});
    out.log_marginal = cvdv::marginal_likelihood(prior, psi, phi);
    out.q.reserve(q.size());
    for (const LogValue& v : q) out.q.push_back(std::min(1.0, v.real()));
    return out;
  }
  throw DomainError("compute_general: algorithm must be cvdv or hmm");
}

GeneralResult compute_general(const MixingPrior& mixing, int n,
                              const std::vector<LikelihoodPair>& pairs, int m, bool parallel) {
  if (static_cast<int>(pairs.size()) != n) throw DomainError("compute_general: size mismatch");
  auto [psi, phi] = split_pairs(pairs);
  discretize::DiscreteMixing dm;
  if (mixing.kind() == MixingPrior::Kind::kBeta) {
    auto grid = discretize::build_grid(n, m, mixing.kappa(), mixing.lambda());
    dm = discretize::beta_fastforward(mixing.kappa(), mixing.lambda(), grid);
  } else {
    auto grid = discretize::build_grid(n, m);
    dm = discretize::discretize_mixing(mixing, grid);
  }
  auto r = discretize::q_all(dm, psi, phi, {parallel});
  GeneralResult out;
  out.log_marginal = r.log_marginal;
  out.q.reserve(r.q.size());
  for (const LogValue& v : r.q) out.q.push_back(std::min(1.0, v.real()));
  return out;
}

}  // namespace sparsebayes
