#include "sparsebayes/cvdv.hpp"

#include <algorithm>

#include "sparsebayes/special.hpp"

namespace sparsebayes::cvdv {

namespace {

template <typename Scalar>
std::vector<Scalar> lift(const std::vector<LogValue>& v) {
  return std::vector<Scalar>(v.begin(), v.end());
}
template <>
std::vector<LogValue> lift<LogValue>(const std::vector<LogValue>& v) {
  return v;
}

// pi_n(s) / C(n, s) for s = 0..n.
std::vector<LogValue> subset_weights(const ModelSelectionPrior& prior) {
  const int n = prior.n();
  std::vector<LogValue> w(n + 1);
  for (int s = 0; s <= n; ++s)
    w[s] = LogValue::from_log(prior.pmf(s).log() - log_binomial(n, s));
  return w;
}

template <typename Scalar>
std::vector<Scalar> poly_coeffs_impl(const std::vector<Scalar>& a,
                                     const std::vector<Scalar>& b) {
  if (a.size() != b.size()) throw DomainError("poly_coeffs: length mismatch");
  const size_t n = a.size();
  std::vector<Scalar> c(n + 1, Scalar(LogValue::zero()));
  c[0] = Scalar(LogValue::one());
  for (size_t i = 0; i < n; ++i) {
    for (size_t s = i + 1; s >= 1; --s) c[s] = a[i] * c[s - 1] + b[i] * c[s];
    c[0] = b[i] * c[0];
  }
  return c;
}

template <typename Scalar>
Scalar dot_tail(const std::vector<LogValue>& w, const std::vector<Scalar>& c,
                size_t w_from, size_t c_from, size_t count) {
  Scalar acc{LogValue::zero()};
  for (size_t k = 0; k < count; ++k) acc += Scalar(w[w_from + k]) * c[c_from + k];
  return acc;
}

template <typename Scalar>
std::vector<Scalar> q_all_impl(const ModelSelectionPrior& prior,
                               const std::vector<LogValue>& log_psi,
                               const std::vector<LogValue>& log_phi, bool parallel) {
  const int n = prior.n();
  if (static_cast<int>(log_psi.size()) != n || log_psi.size() != log_phi.size())
    throw DomainError("q_all: data length does not match prior dimension");

  auto psi = lift<Scalar>(log_psi);
  auto phi = lift<Scalar>(log_phi);
  auto weights = subset_weights(prior);

  // Q_n from the full product, reused for every coordinate.
  auto full = poly_coeffs_impl<Scalar>(psi, phi);
  Scalar q_n = dot_tail(weights, full, 0, 0, n + 1);

  std::vector<Scalar> out(n, Scalar(LogValue::zero()));
#pragma omp parallel for schedule(dynamic) if (parallel && n > 8)
  for (int i = 0; i < n; ++i) {
    // C_s(Psi, Phi^i) = Psi_i * D_{s-1} with D the coefficients over j != i.
    std::vector<Scalar> a, b;
    a.reserve(n - 1);
    b.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      a.push_back(psi[j]);
      b.push_back(phi[j]);
    }
    auto d = poly_coeffs_impl<Scalar>(a, b);
    Scalar numer = dot_tail(weights, d, 1, 0, n) * psi[i];
    out[i] = numer / q_n;
  }
  return out;
}

// Solves (Psi_i Z + Phi_i) x = c by substitution after discarding one row.
// Row s of the system reads Psi_i x_{s-1} + Phi_i x_s = c_s.
void solve_divided(const std::vector<LogInterval>& c, const LogInterval& psi_i,
                   const LogInterval& phi_i, DropRow drop, std::vector<LogInterval>& x) {
  const int deg = static_cast<int>(c.size()) - 1;  // degree n; x has length n
  x.assign(deg, LogInterval(LogValue::zero()));

  auto backward_from_top = [&](int stop) {
    // rows n .. stop+1: x_{s-1} = (c_s - Phi x_s) / Psi
    x[deg - 1] = c[deg] / psi_i;
    for (int s = deg - 1; s >= stop + 1; --s) x[s - 1] = (c[s] - phi_i * x[s]) / psi_i;
  };
  auto forward_from_bottom = [&](int stop) {
    // rows 0 .. stop-1: x_s = (c_s - Psi x_{s-1}) / Phi
    x[0] = c[0] / phi_i;
    for (int s = 1; s <= stop - 1; ++s) x[s] = (c[s] - psi_i * x[s - 1]) / phi_i;
  };

  switch (drop) {
    case DropRow::kFirst:
      backward_from_top(0);
      break;
    case DropRow::kLast:
      forward_from_bottom(deg);
      break;
    case DropRow::kMiddle: {
      int mid = deg / 2;
      forward_from_bottom(mid);
      backward_from_top(mid);
      break;
    }
  }
}

}  // namespace

std::vector<LogValue> poly_coeffs(const std::vector<LogValue>& a,
                                  const std::vector<LogValue>& b) {
  return poly_coeffs_impl<LogValue>(a, b);
}

std::vector<LogInterval> poly_coeffs_tracked(const std::vector<LogInterval>& a,
                                             const std::vector<LogInterval>& b) {
  return poly_coeffs_impl<LogInterval>(a, b);
}

LogValue marginal_likelihood(const ModelSelectionPrior& prior,
                             const std::vector<LogValue>& log_psi,
                             const std::vector<LogValue>& log_phi) {
  auto c = poly_coeffs_impl<LogValue>(log_psi, log_phi);
  return dot_tail(subset_weights(prior), c, 0, 0, c.size());
}

std::vector<LogValue> q_all(const ModelSelectionPrior& prior,
                            const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt) {
  return q_all_impl<LogValue>(prior, log_psi, log_phi, opt.parallel);
}

std::vector<LogInterval> q_all_tracked(const ModelSelectionPrior& prior,
                                       const std::vector<LogValue>& log_psi,
                                       const std::vector<LogValue>& log_phi, Options opt) {
  return q_all_impl<LogInterval>(prior, log_psi, log_phi, opt.parallel);
}

std::vector<LogInterval> q_all_long_division(const ModelSelectionPrior& prior,
                                             const std::vector<LogValue>& log_psi,
                                             const std::vector<LogValue>& log_phi,
                                             LongDivisionOptions opt) {
  const int n = prior.n();
  if (static_cast<int>(log_psi.size()) != n || log_psi.size() != log_phi.size())
    throw DomainError("q_all_long_division: data length mismatch");

  auto psi = lift<LogInterval>(log_psi);
  auto phi = lift<LogInterval>(log_phi);
  auto weights = subset_weights(prior);
  auto full = poly_coeffs_impl<LogInterval>(psi, phi);
  LogInterval q_n = dot_tail(weights, full, 0, 0, n + 1);

  const LogInterval whole = LogInterval::from_log_bounds(
      -std::numeric_limits<double>::infinity(), 0.0, true);

  std::vector<LogInterval> out(n, whole);
#pragma omp parallel for schedule(dynamic) if (opt.parallel && n > 8)
  for (int i = 0; i < n; ++i) {
    try {
      std::vector<LogInterval> x;
      solve_divided(full, psi[i], phi[i], opt.drop, x);
      LogInterval numer = dot_tail(weights, x, 1, 0, n) * psi[i];
      LogInterval q = numer / q_n;
      // q is a probability; intersect the enclosure with [0, 1]
      double hi = std::min(q.hi(), 0.0);
      double lo = std::min(q.lo(), hi);
      out[i] = LogInterval::from_log_bounds(lo, hi, q.partial());
    } catch (const DomainError&) {
      // the solve collapsed entirely: report total loss of precision
      out[i] = whole;
    }
  }
  return out;
}

}  // namespace sparsebayes::cvdv
