#include "sparsebayes/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>

namespace sparsebayes::hmm {

namespace {

template <typename Scalar>
std::vector<Scalar> lift(const std::vector<LogValue>& v) {
  return std::vector<Scalar>(v.begin(), v.end());
}
template <>
std::vector<LogValue> lift<LogValue>(const std::vector<LogValue>& v) {
  return v;
}

template <typename Scalar>
class Kernel {
 public:
  Kernel(const ModelSelectionPrior& prior, const std::vector<LogValue>& log_psi,
         const std::vector<LogValue>& log_phi, bool parallel)
      : prior_(prior),
        psi_(lift<Scalar>(log_psi)),
        phi_(lift<Scalar>(log_phi)),
        n_(prior.n()),
        parallel_(parallel) {
    if (static_cast<int>(psi_.size()) != n_ || psi_.size() != phi_.size())
      throw DomainError("hmm: data length does not match prior dimension");
    closed_ = prior.has_closed_form_transitions();
    if (closed_) {
      kappa_ = prior.kappa();
      lambda_ = prior.lambda();
    } else {
      vt_ = &prior.v_table();
    }
    // states with m beyond the largest supported sparsity level are
    // unreachable and pruned from every column
    smax_ = 0;
    for (int s = n_; s >= 0; --s)
      if (!prior.pmf(s).is_zero()) {
        smax_ = s;
        break;
      }
  }

  int reachable(int i) const { return std::min(i, smax_); }

  int n() const { return n_; }

  // Pi_n(B_{i+1} = b | M_i = m); zero for unreachable prefixes.
  Scalar trans(int i, int m, int b) const {
    if (closed_) {
      double denom = kappa_ + lambda_ + i;
      double num = b ? kappa_ + m : lambda_ + i - m;
      return Scalar(LogValue::from_log(std::log(num) - std::log(denom)));
    }
    LogValue prefix = vt_->at(i, m);
    if (prefix.is_zero()) return Scalar(LogValue::zero());
    return Scalar(vt_->at(i + 1, m + b) / prefix);
  }

  // g_i from g_{i-1}; out[m] = p(Y_1^i, M_i = m) for m = 0..i.
  void forward_column(int i, const std::vector<Scalar>& prev, std::vector<Scalar>& out) const {
    out.assign(i + 1, Scalar(LogValue::zero()));
    const int top = reachable(i);
#pragma omp parallel for schedule(static) if (parallel_ && i > 2048)
    for (int m = 0; m <= top; ++m) {
      Scalar acc{LogValue::zero()};
      if (m <= i - 1) acc += phi_[i - 1] * trans(i - 1, m, 0) * prev[m];
      if (m >= 1) acc += psi_[i - 1] * trans(i - 1, m - 1, 1) * prev[m - 1];
      out[m] = acc;
    }
  }

  // bw_i from bw_{i+1}; out[m] = p(Y_{i+1}^n | M_i = m) for m = 0..i.
  void backward_column(int i, const std::vector<Scalar>& next, std::vector<Scalar>& out) const {
    out.assign(i + 1, Scalar(LogValue::zero()));
    const int top = reachable(i);
#pragma omp parallel for schedule(static) if (parallel_ && i > 2048)
    for (int m = 0; m <= top; ++m) {
      out[m] = trans(i, m, 0) * phi_[i] * next[m] + trans(i, m, 1) * psi_[i] * next[m + 1];
    }
  }

  // Numerator of q_i: sum_m p(Y_1^i, B_i = 1, M_i = m) p(Y_{i+1}^n | M_i = m).
  Scalar q_numerator(int i, const std::vector<Scalar>& fw_prev,
                     const std::vector<Scalar>& bw_i) const {
    Scalar acc{LogValue::zero()};
    const int top = std::min(reachable(i - 1), smax_ - 1);
    for (int m = 0; m <= top; ++m)
      acc += trans(i - 1, m, 1) * fw_prev[m] * bw_i[m + 1];
    return psi_[i - 1] * acc;
  }

 private:
  const ModelSelectionPrior& prior_;
  std::vector<Scalar> psi_, phi_;
  int n_;
  bool parallel_;
  bool closed_ = false;
  double kappa_ = 0, lambda_ = 0;
  int smax_ = 0;
  const VTable* vt_ = nullptr;
};

template <typename Scalar>
Scalar column_sum(const std::vector<Scalar>& col) {
  Scalar acc{LogValue::zero()};
  for (const Scalar& v : col) acc += v;
  return acc;
}

// Supplies g_{i-1} columns to the backward phase, either from the retained
// trellis or by replaying blocks from sqrt-spaced checkpoints. The replay
// performs the identical operation sequence, so both modes produce bitwise
// equal results.
template <typename Scalar>
class ForwardProvider {
 public:
  ForwardProvider(const Kernel<Scalar>& kernel, bool streaming)
      : kernel_(kernel), streaming_(streaming) {
    const int n = kernel.n();
    block_ = streaming_ ? std::max(1, static_cast<int>(std::ceil(std::sqrt(n + 1.0)))) : n + 1;
    std::vector<Scalar> col{Scalar(LogValue::one())};  // g_0, the empty prefix
    store(0, col);
    std::vector<Scalar> next;
    for (int i = 1; i <= n; ++i) {
      kernel_.forward_column(i, col, next);
      col.swap(next);
      store(i, col);
    }
    final_column_ = col;
  }

  const std::vector<Scalar>& final_column() const { return final_column_; }

  // Valid for i = n-1 .. 0, called in descending order.
  const std::vector<Scalar>& column(int i) {
    if (!streaming_) return columns_[i];
    int base = (i / block_) * block_;
    if (base != buffer_base_) refill(base);
    return buffer_[i - base];
  }

 private:
  void store(int i, const std::vector<Scalar>& col) {
    if (!streaming_) {
      columns_.push_back(col);
      return;
    }
    if (i % block_ == 0) checkpoints_[i] = col;
  }

  void refill(int base) {
    buffer_.assign(1, checkpoints_.at(base));
    const int n = kernel_.n();
    int last = std::min(base + block_ - 1, n - 1);
    std::vector<Scalar> next;
    for (int i = base + 1; i <= last; ++i) {
      kernel_.forward_column(i, buffer_.back(), next);
      buffer_.push_back(next);
    }
    buffer_base_ = base;
  }

  const Kernel<Scalar>& kernel_;
  bool streaming_;
  int block_ = 0;
  std::vector<std::vector<Scalar>> columns_;            // retained mode
  std::map<int, std::vector<Scalar>> checkpoints_;      // streaming mode
  std::vector<std::vector<Scalar>> buffer_;
  int buffer_base_ = -1;
  std::vector<Scalar> final_column_;
};

template <typename Scalar>
bool use_streaming(int n, Options::Trellis mode) {
  if (mode == Options::Trellis::kRetained) return false;
  if (mode == Options::Trellis::kStreaming) return true;
  double bytes = 0.5 * double(n + 1) * double(n + 2) * sizeof(Scalar);
  return bytes > 400e6;
}

template <typename Scalar>
void run(const ModelSelectionPrior& prior, const std::vector<LogValue>& log_psi,
         const std::vector<LogValue>& log_phi, Options opt, std::vector<Scalar>& q_out,
         Scalar& marginal_out) {
  Kernel<Scalar> kernel(prior, log_psi, log_phi, opt.parallel);
  const int n = kernel.n();
  ForwardProvider<Scalar> forward(kernel, use_streaming<Scalar>(n, opt.trellis));

  Scalar q_n = column_sum(forward.final_column());
  marginal_out = q_n;

  q_out.assign(n, Scalar(LogValue::zero()));
  std::vector<Scalar> bw(n + 1, Scalar(LogValue::one()));  // bw_n
  std::vector<Scalar> prev_bw;
  for (int i = n; i >= 1; --i) {
    const std::vector<Scalar>& fw_prev = forward.column(i - 1);
    q_out[i - 1] = kernel.q_numerator(i, fw_prev, bw) / q_n;
    if (i > 1) {
      kernel.backward_column(i - 1, bw, prev_bw);
      bw.swap(prev_bw);
    }
  }
}

}  // namespace

Result q_all(const ModelSelectionPrior& prior, const std::vector<LogValue>& log_psi,
             const std::vector<LogValue>& log_phi, Options opt) {
  Result r;
  LogValue q_n;
  run<LogValue>(prior, log_psi, log_phi, opt, r.q, q_n);
  r.log_marginal = q_n;
  return r;
}

TrackedResult q_all_tracked(const ModelSelectionPrior& prior,
                            const std::vector<LogValue>& log_psi,
                            const std::vector<LogValue>& log_phi, Options opt) {
  TrackedResult r;
  LogInterval q_n;
  run<LogInterval>(prior, log_psi, log_phi, opt, r.q, q_n);
  r.log_marginal = q_n;
  // a probability: intersect every enclosure with [0, 1]
  for (LogInterval& q : r.q) {
    double hi = std::min(q.hi(), 0.0);
    double lo = std::min(q.lo(), hi);
    q = LogInterval::from_log_bounds(lo, hi, q.partial());
  }
  return r;
}

LogValue marginal_likelihood(const ModelSelectionPrior& prior,
                             const std::vector<LogValue>& log_psi,
                             const std::vector<LogValue>& log_phi, Options opt) {
  Kernel<LogValue> kernel(prior, log_psi, log_phi, opt.parallel);
  std::vector<LogValue> col{LogValue::one()}, next;
  for (int i = 1; i <= kernel.n(); ++i) {
    kernel.forward_column(i, col, next);
    col.swap(next);
  }
  return column_sum(col);
}

Trellis forward_backward(const ModelSelectionPrior& prior,
                         const std::vector<LogValue>& log_psi,
                         const std::vector<LogValue>& log_phi) {
  Kernel<LogValue> kernel(prior, log_psi, log_phi, false);
  const int n = kernel.n();
  Trellis t;
  t.forward.resize(n + 1);
  t.backward.resize(n + 1);
  t.forward[0] = {LogValue::one()};
  for (int i = 1; i <= n; ++i) kernel.forward_column(i, t.forward[i - 1], t.forward[i]);
  t.backward[n].assign(n + 1, LogValue::one());
  for (int i = n - 1; i >= 0; --i) kernel.backward_column(i, t.backward[i + 1], t.backward[i]);
  t.log_marginal = column_sum(t.forward[n]);
  return t;
}

LogValue forward_state(const Trellis& t, const ModelSelectionPrior& prior,
                       const std::vector<LogValue>& log_psi,
                       const std::vector<LogValue>& log_phi, int i, int b, int m) {
  if (i < 1 || i > prior.n() || m < b || m > i)
    throw DomainError("forward_state: out of range");
  const LogValue& dens = b ? log_psi[i - 1] : log_phi[i - 1];
  return dens * prior.transition(i - 1, m - b, b) * t.forward[i - 1][m - b];
}

}  // namespace sparsebayes::hmm
