#include "sparsebayes/philox.hpp"

#include <cmath>

#include "sparsebayes/lognum.hpp"

namespace sparsebayes {

namespace {

constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& x, const std::array<uint32_t, 2>& k) {
  uint64_t p0 = static_cast<uint64_t>(kMult0) * x[0];
  uint64_t p1 = static_cast<uint64_t>(kMult1) * x[2];
  uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> PhiloxRng::block(const std::array<uint32_t, 4>& counter,
                                         const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> x = counter;
  std::array<uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    round_once(x, k);
  }
  return x;
}

PhiloxRng::PhiloxRng(uint64_t seed, uint64_t stream) {
  key_ = {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  counter_ = {0, 0, static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
}

void PhiloxRng::refill() {
  out_ = block(counter_, key_);
  have_ = 4;
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit step counter
}

uint32_t PhiloxRng::next_u32() {
  if (have_ == 0) refill();
  return out_[4 - have_--];
}

uint64_t PhiloxRng::next_u64() {
  uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double PhiloxRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PhiloxRng::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u1, u2;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  cached_gaussian_ = r * std::sin(2.0 * M_PI * u2);
  has_cached_gaussian_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

double PhiloxRng::next_gamma(double shape) {
  if (!(shape > 0)) throw DomainError("next_gamma: shape must be positive");
  if (shape < 1.0) {
    double u;
    do {
      u = next_double();
    } while (u <= 0.0);
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = next_gaussian();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = next_double();
    if (u <= 0.0) continue;
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double PhiloxRng::next_beta(double a, double b) {
  double x = next_gamma(a);
  double y = next_gamma(b);
  double s = x + y;
  if (s <= 0.0) return 0.5;
  return x / s;
}

}  // namespace sparsebayes
