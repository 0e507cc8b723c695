#ifndef SPARSEBAYES_PHILOX_HPP
#define SPARSEBAYES_PHILOX_HPP

#include <array>
#include <cstdint>

namespace sparsebayes {

/// Philox-4x32-10 counter-based generator: explicit 64-bit seed, independent
/// streams, and reproducible draws across platforms and thread counts.
class PhiloxRng {
 public:
  explicit PhiloxRng(uint64_t seed, uint64_t stream = 0);

  uint32_t next_u32();
  uint64_t next_u64();
  double next_double();    // uniform on [0, 1) with 53 random bits
  double next_gaussian();  // standard normal (Box-Muller, pair cached)
  double next_gamma(double shape);  // Marsaglia-Tsang, any shape > 0
  double next_beta(double a, double b);

  /// One raw block; exposed for the published test vectors.
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key);

 private:
  void refill();
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> counter_;
  std::array<uint32_t, 4> out_;
  int have_ = 0;
  double cached_gaussian_ = 0;
  bool has_cached_gaussian_ = false;
};

}  // namespace sparsebayes

#endif
