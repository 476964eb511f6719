#pragma once

#include <array>
#include <cstdint>

namespace cseu {

// Counter-based generator (Philox4x32-10). A stream is addressed by
// (seed, stream id); draws never touch shared state, so handing each
// worker its own stream makes parallel and serial runs agree bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  // Derive the stream for (module_id, index) under the same seed.
  CounterRng derive(std::uint32_t module_id, std::uint64_t index) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal (Box-Muller, pairs cached).
  double normal();
  // Gamma(shape) with unit scale, shape >= 1 (Marsaglia-Tsang).
  double gamma(double shape);
  // Beta(a, b) via two gamma draws, a, b >= 1.
  double beta(double a, double b);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Raw block function, exposed for the known-answer tests.
  static std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                                 const std::array<std::uint32_t, 2>& key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
  std::uint64_t seed_;
};

}  // namespace cseu
