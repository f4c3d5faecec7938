#pragma once

#include <complex>
#include <cstdint>

namespace isac {

/// SplitMix64 finalizer. Used both as a sequential generator step and as a
/// counter hash, so any (seed, index) pair maps to a fixed 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent sub-seed from a base seed and a stream index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based stream: word i is mix64(key + (i+1) * golden). Two streams
/// with the same key produce identical sequences regardless of platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on (0, 1); never returns 0 so log() is safe.
  double uniform() noexcept;
  double standard_normal() noexcept;
  /// Circular complex Gaussian CN(0, 1): real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal() noexcept;

  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace isac
