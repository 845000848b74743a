#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rwlab {

// Explicit random state handed to every sampler. The engine (mt19937_64) and
// the uniform conversion are fully specified, so a seed reproduces the same
// stream bit for bit on every platform.
class RandomState {
 public:
  explicit RandomState(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Worker/job streams: seed = splitmix64(master ^ splitmix64(stream)).
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;
  // Label streams hash the label with 64-bit FNV-1a first.
  static std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept;
  static RandomState derive(std::uint64_t master, std::uint64_t stream) {
    return RandomState(derive_seed(master, stream));
  }
  static RandomState derive(std::uint64_t master, std::string_view label) {
    return RandomState(derive_seed(master, label));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t RandomState::derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(master ^ splitmix64(stream));
}

inline std::uint64_t RandomState::derive_seed(std::uint64_t master, std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(master, h);
}

}  // namespace rwlab
