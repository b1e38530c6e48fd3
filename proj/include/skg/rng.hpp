#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace skg {

// Independent random streams derived from one user seed. Each consumer
// (bank sampling, sample split, epoch shuffling, ...) owns its own stream
// so changing how many numbers one consumer draws never perturbs another.
enum class Stream : std::uint64_t {
  Bank = 1,
  Split = 2,
  Order = 3,
  Probe = 4,
  Synthetic = 5,
  Repeat = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for `stream` under `seed`; pure function of both.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                          std::uint64_t index) noexcept;

// mt19937_64 plus hand-written transforms. The standard distributions are
// implementation-defined, so uniform/normal/index draws are done here to
// keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  // Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// 0..n-1 in a uniformly random order.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace skg
