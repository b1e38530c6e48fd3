#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace skg {

// Feature vector of length 2D: D sines followed by D cosines, scaled by 1/sqrt(D).
using FeatureVector = std::vector<double>;

/// Frozen set of D random frequency vectors for a Gaussian kernel of
/// variance sigma_sq. Entries are i.i.d. N(0, 1/sigma_sq), so that
/// z(a)^T z(b) approximates exp(-|a-b|^2 / (2 sigma_sq)).
///
/// A bank is immutable after construction and may be shared between
/// threads.
class RandomFeatureBank {
 public:
  /// Draws a fresh bank from the Bank stream of `seed`.
  static RandomFeatureBank sample(double sigma_sq, std::size_t features,
                                  std::size_t dimension, std::uint64_t seed);

  /// Rebuilds a bank from stored frequencies (row-major D x M).
  static RandomFeatureBank from_frequencies(double sigma_sq, std::size_t features,
                                            std::size_t dimension,
                                            std::uint64_t seed,
                                            std::vector<double> frequencies);

  double sigma_sq() const noexcept { return sigma_sq_; }
  std::size_t features() const noexcept { return features_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const double> frequencies() const noexcept { return frequencies_; }
  std::span<const double> frequency(std::size_t k) const {
    return std::span<const double>(frequencies_).subspan(k * dimension_, dimension_);
  }

  FeatureVector map(std::span<const double> a) const;
  void map_into(std::span<const double> a, std::span<double> out) const;

  friend bool operator==(const RandomFeatureBank&, const RandomFeatureBank&) = default;

 private:
  RandomFeatureBank(double sigma_sq, std::size_t features, std::size_t dimension,
                    std::uint64_t seed, std::vector<double> frequencies);

  double sigma_sq_;
  std::size_t features_;
  std::size_t dimension_;
  std::uint64_t seed_;
  std::vector<double> frequencies_;
};

inline RandomFeatureBank sample_bank(double sigma_sq, std::size_t features,
                                     std::size_t dimension, std::uint64_t seed) {
  return RandomFeatureBank::sample(sigma_sq, features, dimension, seed);
}

inline FeatureVector feature_map(const RandomFeatureBank& bank,
                                 std::span<const double> a) {
  return bank.map(a);
}

double dot(std::span<const double> a, std::span<const double> b);

// exp(-|a1 - a2|^2 / (2 sigma_sq))
double kernel_exact(std::span<const double> a1, std::span<const double> a2,
                    double sigma_sq);

// Bank files. JSON stores every float as a C99 hex-float string; binary is
// a fixed header followed by row-major little-endian doubles. Both round
// trip bit-exactly.
std::string bank_to_json(const RandomFeatureBank& bank);
RandomFeatureBank bank_from_json(std::string_view text);
void save_bank_binary(const RandomFeatureBank& bank,
                      const std::filesystem::path& path);
RandomFeatureBank load_bank_binary(const std::filesystem::path& path);

std::string to_hex_float(double value);
double from_hex_float(const std::string& text);

}  // namespace skg
