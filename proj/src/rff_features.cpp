#include "skg/rff_features.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/rng.hpp"

namespace skg {
namespace {

constexpr std::array<char, 8> kBankMagic = {'S', 'K', 'G', 'B', 'A', 'N', 'K', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) fail(ErrorKind::Parse, "truncated bank file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

void check_bank_shape(double sigma_sq, std::size_t features, std::size_t dimension) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    fail(ErrorKind::Argument, "kernel variance must be positive and finite");
  }
  if (features == 0) fail(ErrorKind::Argument, "feature count D must be >= 1");
  if (dimension == 0) fail(ErrorKind::Argument, "input dimension M must be >= 1");
}

}  // namespace

RandomFeatureBank::RandomFeatureBank(double sigma_sq, std::size_t features,
                                     std::size_t dimension, std::uint64_t seed,
                                     std::vector<double> frequencies)
    : sigma_sq_(sigma_sq),
      features_(features),
      dimension_(dimension),
      seed_(seed),
      frequencies_(std::move(frequencies)) {}

RandomFeatureBank RandomFeatureBank::sample(double sigma_sq, std::size_t features,
                                            std::size_t dimension,
                                            std::uint64_t seed) {
  check_bank_shape(sigma_sq, features, dimension);
  const double scale = 1.0 / std::sqrt(sigma_sq);
  Rng rng(seed, Stream::Bank);
  std::vector<double> frequencies(features * dimension);
  for (auto& x : frequencies) x = scale * rng.normal();
  return RandomFeatureBank(sigma_sq, features, dimension, seed, std::move(frequencies));
}

RandomFeatureBank RandomFeatureBank::from_frequencies(double sigma_sq,
                                                      std::size_t features,
                                                      std::size_t dimension,
                                                      std::uint64_t seed,
                                                      std::vector<double> frequencies) {
  check_bank_shape(sigma_sq, features, dimension);
  if (frequencies.size() != features * dimension) {
    fail(ErrorKind::Argument, "frequency matrix has " + std::to_string(frequencies.size()) +
                                  " entries, expected D*M = " +
                                  std::to_string(features * dimension));
  }
  return RandomFeatureBank(sigma_sq, features, dimension, seed, std::move(frequencies));
}

void RandomFeatureBank::map_into(std::span<const double> a, std::span<double> out) const {
  if (a.size() != dimension_) {
    fail(ErrorKind::Argument, "adjacency vector has length " + std::to_string(a.size()) +
                                  ", bank expects " + std::to_string(dimension_));
  }
  if (out.size() != 2 * features_) {
    fail(ErrorKind::Argument, "feature buffer must have length 2D");
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(features_));
  for (std::size_t k = 0; k < features_; ++k) {
    const double phase = dot(frequency(k), a);
    out[k] = std::sin(phase) * norm;
    out[features_ + k] = std::cos(phase) * norm;
  }
}

FeatureVector RandomFeatureBank::map(std::span<const double> a) const {
  FeatureVector z(2 * features_);
  map_into(a, z);
  return z;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Argument, "dot product length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double kernel_exact(std::span<const double> a1, std::span<const double> a2,
                    double sigma_sq) {
  if (!(sigma_sq > 0.0)) fail(ErrorKind::Argument, "kernel variance must be positive");
  if (a1.size() != a2.size()) fail(ErrorKind::Argument, "kernel input length mismatch");
  double d_sq = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const double d = a1[i] - a2[i];
    d_sq += d * d;
  }
  return std::exp(-d_sq / (2.0 * sigma_sq));
}

std::string to_hex_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%a", value);
  return buffer;
}

double from_hex_float(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    fail(ErrorKind::Parse, "bad float literal '" + text + "'");
  }
  return value;
}

std::string bank_to_json(const RandomFeatureBank& bank) {
  nlohmann::json freq = nlohmann::json::array();
  for (const double x : bank.frequencies()) freq.push_back(to_hex_float(x));
  const nlohmann::json j = {
      {"format", "skg-bank-v1"},
      {"M", bank.dimension()},
      {"D", bank.features()},
      {"sigma_sq", to_hex_float(bank.sigma_sq())},
      {"seed", bank.seed()},
      {"frequencies", std::move(freq)},
  };
  return j.dump();
}

RandomFeatureBank bank_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto dimension = j.at("M").get<std::size_t>();
    const auto features = j.at("D").get<std::size_t>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    const double sigma_sq = from_hex_float(j.at("sigma_sq").get<std::string>());
    std::vector<double> frequencies;
    frequencies.reserve(features * dimension);
    for (const auto& x : j.at("frequencies")) {
      frequencies.push_back(from_hex_float(x.get<std::string>()));
    }
    return RandomFeatureBank::from_frequencies(sigma_sq, features, dimension, seed,
                                               std::move(frequencies));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("bank JSON: ") + e.what());
  }
}

void save_bank_binary(const RandomFeatureBank& bank, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path.string());
  out.write(kBankMagic.data(), kBankMagic.size());
  write_u64(out, bank.dimension());
  write_u64(out, bank.features());
  write_u64(out, std::bit_cast<std::uint64_t>(bank.sigma_sq()));
  write_u64(out, bank.seed());
  for (const double x : bank.frequencies()) write_u64(out, std::bit_cast<std::uint64_t>(x));
}

RandomFeatureBank load_bank_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kBankMagic) fail(ErrorKind::Parse, "not a bank file: " + path.string());
  const auto dimension = read_u64(in);
  const auto features = read_u64(in);
  const double sigma_sq = std::bit_cast<double>(read_u64(in));
  const auto seed = read_u64(in);
  std::vector<double> frequencies(features * dimension);
  for (auto& x : frequencies) x = std::bit_cast<double>(read_u64(in));
  return RandomFeatureBank::from_frequencies(sigma_sq, features, dimension, seed,
                                             std::move(frequencies));
}

}  // namespace skg
