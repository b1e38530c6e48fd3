#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "oracles.hpp"
#include "skg/errors.hpp"
#include "skg/rff_features.hpp"
#include "skg/rng.hpp"

using namespace skg;

TEST_CASE("bank entries have variance 1 / sigma_sq") {
  for (const auto [sigma_sq, tol] : {std::pair{1.0, 0.05}, std::pair{4.0, 0.02}}) {
    const auto bank = sample_bank(sigma_sq, 10000, 1, 3);
    double s2 = 0.0;
    for (double w : bank.frequencies()) s2 += w * w;
    CHECK(std::abs(s2 / 10000 - 1.0 / sigma_sq) < tol);
  }
}

TEST_CASE("bank entries pass a Kolmogorov-Smirnov test against the Gaussian") {
  for (double sigma_sq : {0.5, 2.0, 10.0}) {
    const auto bank = sample_bank(sigma_sq, 500, 20, 17);
    const std::vector<double> w(bank.frequencies().begin(), bank.frequencies().end());
    CHECK(oracle::ks_statistic(w, 1.0 / std::sqrt(sigma_sq)) < oracle::ks_critical_001(w.size()));
  }
}

TEST_CASE("banks are deterministic per seed") {
  CHECK(sample_bank(2.0, 50, 7, 1) == sample_bank(2.0, 50, 7, 1));
  CHECK_FALSE(sample_bank(2.0, 50, 7, 1) == sample_bank(2.0, 50, 7, 2));
}

TEST_CASE("invalid bank parameters") {
  CHECK_THROWS_AS(sample_bank(0.0, 10, 2, 0), Error);
  CHECK_THROWS_AS(sample_bank(1.0, 0, 2, 0), Error);
}

TEST_CASE("feature map layout") {
  const auto bank = sample_bank(1.0, 2, 3, 0);
  const std::vector<double> zero(3, 0.0);
  const auto z = feature_map(bank, zero);
  REQUIRE(z.size() == 4);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(z[3] == doctest::Approx(1 / std::sqrt(2.0)));
  const std::vector<double> wrong(2, 0.0);
  CHECK_THROWS_AS(feature_map(bank, wrong), Error);
}

TEST_CASE("feature map matches the reference implementation") {
  const auto bank = sample_bank(3.0, 64, 9, 5);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(9);
    for (auto& x : a) x = static_cast<double>(rng.below(3));
    const auto z = feature_map(bank, a);
    const auto r = oracle::features(bank.frequencies(), 64, 9, a);
    for (std::size_t k = 0; k < z.size(); ++k) CHECK(z[k] == doctest::Approx(r[k]).epsilon(1e-12));
  }
}

TEST_CASE("features have unit norm") {
  const auto bank = sample_bank(2.0, 100, 15, 9);
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(15);
    for (auto& x : a) x = rng.uniform() * 5.0;
    const auto z = feature_map(bank, a);
    REQUIRE(std::abs(dot(z, z) - 1.0) < 1e-10);
  }
}

TEST_CASE("inner products approximate the Gaussian kernel") {
  const auto bank = sample_bank(2.0, 10000, 4, 21);
  const std::vector<double> a1{0, 0, 0, 0}, a2{1, 0, 0, 0};
  CHECK(std::abs(dot(feature_map(bank, a1), feature_map(bank, a2)) - std::exp(-0.25)) < 0.02);
}

TEST_CASE("exact kernel") {
  const std::vector<double> a{1, 2, 3};
  CHECK(kernel_exact(a, a, 4.0) == 1.0);
  std::vector<double> b(15, 0.0), c(15, 1.0);
  CHECK(kernel_exact(b, c, 10.0) == doctest::Approx(0.47237).epsilon(1e-5));
  double prev = 0.0;
  for (double s : {1.0, 10.0, 100.0, 1e6}) {
    const double k = kernel_exact(b, c, s);
    CHECK(k > prev);
    prev = k;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-4));
  const std::vector<double> shorter{1};
  CHECK_THROWS_AS(kernel_exact(a, shorter, 1.0), Error);
}

TEST_CASE("bank JSON round trip is bit exact") {
  const auto bank = sample_bank(0.37, 33, 11, 77);
  const auto back = bank_from_json(bank_to_json(bank));
  CHECK(back == bank);
  CHECK_THROWS_AS(bank_from_json("{\"format\":\"other\"}"), Error);
}

TEST_CASE("bank binary round trip is bit exact") {
  const auto bank = sample_bank(5.5, 40, 13, 1234);
  const auto path = std::filesystem::temp_directory_path() / "skg_bank_test.bin";
  save_bank_binary(bank, path);
  CHECK(load_bank_binary(path) == bank);
  std::filesystem::remove(path);
}

TEST_CASE("hex floats") {
  for (double v : {0.1, -3.25e-300, 1e308, 0.0}) CHECK(from_hex_float(to_hex_float(v)) == v);
  CHECK_THROWS_AS(from_hex_float("zz"), Error);
}
