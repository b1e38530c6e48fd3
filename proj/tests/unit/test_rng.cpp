#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "skg/rng.hpp"

using skg::Rng;
using skg::Stream;

TEST_CASE("same seed gives the same sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams derived from one seed differ") {
  std::set<std::uint64_t> seeds;
  for (auto s : {Stream::Bank, Stream::Split, Stream::Order, Stream::Probe, Stream::Synthetic,
                 Stream::Repeat}) {
    seeds.insert(skg::derive_seed(7, s));
  }
  CHECK(seeds.size() == 6);
  CHECK(skg::derive_seed(7, Stream::Repeat, 0) != skg::derive_seed(7, Stream::Repeat, 1));
}

TEST_CASE("uniform stays in [0, 1) with mean one half") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(2);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below covers its range without bias") {
  Rng rng(3);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("random permutation is a permutation") {
  Rng rng(4);
  auto p = skg::random_permutation(50, rng);
  std::set<std::size_t> seen(p.begin(), p.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.rbegin() == 49);
}
