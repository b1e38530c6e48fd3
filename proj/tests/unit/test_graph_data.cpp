#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "skg/errors.hpp"
#include "skg/graph_data.hpp"
#include "skg/rng.hpp"

using namespace skg;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an skg::Error");
  return ErrorKind::Argument;
}

}  // namespace

TEST_CASE("edge list parsing") {
  const auto g = parse_graph("# header comment\n1,2\n\n2,3\n1 3\n", false, false);
  CHECK(g.node_count() == 3);
  CHECK(g.weight(g.index_of("1"), g.index_of("2")) == 1.0);
  CHECK(g.weight(g.index_of("2"), g.index_of("1")) == 1.0);
  CHECK(g.weight(g.index_of("1"), g.index_of("3")) == 1.0);
}

TEST_CASE("weighted and unweighted loads") {
  const std::string text = "a,b,2.5\nb,c,0.5\n";
  const auto w = parse_graph(text, true, false);
  CHECK(w.weight(w.index_of("a"), w.index_of("b")) == 2.5);
  const auto u = parse_graph(text, false, false);
  CHECK(u.weight(u.index_of("a"), u.index_of("b")) == 1.0);
}

TEST_CASE("malformed edge lists") {
  CHECK(kind_of([] { parse_graph("1,2,3,4\n", true, false); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_graph("1,2,abc\n", true, false); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_graph("1,2,-1\n", true, false); }) == ErrorKind::Validation);
  CHECK(kind_of([] { load_graph("/nonexistent/edges.csv", false, false); }) ==
        ErrorKind::Parse);
}

TEST_CASE("node values") {
  const auto v = parse_node_values("node_id,value\n1,0.5\n2,-3\n");
  CHECK(v.size() == 2);
  CHECK(v.at("2") == -3.0);
  CHECK(kind_of([&] { v.at("9"); }) == ErrorKind::Lookup);
  CHECK(kind_of([] { parse_node_values("1,2\n1,3\n"); }) == ErrorKind::Validation);
  CHECK_THROWS_AS(parse_node_values("1,nan\n"), Error);
}

TEST_CASE("adjacency vectors") {
  SUBCASE("isolated sampled node gives a zero vector") {
    Graph g;
    g.add_node("1");
    g.add_edge("2", "3");
    const std::vector<NodeId> sampled{"1"}, ref{"1", "2", "3"};
    const auto v = build_adjacency_vectors(g, sampled, ref);
    CHECK(v[0] == AdjacencyVector{0, 0, 0});
  }
  SUBCASE("undirected triangle") {
    const auto g = parse_graph("1,2\n2,3\n3,1\n", false, false);
    const std::vector<NodeId> sampled{"1"}, ref{"1", "2", "3"};
    CHECK(build_adjacency_vectors(g, sampled, ref)[0] == AdjacencyVector{0, 1, 1});
  }
  SUBCASE("directed graphs use out-edges") {
    const auto g = parse_graph("1,2\n", false, true);
    const std::vector<NodeId> sampled{"2"}, ref{"1", "2"};
    CHECK(build_adjacency_vectors(g, sampled, ref)[0] == AdjacencyVector{0, 0});
    const std::vector<NodeId> s1{"1"};
    CHECK(build_adjacency_vectors(g, s1, ref)[0] == AdjacencyVector{0, 1});
  }
  SUBCASE("unknown ids are lookup errors") {
    const auto g = parse_graph("1,2\n", false, false);
    const std::vector<NodeId> sampled{"7"}, ref{"1"};
    CHECK(kind_of([&] { build_adjacency_vectors(g, sampled, ref); }) == ErrorKind::Lookup);
  }
}

TEST_CASE("adjacency entries round-trip the edge list") {
  Rng rng(11);
  Graph g(true);
  for (int i = 0; i < 30; ++i) g.add_node(std::to_string(i));
  for (int e = 0; e < 120; ++e) {
    const auto s = std::to_string(rng.below(30));
    const auto t = std::to_string(rng.below(30));
    g.add_edge(s, t, 0.5 + rng.uniform());
  }
  const auto& ids = g.nodes();
  const auto vectors = build_adjacency_vectors(g, ids, ids);
  std::size_t nonzero = 0;
  for (const auto& v : vectors) nonzero += std::count_if(v.begin(), v.end(), [](double x) {
                                  return x != 0.0;
                                });
  std::set<std::pair<std::size_t, std::size_t>> distinct;
  for (const auto& e : g.edges()) {
    distinct.insert({e.source, e.target});
    CHECK(vectors[e.source][e.target] == g.weight(e.source, e.target));
  }
  CHECK(nonzero == distinct.size());
}

TEST_CASE("pairwise statistics") {
  const std::vector<AdjacencyVector> v{{1, 0}, {0, 1}, {1, 1}};
  const auto s = pairwise_stats(v);
  CHECK(s.pair_count == 3);
  CHECK(s.d_sq_max == 2.0);
  CHECK(s.d_sq_min_nonzero.value() == 1.0);

  const std::vector<AdjacencyVector> same{{1, 2}, {1, 2}};
  const auto z = pairwise_stats(same);
  CHECK(z.d_sq_max == 0.0);
  CHECK_FALSE(z.d_sq_min_nonzero.has_value());

  const std::vector<AdjacencyVector> one{{1}};
  CHECK(kind_of([&] { pairwise_stats(one); }) == ErrorKind::Argument);
}

TEST_CASE("pairwise statistics ignore input order") {
  Rng rng(5);
  std::vector<AdjacencyVector> v(25, AdjacencyVector(12));
  for (auto& a : v) for (auto& x : a) x = static_cast<double>(rng.below(3));
  const auto ref = pairwise_stats(v);
  for (int trial = 0; trial < 10; ++trial) {
    rng.shuffle(std::span<AdjacencyVector>(v));
    const auto s = pairwise_stats(v);
    CHECK(s.d_sq_max == ref.d_sq_max);
    CHECK(s.d_sq_min_nonzero == ref.d_sq_min_nonzero);
    CHECK(s.d_l1_max == ref.d_l1_max);
    CHECK(s.histogram == ref.histogram);
  }
}

TEST_CASE("value normalization") {
  const std::vector<double> train{2, -4}, other{1};
  const auto n = normalize_values(train, other);
  CHECK(n.scale == 4.0);
  CHECK(n.train == std::vector<double>{0.5, -1.0});
  CHECK(n.other == std::vector<double>{0.25});

  const std::vector<double> one{1};
  const auto id = normalize_values(one, {});
  CHECK(id.scale == 1.0);
  CHECK(id.train == one);

  const std::vector<double> zeros{0, 0};
  CHECK(kind_of([&] { normalize_values(zeros, {}); }) == ErrorKind::Degenerate);
  CHECK(normalize_values(zeros, {}, NormalizationPolicy::None).train == zeros);
  CHECK(kind_of([] { parse_normalization_policy("zscore"); }) == ErrorKind::Argument);
}

TEST_CASE("normalization is invertible") {
  Rng rng(8);
  std::vector<double> values(200);
  for (auto& x : values) x = (rng.uniform() - 0.5) * 1e4;
  const auto n = normalize_values(values, {});
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(std::abs(n.train[i] * n.scale - values[i]) <= 1e-12 * std::abs(values[i]));
  }
}

TEST_CASE("sample splitting") {
  std::vector<NodeId> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(std::to_string(i));
  const auto s = split_sample(ids, 0.4, 1);
  CHECK(s.sampled.size() == 4);
  CHECK(s.tested.size() == 6);
  CHECK(split_sample(ids, 0.4, 1).sampled == s.sampled);
  CHECK(split_sample(ids, 1.0, 1).tested.empty());
  CHECK(kind_of([&] { split_sample(ids, 0.0, 1); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { split_sample(ids, 1.5, 1); }) == ErrorKind::Argument);

  std::set<std::vector<NodeId>> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) distinct.insert(split_sample(ids, 0.4, seed).sampled);
  CHECK(distinct.size() >= 2);
}

TEST_CASE("split manifest round trip") {
  std::vector<NodeId> ids{"a", "b", "c", "d", "e"};
  const auto s = split_sample(ids, 0.6, 9);
  const auto path = std::filesystem::temp_directory_path() / "skg_split_test.json";
  save_split_manifest(s, path);
  const auto r = load_split_manifest(path);
  CHECK(r.sampled == s.sampled);
  CHECK(r.tested == s.tested);
  CHECK(r.seed == 9);
  std::filesystem::remove(path);
}

TEST_CASE("isolated node filter") {
  auto g = parse_graph("1,2\n", false, true);
  g.add_node("3");
  const std::vector<NodeId> ids{"1", "2", "3"};
  CHECK(drop_isolated(g, ids) == std::vector<NodeId>{"1"});
}
