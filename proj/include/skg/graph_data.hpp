#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skg {

using NodeId = std::string;

// Dense connection weights from one node toward each referencing node.
using AdjacencyVector = std::vector<double>;

struct Edge {
  std::size_t source;
  std::size_t target;
  double weight;
};

// Node registry plus weighted edges. Undirected edges are visible from both
// endpoints; directed edges only from their source. A repeated edge
// overwrites the earlier weight.
class Graph {
 public:
  explicit Graph(bool directed = false) : directed_(directed) {}

  std::size_t add_node(const NodeId& id);
  void add_edge(const NodeId& source, const NodeId& target, double weight = 1.0);

  bool directed() const noexcept { return directed_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<std::size_t> find(const NodeId& id) const;
  // Throws a lookup error for unknown ids.
  std::size_t index_of(const NodeId& id) const;

  // Weight of the edge leaving `from` toward `to`, 0 when absent.
  double weight(std::size_t from, std::size_t to) const;
  // Out-degree for directed graphs, degree otherwise.
  std::size_t degree(std::size_t node) const;

 private:
  bool directed_;
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::unordered_map<std::size_t, double>> out_;
};

// Edge-list CSV: `src,dst[,weight]`, `#` comments and blank lines skipped.
// Lines without commas are split on whitespace so raw SNAP files load too.
// Unweighted loads force every weight to 1.0; a weight column, when
// present, is still validated.
Graph load_graph(const std::filesystem::path& edge_file, bool weighted,
                 bool directed);
Graph parse_graph(std::string_view text, bool weighted, bool directed);

class NodeValues {
 public:
  void add(const NodeId& id, double value);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<NodeId>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool contains(const NodeId& id) const { return index_.contains(id); }
  // Throws a lookup error for unknown ids.
  double at(const NodeId& id) const;

 private:
  std::vector<NodeId> ids_;
  std::vector<double> values_;
  std::unordered_map<NodeId, std::size_t> index_;
};

// Node-value CSV `node_id,value`; a non-numeric first row is a header.
NodeValues load_node_values(const std::filesystem::path& values_file);
NodeValues parse_node_values(std::string_view text);

struct TrainingSet {
  std::vector<NodeId> ids;
  std::vector<AdjacencyVector> vectors;
  std::vector<double> values;
  std::vector<NodeId> referencing;

  std::size_t size() const noexcept { return vectors.size(); }
  std::size_t dimension() const noexcept { return referencing.size(); }
};

// One vector per sampled node. Entry m is the weight of the edge from the
// sampled node toward referencing[m] (out-edge for directed graphs).
std::vector<AdjacencyVector> build_adjacency_vectors(
    const Graph& graph, std::span<const NodeId> sampled,
    std::span<const NodeId> referencing);

TrainingSet make_training_set(const Graph& graph, const NodeValues& values,
                              std::span<const NodeId> sampled,
                              std::span<const NodeId> referencing);

double squared_distance(std::span<const double> a, std::span<const double> b);
double l1_distance(std::span<const double> a, std::span<const double> b);

struct PairwiseStats {
  double d_sq_max = 0.0;
  std::optional<double> d_sq_min_nonzero;
  double d_l1_max = 0.0;
  std::size_t pair_count = 0;
  // Exact squared distances with multiplicities, ascending.
  std::vector<std::pair<double, std::size_t>> histogram;
};

// Statistics over all N(N-1)/2 unordered pairs.
PairwiseStats pairwise_stats(std::span<const AdjacencyVector> vectors);

enum class NormalizationPolicy { MaxAbs, None };

struct NormalizedValues {
  double scale = 1.0;
  std::vector<double> train;
  std::vector<double> other;
};

// Divides both lists by the largest absolute training value.
NormalizedValues normalize_values(
    std::span<const double> train, std::span<const double> other,
    NormalizationPolicy policy = NormalizationPolicy::MaxAbs);

NormalizationPolicy parse_normalization_policy(std::string_view name);
const char* to_string(NormalizationPolicy policy) noexcept;

struct SampleSplit {
  std::vector<NodeId> sampled;
  std::vector<NodeId> tested;
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

// round(fraction * n) nodes sampled uniformly; both halves keep the input
// order. Deterministic in `seed`.
SampleSplit split_sample(std::span<const NodeId> node_ids, double fraction,
                         std::uint64_t seed);

void save_split_manifest(const SampleSplit& split,
                         const std::filesystem::path& path);
SampleSplit load_split_manifest(const std::filesystem::path& path);

// Nodes with at least one (out-)edge, in input order.
std::vector<NodeId> drop_isolated(const Graph& graph,
                                  std::span<const NodeId> node_ids);

// Registers valued ids missing from the graph as isolated nodes and
// returns every valued node in graph order.
std::vector<NodeId> register_valued_nodes(Graph& graph,
                                          const NodeValues& values);

}  // namespace skg
