#include "skg/graph_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/rng.hpp"

namespace skg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  }
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    const auto end = line.find_first_of(" \t", pos);
    fields.push_back(line.substr(pos, end - pos));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  // from_chars rejects a leading '+'.
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end - pos);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') f(line, line_no);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
}

std::string at_line(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

}  // namespace

std::size_t Graph::add_node(const NodeId& id) {
  if (const auto it = index_.find(id); it != index_.end()) return it->second;
  const std::size_t index = nodes_.size();
  nodes_.push_back(id);
  index_.emplace(id, index);
  out_.emplace_back();
  return index;
}

void Graph::add_edge(const NodeId& source, const NodeId& target,
                     double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    fail(ErrorKind::Validation,
         "edge " + source + "->" + target + " has invalid weight " +
             std::to_string(weight));
  }
  const auto s = add_node(source);
  const auto t = add_node(target);
  edges_.push_back({s, t, weight});
  out_[s][t] = weight;
  if (!directed_) out_[t][s] = weight;
}

std::optional<std::size_t> Graph::find(const NodeId& id) const {
  if (const auto it = index_.find(id); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t Graph::index_of(const NodeId& id) const {
  if (const auto found = find(id)) return *found;
  fail(ErrorKind::Lookup, "unknown node id '" + id + "'");
}

double Graph::weight(std::size_t from, std::size_t to) const {
  const auto& row = out_.at(from);
  const auto it = row.find(to);
  return it == row.end() ? 0.0 : it->second;
}

std::size_t Graph::degree(std::size_t node) const { return out_.at(node).size(); }

Graph parse_graph(std::string_view text, bool weighted, bool directed) {
  Graph graph(directed);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      fail(ErrorKind::Parse, at_line(line_no) + "expected src,dst[,weight], got '" +
                                 std::string(line) + "'");
    }
    double weight = 1.0;
    if (fields.size() == 3) {
      const auto parsed = parse_double(fields[2]);
      if (!parsed) {
        fail(ErrorKind::Parse, at_line(line_no) + "bad weight '" +
                                   std::string(fields[2]) + "'");
      }
      if (!std::isfinite(*parsed) || *parsed < 0.0) {
        fail(ErrorKind::Validation, at_line(line_no) + "negative or non-finite weight " +
                                        std::string(fields[2]));
      }
      if (weighted) weight = *parsed;
    }
    graph.add_edge(NodeId(fields[0]), NodeId(fields[1]), weight);
  });
  return graph;
}

Graph load_graph(const std::filesystem::path& edge_file, bool weighted,
                 bool directed) {
  return parse_graph(read_file(edge_file), weighted, directed);
}

void NodeValues::add(const NodeId& id, double value) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::Validation, "non-finite value for node '" + id + "'");
  }
  if (index_.contains(id)) {
    fail(ErrorKind::Validation, "duplicate value for node '" + id + "'");
  }
  index_.emplace(id, ids_.size());
  ids_.push_back(id);
  values_.push_back(value);
}

double NodeValues::at(const NodeId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorKind::Lookup, "no value for node '" + id + "'");
  return values_[it->second];
}

NodeValues parse_node_values(std::string_view text) {
  NodeValues values;
  bool first = true;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line);
    const bool header = first;
    first = false;
    if (fields.size() != 2 || fields[0].empty()) {
      fail(ErrorKind::Parse,
           at_line(line_no) + "expected node_id,value, got '" + std::string(line) + "'");
    }
    const auto value = parse_double(fields[1]);
    if (!value) {
      if (header) return;
      fail(ErrorKind::Parse,
           at_line(line_no) + "bad value '" + std::string(fields[1]) + "'");
    }
    values.add(NodeId(fields[0]), *value);
  });
  return values;
}

NodeValues load_node_values(const std::filesystem::path& values_file) {
  return parse_node_values(read_file(values_file));
}

std::vector<AdjacencyVector> build_adjacency_vectors(
    const Graph& graph, std::span<const NodeId> sampled,
    std::span<const NodeId> referencing) {
  if (referencing.empty()) {
    fail(ErrorKind::Argument, "referencing node list is empty");
  }
  std::vector<std::size_t> columns;
  columns.reserve(referencing.size());
  for (const auto& id : referencing) columns.push_back(graph.index_of(id));

  std::vector<AdjacencyVector> vectors;
  vectors.reserve(sampled.size());
  for (const auto& id : sampled) {
    const auto row = graph.index_of(id);
    AdjacencyVector a(columns.size(), 0.0);
    for (std::size_t m = 0; m < columns.size(); ++m) {
      a[m] = graph.weight(row, columns[m]);
    }
    vectors.push_back(std::move(a));
  }
  return vectors;
}

TrainingSet make_training_set(const Graph& graph, const NodeValues& values,
                              std::span<const NodeId> sampled,
                              std::span<const NodeId> referencing) {
  if (sampled.empty()) fail(ErrorKind::Argument, "no sampled nodes");
  TrainingSet set;
  set.ids.assign(sampled.begin(), sampled.end());
  set.referencing.assign(referencing.begin(), referencing.end());
  set.vectors = build_adjacency_vectors(graph, sampled, referencing);
  set.values.reserve(sampled.size());
  for (const auto& id : sampled) set.values.push_back(values.at(id));
  return set;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Argument, "vector length mismatch: " + std::to_string(a.size()) +
                                  " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    sum += d * d;
  }
  return sum;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Argument, "vector length mismatch: " + std::to_string(a.size()) +
                                  " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) sum += std::abs(a[m] - b[m]);
  return sum;
}

PairwiseStats pairwise_stats(std::span<const AdjacencyVector> vectors) {
  if (vectors.size() < 2) {
    fail(ErrorKind::Argument, "pairwise statistics need at least 2 vectors");
  }
  PairwiseStats stats;
  std::map<double, std::size_t> counts;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double d_sq = squared_distance(vectors[i], vectors[j]);
      ++counts[d_sq];
      stats.d_l1_max = std::max(stats.d_l1_max, l1_distance(vectors[i], vectors[j]));
      ++stats.pair_count;
    }
  }
  stats.histogram.assign(counts.begin(), counts.end());
  stats.d_sq_max = stats.histogram.back().first;
  for (const auto& [d_sq, count] : stats.histogram) {
    if (d_sq > 0.0) {
      stats.d_sq_min_nonzero = d_sq;
      break;
    }
  }
  return stats;
}

NormalizedValues normalize_values(std::span<const double> train,
                                  std::span<const double> other,
                                  NormalizationPolicy policy) {
  NormalizedValues out;
  out.train.assign(train.begin(), train.end());
  out.other.assign(other.begin(), other.end());
  if (policy == NormalizationPolicy::None) return out;

  double scale = 0.0;
  for (const double y : train) scale = std::max(scale, std::abs(y));
  if (scale == 0.0) {
    fail(ErrorKind::Degenerate, "training values are all zero; cannot normalize");
  }
  out.scale = scale;
  for (auto& y : out.train) y /= scale;
  for (auto& y : out.other) y /= scale;
  return out;
}

NormalizationPolicy parse_normalization_policy(std::string_view name) {
  if (name == "max-abs") return NormalizationPolicy::MaxAbs;
  if (name == "none") return NormalizationPolicy::None;
  fail(ErrorKind::Argument, "unknown normalization policy '" + std::string(name) + "'");
}

const char* to_string(NormalizationPolicy policy) noexcept {
  return policy == NormalizationPolicy::MaxAbs ? "max-abs" : "none";
}

SampleSplit split_sample(std::span<const NodeId> node_ids, double fraction,
                         std::uint64_t seed) {
  if (node_ids.empty()) fail(ErrorKind::Argument, "cannot split an empty node list");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorKind::Argument, "sample fraction must be in (0, 1]");
  }
  const auto n = node_ids.size();
  const auto k = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));

  Rng rng(seed, Stream::Split);
  auto order = random_permutation(n, rng);
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;

  SampleSplit split;
  split.fraction = fraction;
  split.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    (chosen[i] ? split.sampled : split.tested).push_back(node_ids[i]);
  }
  return split;
}

void save_split_manifest(const SampleSplit& split,
                         const std::filesystem::path& path) {
  nlohmann::json j = {
      {"seed", split.seed},
      {"fraction", split.fraction},
      {"sampled", split.sampled},
      {"tested", split.tested},
  };
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SampleSplit load_split_manifest(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    SampleSplit split;
    split.seed = j.at("seed").get<std::uint64_t>();
    split.fraction = j.at("fraction").get<double>();
    split.sampled = j.at("sampled").get<std::vector<NodeId>>();
    split.tested = j.at("tested").get<std::vector<NodeId>>();
    return split;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

std::vector<NodeId> drop_isolated(const Graph& graph,
                                  std::span<const NodeId> node_ids) {
  std::vector<NodeId> kept;
  for (const auto& id : node_ids) {
    if (graph.degree(graph.index_of(id)) > 0) kept.push_back(id);
  }
  return kept;
}

std::vector<NodeId> register_valued_nodes(Graph& graph,
                                          const NodeValues& values) {
  for (const auto& id : values.ids()) graph.add_node(id);
  std::vector<NodeId> ids;
  for (const auto& id : graph.nodes()) {
    if (values.contains(id)) ids.push_back(id);
  }
  return ids;
}

}  // namespace skg
