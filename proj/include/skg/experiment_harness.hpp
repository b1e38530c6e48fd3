#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skg/graph_data.hpp"
#include "skg/rff_features.hpp"
#include "skg/skg_model.hpp"
#include "skg/variance_select.hpp"
#include "skg/weight_analysis.hpp"

namespace skg {

// Graph plus nodal values, restricted to the nodes eligible for sampling.
struct Dataset {
  Graph graph;
  NodeValues values;
  std::vector<NodeId> nodes;
};

// Registers valued nodes (or takes every graph node when `values` is empty); with `drop_isolated_nodes` set, nodes without
// (out-)edges are excluded from sampling and testing.
Dataset make_dataset(Graph graph, NodeValues values, bool drop_isolated_nodes = false);

enum class ReferencingPolicy { Sampled, AllNodes };

struct ExperimentConfig {
  double eta = 0.1;
  std::size_t features = 200;
  std::size_t epochs = 3;
  double sample_fraction = 0.4;
  ReferencingPolicy referencing = ReferencingPolicy::Sampled;
  NormalizationPolicy normalization = NormalizationPolicy::MaxAbs;
  // Reuse one split (drawn from split_seed) for every repeat.
  bool fixed_split = false;
  std::uint64_t split_seed = 0;
  bool retain_artifacts = false;
};

// |y_true - y_pred|^2 / |y_true|^2
double gnmse(std::span<const double> y_true, std::span<const double> y_pred);

// Everything needed to revisit a run: normalized training set, the trained
// model's trace, and tested nodes with their predictions.
struct RunArtifacts {
  TrainingSet set;
  std::shared_ptr<const RandomFeatureBank> bank;
  double eta = 0.0;
  double value_scale = 1.0;
  TrainingTrace trace;
  std::vector<NodeId> tested_ids;
  std::vector<AdjacencyVector> tested_vectors;
  std::vector<double> tested_values;
  std::vector<double> predictions;
};

struct RunResult {
  double gnmse = 0.0;
  std::size_t sampled = 0;
  std::size_t tested = 0;
  std::optional<RunArtifacts> artifacts;
};

// split -> bank -> train -> predict tested nodes -> GNMSE. Deterministic in
// `seed` (and config.split_seed under fixed_split).
RunResult run_once(const Dataset& dataset, const ExperimentConfig& config,
                   double sigma_sq, std::uint64_t seed);

struct GnmseResult {
  double sigma_sq = 0.0;
  double gnmse_mean = 0.0;
  double gnmse_std = 0.0;
  std::size_t repeats = 0;
  std::vector<std::uint64_t> seeds;
  bool is_theoretical_ed = false;
};

// Strictly increasing positive variance grid.
struct SweepGrid {
  std::vector<double> sigma_sq;
  std::optional<double> theoretical_ed;

  static SweepGrid log_spaced(double lo, double hi, std::size_t points);
  // `points` log-spaced values over [ce / 10, 10 * da] with sigma_ed inserted.
  static SweepGrid around(const SelectionReport& report, std::size_t points = 25);

  void validate() const;
};

std::vector<std::uint64_t> repeat_seeds(std::uint64_t base_seed, std::size_t repeats);

// Mean and sample standard deviation per grid point. Cells run on up to
// `jobs` threads (0 = hardware concurrency); results do not depend on it.
std::vector<GnmseResult> sweep(const Dataset& dataset, const ExperimentConfig& config,
                               const SweepGrid& grid, std::span<const std::uint64_t> seeds,
                               std::size_t jobs = 1);
std::vector<GnmseResult> sweep(const Dataset& dataset, const ExperimentConfig& config,
                               const SweepGrid& grid, std::size_t repeats,
                               std::uint64_t base_seed, std::size_t jobs = 1);

// Order-independent summary of one grid point.
GnmseResult summarize(double sigma_sq, std::span<const double> values,
                      std::span<const std::uint64_t> seeds);

struct ScatterRow {
  double d_sq;
  double abs_dy;
};

// One row per unordered pair of sampled nodes.
std::vector<ScatterRow> export_scatter(const TrainingSet& set);

// Contribution weights of every training step toward one tested node.
WeightTrace probe_weights(const RunArtifacts& artifacts, std::size_t tested_index);

struct TraceRow {
  std::size_t i;
  double b;
  double f;
  std::optional<double> alpha;
  AlphaFlag flag;
};

std::vector<TraceRow> export_bf_trace(const RunResult& run, const NodeId& tested_node);

void write_sweep_csv(std::span<const GnmseResult> results, std::ostream& out);
void write_scatter_csv(std::span<const ScatterRow> rows, std::ostream& out);
void write_bf_trace_csv(std::span<const TraceRow> rows, std::ostream& out);

// Planted-community graph whose nodal values follow community means, so
// similar adjacency vectors imply similar values.
struct PlantedSpec {
  std::size_t nodes = 200;
  std::size_t communities = 4;
  double p_in = 0.5;
  double p_out = 0.02;
  double value_noise = 0.05;
  std::uint64_t seed = 0;
};

Dataset make_planted_dataset(const PlantedSpec& spec);

void write_edge_list(const Graph& graph, std::ostream& out);
void write_node_values(const NodeValues& values, std::ostream& out);

}  // namespace skg
