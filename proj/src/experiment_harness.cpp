#include "skg/experiment_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "skg/errors.hpp"
#include "skg/rng.hpp"

namespace skg {

Dataset make_dataset(Graph graph, NodeValues values, bool drop_isolated_nodes) {
  Dataset dataset{std::move(graph), std::move(values), {}};
  // Without values every graph node is eligible (selection needs no values).
  dataset.nodes = dataset.values.size() == 0 ? dataset.graph.nodes()
                                             : register_valued_nodes(dataset.graph, dataset.values);
  if (drop_isolated_nodes) dataset.nodes = drop_isolated(dataset.graph, dataset.nodes);
  if (dataset.nodes.empty()) fail(ErrorKind::Degenerate, "dataset has no usable nodes");
  return dataset;
}

double gnmse(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) {
    fail(ErrorKind::Argument, "GNMSE inputs differ in length");
  }
  if (y_true.empty()) fail(ErrorKind::Argument, "GNMSE needs at least one tested node");
  double residual = 0.0;
  double signal = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    residual += r * r;
    signal += y_true[i] * y_true[i];
  }
  if (signal == 0.0) fail(ErrorKind::Degenerate, "true values are all zero");
  return residual / signal;
}

RunResult run_once(const Dataset& dataset, const ExperimentConfig& config,
                   double sigma_sq, std::uint64_t seed) {
  const auto split = split_sample(dataset.nodes, config.sample_fraction,
                                  config.fixed_split ? config.split_seed : seed);
  if (split.sampled.empty()) fail(ErrorKind::Degenerate, "split produced no sampled nodes");
  if (split.tested.empty()) fail(ErrorKind::Degenerate, "split left no tested nodes");

  const auto& referencing =
      config.referencing == ReferencingPolicy::Sampled ? split.sampled : dataset.nodes;
  auto set = make_training_set(dataset.graph, dataset.values, split.sampled, referencing);
  auto tested_vectors = build_adjacency_vectors(dataset.graph, split.tested, referencing);
  std::vector<double> tested_raw;
  tested_raw.reserve(split.tested.size());
  for (const auto& id : split.tested) tested_raw.push_back(dataset.values.at(id));

  auto normalized = normalize_values(set.values, tested_raw, config.normalization);
  set.values = std::move(normalized.train);

  auto bank = std::make_shared<const RandomFeatureBank>(
      RandomFeatureBank::sample(sigma_sq, config.features, set.dimension(), seed));
  SkgModel model(bank, config.eta);
  auto trace = train(model, set, config.epochs, seed);

  std::vector<double> predictions;
  predictions.reserve(tested_vectors.size());
  for (const auto& a : tested_vectors) predictions.push_back(model.predict(a));

  RunResult result;
  result.gnmse = gnmse(normalized.other, predictions);
  result.sampled = split.sampled.size();
  result.tested = split.tested.size();
  if (config.retain_artifacts) {
    result.artifacts = RunArtifacts{std::move(set),
                                    std::move(bank),
                                    config.eta,
                                    normalized.scale,
                                    std::move(trace),
                                    split.tested,
                                    std::move(tested_vectors),
                                    std::move(normalized.other),
                                    std::move(predictions)};
  }
  return result;
}

SweepGrid SweepGrid::log_spaced(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo)) fail(ErrorKind::Argument, "grid needs 0 < lo < hi");
  if (points < 2) fail(ErrorKind::Argument, "grid needs at least 2 points");
  SweepGrid grid;
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    grid.sigma_sq.push_back(lo * std::exp(step * static_cast<double>(k)));
  }
  grid.sigma_sq.back() = hi;
  return grid;
}

SweepGrid SweepGrid::around(const SelectionReport& report, std::size_t points) {
  auto grid = log_spaced(report.sigma_sq_ce / 10.0, 10.0 * report.sigma_sq_da, points);
  const double ed = report.sigma_sq_ed;
  grid.theoretical_ed = ed;
  const auto pos = std::lower_bound(grid.sigma_sq.begin(), grid.sigma_sq.end(), ed);
  if (pos == grid.sigma_sq.end() || *pos != ed) grid.sigma_sq.insert(pos, ed);
  return grid;
}

void SweepGrid::validate() const {
  if (sigma_sq.empty()) fail(ErrorKind::Argument, "empty variance grid");
  for (std::size_t k = 0; k < sigma_sq.size(); ++k) {
    if (!(sigma_sq[k] > 0.0) || !std::isfinite(sigma_sq[k])) {
      fail(ErrorKind::Argument, "grid values must be positive and finite");
    }
    if (k > 0 && !(sigma_sq[k] > sigma_sq[k - 1])) {
      fail(ErrorKind::Argument, "grid must be strictly increasing");
    }
  }
}

std::vector<std::uint64_t> repeat_seeds(std::uint64_t base_seed, std::size_t repeats) {
  std::vector<std::uint64_t> seeds(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    seeds[r] = derive_seed(base_seed, Stream::Repeat, r);
  }
  return seeds;
}

GnmseResult summarize(double sigma_sq, std::span<const double> values,
                      std::span<const std::uint64_t> seeds) {
  if (values.empty()) fail(ErrorKind::Argument, "no runs to summarize");
  // Sorting first makes the sums independent of run order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (const double v : sorted) sum += v;
  const double mean = sum / static_cast<double>(sorted.size());
  double ss = 0.0;
  for (const double v : sorted) ss += (v - mean) * (v - mean);

  GnmseResult result;
  result.sigma_sq = sigma_sq;
  result.gnmse_mean = mean;
  result.gnmse_std =
      sorted.size() > 1 ? std::sqrt(ss / static_cast<double>(sorted.size() - 1)) : 0.0;
  result.repeats = sorted.size();
  result.seeds.assign(seeds.begin(), seeds.end());
  return result;
}

std::vector<GnmseResult> sweep(const Dataset& dataset, const ExperimentConfig& config,
                               const SweepGrid& grid, std::span<const std::uint64_t> seeds,
                               std::size_t jobs) {
  grid.validate();
  if (seeds.empty()) fail(ErrorKind::Argument, "repeats must be >= 1");
  auto cell_config = config;
  cell_config.retain_artifacts = false;

  const std::size_t cells = grid.sigma_sq.size() * seeds.size();
  std::vector<double> values(cells, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      try {
        const auto g = cell / seeds.size();
        const auto r = cell % seeds.size();
        values[cell] = run_once(dataset, cell_config, grid.sigma_sq[g], seeds[r]).gnmse;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells);
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<GnmseResult> results;
  results.reserve(grid.sigma_sq.size());
  for (std::size_t g = 0; g < grid.sigma_sq.size(); ++g) {
    const auto row = std::span<const double>(values).subspan(g * seeds.size(), seeds.size());
    auto summary = summarize(grid.sigma_sq[g], row, seeds);
    summary.is_theoretical_ed =
        grid.theoretical_ed && grid.sigma_sq[g] == *grid.theoretical_ed;
    results.push_back(std::move(summary));
  }
  return results;
}

std::vector<GnmseResult> sweep(const Dataset& dataset, const ExperimentConfig& config,
                               const SweepGrid& grid, std::size_t repeats,
                               std::uint64_t base_seed, std::size_t jobs) {
  if (repeats == 0) fail(ErrorKind::Argument, "repeats must be >= 1");
  const auto seeds = repeat_seeds(base_seed, repeats);
  return sweep(dataset, config, grid, std::span<const std::uint64_t>(seeds), jobs);
}

std::vector<ScatterRow> export_scatter(const TrainingSet& set) {
  if (set.size() < 2) fail(ErrorKind::Argument, "scatter export needs >= 2 sampled nodes");
  std::vector<ScatterRow> rows;
  rows.reserve(set.size() * (set.size() - 1) / 2);
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      rows.push_back({squared_distance(set.vectors[i], set.vectors[j]),
                      std::abs(set.values[i] - set.values[j])});
    }
  }
  return rows;
}

WeightTrace probe_weights(const RunArtifacts& artifacts, std::size_t tested_index) {
  if (tested_index >= artifacts.tested_vectors.size()) {
    fail(ErrorKind::Argument, "tested node index out of range");
  }
  std::vector<FeatureVector> node_features;
  node_features.reserve(artifacts.set.size());
  for (const auto& a : artifacts.set.vectors) node_features.push_back(artifacts.bank->map(a));
  auto matrix =
      build_training_similarity(node_features, artifacts.trace.order, artifacts.eta);
  set_probe(matrix, node_features, artifacts.trace.order,
            artifacts.bank->map(artifacts.tested_vectors[tested_index]));
  return contribution_weights(matrix, artifacts.trace.steps());
}

std::vector<TraceRow> export_bf_trace(const RunResult& run, const NodeId& tested_node) {
  if (!run.artifacts) {
    fail(ErrorKind::State, "run did not retain artifacts; enable retain_artifacts");
  }
  const auto& ids = run.artifacts->tested_ids;
  const auto it = std::find(ids.begin(), ids.end(), tested_node);
  if (it == ids.end()) {
    fail(ErrorKind::Lookup, "node '" + tested_node + "' is not a tested node of this run");
  }
  const auto trace = probe_weights(*run.artifacts, static_cast<std::size_t>(it - ids.begin()));
  std::vector<TraceRow> rows;
  rows.reserve(trace.weights.size());
  for (std::size_t i = 0; i < trace.weights.size(); ++i) {
    rows.push_back({i + 1, trace.similarities[i], trace.weights[i], trace.alpha[i],
                    trace.alpha_flags[i]});
  }
  return rows;
}

void write_sweep_csv(std::span<const GnmseResult> results, std::ostream& out) {
  out << "sigma_sq,gnmse_mean,gnmse_std,repeats,is_theoretical_ed\n";
  char line[160];
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%zu,%d\n", r.sigma_sq, r.gnmse_mean,
                  r.gnmse_std, r.repeats, r.is_theoretical_ed ? 1 : 0);
    out << line;
  }
}

void write_scatter_csv(std::span<const ScatterRow> rows, std::ostream& out) {
  out << "d_sq,abs_dy\n";
  char line[96];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", r.d_sq, r.abs_dy);
    out << line;
  }
}

void write_bf_trace_csv(std::span<const TraceRow> rows, std::ostream& out) {
  out << "i,B,F,alpha,alpha_flag\n";
  char line[160];
  for (const auto& r : rows) {
    char alpha[40] = "";
    if (r.alpha) std::snprintf(alpha, sizeof alpha, "%.17g", *r.alpha);
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%s,%s\n", r.i, r.b, r.f, alpha,
                  to_string(r.flag));
    out << line;
  }
}

Dataset make_planted_dataset(const PlantedSpec& spec) {
  if (spec.nodes < 2 || spec.communities == 0 || spec.communities > spec.nodes) {
    fail(ErrorKind::Argument, "planted graph needs nodes >= 2 and 1 <= communities <= nodes");
  }
  if (!(spec.p_in >= 0.0 && spec.p_in <= 1.0 && spec.p_out >= 0.0 && spec.p_out <= 1.0)) {
    fail(ErrorKind::Argument, "edge probabilities must lie in [0, 1]");
  }
  Rng rng(spec.seed, Stream::Synthetic);
  const auto community = [&](std::size_t v) { return v % spec.communities; };

  Graph graph(false);
  for (std::size_t v = 0; v < spec.nodes; ++v) graph.add_node(std::to_string(v));
  for (std::size_t u = 0; u < spec.nodes; ++u) {
    for (std::size_t v = u + 1; v < spec.nodes; ++v) {
      const double p = community(u) == community(v) ? spec.p_in : spec.p_out;
      if (rng.uniform() < p) graph.add_edge(std::to_string(u), std::to_string(v));
    }
  }

  NodeValues values;
  const double k = static_cast<double>(spec.communities);
  for (std::size_t v = 0; v < spec.nodes; ++v) {
    // Community means evenly spaced over [-1, 1].
    const double mean =
        spec.communities == 1 ? 1.0 : -1.0 + 2.0 * static_cast<double>(community(v)) / (k - 1.0);
    values.add(std::to_string(v), mean + spec.value_noise * rng.normal());
  }
  return make_dataset(std::move(graph), std::move(values));
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  char weight[40];
  for (const auto& e : graph.edges()) {
    std::snprintf(weight, sizeof weight, "%.17g", e.weight);
    out << graph.nodes()[e.source] << ',' << graph.nodes()[e.target] << ',' << weight << '\n';
  }
}

void write_node_values(const NodeValues& values, std::ostream& out) {
  out << "node_id,value\n";
  char value[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(value, sizeof value, "%.17g", values.values()[i]);
    out << values.ids()[i] << ',' << value << '\n';
  }
}

}  // namespace skg
