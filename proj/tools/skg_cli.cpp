// skg: command-line front end for the random-feature graph regressor and its
// kernel-variance selection.
//
// Exit codes: 0 success, 2 argument error, 3 data error, 4 numeric or
// degenerate input.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/experiment_harness.hpp"
#include "skg/graph_data.hpp"
#include "skg/skg_model.hpp"
#include "skg/variance_select.hpp"
#include "skg/weight_analysis.hpp"

namespace {

using skg::ErrorKind;
using skg::fail;

struct DataOptions {
  std::string graph;
  std::string values;
  bool weighted = false;
  bool directed = false;
  bool drop_isolated = false;
};

struct RunConfig {
  double eta = 0.1;
  std::size_t features = 200;
  std::size_t epochs = 3;
  std::string sigma_sq = "auto";
  double sample_fraction = 0.4;
  std::uint64_t seed = 0;
  double closeness = 0.1;
  bool refine_noise = false;
  bool first_order_da = false;
  std::string normalization = "max-abs";
  std::string referencing = "sampled";
  std::size_t jobs = 1;
  std::string split_manifest;
  std::string config_file;
};

void add_data_options(CLI::App& cmd, DataOptions& data, bool values_required) {
  cmd.add_option("--graph,-g", data.graph, "Edge-list CSV: src,dst[,weight]")
      ->required()
      ->check(CLI::ExistingFile);
  auto* values = cmd.add_option("--values,-v", data.values, "Node-value CSV: node_id,value")
                     ->check(CLI::ExistingFile);
  if (values_required) values->required();
  cmd.add_flag("--weighted", data.weighted, "Read the third column as edge weight");
  cmd.add_flag("--directed", data.directed, "Treat edges as directed (out-edges)");
  cmd.add_flag("--drop-isolated", data.drop_isolated,
               "Exclude nodes without (out-)edges from sampling and testing");
}

void add_model_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--eta", cfg.eta, "Learning rate")->check(CLI::PositiveNumber);
  cmd.add_option("--D,--features", cfg.features, "Number of random features D")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--epochs,-E", cfg.epochs, "Training epochs")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", cfg.seed, "Seed for split, features and visiting order");
  cmd.add_option("--fraction", cfg.sample_fraction, "Fraction of nodes sampled for training")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--split", cfg.split_manifest,
                 "Split manifest JSON to reuse instead of drawing a split");
  cmd.add_option("--normalization", cfg.normalization, "Value normalization: max-abs | none");
  cmd.add_option("--referencing", cfg.referencing,
                 "Referencing nodes: sampled | all");
  cmd.add_option("--config", cfg.config_file,
                 "JSON config file; explicit flags take precedence")
      ->check(CLI::ExistingFile);
}

void add_selection_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--closeness", cfg.closeness, "Closeness for the averaging boundary");
  cmd.add_flag("--refine", cfg.refine_noise,
               "Refine the noise ceiling from one training run");
  cmd.add_flag("--first-order-da", cfg.first_order_da,
               "Use ln(1 - c) ~ -c for the averaging boundary");
}

// Copies keys from the JSON config into options the user did not pass.
void apply_config_file(CLI::App& cmd, RunConfig& cfg) {
  if (cfg.config_file.empty()) return;
  nlohmann::json j;
  {
    std::ifstream in(cfg.config_file);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Parse, cfg.config_file + ": " + e.what());
    }
  }
  const auto unset = [&](const char* flag) {
    const auto* opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  try {
    if (j.contains("eta") && unset("--eta")) cfg.eta = j["eta"].get<double>();
    if (j.contains("D") && unset("--D")) cfg.features = j["D"].get<std::size_t>();
    if (j.contains("epochs") && unset("--epochs")) cfg.epochs = j["epochs"].get<std::size_t>();
    if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample_fraction") && unset("--fraction")) {
      cfg.sample_fraction = j["sample_fraction"].get<double>();
    }
    if (j.contains("closeness") && unset("--closeness")) {
      cfg.closeness = j["closeness"].get<double>();
    }
    if (j.contains("refine_noise") && unset("--refine")) {
      cfg.refine_noise = j["refine_noise"].get<bool>();
    }
    if (j.contains("first_order_da") && unset("--first-order-da")) {
      cfg.first_order_da = j["first_order_da"].get<bool>();
    }
    if (j.contains("normalization") && unset("--normalization")) {
      cfg.normalization = j["normalization"].get<std::string>();
    }
    if (j.contains("referencing") && unset("--referencing")) {
      cfg.referencing = j["referencing"].get<std::string>();
    }
    if (j.contains("sigma_sq") && unset("--sigma-sq")) {
      const auto& s = j["sigma_sq"];
      cfg.sigma_sq = s.is_string() ? s.get<std::string>() : std::to_string(s.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Argument, cfg.config_file + ": " + e.what());
  }
  if (!(cfg.eta > 0.0) || cfg.features == 0 || cfg.epochs == 0 ||
      !(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
    fail(ErrorKind::Argument, cfg.config_file + ": numeric settings must be positive");
  }
}

skg::Dataset load_dataset(const DataOptions& data) {
  auto graph = skg::load_graph(data.graph, data.weighted, data.directed);
  skg::NodeValues values;
  if (!data.values.empty()) values = skg::load_node_values(data.values);
  return skg::make_dataset(std::move(graph), std::move(values), data.drop_isolated);
}

skg::SampleSplit resolve_split(const skg::Dataset& dataset, const RunConfig& cfg) {
  if (!cfg.split_manifest.empty()) return skg::load_split_manifest(cfg.split_manifest);
  return skg::split_sample(dataset.nodes, cfg.sample_fraction, cfg.seed);
}

std::vector<skg::NodeId> referencing_nodes(const skg::Dataset& dataset,
                                           const skg::SampleSplit& split,
                                           const RunConfig& cfg) {
  if (cfg.referencing == "sampled") return split.sampled;
  if (cfg.referencing == "all") return dataset.nodes;
  fail(ErrorKind::Argument, "unknown referencing policy '" + cfg.referencing + "'");
}

skg::SelectOptions selection_options(const RunConfig& cfg) {
  skg::SelectOptions options;
  options.eta = cfg.eta;
  options.features = cfg.features;
  options.closeness = cfg.closeness;
  options.first_order_da = cfg.first_order_da;
  options.refine = cfg.refine_noise;
  options.epochs = cfg.epochs;
  options.seed = cfg.seed;
  return options;
}

skg::ExperimentConfig experiment_config(const RunConfig& cfg) {
  skg::ExperimentConfig config;
  config.eta = cfg.eta;
  config.features = cfg.features;
  config.epochs = cfg.epochs;
  config.sample_fraction = cfg.sample_fraction;
  config.normalization = skg::parse_normalization_policy(cfg.normalization);
  if (cfg.referencing == "all") {
    config.referencing = skg::ReferencingPolicy::AllNodes;
  } else if (cfg.referencing != "sampled") {
    fail(ErrorKind::Argument, "unknown referencing policy '" + cfg.referencing + "'");
  }
  return config;
}

std::optional<double> parse_sigma(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size() && value > 0.0) return value;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::Argument, "--sigma-sq must be a positive number or 'auto'");
}

// Writes to `path`, or stdout when empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path);
  write(out);
}

// Selection over the sampled nodes; tested nodes serve as refinement probes.
skg::SelectionReport run_selection(const skg::Dataset& dataset, const skg::SampleSplit& split,
                                   const RunConfig& cfg) {
  const auto referencing = referencing_nodes(dataset, split, cfg);
  const auto options = selection_options(cfg);
  if (!options.refine) {
    const auto vectors = skg::build_adjacency_vectors(dataset.graph, split.sampled, referencing);
    return skg::select(vectors, options);
  }
  auto set = skg::make_training_set(dataset.graph, dataset.values, split.sampled, referencing);
  set.values = skg::normalize_values(set.values, {},
                                     skg::parse_normalization_policy(cfg.normalization))
                   .train;
  const auto probes = skg::build_adjacency_vectors(dataset.graph, split.tested, referencing);
  return skg::select(set, options, probes);
}

int cmd_stats(CLI::App& cmd, const DataOptions& data, RunConfig& cfg, const std::string& out) {
  apply_config_file(cmd, cfg);
  const auto dataset = load_dataset(data);
  const auto split = resolve_split(dataset, cfg);
  const auto vectors = skg::build_adjacency_vectors(dataset.graph, split.sampled,
                                                    referencing_nodes(dataset, split, cfg));
  const auto stats = skg::pairwise_stats(vectors);
  nlohmann::json histogram = nlohmann::json::array();
  for (const auto& [d_sq, count] : stats.histogram) histogram.push_back({d_sq, count});
  const nlohmann::json j = {
      {"sample_count", vectors.size()},
      {"pair_count", stats.pair_count},
      {"d_sq_max", stats.d_sq_max},
      {"d_sq_min_nonzero", stats.d_sq_min_nonzero ? nlohmann::json(*stats.d_sq_min_nonzero)
                                                  : nlohmann::json(nullptr)},
      {"d_l1_max", stats.d_l1_max},
      {"histogram", histogram},
  };
  emit(out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

int cmd_select(CLI::App& cmd, const DataOptions& data, RunConfig& cfg, const std::string& out) {
  apply_config_file(cmd, cfg);
  const auto dataset = load_dataset(data);
  const auto split = resolve_split(dataset, cfg);
  const auto report = run_selection(dataset, split, cfg);
  std::fprintf(stderr, "sigma_sq_ce=%.6g sigma_sq_ed=%.6g sigma_sq_da=%.6g (noise_up=%.6g, %s)\n",
               report.sigma_sq_ce, report.sigma_sq_ed, report.sigma_sq_da, report.noise_up,
               skg::to_string(report.noise_up_source));
  emit(out, [&](std::ostream& os) { os << skg::report_to_json(report) << '\n'; });
  return 0;
}

int cmd_train(CLI::App& cmd, const DataOptions& data, RunConfig& cfg,
              const std::string& model_path, const std::string& trace_path,
              const std::string& split_out) {
  apply_config_file(cmd, cfg);
  const auto dataset = load_dataset(data);
  const auto split = resolve_split(dataset, cfg);
  const auto referencing = referencing_nodes(dataset, split, cfg);

  double sigma_sq = 0.0;
  if (const auto fixed = parse_sigma(cfg.sigma_sq)) {
    sigma_sq = *fixed;
  } else {
    sigma_sq = run_selection(dataset, split, cfg).sigma_sq_ed;
  }

  auto set = skg::make_training_set(dataset.graph, dataset.values, split.sampled, referencing);
  const auto policy = skg::parse_normalization_policy(cfg.normalization);
  const auto normalized = skg::normalize_values(set.values, {}, policy);
  set.values = normalized.train;

  auto bank = std::make_shared<const skg::RandomFeatureBank>(
      skg::RandomFeatureBank::sample(sigma_sq, cfg.features, set.dimension(), cfg.seed));
  skg::SkgModel model(bank, cfg.eta);
  const auto trace = skg::train(model, set, cfg.epochs, cfg.seed);

  skg::save_model(skg::describe(model, referencing, normalized.scale, skg::to_string(policy)),
                  model_path);
  if (!trace_path.empty()) {
    emit(trace_path, [&](std::ostream& os) { skg::write_trace_csv(trace, os); });
  }
  if (!split_out.empty()) skg::save_split_manifest(split, split_out);

  std::vector<double> fitted;
  for (const auto& a : set.vectors) fitted.push_back(model.predict(a));
  std::fprintf(stderr, "trained sigma_sq=%.6g N=%zu M=%zu T=%zu training GNMSE=%.6g\n",
               sigma_sq, set.size(), set.dimension(), trace.steps(),
               skg::gnmse(set.values, fitted));
  return 0;
}

int cmd_predict(CLI::App& cmd, const DataOptions& data, RunConfig& cfg,
                const std::string& model_path, const std::string& out) {
  apply_config_file(cmd, cfg);
  const auto file = skg::load_model(model_path);
  const auto model = file.instantiate();
  if (file.referencing.empty()) {
    fail(ErrorKind::Parse, "model file lists no referencing nodes");
  }
  auto graph = skg::load_graph(data.graph, data.weighted, data.directed);
  skg::NodeValues values;
  if (!data.values.empty()) values = skg::load_node_values(data.values);
  for (const auto& id : file.referencing) graph.add_node(id);

  std::vector<skg::NodeId> nodes;
  if (!cfg.split_manifest.empty()) {
    nodes = skg::load_split_manifest(cfg.split_manifest).tested;
  } else {
    nodes = graph.nodes();
  }
  const auto vectors = skg::build_adjacency_vectors(graph, nodes, file.referencing);

  std::vector<double> predictions;
  predictions.reserve(nodes.size());
  for (const auto& a : vectors) predictions.push_back(model.predict(a) * file.value_scale);

  emit(out, [&](std::ostream& os) {
    os << "node_id,prediction\n";
    char value[40];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::snprintf(value, sizeof value, "%.17g", predictions[i]);
      os << nodes[i] << ',' << value << '\n';
    }
  });

  if (values.size() > 0) {
    std::vector<double> truth;
    std::vector<double> predicted;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!values.contains(nodes[i])) continue;
      truth.push_back(values.at(nodes[i]) / file.value_scale);
      predicted.push_back(predictions[i] / file.value_scale);
    }
    if (!truth.empty()) {
      std::fprintf(stderr, "GNMSE over %zu valued nodes: %.6g\n", truth.size(),
                   skg::gnmse(truth, predicted));
    }
  }
  return 0;
}

int cmd_sweep(CLI::App& cmd, const DataOptions& data, RunConfig& cfg, std::size_t repeats,
              std::size_t points, double grid_min, double grid_max, bool fixed_split,
              const std::string& out) {
  apply_config_file(cmd, cfg);
  const auto dataset = load_dataset(data);
  auto config = experiment_config(cfg);
  config.fixed_split = fixed_split;
  config.split_seed = cfg.seed;

  const auto split = resolve_split(dataset, cfg);
  const auto report = run_selection(dataset, split, cfg);
  skg::SweepGrid grid;
  if (grid_min > 0.0 && grid_max > 0.0) {
    grid = skg::SweepGrid::log_spaced(grid_min, grid_max, points);
    grid.theoretical_ed = report.sigma_sq_ed;
    const auto pos = std::lower_bound(grid.sigma_sq.begin(), grid.sigma_sq.end(),
                                      report.sigma_sq_ed);
    if (pos == grid.sigma_sq.end() || *pos != report.sigma_sq_ed) {
      grid.sigma_sq.insert(pos, report.sigma_sq_ed);
    }
  } else {
    grid = skg::SweepGrid::around(report, points);
  }
  std::fprintf(stderr, "sweeping %zu variances x %zu repeats (sigma_sq_ed=%.6g)\n",
               grid.sigma_sq.size(), repeats, report.sigma_sq_ed);
  const auto results = skg::sweep(dataset, config, grid, repeats, cfg.seed, cfg.jobs);
  emit(out, [&](std::ostream& os) { skg::write_sweep_csv(results, os); });
  return 0;
}

int cmd_analyze(CLI::App& cmd, const DataOptions& data, RunConfig& cfg,
                const std::string& node, const std::string& trace_out,
                const std::string& weights_out, const std::string& scatter_out) {
  apply_config_file(cmd, cfg);
  const auto dataset = load_dataset(data);
  auto config = experiment_config(cfg);
  config.retain_artifacts = true;

  double sigma_sq = 0.0;
  if (const auto fixed = parse_sigma(cfg.sigma_sq)) {
    sigma_sq = *fixed;
  } else {
    sigma_sq = run_selection(dataset, skg::split_sample(dataset.nodes, cfg.sample_fraction,
                                                        cfg.seed),
                             cfg)
                   .sigma_sq_ed;
  }
  const auto run = skg::run_once(dataset, config, sigma_sq, cfg.seed);
  const auto& artifacts = *run.artifacts;
  const auto target = node.empty() ? artifacts.tested_ids.front() : node;

  const auto rows = skg::export_bf_trace(run, target);
  emit(trace_out, [&](std::ostream& os) { skg::write_bf_trace_csv(rows, os); });

  if (!weights_out.empty()) {
    const auto index = static_cast<std::size_t>(
        std::find(artifacts.tested_ids.begin(), artifacts.tested_ids.end(), target) -
        artifacts.tested_ids.begin());
    const auto trace = skg::probe_weights(artifacts, index);
    std::vector<double> d_sq;
    for (const auto n : artifacts.trace.order) {
      d_sq.push_back(skg::squared_distance(artifacts.set.vectors[n],
                                           artifacts.tested_vectors[index]));
    }
    emit(weights_out,
         [&](std::ostream& os) { skg::write_weight_trace_csv(trace, d_sq, os); });
  }
  if (!scatter_out.empty()) {
    const auto scatter = skg::export_scatter(artifacts.set);
    emit(scatter_out, [&](std::ostream& os) { skg::write_scatter_csv(scatter, os); });
  }
  std::fprintf(stderr, "sigma_sq=%.6g tested node %s, run GNMSE=%.6g\n", sigma_sq,
               target.c_str(), run.gnmse);
  return 0;
}

int cmd_synth(const skg::PlantedSpec& spec, const std::string& dir) {
  const auto dataset = skg::make_planted_dataset(spec);
  std::filesystem::create_directories(dir);
  const auto edges = std::filesystem::path(dir) / "edges.csv";
  const auto values = std::filesystem::path(dir) / "values.csv";
  emit(edges.string(), [&](std::ostream& os) { skg::write_edge_list(dataset.graph, os); });
  emit(values.string(), [&](std::ostream& os) { skg::write_node_values(dataset.values, os); });
  std::fprintf(stderr, "wrote %s and %s\n", edges.c_str(), values.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-feature kernel regression on graphs with closed-form kernel variance "
               "selection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  DataOptions data;
  RunConfig cfg;
  std::string out;
  std::string model_path;
  std::string trace_path;
  std::string split_out;

  auto add_jobs = [&](CLI::App& cmd) {
    cmd.add_option("--jobs,-j", cfg.jobs, "Worker threads (0 = all cores)")
        ->envname("SKG_JOBS");
  };

  auto* stats = app.add_subcommand("stats", "Pairwise adjacency-difference statistics");
  add_data_options(*stats, data, false);
  add_model_options(*stats, cfg);
  stats->add_option("--out,-o", out, "Output JSON (default stdout)");

  auto* select = app.add_subcommand("select", "Choose the kernel variance for a training set");
  add_data_options(*select, data, false);
  add_model_options(*select, cfg);
  add_selection_options(*select, cfg);
  select->add_option("--out,-o", out, "Output JSON report (default stdout)");

  auto* train = app.add_subcommand("train", "Train a model and write it as JSON");
  add_data_options(*train, data, true);
  add_model_options(*train, cfg);
  add_selection_options(*train, cfg);
  train->add_option("--sigma-sq", cfg.sigma_sq, "Kernel variance, or 'auto' to select it");
  train->add_option("--model,-m", model_path, "Model file to write")->required();
  train->add_option("--trace", trace_path, "Training trace CSV");
  train->add_option("--split-out", split_out, "Write the split manifest used");

  auto* predict = app.add_subcommand("predict", "Predict nodal values with a trained model");
  add_data_options(*predict, data, false);
  predict->add_option("--model,-m", model_path, "Model file")->required()->check(
      CLI::ExistingFile);
  predict->add_option("--split", cfg.split_manifest,
                      "Predict only the tested nodes of this split manifest");
  predict->add_option("--out,-o", out, "Predictions CSV (default stdout)");

  std::size_t repeats = 50;
  std::size_t points = 25;
  double grid_min = 0.0;
  double grid_max = 0.0;
  bool fixed_split = false;
  auto* sweep = app.add_subcommand("sweep", "GNMSE over a kernel-variance grid");
  add_data_options(*sweep, data, true);
  add_model_options(*sweep, cfg);
  add_selection_options(*sweep, cfg);
  add_jobs(*sweep);
  sweep->add_option("--repeats,-r", repeats, "Repeated runs per grid point")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", points, "Grid points (sigma_ed is added)")
      ->check(CLI::Range(2, 100000));
  sweep->add_option("--grid-min", grid_min, "Smallest variance (default ce/10)");
  sweep->add_option("--grid-max", grid_max, "Largest variance (default 10*da)");
  sweep->add_flag("--fixed-split", fixed_split, "Reuse the --seed split for every repeat");
  sweep->add_option("--out,-o", out, "Sweep CSV (default stdout)");

  std::string node;
  std::string weights_out;
  std::string scatter_out;
  auto* analyze = app.add_subcommand("analyze", "Similarity and contribution-weight traces");
  add_data_options(*analyze, data, true);
  add_model_options(*analyze, cfg);
  add_selection_options(*analyze, cfg);
  analyze->add_option("--sigma-sq", cfg.sigma_sq, "Kernel variance, or 'auto'");
  analyze->add_option("--node", node, "Tested node id (default: first tested node)");
  analyze->add_option("--out,-o", trace_path, "B/F/alpha trace CSV (default stdout)");
  analyze->add_option("--weights-out", weights_out, "Trace CSV with squared distances");
  analyze->add_option("--scatter-out", scatter_out, "Pairwise d_sq vs |dy| CSV");

  skg::PlantedSpec spec;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Write a planted-community dataset");
  synth->add_option("--out-dir,-o", synth_dir, "Output directory")->required();
  synth->add_option("--nodes", spec.nodes, "Node count");
  synth->add_option("--communities", spec.communities, "Community count");
  synth->add_option("--p-in", spec.p_in, "Edge probability within a community");
  synth->add_option("--p-out", spec.p_out, "Edge probability across communities");
  synth->add_option("--noise", spec.value_noise, "Standard deviation of nodal noise");
  synth->add_option("--seed", spec.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*stats) return cmd_stats(*stats, data, cfg, out);
    if (*select) return cmd_select(*select, data, cfg, out);
    if (*train) return cmd_train(*train, data, cfg, model_path, trace_path, split_out);
    if (*predict) return cmd_predict(*predict, data, cfg, model_path, out);
    if (*sweep) {
      return cmd_sweep(*sweep, data, cfg, repeats, points, grid_min, grid_max, fixed_split,
                       out);
    }
    if (*analyze) {
      return cmd_analyze(*analyze, data, cfg, node, trace_path, weights_out, scatter_out);
    }
    if (*synth) return cmd_synth(spec, synth_dir);
  } catch (const skg::Error& e) {
    std::fprintf(stderr, "skg: %s: %s\n", skg::to_string(e.kind()), e.what());
    return skg::exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "skg: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "skg: %s\n", e.what());
    return 1;
  }
  return 2;
}
