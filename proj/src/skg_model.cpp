#include "skg/skg_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/rng.hpp"

namespace skg {

SkgModel::SkgModel(std::shared_ptr<const RandomFeatureBank> bank, double eta)
    : bank_(std::move(bank)), eta_(eta) {
  if (!bank_) fail(ErrorKind::Argument, "model needs a feature bank");
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) {
    fail(ErrorKind::Argument, "learning rate must be positive");
  }
  theta_.assign(2 * bank_->features(), 0.0);
}

SkgModel::SkgModel(std::shared_ptr<const RandomFeatureBank> bank, double eta,
                   std::vector<double> theta)
    : SkgModel(std::move(bank), eta) {
  if (theta.size() != theta_.size()) {
    fail(ErrorKind::Argument, "theta has length " + std::to_string(theta.size()) +
                                  ", expected 2D = " + std::to_string(theta_.size()));
  }
  theta_ = std::move(theta);
}

double SkgModel::predict_features(std::span<const double> z) const {
  if (z.size() != theta_.size()) fail(ErrorKind::Argument, "feature length mismatch");
  return dot(theta_, z);
}

double SkgModel::predict(std::span<const double> a) const {
  return predict_features(bank_->map(a));
}

SkgModel::Step SkgModel::step_features(std::span<const double> z, double y) {
  if (!std::isfinite(y)) fail(ErrorKind::Numeric, "non-finite training value");
  const double prediction = predict_features(z);
  const double error = y - prediction;
  if (!std::isfinite(error)) fail(ErrorKind::Numeric, "non-finite prediction during training");
  const double gain = 2.0 * eta_ * error;
  for (std::size_t k = 0; k < theta_.size(); ++k) theta_[k] += gain * z[k];
  return {prediction, error};
}

SkgModel::Step SkgModel::step(std::span<const double> a, double y) {
  return step_features(bank_->map(a), y);
}

std::vector<std::size_t> training_order(std::size_t set_size, std::size_t epochs,
                                        std::uint64_t seed) {
  Rng rng(seed, Stream::Order);
  std::vector<std::size_t> order;
  order.reserve(set_size * epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto pass = random_permutation(set_size, rng);
    order.insert(order.end(), pass.begin(), pass.end());
  }
  return order;
}

TrainingTrace train(SkgModel& model, const TrainingSet& set, std::size_t epochs,
                    std::uint64_t seed) {
  if (set.size() == 0) fail(ErrorKind::Argument, "empty training set");
  if (epochs == 0) fail(ErrorKind::Argument, "epochs must be >= 1");
  if (set.values.size() != set.size()) {
    fail(ErrorKind::Argument, "training set has mismatched vectors and values");
  }

  // Features are fixed per node, so map each node once.
  std::vector<FeatureVector> features;
  features.reserve(set.size());
  for (const auto& a : set.vectors) features.push_back(model.bank().map(a));

  TrainingTrace trace;
  trace.epochs = epochs;
  trace.order = training_order(set.size(), epochs, seed);
  trace.predictions.reserve(trace.order.size());
  trace.errors.reserve(trace.order.size());
  for (const auto n : trace.order) {
    const auto [prediction, error] = model.step_features(features[n], set.values[n]);
    trace.predictions.push_back(prediction);
    trace.errors.push_back(error);
  }
  return trace;
}

SkgModel ModelFile::instantiate() const {
  auto bank = std::make_shared<const RandomFeatureBank>(
      RandomFeatureBank::sample(sigma_sq, features, dimension, bank_seed));
  return SkgModel(std::move(bank), eta, theta);
}

ModelFile describe(const SkgModel& model, std::vector<NodeId> referencing,
                   double value_scale, std::string normalization) {
  ModelFile file;
  file.dimension = model.bank().dimension();
  file.features = model.bank().features();
  file.sigma_sq = model.bank().sigma_sq();
  file.eta = model.eta();
  file.bank_seed = model.bank().seed();
  file.theta.assign(model.theta().begin(), model.theta().end());
  file.referencing = std::move(referencing);
  file.value_scale = value_scale;
  file.normalization = std::move(normalization);
  return file;
}

std::string model_to_json(const ModelFile& file) {
  const nlohmann::json j = {
      {"format", "skg-model-v1"},
      {"M", file.dimension},
      {"D", file.features},
      {"sigma_sq", file.sigma_sq},
      {"eta", file.eta},
      {"bank_seed", file.bank_seed},
      {"theta", file.theta},
      {"referencing", file.referencing},
      {"value_scale", file.value_scale},
      {"normalization", file.normalization},
  };
  return j.dump(1);
}

ModelFile model_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ModelFile file;
    file.dimension = j.at("M").get<std::size_t>();
    file.features = j.at("D").get<std::size_t>();
    file.sigma_sq = j.at("sigma_sq").get<double>();
    file.eta = j.at("eta").get<double>();
    file.bank_seed = j.at("bank_seed").get<std::uint64_t>();
    file.theta = j.at("theta").get<std::vector<double>>();
    file.referencing = j.value("referencing", std::vector<NodeId>{});
    file.value_scale = j.value("value_scale", 1.0);
    file.normalization = j.value("normalization", std::string("max-abs"));
    if (file.theta.size() != 2 * file.features) {
      fail(ErrorKind::Parse, "model theta length does not match 2D");
    }
    if (!file.referencing.empty() && file.referencing.size() != file.dimension) {
      fail(ErrorKind::Parse, "model referencing list does not match M");
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("model JSON: ") + e.what());
  }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path.string());
  out << model_to_json(file) << '\n';
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

void write_trace_csv(const TrainingTrace& trace, std::ostream& out) {
  out << "t,node_index,prediction,error\n";
  char line[128];
  for (std::size_t t = 0; t < trace.steps(); ++t) {
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g\n", t + 1, trace.order[t],
                  trace.predictions[t], trace.errors[t]);
    out << line;
  }
}

}  // namespace skg
