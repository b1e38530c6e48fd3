#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "skg/graph_data.hpp"
#include "skg/rff_features.hpp"

namespace skg {

/// Single-kernel random-feature regressor: prediction theta^T z(a), trained
/// one sample at a time with least-squares gradient steps
///   theta <- theta + 2 eta (y - theta^T z(a)) z(a).
/// No regularization term. theta starts at zero.
class SkgModel {
 public:
  SkgModel(std::shared_ptr<const RandomFeatureBank> bank, double eta);
  SkgModel(std::shared_ptr<const RandomFeatureBank> bank, double eta,
           std::vector<double> theta);

  const RandomFeatureBank& bank() const noexcept { return *bank_; }
  std::shared_ptr<const RandomFeatureBank> shared_bank() const noexcept { return bank_; }
  double eta() const noexcept { return eta_; }
  std::span<const double> theta() const noexcept { return theta_; }

  double predict(std::span<const double> a) const;
  double predict_features(std::span<const double> z) const;

  struct Step {
    double prediction;  // f from the pre-update theta
    double error;       // y - f
  };

  // One gradient step.
  Step step(std::span<const double> a, double y);
  Step step_features(std::span<const double> z, double y);

 private:
  std::shared_ptr<const RandomFeatureBank> bank_;
  double eta_;
  std::vector<double> theta_;
};

struct TrainingTrace {
  std::size_t epochs = 0;
  std::vector<std::size_t> order;   // training-set index processed at each step
  std::vector<double> predictions;  // f_t from the pre-update theta
  std::vector<double> errors;       // y_t - f_t

  std::size_t steps() const noexcept { return order.size(); }
};

// E passes over the set; each pass visits every node once in a fresh
// uniformly random order drawn from the Order stream of `seed`.
TrainingTrace train(SkgModel& model, const TrainingSet& set, std::size_t epochs,
                    std::uint64_t seed);

// The order `train` would use, without training.
std::vector<std::size_t> training_order(std::size_t set_size, std::size_t epochs,
                                        std::uint64_t seed);

// Deployable model: parameters plus what predict needs to rebuild inputs.
struct ModelFile {
  std::size_t dimension = 0;
  std::size_t features = 0;
  double sigma_sq = 0.0;
  double eta = 0.0;
  std::uint64_t bank_seed = 0;
  std::vector<double> theta;
  std::vector<NodeId> referencing;
  double value_scale = 1.0;
  std::string normalization = "max-abs";

  // Regenerates the bank from its seed.
  SkgModel instantiate() const;
};

ModelFile describe(const SkgModel& model, std::vector<NodeId> referencing,
                   double value_scale, std::string normalization);

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(std::string_view text);
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

// CSV `t,node_index,prediction,error`, t counted from 1.
void write_trace_csv(const TrainingTrace& trace, std::ostream& out);

}  // namespace skg
