#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "skg/graph_data.hpp"

namespace skg {

// Kernel variance at which B for the largest observed squared distance
// just reaches the noise ceiling:
//   sigma_ed^2 = -d_sq_max / (2 ln(noise_up / (2 eta))).
// Requires 0 < noise_up < 2 eta.
double sigma_ed(double d_sq_max, double noise_up, double eta);

// Same boundary for the smallest nonzero squared distance.
double sigma_ce(double d_sq_min_nonzero, double noise_up, double eta);

// Variance at which B for d_sq_max is within `closeness` of 2 eta:
//   sigma_da^2 = -d_sq_max / (2 ln(1 - closeness)),  0 < closeness < 0.5.
// `first_order` replaces ln(1 - c) with -c.
double sigma_da(double d_sq_max, double closeness, bool first_order = false);

// Laplacian-kernel diversity b with 2 eta exp(-d_l1_max / b) = noise_up.
double laplacian_diversity(double d_l1_max, double noise_up, double eta);

enum class NoiseSource { Theoretical, Refined };

const char* to_string(NoiseSource source) noexcept;

struct SelectOptions {
  double eta = 0.1;
  std::size_t features = 200;
  double closeness = 0.1;
  bool first_order_da = false;
  // Refinement: one training run at the theoretical sigma_ed, then the
  // noise ceiling becomes the largest |min F(i, T+1)| over probe nodes.
  bool refine = false;
  std::size_t epochs = 3;
  std::uint64_t seed = 0;
};

struct SelectionReport {
  std::size_t sample_count = 0;
  std::size_t pair_count = 0;
  double d_sq_max = 0.0;
  double d_sq_min_nonzero = 0.0;
  double d_l1_max = 0.0;

  double eta = 0.0;
  std::size_t features = 0;
  double closeness = 0.0;
  bool first_order_da = false;

  double noise_up_theoretical = 0.0;
  double noise_up = 0.0;
  NoiseSource noise_up_source = NoiseSource::Theoretical;
  // Set when refinement ran but produced an unusable ceiling.
  std::string refine_note;
  std::size_t probe_count = 0;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  // sigma_ed from the theoretical ceiling; equals sigma_sq_ed unless refined.
  double sigma_sq_ed_initial = 0.0;

  double sigma_sq_ce = 0.0;
  double sigma_sq_ed = 0.0;
  double sigma_sq_da = 0.0;
  double laplacian_b = 0.0;
};

// Closed-form selection from the sampled adjacency vectors.
SelectionReport select(std::span<const AdjacencyVector> vectors, const SelectOptions& options);

// Full pipeline; with options.refine set, trains on `set` and probes with
// `probes` (the training vectors themselves when empty).
SelectionReport select(const TrainingSet& set, const SelectOptions& options,
                       std::span<const AdjacencyVector> probes = {});

// Every number paired with the formula or procedure that produced it.
std::string report_to_json(const SelectionReport& report);

}  // namespace skg
