#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "skg/graph_data.hpp"
#include "skg/rff_features.hpp"

namespace skg {

inline constexpr std::size_t kDefaultTimeCap = 5000;

// Similarity measures B(i, j) = 2 eta z(a_i)^T z(a_j) for time pairs i < j,
// stored densely as a packed upper triangle. Times are 0-based: training
// steps occupy 0..T-1 and a probe (tested) node sits at time T.
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::size_t times, double eta, std::size_t cap = kDefaultTimeCap);

  std::size_t times() const noexcept { return times_; }
  double eta() const noexcept { return eta_; }

  void set(std::size_t i, std::size_t j, double value);
  bool has(std::size_t i, std::size_t j) const;
  // Throws a state error when the entry was never populated.
  double at(std::size_t i, std::size_t j) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t times_;
  double eta_;
  std::vector<double> packed_;
};

// Fills every pair of a time sequence. `order[t]` indexes `node_features`;
// inner products are computed once per node pair.
SimilarityMatrix build_similarity(std::span<const FeatureVector> node_features,
                                  std::span<const std::size_t> order, double eta,
                                  std::size_t cap = kDefaultTimeCap);

// Matrix over a training order followed by one probe slot at time T. The
// probe column is left empty; fill it with `set_probe`.
SimilarityMatrix build_training_similarity(std::span<const FeatureVector> node_features,
                                           std::span<const std::size_t> order,
                                           double eta,
                                           std::size_t cap = kDefaultTimeCap);
void set_probe(SimilarityMatrix& matrix, std::span<const FeatureVector> node_features,
               std::span<const std::size_t> order, std::span<const double> probe_features);

double similarity(const RandomFeatureBank& bank, std::span<const double> a_i,
                  std::span<const double> a_j, double eta);

// Large-D limit 2 eta exp(-d_sq / (2 sigma_sq)).
double similarity_approx(double d_sq, double sigma_sq, double eta);

// Var[B | d] = (2 eta)^2 / (2D) * (exp(-d_sq / sigma_sq) - 1)^2.
double similarity_conditional_variance(double d_sq, double sigma_sq, double eta,
                                       std::size_t features);

enum class AlphaFlag { Ok, Adjacent, Domain };

const char* to_string(AlphaFlag flag) noexcept;

struct WeightTrace {
  std::size_t target = 0;
  std::vector<double> weights;  // F(i, target), i = 0..target-1
  std::vector<double> similarities;  // B(i, target)
  std::vector<std::optional<double>> alpha;  // conformity factor per i
  std::vector<AlphaFlag> alpha_flags;
  double noise_up = 0.0;  // |min_i F(i, target)|

  double weight_sum() const;
};

// Contribution weights toward `target`, evaluated backward from
// i = target-1:
//   F(i, j) = B(i, j) - sum_{k=i+1}^{j-1} B(i, k) F(k, j),  F(j-1, j) = B(j-1, j).
WeightTrace contribution_weights(const SimilarityMatrix& matrix, std::size_t target);

// sum_i y_i F(i, target); `values` aligned with trace.weights.
double weighted_prediction_oracle(std::span<const double> values,
                                  const WeightTrace& trace);

// Expected sum of contribution weights 1 - (1 - b)^T.
double expected_weight_sum(double b, std::size_t steps);

// Inverts F = B (1 - alpha)^(gap - 1). Domain error when F/B <= 0.
double conformity_alpha(double similarity, double weight, std::size_t gap);

// 2 eta / sqrt(2D): standard deviation of B at zero distance.
double noise_up_theoretical(double eta, std::size_t features);

// Largest |min F| across probe traces. State error when no weights exist.
double noise_up_refined(const WeightTrace& trace);
double noise_up_refined(std::span<const WeightTrace> traces);

// CSV `i,d_sq,B,F,alpha,flag`, i counted from 1.
void write_weight_trace_csv(const WeightTrace& trace, std::span<const double> d_sq,
                            std::ostream& out);

}  // namespace skg
