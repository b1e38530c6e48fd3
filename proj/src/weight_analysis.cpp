#include "skg/weight_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "skg/errors.hpp"

namespace skg {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Gram matrix over node features, used to avoid recomputing inner products
// for nodes revisited across epochs.
std::vector<double> node_gram(std::span<const FeatureVector> node_features) {
  const std::size_t n = node_features.size();
  std::vector<double> gram(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p; q < n; ++q) {
      const double g = dot(node_features[p], node_features[q]);
      gram[p * n + q] = g;
      gram[q * n + p] = g;
    }
  }
  return gram;
}

void check_order(std::span<const FeatureVector> node_features,
                 std::span<const std::size_t> order) {
  for (const auto n : order) {
    if (n >= node_features.size()) {
      fail(ErrorKind::Argument, "time order refers to node " + std::to_string(n) +
                                    " beyond the feature table");
    }
  }
}

void fill_pairs(SimilarityMatrix& matrix, std::span<const FeatureVector> node_features,
                std::span<const std::size_t> order) {
  const auto gram = node_gram(node_features);
  const std::size_t n = node_features.size();
  const double two_eta = 2.0 * matrix.eta();
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      matrix.set(i, j, two_eta * gram[order[i] * n + order[j]]);
    }
  }
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t times, double eta, std::size_t cap)
    : times_(times), eta_(eta) {
  if (times < 2) fail(ErrorKind::Argument, "similarity matrix needs at least 2 times");
  if (times - 1 > cap) {
    fail(ErrorKind::Argument, "training duration " + std::to_string(times - 1) +
                                  " exceeds the cap of " + std::to_string(cap) +
                                  " for the dense similarity matrix");
  }
  if (!(eta > 0.0)) fail(ErrorKind::Argument, "learning rate must be positive");
  packed_.assign(times * (times - 1) / 2, kMissing);
}

std::size_t SimilarityMatrix::index(std::size_t i, std::size_t j) const {
  if (!(i < j && j < times_)) {
    fail(ErrorKind::Argument, "similarity index (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ") outside 0 <= i < j < " +
                                  std::to_string(times_));
  }
  // Rows of the strict upper triangle packed one after another.
  return i * times_ - i * (i + 1) / 2 + (j - i - 1);
}

void SimilarityMatrix::set(std::size_t i, std::size_t j, double value) {
  packed_[index(i, j)] = value;
}

bool SimilarityMatrix::has(std::size_t i, std::size_t j) const {
  return !std::isnan(packed_[index(i, j)]);
}

double SimilarityMatrix::at(std::size_t i, std::size_t j) const {
  const double value = packed_[index(i, j)];
  if (std::isnan(value)) {
    fail(ErrorKind::State, "similarity B(" + std::to_string(i) + ", " +
                               std::to_string(j) + ") was never populated");
  }
  return value;
}

SimilarityMatrix build_training_similarity(std::span<const FeatureVector> node_features,
                                           std::span<const std::size_t> order,
                                           double eta, std::size_t cap) {
  check_order(node_features, order);
  SimilarityMatrix matrix(order.size() + 1, eta, cap);
  fill_pairs(matrix, node_features, order);
  return matrix;
}

void set_probe(SimilarityMatrix& matrix, std::span<const FeatureVector> node_features,
               std::span<const std::size_t> order, std::span<const double> probe_features) {
  check_order(node_features, order);
  if (order.size() + 1 != matrix.times()) {
    fail(ErrorKind::Argument, "probe column does not match the matrix size");
  }
  std::vector<double> probe_dot(node_features.size());
  for (std::size_t n = 0; n < node_features.size(); ++n) {
    probe_dot[n] = dot(node_features[n], probe_features);
  }
  const std::size_t probe_time = order.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    matrix.set(i, probe_time, 2.0 * matrix.eta() * probe_dot[order[i]]);
  }
}

SimilarityMatrix build_similarity(std::span<const FeatureVector> node_features,
                                  std::span<const std::size_t> order, double eta,
                                  std::size_t cap) {
  check_order(node_features, order);
  SimilarityMatrix matrix(order.size(), eta, cap);
  fill_pairs(matrix, node_features, order);
  return matrix;
}

double similarity(const RandomFeatureBank& bank, std::span<const double> a_i,
                  std::span<const double> a_j, double eta) {
  return 2.0 * eta * dot(bank.map(a_i), bank.map(a_j));
}

double similarity_approx(double d_sq, double sigma_sq, double eta) {
  if (!(sigma_sq > 0.0)) fail(ErrorKind::Argument, "kernel variance must be positive");
  if (!(d_sq >= 0.0)) fail(ErrorKind::Argument, "squared distance must be nonnegative");
  return 2.0 * eta * std::exp(-d_sq / (2.0 * sigma_sq));
}

double similarity_conditional_variance(double d_sq, double sigma_sq, double eta,
                                       std::size_t features) {
  if (features == 0) fail(ErrorKind::Argument, "feature count D must be >= 1");
  if (!(sigma_sq > 0.0)) fail(ErrorKind::Argument, "kernel variance must be positive");
  const double two_eta = 2.0 * eta;
  const double gap = std::expm1(-d_sq / sigma_sq);
  return two_eta * two_eta / (2.0 * static_cast<double>(features)) * gap * gap;
}

const char* to_string(AlphaFlag flag) noexcept {
  switch (flag) {
    case AlphaFlag::Ok: return "ok";
    case AlphaFlag::Adjacent: return "adjacent";
    case AlphaFlag::Domain: return "nonpositive_ratio";
  }
  return "?";
}

double WeightTrace::weight_sum() const {
  double sum = 0.0;
  for (const double f : weights) sum += f;
  return sum;
}

WeightTrace contribution_weights(const SimilarityMatrix& matrix, std::size_t target) {
  if (target == 0 || target >= matrix.times()) {
    fail(ErrorKind::Argument, "target time " + std::to_string(target) +
                                  " has no predecessors in the matrix");
  }
  WeightTrace trace;
  trace.target = target;
  trace.weights.assign(target, 0.0);
  trace.similarities.assign(target, 0.0);
  for (std::size_t i = target; i-- > 0;) {
    double f = matrix.at(i, target);
    trace.similarities[i] = f;
    for (std::size_t k = i + 1; k < target; ++k) f -= matrix.at(i, k) * trace.weights[k];
    if (!std::isfinite(f)) fail(ErrorKind::Numeric, "contribution weight overflowed");
    trace.weights[i] = f;
  }

  trace.alpha.assign(target, std::nullopt);
  trace.alpha_flags.assign(target, AlphaFlag::Adjacent);
  double min_weight = trace.weights.front();
  for (std::size_t i = 0; i < target; ++i) {
    min_weight = std::min(min_weight, trace.weights[i]);
    const std::size_t gap = target - i;
    if (gap < 2) continue;
    const double b = trace.similarities[i];
    const double ratio = trace.weights[i] / b;
    if (b > 0.0 && ratio > 0.0) {
      trace.alpha[i] = 1.0 - std::pow(ratio, 1.0 / static_cast<double>(gap - 1));
      trace.alpha_flags[i] = AlphaFlag::Ok;
    } else {
      trace.alpha_flags[i] = AlphaFlag::Domain;
    }
  }
  trace.noise_up = std::abs(min_weight);
  return trace;
}

double weighted_prediction_oracle(std::span<const double> values,
                                  const WeightTrace& trace) {
  if (values.size() != trace.weights.size()) {
    fail(ErrorKind::Argument, "value count " + std::to_string(values.size()) +
                                  " does not match weight count " +
                                  std::to_string(trace.weights.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[i] * trace.weights[i];
  return sum;
}

double expected_weight_sum(double b, std::size_t steps) {
  if (!(b > 0.0 && b < 1.0)) fail(ErrorKind::Argument, "b must lie in (0, 1)");
  if (steps == 0) fail(ErrorKind::Argument, "T must be >= 1");
  return 1.0 - std::pow(1.0 - b, static_cast<double>(steps));
}

double conformity_alpha(double similarity, double weight, std::size_t gap) {
  if (gap < 2) fail(ErrorKind::Argument, "conformity factor needs a gap of at least 2");
  if (!(similarity > 0.0)) {
    fail(ErrorKind::Domain, "conformity factor undefined for nonpositive B");
  }
  const double ratio = weight / similarity;
  if (!(ratio > 0.0)) {
    fail(ErrorKind::Domain, "conformity factor undefined for F/B <= 0");
  }
  return 1.0 - std::pow(ratio, 1.0 / static_cast<double>(gap - 1));
}

double noise_up_theoretical(double eta, std::size_t features) {
  if (!(eta > 0.0)) fail(ErrorKind::Argument, "learning rate must be positive");
  if (features == 0) fail(ErrorKind::Argument, "feature count D must be >= 1");
  return 2.0 * eta / std::sqrt(2.0 * static_cast<double>(features));
}

double noise_up_refined(const WeightTrace& trace) {
  if (trace.weights.empty()) fail(ErrorKind::State, "weight trace is empty");
  return std::abs(*std::min_element(trace.weights.begin(), trace.weights.end()));
}

double noise_up_refined(std::span<const WeightTrace> traces) {
  if (traces.empty()) fail(ErrorKind::State, "no probe traces");
  double worst = 0.0;
  for (const auto& trace : traces) worst = std::max(worst, noise_up_refined(trace));
  return worst;
}

void write_weight_trace_csv(const WeightTrace& trace, std::span<const double> d_sq,
                            std::ostream& out) {
  if (d_sq.size() != trace.weights.size()) {
    fail(ErrorKind::Argument, "distance column does not match the trace length");
  }
  out << "i,d_sq,B,F,alpha,flag\n";
  char line[192];
  for (std::size_t i = 0; i < trace.weights.size(); ++i) {
    char alpha[40] = "";
    if (trace.alpha[i]) std::snprintf(alpha, sizeof alpha, "%.17g", *trace.alpha[i]);
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%s,%s\n", i + 1, d_sq[i],
                  trace.similarities[i], trace.weights[i], alpha,
                  to_string(trace.alpha_flags[i]));
    out << line;
  }
}

}  // namespace skg
