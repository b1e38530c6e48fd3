#include "skg/variance_select.hpp"

#include <cmath>
#include <memory>

#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/rff_features.hpp"
#include "skg/skg_model.hpp"
#include "skg/weight_analysis.hpp"

namespace skg {
namespace {

// ln(noise_up / 2 eta), negative inside the valid domain.
double log_noise_ratio(double noise_up, double eta) {
  if (!(eta > 0.0)) fail(ErrorKind::Argument, "learning rate must be positive");
  if (!(noise_up > 0.0)) fail(ErrorKind::Domain, "noise ceiling must be positive");
  if (!(noise_up < 2.0 * eta)) {
    fail(ErrorKind::Domain, "noise ceiling " + std::to_string(noise_up) +
                                " is not below 2*eta = " + std::to_string(2.0 * eta));
  }
  return std::log(noise_up / (2.0 * eta));
}

double refine_noise(const TrainingSet& set, const SelectOptions& options,
                    double sigma_sq, std::span<const AdjacencyVector> probes) {
  auto bank = std::make_shared<const RandomFeatureBank>(RandomFeatureBank::sample(
      sigma_sq, options.features, set.dimension(), options.seed));
  SkgModel model(bank, options.eta);
  const auto trace = train(model, set, options.epochs, options.seed);

  std::vector<FeatureVector> node_features;
  node_features.reserve(set.size());
  for (const auto& a : set.vectors) node_features.push_back(bank->map(a));

  auto matrix = build_training_similarity(node_features, trace.order, options.eta);
  double worst = 0.0;
  for (const auto& probe : probes) {
    set_probe(matrix, node_features, trace.order, bank->map(probe));
    worst = std::max(worst, noise_up_refined(contribution_weights(matrix, trace.steps())));
  }
  return worst;
}

}  // namespace

double sigma_ed(double d_sq_max, double noise_up, double eta) {
  if (!(d_sq_max > 0.0)) fail(ErrorKind::Argument, "d_sq_max must be positive");
  return -d_sq_max / (2.0 * log_noise_ratio(noise_up, eta));
}

double sigma_ce(double d_sq_min_nonzero, double noise_up, double eta) {
  if (!(d_sq_min_nonzero > 0.0)) {
    fail(ErrorKind::Argument, "smallest nonzero squared distance must be positive");
  }
  return -d_sq_min_nonzero / (2.0 * log_noise_ratio(noise_up, eta));
}

double sigma_da(double d_sq_max, double closeness, bool first_order) {
  if (!(closeness > 0.0 && closeness < 0.5)) {
    fail(ErrorKind::Argument, "closeness must lie in (0, 0.5)");
  }
  if (!(d_sq_max > 0.0)) fail(ErrorKind::Argument, "d_sq_max must be positive");
  const double log_term = first_order ? -closeness : std::log1p(-closeness);
  return -d_sq_max / (2.0 * log_term);
}

double laplacian_diversity(double d_l1_max, double noise_up, double eta) {
  if (!(d_l1_max > 0.0)) fail(ErrorKind::Argument, "d_l1_max must be positive");
  return -d_l1_max / log_noise_ratio(noise_up, eta);
}

const char* to_string(NoiseSource source) noexcept {
  return source == NoiseSource::Theoretical ? "theoretical" : "refined";
}

SelectionReport select(std::span<const AdjacencyVector> vectors,
                       const SelectOptions& options) {
  if (options.refine) {
    fail(ErrorKind::Argument, "noise refinement needs nodal values; pass a training set");
  }
  if (vectors.size() < 2) {
    fail(ErrorKind::Argument, "variance selection needs at least 2 sampled nodes");
  }
  const auto stats = pairwise_stats(vectors);
  if (!stats.d_sq_min_nonzero) {
    fail(ErrorKind::Degenerate,
         "all sampled adjacency vectors are identical; no nonzero distance");
  }

  SelectionReport report;
  report.sample_count = vectors.size();
  report.pair_count = stats.pair_count;
  report.d_sq_max = stats.d_sq_max;
  report.d_sq_min_nonzero = *stats.d_sq_min_nonzero;
  report.d_l1_max = stats.d_l1_max;
  report.eta = options.eta;
  report.features = options.features;
  report.closeness = options.closeness;
  report.first_order_da = options.first_order_da;
  report.seed = options.seed;

  report.noise_up_theoretical = noise_up_theoretical(options.eta, options.features);
  report.noise_up = report.noise_up_theoretical;
  report.noise_up_source = NoiseSource::Theoretical;
  report.sigma_sq_ed = sigma_ed(report.d_sq_max, report.noise_up, options.eta);
  report.sigma_sq_ed_initial = report.sigma_sq_ed;
  report.sigma_sq_ce = sigma_ce(report.d_sq_min_nonzero, report.noise_up, options.eta);
  report.sigma_sq_da = sigma_da(report.d_sq_max, options.closeness, options.first_order_da);
  report.laplacian_b = laplacian_diversity(report.d_l1_max, report.noise_up, options.eta);
  return report;
}

SelectionReport select(const TrainingSet& set, const SelectOptions& options,
                       std::span<const AdjacencyVector> probes) {
  auto plain = options;
  plain.refine = false;
  auto report = select(set.vectors, plain);
  if (!options.refine) return report;

  if (probes.empty()) probes = set.vectors;
  report.epochs = options.epochs;
  report.probe_count = probes.size();
  const double refined = refine_noise(set, options, report.sigma_sq_ed, probes);
  if (!(refined > 0.0 && refined < 2.0 * options.eta)) {
    report.refine_note = "refined ceiling " + std::to_string(refined) +
                         " outside (0, 2*eta); kept the theoretical value";
    return report;
  }
  report.noise_up = refined;
  report.noise_up_source = NoiseSource::Refined;
  report.sigma_sq_ed = sigma_ed(report.d_sq_max, refined, options.eta);
  report.sigma_sq_ce = sigma_ce(report.d_sq_min_nonzero, refined, options.eta);
  report.laplacian_b = laplacian_diversity(report.d_l1_max, refined, options.eta);
  return report;
}

std::string report_to_json(const SelectionReport& r) {
  using nlohmann::json;
  const auto entry = [](double value, const std::string& source) {
    return json{{"value", value}, {"source", source}};
  };
  const bool refined = r.noise_up_source == NoiseSource::Refined;
  const std::string noise_source =
      refined ? "refined: max over probes of |min_i F(i,T+1)| at sigma_sq_ed_initial"
              : "theoretical: 2*eta/sqrt(2*D)";

  json j;
  j["format"] = "skg-selection-v1";
  j["inputs"] = {
      {"eta", entry(r.eta, "input")},
      {"D", entry(static_cast<double>(r.features), "input")},
      {"closeness", entry(r.closeness, "input")},
      {"sample_count", entry(static_cast<double>(r.sample_count), "input")},
  };
  j["statistics"] = {
      {"pair_count", entry(static_cast<double>(r.pair_count), "N(N-1)/2 sampled pairs")},
      {"d_sq_max", entry(r.d_sq_max, "max |a_i - a_j|^2 over sampled pairs")},
      {"d_sq_min_nonzero",
       entry(r.d_sq_min_nonzero, "min nonzero |a_i - a_j|^2 over sampled pairs")},
      {"d_l1_max", entry(r.d_l1_max, "max |a_i - a_j|_1 over sampled pairs")},
  };
  j["noise"] = {
      {"noise_up_theoretical", entry(r.noise_up_theoretical, "theoretical: 2*eta/sqrt(2*D)")},
      {"noise_up", entry(r.noise_up, noise_source)},
      {"source", to_string(r.noise_up_source)},
  };
  if (r.epochs > 0) {
    j["noise"]["refinement"] = {
        {"epochs", r.epochs},
        {"seed", r.seed},
        {"probe_count", r.probe_count},
        {"note", r.refine_note},
    };
  }
  const std::string ed_formula = "-d_sq_max / (2 ln(noise_up / (2 eta)))";
  j["boundaries"] = {
      {"sigma_sq_ce",
       entry(r.sigma_sq_ce, "-d_sq_min_nonzero / (2 ln(noise_up / (2 eta)))")},
      {"sigma_sq_ed", entry(r.sigma_sq_ed, ed_formula)},
      {"sigma_sq_ed_initial",
       entry(r.sigma_sq_ed_initial, "-d_sq_max / (2 ln(noise_up_theoretical / (2 eta)))")},
      {"sigma_sq_da",
       entry(r.sigma_sq_da, r.first_order_da ? "d_sq_max / (2 closeness)"
                                             : "-d_sq_max / (2 ln(1 - closeness))")},
      {"laplacian_b", entry(r.laplacian_b, "-d_l1_max / ln(noise_up / (2 eta))")},
  };
  j["selected_sigma_sq"] = entry(r.sigma_sq_ed, ed_formula);
  return j.dump(2);
}

}  // namespace skg
