#include <doctest.h>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "skg/errors.hpp"
#include "skg/experiment_harness.hpp"
#include "skg/variance_select.hpp"
#include "skg/weight_analysis.hpp"

using namespace skg;

TEST_CASE("efficient-distance boundary") {
  CHECK(sigma_ed(8, noise_up_theoretical(0.05, 888), 0.05) == doctest::Approx(1.069).epsilon(0.002));
  CHECK(sigma_ed(671, noise_up_theoretical(0.03, 500), 0.03) == doctest::Approx(97.1).epsilon(0.002));
  CHECK(sigma_ed(107, noise_up_theoretical(0.05, 403), 0.05) == doctest::Approx(15.99).epsilon(0.002));
  CHECK(sigma_ed(1, 0.2 * std::exp(-0.5), 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(sigma_ed(1, 0.2, 0.1), Error);
  CHECK_THROWS_AS(sigma_ed(1, 0.0, 0.1), Error);
  CHECK(sigma_ed(27, 0.01, 0.1) == doctest::Approx(27 / (2 * std::log(20.0))).epsilon(1e-12));
}

TEST_CASE("chaos boundary") {
  CHECK(sigma_ce(1, 0.0206, 0.1) == doctest::Approx(0.22).epsilon(0.01));
  CHECK(sigma_ce(5, 0.01, 0.1) == sigma_ed(5, 0.01, 0.1));
  CHECK(sigma_ce(1, 0.2 * std::exp(-0.5), 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(sigma_ce(0, 0.01, 0.1), Error);
}

TEST_CASE("averaging boundary") {
  CHECK(sigma_da(27, 0.1) == doctest::Approx(128.1).epsilon(0.001));
  CHECK(sigma_da(27, 0.1, true) == doctest::Approx(135.0).epsilon(1e-12));
  CHECK(sigma_da(27, -std::expm1(-0.1)) == doctest::Approx(135.0).epsilon(1e-12));
  CHECK(sigma_da(27, 1e-9) > 1e9);
  CHECK_THROWS_AS(sigma_da(27, 0.5), Error);
  CHECK_THROWS_AS(sigma_da(27, 0.0), Error);
}

TEST_CASE("Laplacian diversity") {
  CHECK(laplacian_diversity(1, 0.2 / std::exp(1.0), 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(laplacian_diversity(27, 0.01, 0.1) == doctest::Approx(9.012).epsilon(0.001));
  CHECK(laplacian_diversity(30, 0.01, 0.1) > laplacian_diversity(20, 0.01, 0.1));
}

TEST_CASE("selection from vectors") {
  const std::vector<AdjacencyVector> v{{0, 0, 0}, {1, 0, 0}, {1, 1, 1}};
  const auto r = select(v, SelectOptions{});
  CHECK(r.d_sq_max == 3.0);
  CHECK(r.d_sq_min_nonzero == 1.0);
  CHECK(r.noise_up == 0.01);
  CHECK(r.sigma_sq_ed == sigma_ed(3, 0.01, 0.1));
  CHECK(r.sigma_sq_ce <= r.sigma_sq_ed);
  CHECK(r.sigma_sq_da == sigma_da(3, 0.1));

  const std::vector<AdjacencyVector> same{{1, 1}, {1, 1}};
  try {
    select(same, SelectOptions{});
    FAIL("expected degenerate input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
}

TEST_CASE("boundaries scale with the square of the adjacency scale") {
  const auto ds = make_planted_dataset(PlantedSpec{});
  const auto split = split_sample(ds.nodes, 0.4, 3);
  auto v = build_adjacency_vectors(ds.graph, split.sampled, split.sampled);
  const auto base = select(v, SelectOptions{});
  for (auto& a : v) for (auto& x : a) x *= 3.0;
  const auto scaled = select(v, SelectOptions{});
  CHECK(scaled.sigma_sq_ed == doctest::Approx(9 * base.sigma_sq_ed).epsilon(1e-12));
  CHECK(scaled.sigma_sq_ce == doctest::Approx(9 * base.sigma_sq_ce).epsilon(1e-12));
  CHECK(scaled.sigma_sq_da == doctest::Approx(9 * base.sigma_sq_da).epsilon(1e-12));
}

TEST_CASE("feature count enters only through a logarithm") {
  const std::vector<AdjacencyVector> v{{0, 0, 0, 0}, {1, 1, 1, 1}, {1, 0, 1, 0}};
  const auto at = [&](std::size_t features) {
    SelectOptions opts;
    opts.features = features;
    return select(v, opts).sigma_sq_ed;
  };
  // sigma_ed is proportional to 1 / ln(sqrt(2D)).
  CHECK(at(800) / at(200) == doctest::Approx(std::log(20.0) / std::log(40.0)).epsilon(1e-12));
  const double first = 1 - at(800) / at(200);
  const double second = 1 - at(3200) / at(800);
  CHECK(first < 0.2);
  CHECK(second < first);
}

TEST_CASE("refined selection") {
  const auto ds = make_planted_dataset(PlantedSpec{});
  const auto split = split_sample(ds.nodes, 0.4, 0);
  auto set = make_training_set(ds.graph, ds.values, split.sampled, split.sampled);
  set.values = normalize_values(set.values, {}).train;
  const auto probes = build_adjacency_vectors(ds.graph, split.tested, split.sampled);
  SelectOptions opts;
  opts.refine = true;
  const auto r = select(set, opts, probes);
  CHECK(r.probe_count == probes.size());
  CHECK(r.sigma_sq_ed_initial == doctest::Approx(sigma_ed(r.d_sq_max, 0.01, 0.1)));
  if (r.noise_up_source == NoiseSource::Refined) {
    CHECK(r.noise_up > 0.0);
    CHECK(r.noise_up < 0.2);
    CHECK(r.sigma_sq_ed == doctest::Approx(sigma_ed(r.d_sq_max, r.noise_up, 0.1)));
  } else {
    CHECK_FALSE(r.refine_note.empty());
  }
  CHECK(select(set, opts, probes).sigma_sq_ed == r.sigma_sq_ed);
}

TEST_CASE("a second refinement pass barely moves the selected variance") {
  const auto ds = make_planted_dataset(PlantedSpec{});
  double total_change = 0.0;
  const int seeds = 10;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto split = split_sample(ds.nodes, 0.4, seed);
    auto set = make_training_set(ds.graph, ds.values, split.sampled, split.sampled);
    set.values = normalize_values(set.values, {}).train;
    const auto probes = build_adjacency_vectors(ds.graph, split.tested, split.sampled);
    SelectOptions opts;
    opts.refine = true;
    opts.seed = seed;
    const auto first = select(set, opts, probes);

    // Second pass: retrain at the refined variance and re-read the ceiling.
    auto bank = std::make_shared<const RandomFeatureBank>(
        sample_bank(first.sigma_sq_ed, opts.features, set.dimension(), seed));
    SkgModel model(bank, opts.eta);
    const auto trace = train(model, set, opts.epochs, seed);
    std::vector<FeatureVector> z;
    for (const auto& a : set.vectors) z.push_back(bank->map(a));
    auto matrix = build_training_similarity(z, trace.order, opts.eta);
    std::vector<WeightTrace> traces;
    for (const auto& p : probes) {
      set_probe(matrix, z, trace.order, bank->map(p));
      traces.push_back(contribution_weights(matrix, trace.steps()));
    }
    const double second = sigma_ed(first.d_sq_max, noise_up_refined(traces), opts.eta);
    total_change += std::abs(second - first.sigma_sq_ed) / first.sigma_sq_ed;
  }
  CHECK(total_change / seeds < 0.2);
}

TEST_CASE("report JSON") {
  const std::vector<AdjacencyVector> v{{1, 0}, {0, 1}, {1, 1}};
  const auto j = nlohmann::json::parse(report_to_json(select(v, SelectOptions{})));
  CHECK(j["format"] == "skg-selection-v1");
  CHECK(j["boundaries"]["sigma_sq_ed"]["value"].get<double>() > 0.0);
  CHECK(j["boundaries"]["sigma_sq_ed"]["source"].is_string());
}
