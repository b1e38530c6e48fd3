import json
import math

import pytest

import skg


def test_noise_and_boundaries():
    assert skg.noise_up_theoretical(0.1, 200) == 0.01
    assert skg.sigma_ed(8, skg.noise_up_theoretical(0.05, 888), 0.05) == pytest.approx(1.069, rel=2e-3)
    assert skg.sigma_da(27, 0.1, first_order=True) == pytest.approx(135.0)
    assert skg.sigma_ce(1, 0.2 * math.exp(-0.5), 0.1) == pytest.approx(1.0)


def test_errors_carry_a_kind():
    with pytest.raises(skg.SkgError) as info:
        skg.sigma_da(27, 0.7)
    assert info.value.kind == "argument error"
    with pytest.raises(skg.SkgError) as info:
        skg.select([[1.0, 1.0], [1.0, 1.0]])
    assert "degenerate" in info.value.kind


def test_graph_and_vectors():
    g = skg.parse_graph("1,2\n2,3\n3,1\n")
    assert skg.build_adjacency_vectors(g, ["1"], ["1", "2", "3"]) == [[0.0, 1.0, 1.0]]
    d = skg.parse_graph("1,2\n", directed=True)
    assert skg.build_adjacency_vectors(d, ["2"], ["1", "2"]) == [[0.0, 0.0]]
    stats = skg.pairwise_stats([[1, 0], [0, 1], [1, 1]])
    assert (stats.d_sq_max, stats.d_sq_min_nonzero, stats.pair_count) == (2.0, 1.0, 3)


def test_normalize_and_split():
    scale, train, other = skg.normalize_values([2, -4], [1])
    assert (scale, train, other) == (4.0, [0.5, -1.0], [0.25])
    ids = [str(i) for i in range(10)]
    sampled, tested = skg.split_sample(ids, 0.4, 3)
    assert len(sampled) == 4 and len(tested) == 6
    assert skg.split_sample(ids, 0.4, 3) == (sampled, tested)


def test_features_and_kernel():
    bank = skg.RandomFeatureBank.sample(2.0, 5000, 3, seed=1)
    a, b = [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]
    za, zb = bank.map(a), bank.map(b)
    assert sum(x * x for x in za) == pytest.approx(1.0, abs=1e-12)
    approx = sum(x * y for x, y in zip(za, zb))
    assert approx == pytest.approx(skg.kernel_exact(a, b, 2.0), abs=0.03)
    assert skg.RandomFeatureBank.from_json(bank.to_json()) == bank


def test_training_matches_weighted_sum():
    bank = skg.RandomFeatureBank.sample(2.0, 100, 4, seed=0)
    vectors = [[1, 0, 1, 0], [0, 1, 1, 0], [1, 1, 0, 1], [0, 0, 1, 1]]
    values = [0.5, -0.2, 0.9, 0.1]
    model = skg.SkgModel(bank, 0.1)
    trace = model.train(vectors, values, 2, 7)
    assert len(trace.order) == 8
    t = len(trace.order) - 1
    weights = skg.contribution_weights(bank, vectors, list(trace.order), 0.1)
    y = [values[i] for i in trace.order[:t]]
    assert sum(w * v for w, v in zip(weights.weights, y)) == pytest.approx(trace.predictions[t], rel=1e-9)


def test_identical_vectors_closed_form():
    bank = skg.RandomFeatureBank.sample(1.0, 50, 2, seed=0)
    tr = skg.contribution_weights(bank, [[1.0, 0.0]], [0, 0, 0, 0], 0.1)
    assert tr.weights == pytest.approx([0.128, 0.16, 0.2], abs=1e-12)
    assert tr.weight_sum() == pytest.approx(skg.expected_weight_sum(0.2, 3), abs=1e-12)


def test_select_report(report_schema):
    jsonschema = pytest.importorskip("jsonschema")
    ds = skg.make_planted_dataset()
    sampled, _ = skg.split_sample(ds.nodes, 0.4, 0)
    vectors = skg.build_adjacency_vectors(ds.graph, sampled, sampled)
    report = skg.select(vectors)
    assert report.sigma_sq_ce <= report.sigma_sq_ed <= report.sigma_sq_da
    jsonschema.validate(json.loads(report.to_json()), report_schema)


def test_sweep_and_gnmse():
    assert skg.gnmse([1, 1], [1, 0]) == 0.5
    ds = skg.make_planted_dataset()
    config = skg.ExperimentConfig()
    a = skg.run_once(ds, config, 5.0, 3)
    assert a == skg.run_once(ds, config, 5.0, 3)
    results = skg.sweep(ds, config, [0.1, 5.0, 5000.0], repeats=3, theoretical_ed=5.0)
    assert [r.repeats for r in results] == [3, 3, 3]
    assert results[1].is_theoretical_ed
    assert results[1].gnmse_mean < results[0].gnmse_mean
    assert skg.sweep_csv(results).startswith("sigma_sq,gnmse_mean,gnmse_std,repeats,is_theoretical_ed")
