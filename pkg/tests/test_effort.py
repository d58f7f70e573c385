import random

import pytest

from eamkit import (
    EntityPrediction,
    PredictionSet,
    RankingPolicy,
    average_npofb,
    average_pofb,
    effort_curve,
    ifa,
    norm_popt,
    npofb,
    peffort,
    pofb,
    popt,
    proportion_inspected,
    relative_gain,
)

import _oracles as oracle


def make_set(entities, name="s"):
    return PredictionSet(name, tuple(EntityPrediction(*e) for e in entities))


F1 = [
    ("A", 100, 0.9, True),
    ("B", 50, 0.8, False),
    ("C", 30, 0.6, True),
    ("D", 20, 0.95, False),
]


def random_entities(rng, n_max=12, size_max=50, force_defective=True):
    n = rng.randint(1, n_max)
    entities = [
        (f"e{i:02d}", rng.randint(1, size_max), rng.randint(0, 100) / 100, rng.random() < 0.4)
        for i in range(n)
    ]
    if force_defective and not any(e[3] for e in entities):
        i, size, score, _ = entities[rng.randrange(n)]
        entities[int(i[1:])] = (i, size, score, True)
    return entities


class TestPofb:
    def test_perfect_prefix(self):
        entities = [(f"d{i}", 10, 0.9, True) for i in range(5)]
        entities += [(f"x{i}", 10, 0.1, False) for i in range(5)]
        assert pofb(make_set(entities), 50) == 1.0

    def test_fixture_values(self):
        pset = make_set(F1)
        assert pofb(pset, 60) == 0.5
        assert pofb(pset, 20) == 0.0
        assert pofb(pset, 30) == 0.0

    def test_npofb_fixture_value(self):
        pset = make_set(F1)
        assert npofb(pset, 30) == 0.5
        assert npofb(pset, 30) > pofb(pset, 30)

    def test_zero_defectives_rejected(self):
        pset = make_set([("a", 10, 0.5, False)])
        with pytest.raises(ValueError, match="zero defectives"):
            pofb(pset, 50)
        with pytest.raises(ValueError, match="zero defectives"):
            npofb(pset, 50)

    def test_endpoints(self):
        rng = random.Random(13)
        for _ in range(50):
            pset = make_set(random_entities(rng))
            assert pofb(pset, 0) == 0.0
            assert pofb(pset, 100) == 1.0

    def test_monotone_in_x(self):
        rng = random.Random(19)
        for _ in range(100):
            pset = make_set(random_entities(rng))
            xs = sorted(rng.uniform(0, 100) for _ in range(5))
            for metric in (pofb, npofb):
                values = [metric(pset, x) for x in xs]
                assert all(a <= b for a, b in zip(values, values[1:]))

    def test_matches_brute_force_simulation(self):
        rng = random.Random(101)
        for _ in range(300):
            entities = random_entities(rng)
            pset = make_set(entities)
            x = rng.choice([0, 10, 20, 33.4, 50, 80, 100])
            assert pofb(pset, x) == oracle.pofb(entities, x, "score")
            assert npofb(pset, x) == oracle.pofb(entities, x, "score_density")

    def test_equal_sizes_collapse_exactly(self):
        rng = random.Random(59)
        for _ in range(100):
            entities = [
                (f"e{i}", 9, rng.randint(0, 50) / 50, rng.random() < 0.5) for i in range(10)
            ]
            if not any(e[3] for e in entities):
                entities[0] = ("e0", 9, entities[0][2], True)
            pset = make_set(entities)
            for x in range(0, 101, 10):
                assert npofb(pset, x) == pofb(pset, x)


class TestAverages:
    def test_tiny_perfect_set(self):
        # one defective entity small enough to fit at every x >= 10
        entities = [("d", 1, 0.99, True)] + [(f"x{i}", 1, 0.01, False) for i in range(9)]
        assert average_pofb(make_set(entities)) == pytest.approx(10 / 11)

    def test_defective_fills_everything(self):
        # single entity occupies 100% of LOC: found only at x = 100
        assert average_pofb(make_set([("d", 7, 0.9, True)])) == pytest.approx(1 / 11)

    def test_grid_enumeration(self):
        rng = random.Random(67)
        for _ in range(50):
            pset = make_set(random_entities(rng))
            expected = sum(pofb(pset, x) for x in range(0, 101, 10)) / 11
            assert average_pofb(pset) == pytest.approx(expected, abs=1e-15)
            expected_n = sum(npofb(pset, x) for x in range(0, 101, 10)) / 11
            assert average_npofb(pset) == pytest.approx(expected_n, abs=1e-15)

    def test_zero_defectives_propagates(self):
        with pytest.raises(ValueError):
            average_pofb(make_set([("a", 1, 0.4, False)]))


class TestPopt:
    def test_predicted_equals_optimal(self):
        entities = [("a", 10, 0.9, True), ("b", 10, 0.1, False)]
        assert popt(make_set(entities)) == pytest.approx(1.0, abs=1e-12)

    def test_two_entity_hand_areas(self):
        # optimal area 0.75, predicted 0.25 -> Popt 0.5
        entities = [("a", 10, 0.2, True), ("b", 10, 0.9, False)]
        assert popt(make_set(entities)) == pytest.approx(0.5, abs=1e-12)

    def test_all_defective_any_order(self):
        rng = random.Random(71)
        for _ in range(30):
            entities = [(f"e{i}", rng.randint(1, 30), rng.random(), True) for i in range(6)]
            assert popt(make_set(entities)) == pytest.approx(1.0, abs=1e-12)

    def test_matches_trapezoid_oracle(self):
        rng = random.Random(73)
        for _ in range(200):
            entities = random_entities(rng)
            assert popt(make_set(entities)) == pytest.approx(oracle.popt(entities), abs=1e-12)

    def test_range_on_fuzzed_inputs(self):
        rng = random.Random(79)
        for _ in range(200):
            value = popt(make_set(random_entities(rng)))
            assert 0.0 < value <= 1.0 + 1e-12

    def test_curve_endpoints(self):
        rng = random.Random(83)
        for _ in range(100):
            pset = make_set(random_entities(rng))
            for policy in (
                RankingPolicy.SCORE_DENSITY_DESCENDING,
                RankingPolicy.ACTUAL_DENSITY_DESCENDING,
            ):
                curve = effort_curve(pset, policy)
                assert curve.points[0] == (0.0, 0.0)
                assert curve.points[-1][0] == pytest.approx(1.0, abs=1e-12)
                assert curve.points[-1][1] == pytest.approx(1.0, abs=1e-12)
                xs = [p[0] for p in curve.points]
                ys = [p[1] for p in curve.points]
                assert all(a <= b for a, b in zip(xs, xs[1:]))
                assert all(a <= b for a, b in zip(ys, ys[1:]))


class TestNormPopt:
    def test_predicted_equals_optimal(self):
        entities = [("a", 10, 0.9, True), ("b", 10, 0.1, False)]
        assert norm_popt(make_set(entities)) == pytest.approx(1.0, abs=1e-12)

    def test_no_defectives_in_first_window_under_either_ranking(self):
        # both rankings start with the huge clean entity: truncated areas 0
        entities = [("big", 970, 1.0, False), ("d1", 10, 0.5, True), ("d2", 20, 0.4, True)]
        pset = make_set(entities)
        predicted = effort_curve(pset, RankingPolicy.SCORE_DENSITY_DESCENDING)
        optimal = effort_curve(pset, RankingPolicy.ACTUAL_DENSITY_DESCENDING)
        assert predicted.area_up_to(0.2) == 0.0
        assert optimal.area_up_to(0.2) == 0.0
        assert norm_popt(pset) == pytest.approx(1.0, abs=1e-12)

    def test_single_entity(self):
        assert norm_popt(make_set([("only", 5, 0.3, True)])) == pytest.approx(1.0, abs=1e-12)

    def test_matches_truncated_trapezoid_oracle(self):
        rng = random.Random(89)
        for _ in range(200):
            entities = random_entities(rng)
            optimal = oracle.trapezoid(oracle.curve_points(entities, "actual_density"), 0.2)
            predicted = oracle.trapezoid(oracle.curve_points(entities, "score_density"), 0.2)
            expected = 1.0 - (optimal - predicted) / 0.2
            assert norm_popt(make_set(entities)) == pytest.approx(expected, abs=1e-12)


class TestIfaAndProportion:
    def test_top_ranked_defective(self):
        assert ifa(make_set([("a", 1, 0.9, True), ("b", 1, 0.1, False)])) == 0

    def test_fixture_walk(self):
        assert ifa(make_set(F1)) == 1

    def test_worst_case(self):
        entities = [(f"c{i}", 1, 0.9 - i / 100, False) for i in range(5)] + [("z", 1, 0.1, True)]
        assert ifa(make_set(entities)) == 5

    def test_matches_walk_oracle(self):
        rng = random.Random(97)
        for _ in range(300):
            entities = random_entities(rng)
            assert ifa(make_set(entities)) == oracle.ifa(entities)

    def test_proportion_extremes(self):
        pset = make_set(F1)
        assert proportion_inspected(pset, 100) == 1.0
        assert proportion_inspected(pset, 0) == 0.0

    def test_proportion_fixture(self):
        assert proportion_inspected(make_set(F1), 60) == 0.5

    def test_proportion_matches_oracle(self):
        rng = random.Random(103)
        for _ in range(300):
            entities = random_entities(rng, force_defective=False)
            x = rng.choice([0, 15, 20, 50, 100])
            assert proportion_inspected(make_set(entities), x) == oracle.proportion_inspected(
                entities, x
            )


class TestPeffort:
    def test_perfect_density_ranking(self):
        entities = [("a", 10, 0.9, True), ("b", 10, 0.1, False)]
        assert peffort(make_set(entities)) == pytest.approx(0.75, abs=1e-12)

    def test_reversed_ranking(self):
        entities = [("a", 10, 0.1, True), ("b", 10, 0.9, False)]
        assert peffort(make_set(entities)) == pytest.approx(0.25, abs=1e-12)

    def test_all_defective_is_diagonal(self):
        # with linear within-entity credit the all-defective curve is the
        # diagonal regardless of order, so its area is exactly 1/2
        for n in (2, 4, 8):
            entities = [(f"e{i}", 10, 0.5, True) for i in range(n)]
            expected = oracle.trapezoid(oracle.curve_points(entities, "score_density"))
            assert expected == pytest.approx(0.5, abs=1e-12)
            assert peffort(make_set(entities)) == pytest.approx(0.5, abs=1e-12)

    def test_matches_trapezoid_oracle(self):
        rng = random.Random(107)
        for _ in range(200):
            entities = random_entities(rng)
            expected = oracle.trapezoid(oracle.curve_points(entities, "score_density"))
            assert peffort(make_set(entities)) == pytest.approx(expected, abs=1e-12)


class TestRelativeGain:
    def test_hand_value(self):
        assert relative_gain(0.2, 0.5) == pytest.approx(1.5)

    def test_equal_values(self):
        assert relative_gain(0.4, 0.4) == 0.0

    def test_zero_base_rejected(self):
        with pytest.raises(ValueError, match="gain undefined"):
            relative_gain(0.0, 0.5)
