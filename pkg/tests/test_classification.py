import random

import pytest

from eamkit import (
    ConfusionCounts,
    EntityPrediction,
    PredictionSet,
    auc,
    confusion_at_threshold,
    f1,
    gmeasure,
    inspection_ratio,
    mcc,
    precision,
    recall,
    stratified_weighted_average,
)

from _oracles import auc_pairs, auc_roc_sweep


def make_set(scored, name="s"):
    return PredictionSet(
        name, tuple(EntityPrediction(f"e{i}", 1, s, a) for i, (s, a) in enumerate(scored))
    )


class TestConfusion:
    def test_degenerate_all_positive(self):
        pset = make_set([(1.0, True)] * 5)
        assert confusion_at_threshold(pset, 0.5) == ConfusionCounts(5, 0, 0, 0)

    def test_separable(self):
        pset = make_set([(0.9, True), (0.4, False)])
        assert confusion_at_threshold(pset, 0.5) == ConfusionCounts(1, 0, 1, 0)

    def test_inverted(self):
        pset = make_set([(0.9, False), (0.4, True)])
        assert confusion_at_threshold(pset, 0.5) == ConfusionCounts(0, 1, 0, 1)

    def test_positive_iff_score_at_least_threshold(self):
        pset = make_set([(0.5, True)])
        assert confusion_at_threshold(pset, 0.5).tp == 1

    def test_counts_partition_at_every_threshold(self):
        rng = random.Random(3)
        for _ in range(100):
            pset = make_set([(rng.random(), rng.random() < 0.5) for _ in range(rng.randint(1, 30))])
            t = rng.random()
            assert confusion_at_threshold(pset, t).total == len(pset.records)

    def test_rejects_negative_counts(self):
        with pytest.raises(ValueError):
            ConfusionCounts(-1, 0, 0, 0)


class TestThresholdMetrics:
    def test_perfect(self):
        c = ConfusionCounts(1, 0, 0, 0)
        assert precision(c) == 1 and recall(c) == 1 and f1(c) == 1

    def test_two_thirds(self):
        c = ConfusionCounts(2, 1, 0, 1)
        assert precision(c) == pytest.approx(2 / 3)
        assert recall(c) == pytest.approx(2 / 3)
        assert f1(c) == pytest.approx(2 / 3)

    def test_no_predicted_positives_flags_precision(self):
        c = ConfusionCounts(0, 0, 0, 3)
        p = precision(c)
        assert p == 0.0 and p.undefined
        assert recall(c) == 0.0
        assert f1(c) == 0.0 and f1(c).undefined

    def test_mcc_perfect(self):
        assert mcc(ConfusionCounts(1, 0, 1, 0)) == 1.0

    def test_mcc_hand_value(self):
        # (50*30 - 10*10) / sqrt(60*60*40*40) = 1400/2400
        assert mcc(ConfusionCounts(50, 10, 30, 10)) == pytest.approx(1400 / 2400)

    def test_mcc_fully_wrong(self):
        assert mcc(ConfusionCounts(0, 1, 0, 1)) == -1.0

    def test_mcc_zero_factor_flagged(self):
        value = mcc(ConfusionCounts(2, 0, 0, 0))
        assert value == 0.0 and value.undefined

    def test_gmeasure_perfect(self):
        assert gmeasure(ConfusionCounts(2, 0, 3, 0)) == 1.0

    def test_gmeasure_hand_value(self):
        # recall 0.5, pf 0.25 -> 2*0.5*0.75/1.25
        assert gmeasure(ConfusionCounts(1, 1, 3, 1)) == pytest.approx(0.6)

    def test_gmeasure_zero_recall(self):
        assert gmeasure(ConfusionCounts(0, 1, 3, 2)) == 0.0

    def test_ranges_on_fuzzed_counts(self):
        rng = random.Random(17)
        for _ in range(500):
            c = ConfusionCounts(*(rng.randint(0, 20) for _ in range(4)))
            if c.total == 0:
                continue
            assert 0.0 <= precision(c) <= 1.0
            assert 0.0 <= recall(c) <= 1.0
            assert 0.0 <= f1(c) <= 1.0
            assert 0.0 <= gmeasure(c) <= 1.0
            assert -1.0 <= mcc(c) <= 1.0
            assert 0.0 <= inspection_ratio(c) <= 1.0


class TestAuc:
    def test_perfect_separation(self):
        assert auc(make_set([(0.9, True), (0.1, False)])) == 1.0

    def test_pair_enumeration_example(self):
        # positives {0.8, 0.4}, negatives {0.6, 0.2}: 3 of 4 pairs won
        pset = make_set([(0.8, True), (0.4, True), (0.6, False), (0.2, False)])
        assert auc(pset) == pytest.approx(0.75)

    def test_tie_counts_half(self):
        assert auc(make_set([(0.5, True), (0.5, False)])) == 0.5

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="single-class"):
            auc(make_set([(0.5, True), (0.9, True)]))

    def test_matches_pair_enumeration_with_ties(self):
        rng = random.Random(29)
        for _ in range(200):
            n = rng.randint(2, 40)
            scored = [(rng.randint(0, 10) / 10, rng.random() < 0.5) for _ in range(n)]
            if not any(a for _, a in scored) or all(a for _, a in scored):
                continue
            pos = [s for s, a in scored if a]
            neg = [s for s, a in scored if not a]
            assert auc(make_set(scored)) == pytest.approx(auc_pairs(pos, neg), abs=1e-12)

    def test_matches_roc_trapezoid_sweep(self):
        rng = random.Random(37)
        for _ in range(200):
            n = rng.randint(2, 40)
            scored = [(rng.randint(0, 8) / 8, rng.random() < 0.5) for _ in range(n)]
            if not any(a for _, a in scored) or all(a for _, a in scored):
                continue
            scores = [s for s, _ in scored]
            labels = [a for _, a in scored]
            assert auc(make_set(scored)) == pytest.approx(auc_roc_sweep(scores, labels), abs=1e-12)

    def test_flipping_labels_complements(self):
        rng = random.Random(41)
        for _ in range(100):
            scored = [(rng.random(), rng.random() < 0.5) for _ in range(rng.randint(2, 25))]
            if not any(a for _, a in scored) or all(a for _, a in scored):
                continue
            flipped = [(s, not a) for s, a in scored]
            assert auc(make_set(scored)) == pytest.approx(1.0 - auc(make_set(flipped)), abs=1e-12)

    def test_invariant_under_monotone_transform(self):
        rng = random.Random(47)
        for _ in range(100):
            scored = [(rng.random(), rng.random() < 0.5) for _ in range(rng.randint(2, 25))]
            if not any(a for _, a in scored) or all(a for _, a in scored):
                continue
            mapped = [((s**3 + 2 * s) / 3.0, a) for s, a in scored]
            assert auc(make_set(scored)) == pytest.approx(auc(make_set(mapped)), abs=1e-12)


class TestPrevalenceAndAverages:
    def test_inspection_ratio_hand_value(self):
        assert inspection_ratio(ConfusionCounts(2, 3, 4, 1)) == pytest.approx(0.3)

    def test_inspection_ratio_extremes(self):
        assert inspection_ratio(ConfusionCounts(0, 2, 3, 0)) == 0.0
        assert inspection_ratio(ConfusionCounts(4, 0, 0, 1)) == 1.0

    def test_inspection_ratio_empty_rejected(self):
        with pytest.raises(ValueError):
            inspection_ratio(ConfusionCounts(0, 0, 0, 0))

    def test_weighted_average_hand_value(self):
        assert stratified_weighted_average([1.0, 0.0], [10, 90]) == pytest.approx(0.1)

    def test_equal_weights_is_mean(self):
        assert stratified_weighted_average([0.2, 0.4, 0.9], [3, 3, 3]) == pytest.approx(0.5)

    def test_single_stratum(self):
        assert stratified_weighted_average([0.7], [5]) == 0.7

    def test_zero_weight_sum_rejected(self):
        with pytest.raises(ValueError):
            stratified_weighted_average([0.5], [0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            stratified_weighted_average([0.5, 0.2], [1])
