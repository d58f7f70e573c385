"""Threshold-dependent confusion metrics and threshold-independent AUC.

Metrics with an empty denominator return 0 carrying an undefined flag
instead of NaN, so report aggregation never propagates NaN while the
distinction stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Sequence

from scipy.stats import rankdata

from .model import PredictionSet

__all__ = [
    "ConfusionCounts",
    "MetricValue",
    "confusion_at_threshold",
    "precision",
    "recall",
    "f1",
    "mcc",
    "gmeasure",
    "auc",
    "inspection_ratio",
    "stratified_weighted_average",
]


class MetricValue(float):
    """A float plus a marker for the undefined-denominator convention."""

    undefined: bool

    def __new__(cls, value: float, undefined: bool = False) -> "MetricValue":
        obj = super().__new__(cls, value)
        obj.undefined = undefined
        return obj

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        suffix = ", undefined" if self.undefined else ""
        return f"MetricValue({float(self)!r}{suffix})"


@dataclass(frozen=True)
class ConfusionCounts:
    """TP / FP / TN / FN tallies feeding all threshold metrics."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion_at_threshold(pset: PredictionSet, t: float) -> ConfusionCounts:
    """Tally the confusion matrix with positive defined as score >= t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    tp = fp = tn = fn = 0
    for record in pset.records:
        predicted = record.score >= t
        if predicted and record.actual:
            tp += 1
        elif predicted and not record.actual:
            fp += 1
        elif not predicted and record.actual:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def precision(c: ConfusionCounts) -> MetricValue:
    """TP / (TP + FP); 0 with flag when nothing was predicted positive."""
    if c.tp + c.fp == 0:
        return MetricValue(0.0, undefined=True)
    return MetricValue(c.tp / (c.tp + c.fp))


def recall(c: ConfusionCounts) -> MetricValue:
    """TP / (TP + FN); 0 with flag when there are no actual positives."""
    if c.tp + c.fn == 0:
        return MetricValue(0.0, undefined=True)
    return MetricValue(c.tp / (c.tp + c.fn))


def f1(c: ConfusionCounts) -> MetricValue:
    """Harmonic mean of precision and recall."""
    p = precision(c)
    r = recall(c)
    if p + r == 0.0:
        return MetricValue(0.0, undefined=p.undefined or r.undefined)
    return MetricValue(2.0 * p * r / (p + r))


def mcc(c: ConfusionCounts) -> MetricValue:
    """Matthews correlation: (TP*TN - FP*FN) / sqrt of the four margins."""
    product = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if product == 0:
        return MetricValue(0.0, undefined=True)
    return MetricValue((c.tp * c.tn - c.fp * c.fn) / math.sqrt(product))


def gmeasure(c: ConfusionCounts) -> MetricValue:
    """Harmonic mean of recall and 1 - pf, with pf = FP / (FP + TN)."""
    r = recall(c)
    if c.fp + c.tn == 0:
        return MetricValue(0.0, undefined=True)
    specificity = 1.0 - c.fp / (c.fp + c.tn)
    if r + specificity == 0.0:
        return MetricValue(0.0, undefined=True)
    return MetricValue(2.0 * r * specificity / (r + specificity), undefined=r.undefined)


def auc(pset: PredictionSet) -> float:
    """Rank-based (Mann-Whitney) area under the ROC curve.

    Probability that a uniformly random defective entity outscores a
    uniformly random clean one, ties counting one half. Exact under ties
    and invariant under strictly increasing score transforms.
    """
    scores = [record.score for record in pset.records]
    positives = [record.actual for record in pset.records]
    n_pos = sum(positives)
    n_neg = len(positives) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined for single-class data")
    ranks = rankdata(scores)
    rank_sum = sum(r for r, is_pos in zip(ranks, positives) if is_pos)
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def inspection_ratio(c: ConfusionCounts) -> float:
    """Actual-positive prevalence (TP + FN) / total."""
    if c.total == 0:
        raise ValueError("inspection ratio undefined on empty counts")
    return (c.tp + c.fn) / c.total


def stratified_weighted_average(values: Sequence[float], weights: Sequence[float]) -> float:
    """Weighted mean of per-stratum values; weights must not all be zero."""
    if len(values) != len(weights):
        raise ValueError("values and weights must have equal length")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    total = sum(weights)
    if total == 0:
        raise ValueError("weight sum must be positive")
    return sum(v * w for v, w in zip(values, weights)) / total
