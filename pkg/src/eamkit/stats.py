"""Nonparametric comparison battery with interpretation tables.

Exact p-values are computed by enumeration below fixed cutoffs (sign
assignments for the signed-rank test, permutations for Spearman) and by
standard normal / t approximations above them; every result is tagged so
reports stay auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, permutations
from collections.abc import Sequence

import numpy as np
from scipy.stats import rankdata, t as t_dist

from .classification import MetricValue

__all__ = [
    "TestResult",
    "EffectSize",
    "wilcoxon_signed_rank",
    "cliffs_delta",
    "spearman_rho",
    "cohens_d",
    "holm_bonferroni",
    "dunn_all_pairs",
    "cohens_kappa",
    "interpret",
]

WILCOXON_EXACT_LIMIT = 20
SPEARMAN_EXACT_LIMIT = 10
# Enumeration-based exact tests are never attempted beyond this size.
ENUMERATION_HARD_CAP = 25


@dataclass(frozen=True)
class TestResult:
    """Statistic, two-sided p, how p was obtained, and effective n."""

    statistic: float
    p_value: float
    method: str
    n_effective: int


@dataclass(frozen=True)
class EffectSize:
    value: float
    label: str


def _two_sided_normal_p(z: float) -> float:
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))


def _signed_ranks(diffs: Sequence[float]) -> list[float]:
    return list(rankdata([abs(d) for d in diffs]))


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on paired observations.

    Zero differences are dropped; tied absolute differences get average
    ranks. The statistic is the positive-rank sum W+. For up to
    WILCOXON_EXACT_LIMIT informative pairs the p-value is exact over all
    2^n sign assignments (computed via the rank-sum distribution); above
    that a normal approximation with continuity and tie correction is used.
    """
    diffs = [a - b for a, b in pairs]
    diffs = [d for d in diffs if d != 0.0]
    n = len(diffs)
    if n == 0:
        raise ValueError("no informative pairs: all differences are zero")
    ranks = _signed_ranks(diffs)
    w_plus = float(sum(r for r, d in zip(ranks, diffs) if d > 0))

    if n <= WILCOXON_EXACT_LIMIT:
        # Average ranks are multiples of 1/2: double them to stay integral,
        # then count sign assignments by their positive-rank sum.
        doubled = [round(2 * r) for r in ranks]
        total = sum(doubled)
        counts = [0] * (total + 1)
        counts[0] = 1
        for weight in doubled:
            for w2 in range(total, weight - 1, -1):
                counts[w2] += counts[w2 - weight]
        observed_dev = abs(2 * round(2 * w_plus) - total)
        extreme = sum(c for w2, c in enumerate(counts) if abs(2 * w2 - total) >= observed_dev)
        return TestResult(w_plus, extreme / 2**n, "exact", n)

    mean = n * (n + 1) / 4.0
    tie_term = 0.0
    _, tie_counts = np.unique([abs(d) for d in diffs], return_counts=True)
    for count in tie_counts:
        tie_term += count**3 - count
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    if variance <= 0:
        return TestResult(w_plus, 1.0, "approximation", n)
    deviation = w_plus - mean
    correction = 0.5 * math.copysign(1.0, deviation) if deviation != 0 else 0.0
    z = (deviation - correction) / math.sqrt(variance)
    return TestResult(w_plus, _two_sided_normal_p(z), "approximation", n)


def cliffs_delta(x: Sequence[float], y: Sequence[float], paired: bool = False) -> EffectSize:
    """All-pairs Cliff's delta; the within-pair variant sits behind a flag.

    delta = (#{x_i > y_j} - #{x_i < y_j}) / (|x| * |y|); the paired variant
    compares only aligned pairs and divides by their count.
    """
    if len(x) == 0 or len(y) == 0:
        raise ValueError("cliffs_delta requires non-empty samples")
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if paired:
        if len(xs) != len(ys):
            raise ValueError("paired cliffs_delta requires equal lengths")
        delta = float(np.mean(np.sign(xs - ys)))
    else:
        comparison = np.sign(xs[:, None] - ys[None, :])
        delta = float(comparison.sum() / (len(xs) * len(ys)))
    return EffectSize(delta, interpret(delta, "cliffs"))


def _rank_correlation(rx: np.ndarray, ry: np.ndarray) -> float:
    dev_x = rx - rx.mean()
    dev_y = ry - ry.mean()
    denom = math.sqrt(float(dev_x @ dev_x) * float(dev_y @ dev_y))
    return float(dev_x @ dev_y) / denom


def _spearman_exact_p(rx: np.ndarray, ry: np.ndarray) -> float:
    # Only the cross term varies under permutation, so compare covariances.
    target = abs(float((rx - rx.mean()) @ (ry - ry.mean())))
    tolerance = 1e-9 * max(1.0, target)
    n = len(ry)
    centered_x = rx - rx.mean()
    mean_y = ry.mean()
    extreme = 0
    total = math.factorial(n)
    perm_iter = permutations(ry.tolist())
    chunk_size = 100_000
    while True:
        chunk = list(islice(perm_iter, chunk_size))
        if not chunk:
            break
        block = np.asarray(chunk, dtype=float) - mean_y
        covs = np.abs(block @ centered_x)
        extreme += int(np.count_nonzero(covs >= target - tolerance))
    return extreme / total


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, str]:
    """Spearman rank correlation with exact or t-approximated p.

    Both samples are ranked with average ranks for ties, then Pearson
    correlation of the ranks. The two-sided p-value is an exact
    permutation enumeration for n <= SPEARMAN_EXACT_LIMIT, a t
    approximation with n - 2 degrees of freedom above.
    """
    if len(x) != len(y):
        raise ValueError("spearman_rho requires equal lengths")
    n = len(x)
    if n < 3:
        raise ValueError("spearman_rho requires at least 3 observations")
    rx = np.asarray(rankdata(x), dtype=float)
    ry = np.asarray(rankdata(y), dtype=float)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise ValueError("rho undefined under zero variance")
    rho = _rank_correlation(rx, ry)

    if n <= SPEARMAN_EXACT_LIMIT:
        p = _spearman_exact_p(rx, ry)
    else:
        if abs(rho) >= 1.0:
            p = 0.0
        else:
            t_stat = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
            p = min(1.0, 2.0 * float(t_dist.sf(abs(t_stat), df=n - 2)))
    return rho, p, interpret(rho, "spearman")


def cohens_d(x: Sequence[float], y: Sequence[float]) -> EffectSize:
    """Absolute standardized mean difference with pooled (n-1) variance."""
    if len(x) < 2 or len(y) < 2:
        raise ValueError("cohens_d requires at least 2 observations per sample")
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    dof = len(xs) + len(ys) - 2
    pooled_var = ((len(xs) - 1) * xs.var(ddof=1) + (len(ys) - 1) * ys.var(ddof=1)) / dof
    if pooled_var <= 0.0:
        raise ValueError("cohens_d undefined: zero pooled variance")
    d = abs(float(xs.mean() - ys.mean())) / math.sqrt(float(pooled_var))
    return EffectSize(d, interpret(d, "cohens_d"))


def holm_bonferroni(
    p_values: Sequence[float], alpha: float = 0.05
) -> list[tuple[float, bool]]:
    """Step-down Holm correction; results are returned in input order.

    Hypotheses are rejected while the i-th smallest p stays at or below
    alpha / (m - i + 1); the first failure stops the walk. Adjusted
    p-values are the running maximum of (m - i + 1) * p, clipped to 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p-value out of range: {p}")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    rejected = [False] * m
    running_max = 0.0
    still_rejecting = True
    for step, idx in enumerate(order):
        factor = m - step
        running_max = max(running_max, factor * p_values[idx])
        adjusted[idx] = min(1.0, running_max)
        if still_rejecting and p_values[idx] <= alpha / factor:
            rejected[idx] = True
        else:
            still_rejecting = False
    return list(zip(adjusted, rejected))


def dunn_all_pairs(groups: Sequence[Sequence[float]]) -> np.ndarray:
    """Dunn's post hoc all-pairs rank test with Bonferroni adjustment.

    Values are pooled and average-ranked with tie correction; each pair
    gets a z statistic on the mean-rank difference and a two-sided p,
    multiplied by the number of pairs and clipped to 1. The returned
    matrix is symmetric with a unit diagonal.
    """
    k = len(groups)
    if k < 2:
        raise ValueError("dunn_all_pairs requires at least 2 groups")
    sizes = [len(g) for g in groups]
    if any(s == 0 for s in sizes):
        raise ValueError("dunn_all_pairs requires non-empty groups")
    pooled = np.concatenate([np.asarray(g, dtype=float) for g in groups])
    n_total = len(pooled)
    ranks = rankdata(pooled)
    mean_ranks = []
    offset = 0
    for size in sizes:
        mean_ranks.append(float(np.mean(ranks[offset : offset + size])))
        offset += size

    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts))
    if n_total > 1:
        variance_factor = n_total * (n_total + 1) / 12.0 - tie_term / (12.0 * (n_total - 1))
    else:
        variance_factor = 0.0

    n_pairs = k * (k - 1) // 2
    matrix = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            spread = variance_factor * (1.0 / sizes[i] + 1.0 / sizes[j])
            if spread <= 0.0:
                p = 1.0
            else:
                z = (mean_ranks[i] - mean_ranks[j]) / math.sqrt(spread)
                p = min(1.0, _two_sided_normal_p(z) * n_pairs)
            matrix[i, j] = matrix[j, i] = p
    return matrix


def cohens_kappa(a: Sequence, b: Sequence) -> tuple[MetricValue, str]:
    """Cohen's kappa for two raters over the same items, with its label.

    Chance agreement comes from the product of marginal category
    frequencies. When both raters are constant and identical the chance
    term hits 1 and kappa is defined as 1 carrying the undefined flag.
    Counts stay in exact rational arithmetic until the final value so
    decimal interpretation boundaries are not lost to rounding.
    """
    if len(a) != len(b):
        raise ValueError("cohens_kappa requires equal lengths")
    n = len(a)
    if n == 0:
        raise ValueError("cohens_kappa requires at least one item")
    observed = Fraction(sum(1 for u, v in zip(a, b) if u == v), n)
    categories = set(a) | set(b)
    count_a = {c: sum(1 for v in a if v == c) for c in categories}
    count_b = {c: sum(1 for v in b if v == c) for c in categories}
    expected = Fraction(sum(count_a[c] * count_b[c] for c in categories), n * n)
    if expected == 1:
        kappa = MetricValue(1.0, undefined=True)
    else:
        kappa = MetricValue(float((observed - expected) / (1 - expected)))
    return kappa, interpret(float(kappa), "kappa")


def interpret(value: float, table: str) -> str:
    """Label a value per the interpretation tables, lower bounds inclusive.

    Tables: "cliffs" and "cohens_d" label magnitudes (absolute value);
    "spearman" labels the signed correlation, with negatives reported as
    "inverse" and exactly 1 as "perfect"; "kappa" labels agreement.
    """
    if table == "cliffs":
        magnitude = abs(value)
        if magnitude >= 0.43:
            return "Large"
        if magnitude >= 0.28:
            return "Medium"
        if magnitude >= 0.11:
            return "Small"
        return "negligible"
    if table == "spearman":
        if value < 0.0:
            return "inverse"
        if value == 1.0:
            return "perfect"
        if value < 0.6:
            return "fair"
        if value < 0.8:
            return "moderate"
        return "very strong"
    if table == "cohens_d":
        magnitude = abs(value)
        if magnitude >= 0.80:
            return "Very Large"
        if magnitude >= 0.50:
            return "Large"
        if magnitude >= 0.20:
            return "Medium"
        if magnitude >= 0.01:
            return "Small"
        return "Very small"
    if table == "kappa":
        if value < 0.0:
            return "none"
        if value < 0.4:
            return "poor"
        if value < 0.6:
            return "discrete"
        if value < 0.8:
            return "good"
        return "excellent"
    raise ValueError(f"unknown interpretation table: {table!r}")
