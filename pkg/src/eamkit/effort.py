"""Effort-aware metrics over LOC inspection budgets.

PofB ranks by probability, NPofB by probability density (probability
divided by size); both report the fraction of defective entities found
within the first x% of LOC. Popt compares the predicted density ranking
against the optimal one via cumulative defect-vs-effort curves.

Defect credit accrues linearly within an entity, the standard
cost-effectiveness (Alberg) diagram; a step-function curve would change
the areas.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import PredictionSet, Ranking, RankingPolicy, inspection_prefix, rank

__all__ = [
    "EffortCurve",
    "effort_curve",
    "pofb",
    "npofb",
    "average_pofb",
    "average_npofb",
    "popt",
    "norm_popt",
    "ifa",
    "proportion_inspected",
    "peffort",
    "relative_gain",
]

AVERAGE_GRID = tuple(range(0, 101, 10))


@dataclass(frozen=True)
class EffortCurve:
    """Piecewise-linear cumulative defect fraction vs cumulative LOC fraction.

    Starts at (0, 0) and, whenever the set has at least one defective
    entity, ends at (1, 1); both coordinates are non-decreasing.
    """

    points: tuple[tuple[float, float], ...]

    def area(self) -> float:
        """Trapezoid area under the curve over the full [0, 1] window."""
        total = 0.0
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            total += (x1 - x0) * (y0 + y1) / 2.0
        return total

    def area_up_to(self, x_max: float) -> float:
        """Trapezoid area over [0, x_max], interpolating the cut segment."""
        total = 0.0
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if x0 >= x_max:
                break
            if x1 <= x_max:
                total += (x1 - x0) * (y0 + y1) / 2.0
            else:
                y_cut = y0 + (y1 - y0) * (x_max - x0) / (x1 - x0)
                total += (x_max - x0) * (y0 + y_cut) / 2.0
                break
        return total


def _require_defectives(pset: PredictionSet, metric: str) -> int:
    defectives = pset.defective_count
    if defectives == 0:
        raise ValueError(f"{metric} undefined: zero defectives")
    return defectives


def effort_curve(pset: PredictionSet, policy: RankingPolicy) -> EffortCurve:
    """Build the cumulative curve for the set ranked under a policy."""
    defectives = _require_defectives(pset, "effort curve")
    ranking = rank(pset, policy)
    total_loc = ranking.total_loc
    points = [(0.0, 0.0)]
    for loc, found in zip(ranking.cumulative_loc, ranking.cumulative_defectives):
        points.append((loc / total_loc, found / defectives))
    return EffortCurve(tuple(points))


def _found_in_prefix(pset: PredictionSet, ranking: Ranking, x: float) -> int:
    prefix = inspection_prefix(ranking, x)
    if not prefix:
        return 0
    return ranking.cumulative_defectives[len(prefix) - 1]


def pofb(pset: PredictionSet, x: float) -> float:
    """Fraction of defective entities found in the top x% of LOC, ranking
    by predicted probability."""
    defectives = _require_defectives(pset, "PofB")
    ranking = rank(pset, RankingPolicy.SCORE_DESCENDING)
    return _found_in_prefix(pset, ranking, x) / defectives


def npofb(pset: PredictionSet, x: float) -> float:
    """PofB with the ranking key changed to predicted defect density."""
    defectives = _require_defectives(pset, "NPofB")
    ranking = rank(pset, RankingPolicy.SCORE_DENSITY_DESCENDING)
    return _found_in_prefix(pset, ranking, x) / defectives


def average_pofb(pset: PredictionSet) -> float:
    """Mean PofB over x in {0, 10, ..., 100}."""
    return sum(pofb(pset, x) for x in AVERAGE_GRID) / len(AVERAGE_GRID)


def average_npofb(pset: PredictionSet) -> float:
    """Mean NPofB over x in {0, 10, ..., 100}."""
    return sum(npofb(pset, x) for x in AVERAGE_GRID) / len(AVERAGE_GRID)


def popt(pset: PredictionSet) -> float:
    """1 minus the area gap between the optimal and predicted curves."""
    predicted = effort_curve(pset, RankingPolicy.SCORE_DENSITY_DESCENDING)
    optimal = effort_curve(pset, RankingPolicy.ACTUAL_DENSITY_DESCENDING)
    return 1.0 - (optimal.area() - predicted.area())


def norm_popt(pset: PredictionSet, window: float = 0.20) -> float:
    """Popt with both curves truncated at a LOC-fraction window.

    Areas are normalized by the window width, so the default window of
    0.20 reports the inspect-20%-of-LOC variant.
    """
    if not 0.0 < window <= 1.0:
        raise ValueError(f"window must be in (0, 1], got {window}")
    predicted = effort_curve(pset, RankingPolicy.SCORE_DENSITY_DESCENDING)
    optimal = effort_curve(pset, RankingPolicy.ACTUAL_DENSITY_DESCENDING)
    gap = (optimal.area_up_to(window) - predicted.area_up_to(window)) / window
    return 1.0 - gap


def ifa(pset: PredictionSet) -> int:
    """Clean entities ranked (by probability) before the first defective."""
    _require_defectives(pset, "IFA")
    ranking = rank(pset, RankingPolicy.SCORE_DESCENDING)
    for position, found in enumerate(ranking.cumulative_defectives):
        if found > 0:
            return position
    raise AssertionError("unreachable: defectives guaranteed above")


def proportion_inspected(pset: PredictionSet, x: float) -> float:
    """Share of entities fully inspected within the top x% of LOC.

    The same formula serves the changes / modules / files variants; the
    entity kind is the caller's concern.
    """
    ranking = rank(pset, RankingPolicy.SCORE_DESCENDING)
    return len(inspection_prefix(ranking, x)) / len(pset.records)


def peffort(pset: PredictionSet) -> float:
    """Raw area under the predicted density-ranked curve.

    Unlike popt, no optimal curve is subtracted. Only a one-sentence
    description of this metric exists in the literature we follow, so
    the raw-area reading is a documented choice isolated here.
    """
    return effort_curve(pset, RankingPolicy.SCORE_DENSITY_DESCENDING).area()


def relative_gain(base: float, normalized: float) -> float:
    """(normalized - base) / base, the gain a normalization provides."""
    if base <= 0.0:
        raise ValueError("gain undefined: base must be positive")
    return (normalized - base) / base
