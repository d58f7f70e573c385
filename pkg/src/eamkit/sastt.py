"""Score static-analysis tool output against labeled good/bad test suites.

Each test case implements some logic either with a specific weakness
("bad") or without it ("good"). A tool's report for a case is compared to
the case's own weakness id: naming any other weakness counts as not
having identified this one, so it lands in TN/FN rather than FP/TP. A
"?" report is tallied separately and excluded from metric denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from collections.abc import Iterable, Mapping, Sequence

from .classification import MetricValue, f1 as f1_metric, precision as precision_metric
from .classification import recall as recall_metric, stratified_weighted_average
from .classification import ConfusionCounts
from .effort import npofb
from .model import EntityPrediction, PredictionSet

__all__ = [
    "Polarity",
    "UNKNOWN",
    "SastTestCase",
    "ToolFinding",
    "ToolProfile",
    "Outcome",
    "CweTally",
    "classify_outcome",
    "per_cwe_confusion",
    "ecwe_acwe",
    "weighted_accuracy",
    "coverage_growth",
    "CoverageGrowth",
]


class Polarity(Enum):
    BAD = "bad"
    GOOD = "good"


class _Unknown:
    """Sentinel for a tool's explicit '?' report."""

    def __repr__(self) -> str:
        return "UNKNOWN"


UNKNOWN = _Unknown()


@dataclass(frozen=True)
class SastTestCase:
    """A labeled suite case: its id, the weakness id, and its polarity."""

    case_id: str
    cwe_id: int
    polarity: Polarity

    def __post_init__(self) -> None:
        if not self.case_id:
            raise ValueError("case id must be non-empty")
        if self.cwe_id <= 0:
            raise ValueError(f"case {self.case_id!r}: cwe_id must be positive")


@dataclass(frozen=True)
class ToolFinding:
    """A tool's report for one case: a CWE id, None, or UNKNOWN."""

    case_id: str
    predicted_cwe: int | None | _Unknown

    def __post_init__(self) -> None:
        if not self.case_id:
            raise ValueError("finding case id must be non-empty")
        predicted = self.predicted_cwe
        if predicted is not None and not isinstance(predicted, _Unknown) and predicted <= 0:
            raise ValueError(f"finding for {self.case_id!r}: cwe id must be positive")


@dataclass(frozen=True)
class ToolProfile:
    """A tool's documentation claims: the CWEs it says it can identify."""

    tool: str
    expected_cwes: frozenset[int]

    def __post_init__(self) -> None:
        if not self.tool:
            raise ValueError("tool name must be non-empty")
        object.__setattr__(self, "expected_cwes", frozenset(self.expected_cwes))


class Outcome(Enum):
    TP = "TP"
    FP = "FP"
    TN = "TN"
    FN = "FN"
    UNKNOWN = "?"


def classify_outcome(case: SastTestCase, finding: ToolFinding) -> Outcome:
    """Classify one (case, finding) pair.

    A bad case is a hit only when the predicted CWE equals the case's own;
    silence or a different CWE is a miss. A good case is correctly passed
    unless the tool names exactly the case's CWE. A '?' report wins over
    every other branch.
    """
    if case.case_id != finding.case_id:
        raise ValueError(f"finding {finding.case_id!r} does not match case {case.case_id!r}")
    predicted = finding.predicted_cwe
    if isinstance(predicted, _Unknown):
        return Outcome.UNKNOWN
    flagged = predicted == case.cwe_id
    if case.polarity is Polarity.BAD:
        return Outcome.TP if flagged else Outcome.FN
    return Outcome.FP if flagged else Outcome.TN


@dataclass(frozen=True)
class CweTally:
    """Per-CWE outcome counts plus the classified per-case records.

    case_results holds (case_id, is_bad, flagged) for non-unknown cases,
    which is what the ranking-based accuracy needs.
    """

    tp: int
    fp: int
    tn: int
    fn: int
    unknown: int
    case_results: tuple[tuple[str, bool, bool], ...]

    @property
    def confusion(self) -> ConfusionCounts:
        return ConfusionCounts(self.tp, self.fp, self.tn, self.fn)

    @property
    def classified(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def total(self) -> int:
        return self.classified + self.unknown


def per_cwe_confusion(
    cases: Sequence[SastTestCase], findings: Sequence[ToolFinding]
) -> dict[int, CweTally]:
    """Tally outcomes per CWE; a case without a finding counts as silence.

    Unknown ('?') outcomes are tallied separately and never enter the
    TP/FP/TN/FN partition.
    """
    case_by_id: dict[str, SastTestCase] = {}
    for case in cases:
        if case.case_id in case_by_id:
            raise ValueError(f"duplicate case id {case.case_id!r}")
        case_by_id[case.case_id] = case
    finding_by_id: dict[str, ToolFinding] = {}
    for finding in findings:
        if finding.case_id not in case_by_id:
            raise ValueError(f"finding references unknown case {finding.case_id!r}")
        if finding.case_id in finding_by_id:
            raise ValueError(f"duplicate finding for case {finding.case_id!r}")
        finding_by_id[finding.case_id] = finding

    buckets: dict[int, dict[str, int]] = {}
    results: dict[int, list[tuple[str, bool, bool]]] = {}
    for case in cases:
        finding = finding_by_id.get(case.case_id, ToolFinding(case.case_id, None))
        outcome = classify_outcome(case, finding)
        bucket = buckets.setdefault(case.cwe_id, {"TP": 0, "FP": 0, "TN": 0, "FN": 0, "?": 0})
        bucket[outcome.value] += 1
        if outcome is not Outcome.UNKNOWN:
            flagged = outcome in (Outcome.TP, Outcome.FP)
            results.setdefault(case.cwe_id, []).append(
                (case.case_id, case.polarity is Polarity.BAD, flagged)
            )
    return {
        cwe: CweTally(
            tp=bucket["TP"],
            fp=bucket["FP"],
            tn=bucket["TN"],
            fn=bucket["FN"],
            unknown=bucket["?"],
            case_results=tuple(results.get(cwe, ())),
        )
        for cwe, bucket in buckets.items()
    }


def ecwe_acwe(
    profile: ToolProfile, per_cwe: Mapping[int, CweTally]
) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Expected CWEs, those actually hit at least once, and the gap.

    A claimed CWE is "actual" when the suite shows at least one true
    positive for it.
    """
    ecwe = profile.expected_cwes
    acwe = frozenset(c for c in ecwe if c in per_cwe and per_cwe[c].tp >= 1)
    return ecwe, acwe, ecwe - acwe


def _npofb20_over_cases(tally: CweTally) -> MetricValue:
    """Ranking accuracy over a CWE's classified cases at a 20% budget.

    The suite carries no per-case size, so each case weighs one unit and
    a flagged case scores 1 against 0 for the rest; equal scores fall
    back to case-id order. No bad case means no ranking target: 0 with
    the undefined flag.
    """
    if not any(is_bad for _, is_bad, _ in tally.case_results):
        return MetricValue(0.0, undefined=True)
    records = tuple(
        EntityPrediction(id=case_id, size=1, score=1.0 if flagged else 0.0, actual=is_bad)
        for case_id, is_bad, flagged in tally.case_results
    )
    return MetricValue(npofb(PredictionSet("cases", records), 20.0))


_METRICS = {
    "precision": lambda tally: precision_metric(tally.confusion),
    "recall": lambda tally: recall_metric(tally.confusion),
    "f1": lambda tally: f1_metric(tally.confusion),
    "npofb20": _npofb20_over_cases,
}


def weighted_accuracy(per_cwe: Mapping[int, CweTally], metric: str) -> float:
    """Per-CWE metric averaged with classified-case counts as weights.

    Weighting by case count keeps over-represented CWEs from being
    flattened by a simple mean; unknown outcomes carry no weight because
    they are excluded from every denominator.
    """
    if metric not in _METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {sorted(_METRICS)}")
    compute = _METRICS[metric]
    values = []
    weights = []
    for cwe in sorted(per_cwe):
        tally = per_cwe[cwe]
        if tally.classified == 0:
            continue
        values.append(float(compute(tally)))
        weights.append(tally.classified)
    if not values:
        raise ValueError("weighted_accuracy requires at least one CWE with classified cases")
    return stratified_weighted_average(values, weights)


@dataclass(frozen=True)
class CoverageGrowth:
    """Best distinct-CWE coverage per tool-subset size; exact or greedy."""

    points: tuple[tuple[int, int], ...]
    exact: bool


EXHAUSTIVE_TOOL_LIMIT = 20


def coverage_growth(
    profiles_with_acwe: Sequence[tuple[str, Iterable[int]]], k_max: int
) -> CoverageGrowth:
    """Max distinct CWEs coverable by any k tools, for k = 1 .. k_max.

    Exhaustive over all subsets up to EXHAUSTIVE_TOOL_LIMIT tools; beyond
    that a greedy max-coverage sweep is used and the result is flagged as
    inexact.
    """
    sets = [frozenset(cwes) for _, cwes in profiles_with_acwe]
    if k_max > len(sets):
        raise ValueError("k_max exceeds the number of tools")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")

    if len(sets) <= EXHAUSTIVE_TOOL_LIMIT:
        points = []
        for k in range(1, k_max + 1):
            best = max(len(frozenset().union(*combo)) for combo in combinations(sets, k))
            points.append((k, best))
        return CoverageGrowth(tuple(points), exact=True)

    covered: set[int] = set()
    remaining = list(sets)
    points = []
    for k in range(1, k_max + 1):
        gains = [len(covered | s) for s in remaining]
        best_idx = max(range(len(remaining)), key=lambda i: gains[i])
        covered |= remaining.pop(best_idx)
        points.append((k, len(covered)))
    return CoverageGrowth(tuple(points), exact=False)
