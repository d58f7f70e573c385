"""Lift commit-level defectiveness predictions to entity level.

Every commit touches zero or more entities. An entity's own score
(direct) can be combined with the max and the sum of the scores of the
commits touching it; the combined score is the median of the selected
inputs. Untouched entities keep their direct score.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from statistics import median
from collections.abc import Iterable, Mapping

from .model import EntityPrediction, PredictionSet

__all__ = [
    "CommitPrediction",
    "TouchMap",
    "ScoreSource",
    "CombinedScore",
    "CombineResult",
    "maxc",
    "sumc",
    "combine",
    "combine_set",
]


@dataclass(frozen=True)
class CommitPrediction:
    """A commit id with its predicted probability of being defective."""

    commit_id: str
    score: float

    def __post_init__(self) -> None:
        if not self.commit_id:
            raise ValueError("commit id must be non-empty")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"commit {self.commit_id!r}: score must be in [0, 1]")


@dataclass(frozen=True)
class TouchMap:
    """Edges from commit ids to the entity ids the commit touches."""

    edges: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        frozen = {commit: frozenset(entities) for commit, entities in self.edges.items()}
        object.__setattr__(self, "edges", frozen)

    def commits_touching(self, entity_id: str) -> tuple[str, ...]:
        return tuple(sorted(c for c, entities in self.edges.items() if entity_id in entities))

    def entity_ids(self) -> frozenset[str]:
        ids: set[str] = set()
        for entities in self.edges.values():
            ids.update(entities)
        return frozenset(ids)


class ScoreSource(Enum):
    DIRECT = "direct"
    MAXC = "maxc"
    SUMC = "sumc"


@dataclass(frozen=True)
class CombinedScore:
    """Per-entity combination record; maxc/sumc are None when untouched."""

    entity_id: str
    direct: float
    maxc: float | None
    sumc: float | None
    combined: float


@dataclass(frozen=True)
class CombineResult:
    """A combined prediction set plus the rescaling metadata."""

    predictions: PredictionSet
    scores: tuple[CombinedScore, ...]
    rescaled: bool
    scale: float = 1.0


def _touching_scores(
    entity_id: str, commits: Iterable[CommitPrediction], touch: TouchMap
) -> list[float]:
    by_id = {c.commit_id: c.score for c in commits}
    return [by_id[cid] for cid in touch.commits_touching(entity_id) if cid in by_id]


def maxc(
    entity_id: str, commits: Iterable[CommitPrediction], touch: TouchMap
) -> float | None:
    """Max score over commits touching the entity; None when untouched."""
    scores = _touching_scores(entity_id, commits, touch)
    return max(scores) if scores else None


def sumc(
    entity_id: str, commits: Iterable[CommitPrediction], touch: TouchMap
) -> float | None:
    """Sum of scores over touching commits; may exceed 1; None when untouched."""
    scores = _touching_scores(entity_id, commits, touch)
    return sum(scores) if scores else None


def combine(
    direct: float,
    maxc_score: float | None,
    sumc_score: float | None,
    selection: Iterable[ScoreSource] | None = None,
) -> float:
    """Median of the selected inputs.

    With the default selection, every present input participates; an
    untouched entity (maxc and sumc both absent) therefore falls back to
    its direct score. An explicitly selected but absent input is an error.
    """
    available: dict[ScoreSource, float | None] = {
        ScoreSource.DIRECT: direct,
        ScoreSource.MAXC: maxc_score,
        ScoreSource.SUMC: sumc_score,
    }
    if selection is None:
        values = [v for v in available.values() if v is not None]
    else:
        chosen = set(selection)
        if not chosen:
            raise ValueError("selection must not be empty")
        missing = [s.value for s in sorted(chosen, key=lambda s: s.value) if available[s] is None]
        if missing:
            raise ValueError(f"selected inputs absent: {', '.join(missing)}")
        values = [available[s] for s in ScoreSource if s in chosen]
    return float(median(values))


def combine_set(
    entities: PredictionSet,
    commits: Iterable[CommitPrediction],
    touch: TouchMap,
    selection: Iterable[ScoreSource] | None = None,
) -> CombineResult:
    """Combine a whole prediction set against commit scores.

    The output set carries the combined value as its score. Because sumc
    is unbounded, whenever any combined value exceeds 1 every value is
    divided by the maximum; the division is rank-preserving and the result
    is a rank-score, not a calibrated probability.
    """
    commits = tuple(commits)
    known_commits = {c.commit_id for c in commits}
    dangling_commits = sorted(set(touch.edges) - known_commits)
    if dangling_commits:
        raise ValueError(f"touch map references unknown commits: {', '.join(dangling_commits)}")
    known_entities = {record.id for record in entities.records}
    dangling_entities = sorted(touch.entity_ids() - known_entities)
    if dangling_entities:
        raise ValueError(f"touch map references unknown entities: {', '.join(dangling_entities)}")

    score_of = {c.commit_id: c.score for c in commits}
    touching: dict[str, list[float]] = {}
    for commit_id, touched in touch.edges.items():
        for entity_id in touched:
            touching.setdefault(entity_id, []).append(score_of[commit_id])

    per_entity: list[CombinedScore] = []
    for record in entities.records:
        scores = touching.get(record.id)
        mx = max(scores) if scores else None
        sm = sum(scores) if scores else None
        if selection is None and mx is None and sm is None:
            combined = record.score
        else:
            combined = combine(record.score, mx, sm, selection)
        per_entity.append(CombinedScore(record.id, record.score, mx, sm, combined))

    peak = max(score.combined for score in per_entity)
    rescaled = peak > 1.0
    scale = peak if rescaled else 1.0
    new_records = tuple(
        EntityPrediction(
            id=record.id,
            size=record.size,
            score=score.combined / scale,
            actual=record.actual,
            touched_size=record.touched_size,
        )
        for record, score in zip(entities.records, per_entity)
    )
    combined_set = PredictionSet(name=f"{entities.name}+jit", records=new_records)
    return CombineResult(combined_set, tuple(per_entity), rescaled, scale)
