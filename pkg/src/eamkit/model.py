"""Domain types and ranking primitives shared by every metric module.

An entity is anything a defect classifier scores: a class, a file, a method.
All effort-aware metrics reduce to two primitives implemented here: a
deterministic total ordering of entities under a ranking policy, and the
prefix of that ordering that fits inside an inspection budget expressed as
a percentage of total LOC.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "EntityPrediction",
    "PredictionSet",
    "RankingPolicy",
    "Ranking",
    "rank",
    "inspection_prefix",
]

# Relative slack applied to the LOC budget so exact-percentage boundaries
# are not lost to floating rounding.
BUDGET_SLACK = 1e-9


@dataclass(frozen=True)
class EntityPrediction:
    """One scored entity: id, size in LOC, predicted probability, truth.

    touched_size is the LOC touched in the release; None when unknown.
    """

    id: str
    size: int
    score: float
    actual: bool
    touched_size: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("entity id must be non-empty")
        if self.size < 1:
            raise ValueError(f"entity {self.id!r}: size must be >= 1, got {self.size}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"entity {self.id!r}: score must be in [0, 1], got {self.score}")
        if self.touched_size is not None and self.touched_size < 0:
            raise ValueError(f"entity {self.id!r}: touched_size must be >= 0")


@dataclass(frozen=True)
class PredictionSet:
    """A named, immutable collection of entity predictions.

    Invariants: non-empty, ids pairwise distinct, total LOC positive.
    """

    name: str
    records: tuple[EntityPrediction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise ValueError(f"prediction set {self.name!r} is empty")
        seen: set[str] = set()
        for record in self.records:
            if record.id in seen:
                raise ValueError(f"prediction set {self.name!r}: duplicate id {record.id!r}")
            seen.add(record.id)

    @property
    def total_loc(self) -> int:
        return sum(record.size for record in self.records)

    @property
    def defective_count(self) -> int:
        return sum(1 for record in self.records if record.actual)

    def by_id(self, entity_id: str) -> EntityPrediction:
        for record in self.records:
            if record.id == entity_id:
                return record
        raise KeyError(entity_id)


class RankingPolicy(Enum):
    """Pure orderings used throughout the metric modules.

    SCORE_DESCENDING ranks by predicted probability, SCORE_DENSITY_DESCENDING
    by probability divided by size, ACTUAL_DENSITY_DESCENDING by true
    defectiveness divided by size (only sensible for the optimal curve).
    """

    SCORE_DESCENDING = "score"
    SCORE_DENSITY_DESCENDING = "score_density"
    ACTUAL_DENSITY_DESCENDING = "actual_density"


@dataclass(frozen=True)
class Ranking:
    """A total order over a set's ids plus running LOC / defective tallies."""

    ids: tuple[str, ...]
    cumulative_loc: tuple[int, ...]
    cumulative_defectives: tuple[int, ...]

    @property
    def total_loc(self) -> int:
        return self.cumulative_loc[-1]


def _sort_key(record: EntityPrediction, policy: RankingPolicy):
    # Density keys use exact rational arithmetic: with float division two
    # distinct densities can collapse to the same double and the tie rule
    # would then reorder them, breaking order invariance.
    if policy is RankingPolicy.SCORE_DESCENDING:
        return Fraction(record.score)
    if policy is RankingPolicy.SCORE_DENSITY_DESCENDING:
        return Fraction(record.score) / record.size
    if policy is RankingPolicy.ACTUAL_DENSITY_DESCENDING:
        return Fraction(int(record.actual), record.size)
    raise ValueError(f"unknown ranking policy: {policy}")


def rank(pset: PredictionSet, policy: RankingPolicy) -> Ranking:
    """Order a prediction set under a policy; ties break by ascending id.

    The order is a deterministic function of the input: rerunning on the
    same set is byte-identical, and any strictly increasing transform of
    the scores leaves the order unchanged.
    """
    ordered = sorted(pset.records, key=lambda r: (-_sort_key(r, policy), r.id))
    ids = []
    cum_loc = []
    cum_def = []
    loc = 0
    defective = 0
    for record in ordered:
        loc += record.size
        defective += int(record.actual)
        ids.append(record.id)
        cum_loc.append(loc)
        cum_def.append(defective)
    return Ranking(tuple(ids), tuple(cum_loc), tuple(cum_def))


def inspection_prefix(ranking: Ranking, x: float) -> tuple[str, ...]:
    """Ids fully inspectable within the first x% of total LOC.

    Returns the longest prefix whose cumulative LOC stays within the
    budget; the entity that would cross the boundary is excluded.
    """
    if not 0.0 <= x <= 100.0:
        raise ValueError(f"inspection percentage must be in [0, 100], got {x}")
    total = ranking.total_loc
    budget = x * total / 100.0 + BUDGET_SLACK * total
    kept = 0
    for cum in ranking.cumulative_loc:
        if cum <= budget:
            kept += 1
        else:
            break
    return ranking.ids[:kept]
