"""File ingestion, dataset splitting, classifier comparison, and reports.

All files are plain comma-delimited UTF-8 text with an exact lowercase
header, no quoting, LF or CRLF line endings. Parse failures cite the
line and the 1-based column of the offending field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from collections.abc import Iterable, Iterator, Sequence

from .jit import CommitPrediction, TouchMap
from .model import EntityPrediction, PredictionSet
from .sastt import UNKNOWN, Polarity, SastTestCase, ToolFinding, ToolProfile

__all__ = [
    "ParseError",
    "Release",
    "Fold",
    "MetricReport",
    "parse_predictions",
    "parse_commits",
    "parse_touchmap",
    "parse_sastt",
    "parse_cases",
    "parse_findings",
    "parse_profile",
    "parse_releases",
    "parse_report",
    "walk_forward",
    "ordered_split",
    "partition_by_touched",
    "rank_classifiers",
    "best_agreement",
    "agreement_proportion",
    "emit_report",
]

_TRUTHY = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


class ParseError(ValueError):
    """A malformed input file; carries the offending line and column."""

    def __init__(self, message: str, line: int, column: int | None = None):
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column


def _rows(source: Iterable[str] | str) -> Iterator[tuple[int, list[str]]]:
    lines = source.splitlines() if isinstance(source, str) else source
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n") if not isinstance(source, str) else raw
        if number > 1 and line == "":
            continue
        yield number, line.split(",")


def _expect_header(fields: list[str], allowed: Sequence[Sequence[str]]) -> Sequence[str]:
    for candidate in allowed:
        if fields == list(candidate):
            return candidate
    expected = " or ".join(",".join(c) for c in allowed)
    raise ParseError(f"expected header {expected!r}, got {','.join(fields)!r}", line=1)


def _field_count(fields: list[str], expected: int, line: int) -> None:
    if len(fields) != expected:
        raise ParseError(f"expected {expected} fields, got {len(fields)}", line)


def _parse_int(value: str, name: str, line: int, column: int, minimum: int) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise ParseError(f"{name} must be an integer, got {value!r}", line, column) from None
    if parsed < minimum:
        raise ParseError(f"{name} must be >= {minimum}, got {parsed}", line, column)
    return parsed


def _parse_probability(value: str, line: int, column: int) -> float:
    try:
        parsed = float(value)
    except ValueError:
        raise ParseError(f"probability must be a number, got {value!r}", line, column) from None
    if not 0.0 <= parsed <= 1.0:
        raise ParseError(f"probability must be in [0, 1], got {parsed}", line, column)
    return parsed


def _parse_actual(value: str, line: int, column: int) -> bool:
    try:
        return _TRUTHY[value.strip().lower()]
    except KeyError:
        raise ParseError(
            f"actual must be one of 0/1/true/false/yes/no, got {value!r}", line, column
        ) from None


PREDICTION_HEADERS = (
    ("id", "size", "probability", "actual"),
    ("id", "size", "probability", "actual", "loc_touched"),
)


def _prediction_row(fields: list[str], line: int, with_touched: bool) -> EntityPrediction:
    _field_count(fields, 5 if with_touched else 4, line)
    entity_id = fields[0]
    if not entity_id:
        raise ParseError("id must be non-empty", line, 1)
    size = _parse_int(fields[1], "size", line, 2, minimum=1)
    probability = _parse_probability(fields[2], line, 3)
    actual = _parse_actual(fields[3], line, 4)
    touched = None
    if with_touched and fields[4] != "":
        touched = _parse_int(fields[4], "loc_touched", line, 5, minimum=0)
    return EntityPrediction(entity_id, size, probability, actual, touched)


def parse_predictions(source: Iterable[str] | str, name: str = "predictions") -> PredictionSet:
    """Parse an id,size,probability,actual[,loc_touched] prediction file."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    chosen = _expect_header(header, PREDICTION_HEADERS)
    with_touched = len(chosen) == 5
    records = []
    seen: set[str] = set()
    for line, fields in rows:
        record = _prediction_row(fields, line, with_touched)
        if record.id in seen:
            raise ParseError(f"duplicate id {record.id!r}", line, 1)
        seen.add(record.id)
        records.append(record)
    if not records:
        raise ParseError("no data rows", line=1)
    return PredictionSet(name, tuple(records))


def parse_commits(source: Iterable[str] | str) -> tuple[CommitPrediction, ...]:
    """Parse a commit_id,probability file."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("commit_id", "probability"),))
    commits = []
    seen: set[str] = set()
    for line, fields in rows:
        _field_count(fields, 2, line)
        if not fields[0]:
            raise ParseError("commit_id must be non-empty", line, 1)
        if fields[0] in seen:
            raise ParseError(f"duplicate commit_id {fields[0]!r}", line, 1)
        seen.add(fields[0])
        commits.append(CommitPrediction(fields[0], _parse_probability(fields[1], line, 2)))
    return tuple(commits)


def parse_touchmap(source: Iterable[str] | str) -> TouchMap:
    """Parse a commit_id,entity_id edge file."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("commit_id", "entity_id"),))
    edges: dict[str, set[str]] = {}
    for line, fields in rows:
        _field_count(fields, 2, line)
        if not fields[0]:
            raise ParseError("commit_id must be non-empty", line, 1)
        if not fields[1]:
            raise ParseError("entity_id must be non-empty", line, 2)
        edges.setdefault(fields[0], set()).add(fields[1])
    return TouchMap({commit: frozenset(entities) for commit, entities in edges.items()})


def _parse_polarity(value: str, line: int, column: int) -> Polarity:
    try:
        return Polarity(value.strip().lower())
    except ValueError:
        raise ParseError(f"polarity must be bad or good, got {value!r}", line, column) from None


def _parse_predicted_cwe(value: str, line: int, column: int):
    if value == "":
        return None
    if value == "?":
        return UNKNOWN
    return _parse_int(value, "predicted_cwe", line, column, minimum=1)


def parse_sastt(
    source: Iterable[str] | str,
) -> tuple[tuple[SastTestCase, ...], tuple[ToolFinding, ...]]:
    """Parse a combined case_id,cwe_id,polarity,predicted_cwe file.

    Each row defines a labeled case and the tool's report for it; an
    empty predicted_cwe means no report, a literal '?' an unknown one.
    """
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("case_id", "cwe_id", "polarity", "predicted_cwe"),))
    cases = []
    findings = []
    seen: set[str] = set()
    for line, fields in rows:
        _field_count(fields, 4, line)
        if not fields[0]:
            raise ParseError("case_id must be non-empty", line, 1)
        if fields[0] in seen:
            raise ParseError(f"duplicate case_id {fields[0]!r}", line, 1)
        seen.add(fields[0])
        cwe = _parse_int(fields[1], "cwe_id", line, 2, minimum=1)
        polarity = _parse_polarity(fields[2], line, 3)
        cases.append(SastTestCase(fields[0], cwe, polarity))
        findings.append(ToolFinding(fields[0], _parse_predicted_cwe(fields[3], line, 4)))
    return tuple(cases), tuple(findings)


def parse_cases(source: Iterable[str] | str) -> tuple[SastTestCase, ...]:
    """Parse a case_id,cwe_id,polarity suite file (no findings column)."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("case_id", "cwe_id", "polarity"),))
    cases = []
    seen: set[str] = set()
    for line, fields in rows:
        _field_count(fields, 3, line)
        if not fields[0]:
            raise ParseError("case_id must be non-empty", line, 1)
        if fields[0] in seen:
            raise ParseError(f"duplicate case_id {fields[0]!r}", line, 1)
        seen.add(fields[0])
        cases.append(
            SastTestCase(
                fields[0],
                _parse_int(fields[1], "cwe_id", line, 2, minimum=1),
                _parse_polarity(fields[2], line, 3),
            )
        )
    return tuple(cases)


def parse_findings(source: Iterable[str] | str) -> tuple[ToolFinding, ...]:
    """Parse a case_id,predicted_cwe findings file."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("case_id", "predicted_cwe"),))
    findings = []
    for line, fields in rows:
        _field_count(fields, 2, line)
        if not fields[0]:
            raise ParseError("case_id must be non-empty", line, 1)
        findings.append(ToolFinding(fields[0], _parse_predicted_cwe(fields[1], line, 2)))
    return tuple(findings)


def parse_profile(source: Iterable[str] | str) -> tuple[ToolProfile, ...]:
    """Parse a tool,cwe_id claims file; one row per claimed CWE."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    _expect_header(header, (("tool", "cwe_id"),))
    claims: dict[str, set[int]] = {}
    for line, fields in rows:
        _field_count(fields, 2, line)
        if not fields[0]:
            raise ParseError("tool must be non-empty", line, 1)
        claims.setdefault(fields[0], set()).add(
            _parse_int(fields[1], "cwe_id", line, 2, minimum=1)
        )
    return tuple(ToolProfile(tool, frozenset(cwes)) for tool, cwes in claims.items())


@dataclass(frozen=True)
class Release:
    """A named release with its temporal ordinal and its entity records."""

    release_id: str
    ordinal: int
    records: tuple[EntityPrediction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise ValueError(f"release {self.release_id!r} has no records")


@dataclass(frozen=True)
class Fold:
    """A train/test split that never lets future data train the past."""

    train: tuple[Release, ...]
    test: tuple[Release, ...]
    boundary_adjusted: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))
        if not self.train or not self.test:
            raise ValueError("fold requires non-empty train and test parts")
        max_train = max(r.ordinal for r in self.train)
        min_test = min(r.ordinal for r in self.test)
        if max_train >= min_test:
            raise ValueError("every train ordinal must precede every test ordinal")


def parse_releases(
    source: Iterable[str] | str, release_column: str = "release"
) -> tuple[Release, ...]:
    """Parse a prediction file carrying an extra release column.

    The release column must be the last one; ordinals follow first
    appearance, so the file is expected in chronological order.
    """
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    allowed = tuple(tuple(h) + (release_column,) for h in PREDICTION_HEADERS)
    chosen = _expect_header(header, allowed)
    with_touched = len(chosen) == 6
    grouped: dict[str, list[EntityPrediction]] = {}
    for line, fields in rows:
        _field_count(fields, len(chosen), line)
        release_id = fields[-1]
        if not release_id:
            raise ParseError(f"{release_column} must be non-empty", line, len(chosen))
        record = _prediction_row(fields[:-1], line, with_touched)
        grouped.setdefault(release_id, []).append(record)
    if not grouped:
        raise ParseError("no data rows", line=1)
    return tuple(
        Release(release_id, ordinal, tuple(records))
        for ordinal, (release_id, records) in enumerate(grouped.items(), start=1)
    )


def _check_ordered(releases: Sequence[Release]) -> None:
    ordinals = [r.ordinal for r in releases]
    if any(b <= a for a, b in zip(ordinals, ordinals[1:])):
        raise ValueError("release ordinals must be strictly increasing")


def walk_forward(releases: Sequence[Release]) -> list[Fold]:
    """Chronological folds: train on the first n-1 releases, test the n-th."""
    if len(releases) < 2:
        raise ValueError("walk-forward requires at least 2 releases")
    _check_ordered(releases)
    return [
        Fold(train=tuple(releases[:n]), test=(releases[n],))
        for n in range(1, len(releases))
    ]


def ordered_split(releases: Sequence[Release], train_fraction: float) -> Fold:
    """Single order-preserving split; train takes the ceiling share.

    The boundary moves inward (and the fold is flagged) when the ceiling
    would leave either side empty.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    if len(releases) < 2:
        raise ValueError("ordered split requires at least 2 releases")
    _check_ordered(releases)
    n = len(releases)
    # The 1e-9 guard keeps ceil from overshooting on exact products.
    n_train = math.ceil(train_fraction * n - 1e-9)
    adjusted = False
    if n_train < 1:
        n_train = 1
        adjusted = True
    if n_train > n - 1:
        n_train = n - 1
        adjusted = True
    return Fold(
        train=tuple(releases[:n_train]),
        test=tuple(releases[n_train:]),
        boundary_adjusted=adjusted,
    )


def partition_by_touched(
    records: Sequence[EntityPrediction],
) -> tuple[list[EntityPrediction], list[EntityPrediction]]:
    """Split records into (touched, untouched) by touched LOC == 0."""
    touched = []
    untouched = []
    for record in records:
        if record.touched_size is None:
            raise ValueError(f"entity {record.id!r} has no touched_size")
        if record.touched_size == 0:
            untouched.append(record)
        else:
            touched.append(record)
    return touched, untouched


@dataclass
class MetricReport:
    """One source's metric values; None marks an errored metric.

    flags carries machine-readable annotations such as
    "auc:single-class" or "precision:undefined-denominator".
    """

    source: str
    values: dict[str, float | None]
    flags: tuple[str, ...] = field(default_factory=tuple)


def rank_classifiers(reports: Sequence[MetricReport], metric: str) -> list[str]:
    """Sources ordered by a metric, best first; ties fall to name order."""
    for report in reports:
        if metric not in report.values:
            raise ValueError(f"report {report.source!r} lacks metric {metric!r}")
        if report.values[metric] is None:
            raise ValueError(f"report {report.source!r} has no value for {metric!r}")
    ordered = sorted(reports, key=lambda r: (-r.values[metric], r.source))
    return [r.source for r in ordered]


def best_agreement(ranking_a: Sequence[str], ranking_b: Sequence[str]) -> bool:
    """Whether two rankings pick the same head."""
    if not ranking_a or not ranking_b:
        raise ValueError("rankings must be non-empty")
    return ranking_a[0] == ranking_b[0]


def agreement_proportion(pairs: Sequence[tuple[Sequence[str], Sequence[str]]]) -> float:
    """Share of ranking pairs that agree on the best classifier."""
    if not pairs:
        raise ValueError("agreement_proportion requires at least one pair")
    return sum(best_agreement(a, b) for a, b in pairs) / len(pairs)


def emit_report(reports: Sequence[MetricReport], columns: Sequence[str] | None = None) -> str:
    """Render reports as a deterministic CSV string with LF endings.

    Values print as 6-decimal fixed point, errored metrics as NA; the
    flags column joins annotations with ';'. Identical inputs produce
    byte-identical output.
    """
    if columns is None:
        if not reports:
            raise ValueError("emit_report needs columns when reports are empty")
        columns = list(reports[0].values.keys())
    lines = ["source," + ",".join(columns) + ",flags"]
    for report in reports:
        cells = [report.source]
        for column in columns:
            if column not in report.values:
                raise ValueError(f"report {report.source!r} lacks metric {column!r}")
            value = report.values[column]
            cells.append("NA" if value is None else f"{value:.6f}")
        cells.append(";".join(report.flags))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_report(source: Iterable[str] | str) -> list[MetricReport]:
    """Parse a CSV produced by emit_report back into reports."""
    rows = _rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    if len(header) < 2 or header[0] != "source" or header[-1] != "flags":
        raise ParseError("expected header source,<metrics...>,flags", line=1)
    columns = header[1:-1]
    reports = []
    for line, fields in rows:
        _field_count(fields, len(header), line)
        values: dict[str, float | None] = {}
        for offset, column in enumerate(columns, start=2):
            cell = fields[offset - 1]
            if cell == "NA":
                values[column] = None
            else:
                try:
                    values[column] = float(cell)
                except ValueError:
                    raise ParseError(
                        f"metric {column!r} must be a number or NA, got {cell!r}", line, offset
                    ) from None
        flags = tuple(f for f in fields[-1].split(";") if f)
        reports.append(MetricReport(fields[0], values, flags))
    return reports
