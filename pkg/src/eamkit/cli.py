"""Command line front end.

Subcommands: metrics, compare, combine, split, sastt. Exit codes:
0 success, 1 usage error, 2 data error. All files are comma-delimited
UTF-8 with exact lowercase headers; see the parser docstrings in
eamkit.pipeline for the schemas.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from collections.abc import Sequence

from . import pipeline
from .jit import ScoreSource, combine_set
from .pipeline import MetricReport, ParseError, emit_report
from .report import DEFAULT_X_GRID, metric_battery, report_columns
from .sastt import ecwe_acwe, per_cwe_confusion, weighted_accuracy, _METRICS as SASTT_METRICS
from .stats import cliffs_delta, dunn_all_pairs, wilcoxon_signed_rank


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="eamkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_metrics = sub.add_parser("metrics", help="compute the metric battery per prediction file")
    p_metrics.add_argument("files", nargs="+", help="prediction CSV files")
    p_metrics.add_argument("--x", default=None, help="comma list of LOC percentages, e.g. 10,20")
    p_metrics.add_argument("--threshold", type=float, default=0.5, help="positive iff score >= t")
    p_metrics.add_argument("--out", default=None, help="write the report CSV here")

    p_compare = sub.add_parser("compare", help="compare classifiers from a report CSV")
    p_compare.add_argument("report", help="report CSV produced by the metrics subcommand")
    p_compare.add_argument(
        "--metric", required=True, help="metric column, or comma list for --test"
    )
    p_compare.add_argument("--test", choices=("wilcoxon", "dunn"), default=None)
    p_compare.add_argument("--out", default=None)

    p_combine = sub.add_parser("combine", help="lift commit predictions onto entities")
    p_combine.add_argument("--entities", required=True)
    p_combine.add_argument("--commits", required=True)
    p_combine.add_argument("--touch", required=True)
    p_combine.add_argument("--select", default=None, help="subset of direct,maxc,sumc")
    p_combine.add_argument("--out", default=None)

    p_split = sub.add_parser("split", help="order-preserving train/test splits")
    p_split.add_argument("file", help="prediction CSV with a release column")
    p_split.add_argument("--mode", choices=("walkforward", "fraction"), required=True)
    p_split.add_argument("--train-fraction", type=float, default=0.66)
    p_split.add_argument("--release-column", default="release")
    p_split.add_argument("--out", default=None, help="write the fold manifest here")
    p_split.add_argument("--out-dir", default=None, help="also write per-fold CSV files")

    p_sastt = sub.add_parser("sastt", help="score a static-analysis tool on a labeled suite")
    p_sastt.add_argument("--cases", required=True, help="case_id,cwe_id,polarity CSV")
    p_sastt.add_argument("--findings", required=True, help="case_id,predicted_cwe CSV")
    p_sastt.add_argument("--profile", required=True, help="tool,cwe_id claims CSV")
    p_sastt.add_argument("--tool", default=None, help="tool name when the profile lists several")
    p_sastt.add_argument("--out", default=None)

    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def _parse_x_grid(raw: str | None) -> tuple[float, ...]:
    if raw is None:
        return DEFAULT_X_GRID
    try:
        values = tuple(float(part) for part in raw.split(","))
    except ValueError:
        raise UsageError(f"--x must be a comma list of numbers, got {raw!r}") from None
    if not values or any(not 0 <= v <= 100 for v in values):
        raise UsageError("--x percentages must lie in [0, 100]")
    return values


def _cmd_metrics(args) -> int:
    x_values = _parse_x_grid(args.x)
    reports = []
    for path in args.files:
        pset = pipeline.parse_predictions(_read(path), name=Path(path).stem)
        reports.append(metric_battery(pset, x_values=x_values, threshold=args.threshold))
    _write(emit_report(reports, columns=report_columns(x_values)), args.out)
    return 0


def _column(reports: Sequence[MetricReport], metric: str) -> list[float]:
    values = []
    for report in reports:
        if metric not in report.values:
            raise ValueError(f"report {report.source!r} lacks metric {metric!r}")
        value = report.values[metric]
        if value is None:
            raise ValueError(f"report {report.source!r} has no value for {metric!r}")
        values.append(value)
    return values


def _cmd_compare(args) -> int:
    reports = pipeline.parse_report(_read(args.report))
    metrics = [m for m in args.metric.split(",") if m]
    if not metrics:
        raise UsageError("--metric must name at least one column")

    if args.test is None:
        if len(metrics) != 1:
            raise UsageError("ranking mode takes exactly one --metric column")
        ranking = pipeline.rank_classifiers(reports, metrics[0])
        by_source = {r.source: r.values[metrics[0]] for r in reports}
        lines = ["rank,source," + metrics[0]]
        for position, source in enumerate(ranking, start=1):
            lines.append(f"{position},{source},{by_source[source]:.6f}")
        _write("\n".join(lines) + "\n", args.out)
        return 0

    if args.test == "wilcoxon":
        if len(metrics) != 2:
            raise UsageError("--test wilcoxon needs exactly 2 metrics, e.g. PofB20,NPofB20")
        a = _column(reports, metrics[0])
        b = _column(reports, metrics[1])
        result = wilcoxon_signed_rank(list(zip(a, b)))
        delta = cliffs_delta(a, b)
        lines = [
            "test,metric_a,metric_b,statistic,p_value,method,n_effective,cliffs_delta,delta_label",
            f"wilcoxon,{metrics[0]},{metrics[1]},{result.statistic:.6f},"
            f"{result.p_value:.6f},{result.method},{result.n_effective},"
            f"{delta.value:.6f},{delta.label}",
        ]
        _write("\n".join(lines) + "\n", args.out)
        return 0

    if len(metrics) < 2:
        raise UsageError("--test dunn needs at least 2 metrics")
    groups = [_column(reports, metric) for metric in metrics]
    matrix = dunn_all_pairs(groups)
    lines = ["metric_a,metric_b,adjusted_p"]
    for i in range(len(metrics)):
        for j in range(i + 1, len(metrics)):
            lines.append(f"{metrics[i]},{metrics[j]},{matrix[i, j]:.6f}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _parse_selection(raw: str | None) -> tuple[ScoreSource, ...] | None:
    if raw is None:
        return None
    try:
        return tuple(ScoreSource(part.strip().lower()) for part in raw.split(",") if part)
    except ValueError:
        raise UsageError(f"--select must be a subset of direct,maxc,sumc, got {raw!r}") from None


def _predictions_csv(pset) -> str:
    with_touched = any(r.touched_size is not None for r in pset.records)
    header = "id,size,probability,actual" + (",loc_touched" if with_touched else "")
    lines = [header]
    for record in pset.records:
        cells = [record.id, str(record.size), f"{record.score:.6f}", str(int(record.actual))]
        if with_touched:
            cells.append("" if record.touched_size is None else str(record.touched_size))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _cmd_combine(args) -> int:
    entities = pipeline.parse_predictions(_read(args.entities), name=Path(args.entities).stem)
    commits = pipeline.parse_commits(_read(args.commits))
    touch = pipeline.parse_touchmap(_read(args.touch))
    result = combine_set(entities, commits, touch, _parse_selection(args.select))
    if result.rescaled:
        print(
            f"note: combined scores rescaled by 1/{result.scale:.6f} to fit [0, 1]",
            file=sys.stderr,
        )
    _write(_predictions_csv(result.predictions), args.out)
    return 0


def _release_csv(releases, release_column: str) -> str:
    with_touched = any(
        r.touched_size is not None for release in releases for r in release.records
    )
    header = "id,size,probability,actual" + (",loc_touched" if with_touched else "")
    lines = [header + f",{release_column}"]
    for release in releases:
        for record in release.records:
            cells = [record.id, str(record.size), f"{record.score:.6f}", str(int(record.actual))]
            if with_touched:
                cells.append("" if record.touched_size is None else str(record.touched_size))
            cells.append(release.release_id)
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _cmd_split(args) -> int:
    releases = pipeline.parse_releases(_read(args.file), release_column=args.release_column)
    if args.mode == "walkforward":
        folds = pipeline.walk_forward(releases)
    else:
        folds = [pipeline.ordered_split(releases, args.train_fraction)]
    lines = ["fold,train,test,boundary_adjusted"]
    for number, fold in enumerate(folds, start=1):
        train_ids = ";".join(r.release_id for r in fold.train)
        test_ids = ";".join(r.release_id for r in fold.test)
        lines.append(f"{number},{train_ids},{test_ids},{int(fold.boundary_adjusted)}")
    _write("\n".join(lines) + "\n", args.out)
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for number, fold in enumerate(folds, start=1):
            for part, part_releases in (("train", fold.train), ("test", fold.test)):
                path = out_dir / f"fold{number}_{part}.csv"
                path.write_text(
                    _release_csv(part_releases, args.release_column), encoding="utf-8", newline=""
                )
    return 0


def _cmd_sastt(args) -> int:
    cases = pipeline.parse_cases(_read(args.cases))
    findings = pipeline.parse_findings(_read(args.findings))
    profiles = pipeline.parse_profile(_read(args.profile))
    if args.tool is not None:
        matching = [p for p in profiles if p.tool == args.tool]
        if not matching:
            raise ValueError(f"profile file has no tool named {args.tool!r}")
        profile = matching[0]
    elif len(profiles) == 1:
        profile = profiles[0]
    else:
        raise UsageError("profile lists several tools; pick one with --tool")

    per_cwe = per_cwe_confusion(cases, findings)
    ecwe, acwe, _ = ecwe_acwe(profile, per_cwe)

    columns = [
        "cases", "classified", "unknown", "tp", "fp", "tn", "fn",
        "precision", "recall", "f1", "npofb20", "expected", "actual",
    ]
    reports = []
    for cwe in sorted(per_cwe):
        tally = per_cwe[cwe]
        values: dict[str, float | None] = {
            "cases": float(tally.total),
            "classified": float(tally.classified),
            "unknown": float(tally.unknown),
            "tp": float(tally.tp),
            "fp": float(tally.fp),
            "tn": float(tally.tn),
            "fn": float(tally.fn),
            "expected": float(cwe in ecwe),
            "actual": float(cwe in acwe),
        }
        flags = []
        for metric in ("precision", "recall", "f1", "npofb20"):
            if tally.classified == 0:
                values[metric] = None
                flags.append(f"{metric}:no-classified-cases")
                continue
            value = SASTT_METRICS[metric](tally)
            values[metric] = float(value)
            if getattr(value, "undefined", False):
                flags.append(f"{metric}:undefined-denominator")
        reports.append(MetricReport(f"CWE-{cwe}", values, tuple(flags)))

    totals: dict[str, float | None] = {
        "cases": float(sum(t.total for t in per_cwe.values())),
        "classified": float(sum(t.classified for t in per_cwe.values())),
        "unknown": float(sum(t.unknown for t in per_cwe.values())),
        "tp": float(sum(t.tp for t in per_cwe.values())),
        "fp": float(sum(t.fp for t in per_cwe.values())),
        "tn": float(sum(t.tn for t in per_cwe.values())),
        "fn": float(sum(t.fn for t in per_cwe.values())),
        "expected": float(len(ecwe)),
        "actual": float(len(acwe)),
    }
    for metric in ("precision", "recall", "f1", "npofb20"):
        try:
            totals[metric] = weighted_accuracy(per_cwe, metric)
        except ValueError:
            totals[metric] = None
    reports.append(MetricReport(f"{profile.tool}:weighted", totals))

    _write(emit_report(reports, columns=columns), args.out)
    return 0


_COMMANDS = {
    "metrics": _cmd_metrics,
    "compare": _cmd_compare,
    "combine": _cmd_combine,
    "split": _cmd_split,
    "sastt": _cmd_sastt,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else 1
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
