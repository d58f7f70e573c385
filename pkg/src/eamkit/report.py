"""The standard metric battery computed per prediction file.

One report row per source, with the column order fixed so repeated runs
emit byte-identical CSVs.
"""

from __future__ import annotations

from collections.abc import Sequence

from . import effort
from .classification import (
    confusion_at_threshold,
    auc,
    f1,
    gmeasure,
    mcc,
    precision,
    recall,
)
from .model import PredictionSet
from .pipeline import MetricReport

__all__ = ["DEFAULT_X_GRID", "report_columns", "metric_battery"]

DEFAULT_X_GRID = tuple(range(10, 100, 10))

_THRESHOLD_METRICS = (
    ("Precision", precision),
    ("Recall", recall),
    ("F1", f1),
    ("MCC", mcc),
    ("Gmeasure", gmeasure),
)


def report_columns(x_values: Sequence[float] = DEFAULT_X_GRID) -> list[str]:
    """Declared column order for the battery at a given x grid."""
    columns = [name for name, _ in _THRESHOLD_METRICS]
    columns.append("AUC")
    columns.extend(f"PofB{x:g}" for x in x_values)
    columns.extend(f"NPofB{x:g}" for x in x_values)
    columns.extend(["AveragePofB", "NAveragePofB", "Popt", "Norm(Popt)", "IFA", "PCI@20"])
    return columns


def metric_battery(
    pset: PredictionSet,
    x_values: Sequence[float] = DEFAULT_X_GRID,
    threshold: float = 0.5,
) -> MetricReport:
    """Compute every battery metric for one prediction set.

    Metrics that cannot be evaluated (single-class AUC, effort metrics
    on a set without defectives) come back as None with a flag instead
    of failing the whole report.
    """
    counts = confusion_at_threshold(pset, threshold)
    values: dict[str, float | None] = {}
    flags: list[str] = []

    for name, metric in _THRESHOLD_METRICS:
        value = metric(counts)
        values[name] = float(value)
        if value.undefined:
            flags.append(f"{name.lower()}:undefined-denominator")

    try:
        values["AUC"] = auc(pset)
    except ValueError:
        values["AUC"] = None
        flags.append("auc:single-class")

    has_defectives = pset.defective_count > 0
    for x in x_values:
        values[f"PofB{x:g}"] = effort.pofb(pset, x) if has_defectives else None
    for x in x_values:
        values[f"NPofB{x:g}"] = effort.npofb(pset, x) if has_defectives else None
    if has_defectives:
        values["AveragePofB"] = effort.average_pofb(pset)
        values["NAveragePofB"] = effort.average_npofb(pset)
        values["Popt"] = effort.popt(pset)
        values["Norm(Popt)"] = effort.norm_popt(pset)
        values["IFA"] = float(effort.ifa(pset))
    else:
        for name in ("AveragePofB", "NAveragePofB", "Popt", "Norm(Popt)", "IFA"):
            values[name] = None
        flags.append("effort:zero-defectives")
    values["PCI@20"] = effort.proportion_inspected(pset, 20.0)

    return MetricReport(pset.name, values, tuple(flags))
