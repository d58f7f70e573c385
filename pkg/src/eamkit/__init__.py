"""Evaluation toolkit for defect- and vulnerability-prediction output.

Computes classification and effort-aware accuracy metrics over ranked
entity predictions, lifts commit-level scores to method/class level,
scores static-analysis tools on labeled test suites, and runs the
nonparametric comparison battery used to rank classifiers.
"""

from .model import (
    EntityPrediction,
    PredictionSet,
    Ranking,
    RankingPolicy,
    inspection_prefix,
    rank,
)
from .classification import (
    ConfusionCounts,
    MetricValue,
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
from .effort import (
    EffortCurve,
    average_npofb,
    average_pofb,
    effort_curve,
    ifa,
    norm_popt,
    npofb,
    peffort,
    pofb,
    popt,
    proportion_inspected,
    relative_gain,
)
from .jit import (
    CombineResult,
    CombinedScore,
    CommitPrediction,
    ScoreSource,
    TouchMap,
    combine,
    combine_set,
    maxc,
    sumc,
)
from .stats import (
    EffectSize,
    TestResult,
    cliffs_delta,
    cohens_d,
    cohens_kappa,
    dunn_all_pairs,
    holm_bonferroni,
    interpret,
    spearman_rho,
    wilcoxon_signed_rank,
)
from .sastt import (
    UNKNOWN,
    CoverageGrowth,
    CweTally,
    Outcome,
    Polarity,
    SastTestCase,
    ToolFinding,
    ToolProfile,
    classify_outcome,
    coverage_growth,
    ecwe_acwe,
    per_cwe_confusion,
    weighted_accuracy,
)
from .pipeline import (
    Fold,
    MetricReport,
    ParseError,
    Release,
    agreement_proportion,
    best_agreement,
    emit_report,
    ordered_split,
    parse_commits,
    parse_predictions,
    parse_releases,
    parse_report,
    parse_sastt,
    parse_touchmap,
    partition_by_touched,
    rank_classifiers,
    walk_forward,
)
from .report import DEFAULT_X_GRID, metric_battery, report_columns

__version__ = "0.1.0"

__all__ = [
    "EntityPrediction",
    "PredictionSet",
    "Ranking",
    "RankingPolicy",
    "inspection_prefix",
    "rank",
    "ConfusionCounts",
    "MetricValue",
    "auc",
    "confusion_at_threshold",
    "f1",
    "gmeasure",
    "inspection_ratio",
    "mcc",
    "precision",
    "recall",
    "stratified_weighted_average",
    "EffortCurve",
    "average_npofb",
    "average_pofb",
    "effort_curve",
    "ifa",
    "norm_popt",
    "npofb",
    "peffort",
    "pofb",
    "popt",
    "proportion_inspected",
    "relative_gain",
    "CombineResult",
    "CombinedScore",
    "CommitPrediction",
    "ScoreSource",
    "TouchMap",
    "combine",
    "combine_set",
    "maxc",
    "sumc",
    "EffectSize",
    "TestResult",
    "cliffs_delta",
    "cohens_d",
    "cohens_kappa",
    "dunn_all_pairs",
    "holm_bonferroni",
    "interpret",
    "spearman_rho",
    "wilcoxon_signed_rank",
    "UNKNOWN",
    "CoverageGrowth",
    "CweTally",
    "Outcome",
    "Polarity",
    "SastTestCase",
    "ToolFinding",
    "ToolProfile",
    "classify_outcome",
    "coverage_growth",
    "ecwe_acwe",
    "per_cwe_confusion",
    "weighted_accuracy",
    "Fold",
    "MetricReport",
    "ParseError",
    "Release",
    "agreement_proportion",
    "best_agreement",
    "emit_report",
    "ordered_split",
    "parse_commits",
    "parse_predictions",
    "parse_releases",
    "parse_report",
    "parse_sastt",
    "parse_touchmap",
    "partition_by_touched",
    "rank_classifiers",
    "walk_forward",
    "DEFAULT_X_GRID",
    "metric_battery",
    "report_columns",
]
