"""Innate pairwise SERP ordering.

Decide whether two search result pages, evaluated to a fixed depth, are
ordered the same way by every reasonable effectiveness metric; count how
often that happens over all possible pages; ingest TREC runs; and use
the relation, through an exact Sign test, to corroborate system-vs-system
significance claims.
"""

from .serp import (
    GROUP_TABLE_ORDER,
    Relationship,
    Serp,
    TopicGroup,
    Trajectory,
    as_serp,
    classify_group,
    compare,
    group_sort_key,
    prefix_dominance_oracle,
    trajectory,
)
from .metrics import (
    PHI,
    SCORE_TOLERANCE,
    MetricSpec,
    TopicContext,
    average_precision,
    certify_compliance,
    evaluate,
    metric_suite,
    ndcg,
    ordering_check,
    parse_metric,
    precision,
    rbp,
    reciprocal_rank,
    score_all,
    success,
)
from .enumeration import (
    EXHAUSTIVE_LIMIT,
    CategoryCounts,
    HasseEdges,
    RelationshipGrid,
    build_grid,
    dp_counts,
    enumerate_pairs,
    hasse_cover,
    kendall_tau,
    relationship_counts,
    sample_pairs,
    write_counts_csv,
)
from .trecio import (
    CoverageReport,
    Qrels,
    RunEntry,
    RunFile,
    SerpSet,
    TrecParseError,
    binarize,
    build_serps,
    judgment_coverage,
    parse_qrels,
    parse_run,
    write_run,
)
from .stats import (
    TestResult,
    UndefinedTestError,
    sign_test,
    sign_test_diffs,
    t_test_paired,
    wilcoxon_signed_rank,
)
from .experiment import (
    AgreementCategory,
    ComparisonReport,
    SweepResult,
    TopicRow,
    category_fractions,
    compare_systems,
    mean_metric_by_system,
    percentile_run,
    sweep_all_pairs,
    topic_table,
    write_topic_csv,
)

__version__ = "1.0.0"

__all__ = [
    "AgreementCategory",
    "CategoryCounts",
    "ComparisonReport",
    "CoverageReport",
    "EXHAUSTIVE_LIMIT",
    "GROUP_TABLE_ORDER",
    "HasseEdges",
    "MetricSpec",
    "PHI",
    "Qrels",
    "Relationship",
    "RelationshipGrid",
    "RunEntry",
    "RunFile",
    "SCORE_TOLERANCE",
    "Serp",
    "SerpSet",
    "SweepResult",
    "TestResult",
    "TopicContext",
    "TopicGroup",
    "TopicRow",
    "Trajectory",
    "TrecParseError",
    "UndefinedTestError",
    "as_serp",
    "average_precision",
    "binarize",
    "build_grid",
    "build_serps",
    "category_fractions",
    "certify_compliance",
    "classify_group",
    "compare",
    "compare_systems",
    "dp_counts",
    "enumerate_pairs",
    "evaluate",
    "group_sort_key",
    "hasse_cover",
    "judgment_coverage",
    "kendall_tau",
    "mean_metric_by_system",
    "metric_suite",
    "ndcg",
    "ordering_check",
    "parse_metric",
    "parse_qrels",
    "parse_run",
    "percentile_run",
    "precision",
    "prefix_dominance_oracle",
    "rbp",
    "reciprocal_rank",
    "relationship_counts",
    "sample_pairs",
    "score_all",
    "sign_test",
    "sign_test_diffs",
    "success",
    "sweep_all_pairs",
    "t_test_paired",
    "topic_table",
    "trajectory",
    "wilcoxon_signed_rank",
    "write_counts_csv",
    "write_run",
    "write_topic_csv",
]
