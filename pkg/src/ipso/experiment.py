"""System-vs-system experiments built on the innate pairwise ordering.

The centrepiece is a two-step protocol: test a chosen metric's per-topic
score differences for significance, then corroborate a significant
outcome with the metric-independent evidence — an exact Sign test on the
counts of topics fixed in each direction, with equal and non-separable
topics excluded.  A dagger marks metric significance, a double dagger a
corroborated one.
"""

from __future__ import annotations

import csv
import enum
import itertools
import math
import warnings
from dataclasses import dataclass
from typing import IO, Iterable, NamedTuple, Sequence, Union

import numpy as np

from . import _bits
from .enumeration import CategoryCounts
from .metrics import MetricSpec, TopicContext, evaluate, parse_metric
from .serp import (
    GROUP_TABLE_ORDER,
    Serp,
    TopicGroup,
    Trajectory,
    classify_group,
    group_sort_key,
    trajectory,
)
from .stats import (
    TestResult,
    UndefinedTestError,
    sign_test,
    sign_test_diffs,
    t_test_paired,
    wilcoxon_signed_rank,
)
from .trecio import Qrels, RunFile, SerpSet, build_serps, topic_sort_key

METRIC_TESTS = {
    "t": t_test_paired,
    "wilcoxon": wilcoxon_signed_rank,
    "sign": sign_test_diffs,
}

DEFAULT_ALPHA = 0.05

DAGGER, DOUBLE_DAGGER = "†", "‡"


def _as_metric(metric: Union[MetricSpec, str]) -> MetricSpec:
    return metric if isinstance(metric, MetricSpec) else parse_metric(metric)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")


def _check_test(test: str) -> None:
    if test not in METRIC_TESTS:
        raise ValueError(f"unknown test {test!r}; choose from {sorted(METRIC_TESTS)}")


def _evaluation_topics(tags_topics: dict, qrels: Qrels) -> list:
    """Topics to evaluate: judged topics retrieved by at least one system."""
    union = set()
    for topics in tags_topics.values():
        union |= topics
    judged = union & {t for t in qrels.topics()}
    return sorted(judged, key=topic_sort_key)


def _warn_missing(tags_topics: dict, topics: Sequence[str]) -> None:
    for tag, present in tags_topics.items():
        missing = [t for t in topics if t not in present]
        if missing:
            warnings.warn(
                f"system {tag}: {len(missing)} evaluated topic(s) absent from the "
                "run; scored as all-0 SERPs",
                stacklevel=3,
            )


@dataclass(frozen=True)
class ComparisonReport:
    """Full outcome of one system-vs-system comparison at one depth."""

    system_a: str
    system_b: str
    k: int
    metric: MetricSpec
    test: str
    alpha: float
    n_topics: int
    n_scored_topics: int
    mean_a: float | None
    mean_b: float | None
    effect_size: float | None
    metric_p: float | None
    metric_statistic: float | None
    metric_degenerate: bool
    ipso_counts: dict  # TopicGroup -> topic count
    ipso_p: float | None
    metric_significant: bool
    ipso_corroborated: bool
    zero_relevant_topics: tuple

    def group_count(self, group: TopicGroup) -> int:
        return self.ipso_counts.get(group, 0)

    @property
    def sign_counts(self) -> tuple:
        """(non-inferior-group, non-superior-group) topic counts for the Sign test."""
        return (self.group_count(TopicGroup.SEPARABLE_NI),
                self.group_count(TopicGroup.SEPARABLE_NS))

    def to_dict(self) -> dict:
        return {
            "system_a": self.system_a,
            "system_b": self.system_b,
            "k": self.k,
            "metric": self.metric.label,
            "test": self.test,
            "alpha": self.alpha,
            "n_topics": self.n_topics,
            "n_scored_topics": self.n_scored_topics,
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "effect_size": self.effect_size,
            "metric_p": self.metric_p,
            "metric_statistic": self.metric_statistic,
            "metric_degenerate": self.metric_degenerate,
            "ipso_counts": {g.label: self.group_count(g) for g in GROUP_TABLE_ORDER},
            "ipso_p": self.ipso_p,
            "metric_significant": self.metric_significant,
            "ipso_corroborated": self.ipso_corroborated,
            "zero_relevant_topics": list(self.zero_relevant_topics),
        }

    CSV_HEADER = (
        "system_a", "system_b", "k", "metric", "test", "alpha",
        "n_topics", "n_scored_topics", "mean_a", "mean_b", "effect_size",
        "metric_p", "metric_significant",
        "group_ns_midpoint", "group_ns", "group_equal", "group_ni", "group_ni_midpoint",
        "ipso_p", "ipso_corroborated",
    )

    def csv_row(self) -> tuple:
        def num(x):
            return "" if x is None else repr(x)

        return (
            self.system_a, self.system_b, self.k, self.metric.label, self.test,
            self.alpha, self.n_topics, self.n_scored_topics,
            num(self.mean_a), num(self.mean_b), num(self.effect_size),
            num(self.metric_p), self.metric_significant,
            *(self.group_count(g) for g in GROUP_TABLE_ORDER),
            num(self.ipso_p), self.ipso_corroborated,
        )

    def to_text(self, ascii_symbols: bool = False) -> str:
        """Aligned human-readable report."""
        dagger = "+" if ascii_symbols else DAGGER
        ddagger = "++" if ascii_symbols else DOUBLE_DAGGER

        def num(x, fmt="{:.4f}"):
            return "n/a" if x is None else fmt.format(x)

        ni, ns = self.sign_counts
        lines = [
            f"Comparison of {self.system_a} (A) vs {self.system_b} (B) at depth k={self.k}",
            f"  topics evaluated: {self.n_topics} "
            f"(scored under {self.metric.label}: {self.n_scored_topics})",
            f"  mean {self.metric.label}:  A = {num(self.mean_a)}   B = {num(self.mean_b)}",
            f"  effect size (B - A): {num(self.effect_size, '{:+.4f}')}",
            f"  {self.test} test: p = {num(self.metric_p)}"
            + (f" {dagger}" if self.metric_significant else ""),
            "  groups: " + " | ".join(
                f"{g.label} {self.group_count(g)}" for g in GROUP_TABLE_ORDER
            ),
            f"  sign test on separable directions ({ni} ni vs {ns} ns): "
            f"p = {num(self.ipso_p)}"
            + (f" {ddagger}" if self.ipso_corroborated else ""),
        ]
        return "\n".join(lines)


def _scores_for(
    serp_set: SerpSet,
    tag: str,
    topics: Sequence[str],
    metric: MetricSpec,
    rel_counts: dict,
    cache: dict | None = None,
) -> dict:
    """topic -> metric score for one system, memoised when a cache is shared."""
    key = (tag, metric.label)
    if cache is not None and key in cache:
        return cache[key]
    scores = {
        t: evaluate(metric, serp_set.serp_or_empty(tag, t),
                    TopicContext(rel_counts.get(t, 0)))
        for t in topics
    }
    if cache is not None:
        cache[key] = scores
    return scores


def _pair_report(
    tag_a: str,
    tag_b: str,
    serp_set: SerpSet,
    topics: Sequence[str],
    rel_counts: dict,
    k: int,
    metric: MetricSpec,
    test: str,
    alpha: float,
    score_cache: dict | None = None,
) -> ComparisonReport:
    groups = {g: 0 for g in GROUP_TABLE_ORDER}
    for t in topics:
        group = classify_group(serp_set.serp_or_empty(tag_a, t),
                               serp_set.serp_or_empty(tag_b, t), k)
        groups[group] += 1

    zero_rel = tuple(t for t in topics if rel_counts.get(t, 0) == 0)
    scored = [t for t in topics if rel_counts.get(t, 0) >= 1]
    scores_a = _scores_for(serp_set, tag_a, scored, metric, rel_counts, score_cache)
    scores_b = _scores_for(serp_set, tag_b, scored, metric, rel_counts, score_cache)
    diffs = [scores_a[t] - scores_b[t] for t in scored]

    if scored:
        mean_a = sum(scores_a[t] for t in scored) / len(scored)
        mean_b = sum(scores_b[t] for t in scored) / len(scored)
        effect = mean_b - mean_a
    else:
        mean_a = mean_b = effect = None

    try:
        metric_result = METRIC_TESTS[test](diffs)
    except UndefinedTestError:
        metric_result = None

    ni, ns = groups[TopicGroup.SEPARABLE_NI], groups[TopicGroup.SEPARABLE_NS]
    ipso_result = sign_test(ni, ns) if ni + ns else None

    metric_p = metric_result.p_value if metric_result else None
    ipso_p = ipso_result.p_value if ipso_result else None
    significant = metric_p is not None and metric_p < alpha
    corroborated = significant and ipso_p is not None and ipso_p < alpha

    return ComparisonReport(
        system_a=tag_a,
        system_b=tag_b,
        k=k,
        metric=metric,
        test=test,
        alpha=alpha,
        n_topics=len(topics),
        n_scored_topics=len(scored),
        mean_a=mean_a,
        mean_b=mean_b,
        effect_size=effect,
        metric_p=metric_p,
        metric_statistic=metric_result.statistic if metric_result else None,
        metric_degenerate=bool(metric_result.degenerate) if metric_result else False,
        ipso_counts=groups,
        ipso_p=ipso_p,
        metric_significant=significant,
        ipso_corroborated=corroborated,
        zero_relevant_topics=zero_rel,
    )


def compare_systems(
    run_a: RunFile,
    run_b: RunFile,
    qrels: Qrels,
    k: int,
    metric: Union[MetricSpec, str, None] = None,
    alpha: float = DEFAULT_ALPHA,
    test: str = "t",
) -> ComparisonReport:
    """Run the full comparison protocol between two systems at depth k.

    Reports per-topic means and effect size for the metric (topics with
    no relevant documents are excluded from scoring), the metric test's
    p-value, the five-group tally of the innate per-topic orderings, and
    the Sign test on the two separable group counts.  metric defaults to
    precision at k.
    """
    _check_alpha(alpha)
    _check_test(test)
    spec = MetricSpec("P", k) if metric is None else _as_metric(metric)
    serp_set = build_serps([run_a, run_b], qrels, k)
    tags_topics = {
        run_a.system_tag: set(run_a.entries),
        run_b.system_tag: set(run_b.entries),
    }
    topics = _evaluation_topics(tags_topics, qrels)
    if not topics:
        raise ValueError("runs share no judged topics")
    _warn_missing(tags_topics, topics)
    return _pair_report(
        run_a.system_tag, run_b.system_tag, serp_set, topics,
        qrels.relevant_counts(), k, spec, test, alpha,
    )


@dataclass(frozen=True)
class TopicRow:
    """One topic's entry in a per-topic comparison table."""

    topic_id: str
    serp_a: str  # bitstring
    serp_b: str
    trajectory: Trajectory
    group: TopicGroup
    score_diffs: dict  # metric label -> score(A) - score(B)


def topic_table(
    run_a: RunFile,
    run_b: RunFile,
    qrels: Qrels,
    k: int,
    metrics: Sequence[Union[MetricSpec, str]] = (),
) -> list:
    """Per-topic rows, sectioned and ordered for tabular presentation.

    Rows appear in five sections — non-separable with a non-superior
    midpoint, separable non-superior, equal, separable non-inferior,
    non-separable with a non-inferior midpoint — and are ordered within a
    section by the number of non-separable depths, then by the length of
    the leading equal zone.  Signed per-metric score differences
    (A minus B) are attached to every row.
    """
    specs = [_as_metric(m) for m in metrics]
    serp_set = build_serps([run_a, run_b], qrels, k)
    tags_topics = {
        run_a.system_tag: set(run_a.entries),
        run_b.system_tag: set(run_b.entries),
    }
    topics = _evaluation_topics(tags_topics, qrels)
    if not topics:
        raise ValueError("runs share no judged topics")
    _warn_missing(tags_topics, topics)
    rel_counts = qrels.relevant_counts()

    rows = []
    for t in topics:
        serp_a = serp_set.serp_or_empty(run_a.system_tag, t)
        serp_b = serp_set.serp_or_empty(run_b.system_tag, t)
        traj = trajectory(serp_a, serp_b)
        ctx = TopicContext(rel_counts.get(t, 0))
        diffs = {
            spec.label: evaluate(spec, serp_a, ctx) - evaluate(spec, serp_b, ctx)
            for spec in specs
        }
        rows.append(TopicRow(
            topic_id=t,
            serp_a=serp_a.bitstring,
            serp_b=serp_b.bitstring,
            trajectory=traj,
            group=classify_group(serp_a, serp_b, k),
            score_diffs=diffs,
        ))
    rows.sort(key=lambda r: (
        r.group.table_order, group_sort_key(r.trajectory), topic_sort_key(r.topic_id),
    ))
    return rows


def write_topic_csv(rows: Sequence[TopicRow], stream: IO[str]) -> None:
    """CSV export of a topic table, one diff column per metric."""
    labels = list(rows[0].score_diffs) if rows else []
    writer = csv.writer(stream)
    writer.writerow(["topic", "group", "serp_a", "serp_b", "trajectory"]
                    + [f"diff_{label}" for label in labels])
    for row in rows:
        writer.writerow([
            row.topic_id, row.group.label, row.serp_a, row.serp_b,
            " ".join(row.trajectory.codes()),
            *(repr(row.score_diffs[label]) for label in labels),
        ])


class AgreementCategory(enum.Enum):
    """Agreement between the metric test and the corroborating Sign test."""

    BOTH_YES = "Both:Yes"
    BOTH_NO = "Both:No"
    METRIC_YES = "Metric:Yes"
    METRIC_NO = "Metric:No"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_flags(cls, metric_significant: bool, ipso_significant: bool):
        if metric_significant and ipso_significant:
            return cls.BOTH_YES
        if metric_significant:
            return cls.METRIC_YES
        if ipso_significant:
            return cls.METRIC_NO
        return cls.BOTH_NO

    def __str__(self) -> str:
        return self.value


class SweepRow(NamedTuple):
    system_a: str
    system_b: str
    k: int
    metric: str
    test: str
    metric_p: float | None
    ipso_p: float | None
    category: AgreementCategory


@dataclass(frozen=True)
class SweepResult:
    """Agreement categories for every system pair and condition."""

    rows: tuple
    alpha: float

    def fractions(self) -> dict:
        """Per (k, metric, test): category fractions plus the two totals.

        metric_total is the fraction of pairs the metric test finds
        significant, ipso_total the fraction the Sign test does; both
        include the pairs where the two agree.
        """
        grouped: dict = {}
        for row in self.rows:
            grouped.setdefault((row.k, row.metric, row.test), []).append(row)
        out = {}
        for key, rows in grouped.items():
            n = len(rows)
            tally = {cat: 0 for cat in AgreementCategory}
            for row in rows:
                tally[row.category] += 1
            fracs = {cat.label: tally[cat] / n for cat in AgreementCategory}
            fracs["metric_total"] = fracs["Both:Yes"] + fracs["Metric:Yes"]
            fracs["ipso_total"] = fracs["Both:Yes"] + fracs["Metric:No"]
            fracs["n_pairs"] = n
            out[key] = fracs
        return out

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(("system_a", "system_b", "k", "metric", "test",
                         "metric_p", "ipso_p", "category"))
        for row in self.rows:
            writer.writerow((
                row.system_a, row.system_b, row.k, row.metric, row.test,
                "" if row.metric_p is None else repr(row.metric_p),
                "" if row.ipso_p is None else repr(row.ipso_p),
                row.category.label,
            ))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rows": [
                {
                    "system_a": row.system_a, "system_b": row.system_b,
                    "k": row.k, "metric": row.metric, "test": row.test,
                    "metric_p": row.metric_p, "ipso_p": row.ipso_p,
                    "category": row.category.label,
                }
                for row in self.rows
            ],
            "fractions": [
                {"k": k, "metric": metric, "test": test, **fracs}
                for (k, metric, test), fracs in sorted(self.fractions().items())
            ],
        }


def sweep_all_pairs(
    runs: Sequence[RunFile],
    qrels: Qrels,
    k_values: Sequence[int],
    metrics: Sequence[Union[MetricSpec, str]],
    tests: Sequence[str],
    alpha: float = DEFAULT_ALPHA,
) -> SweepResult:
    """Compare every unordered pair of systems under every condition.

    Each (pair, k, metric, test) cell reproduces exactly what a
    standalone compare_systems call would report; the category records
    whether the metric test and the Sign test agree on significance.
    """
    if len(runs) < 2:
        raise ValueError("sweep needs at least two runs")
    _check_alpha(alpha)
    for test in tests:
        _check_test(test)
    # a bare family name ("P", "RBP0.8") tracks the sweep depth; a full
    # label ("P@5") keeps its own depth at every k
    plan = []
    for m in metrics:
        if isinstance(m, str) and "@" not in m:
            parse_metric(f"{m}@1")  # validate the family up front
            plan.append(m)
        else:
            plan.append(_as_metric(m))
    if not plan or not tests or not k_values:
        raise ValueError("k_values, metrics, and tests must all be non-empty")
    rel_counts = qrels.relevant_counts()
    rows = []
    for k in k_values:
        serp_set = build_serps(runs, qrels, k)
        score_cache: dict = {}
        specs = [
            parse_metric(f"{m}@{k}") if isinstance(m, str) else m for m in plan
        ]
        for run_x, run_y in itertools.combinations(runs, 2):
            tags_topics = {
                run_x.system_tag: set(run_x.entries),
                run_y.system_tag: set(run_y.entries),
            }
            topics = _evaluation_topics(tags_topics, qrels)
            if not topics:
                raise ValueError(
                    f"runs {run_x.system_tag} and {run_y.system_tag} share no judged topics"
                )
            _warn_missing(tags_topics, topics)
            for spec in specs:
                for test in tests:
                    report = _pair_report(
                        run_x.system_tag, run_y.system_tag, serp_set, topics,
                        rel_counts, k, spec, test, alpha, score_cache,
                    )
                    ipso_significant = report.ipso_p is not None and report.ipso_p < alpha
                    rows.append(SweepRow(
                        system_a=report.system_a,
                        system_b=report.system_b,
                        k=k,
                        metric=spec.label,
                        test=test,
                        metric_p=report.metric_p,
                        ipso_p=report.ipso_p,
                        category=AgreementCategory.from_flags(
                            report.metric_significant, ipso_significant),
                    ))
    return SweepResult(rows=tuple(rows), alpha=alpha)


def category_fractions(runs: Sequence[RunFile], qrels: Qrels, k: int) -> CategoryCounts:
    """Pair-relationship tallies over every (topic, unordered system pair).

    Aggregates the innate comparison across all SERP-vs-SERP pairs in a
    collection of runs, mirroring the enumeration-table format but over
    observed data: total = judged topics x n(n-1)/2 pairs.
    """
    if len(runs) < 2:
        raise ValueError("category_fractions needs at least two runs")
    serp_set = build_serps(runs, qrels, k)
    tags_topics = {run.system_tag: set(run.entries) for run in runs}
    topics = _evaluation_topics(tags_topics, qrels)
    if not topics:
        raise ValueError("no judged topics in the supplied runs")
    matrices = {
        run.system_tag: np.array(
            [tuple(serp_set.serp_or_empty(run.system_tag, t)) for t in topics],
            dtype=np.int8,
        )
        for run in runs
    }
    tally = np.zeros(4, dtype=np.int64)
    for tag_x, tag_y in itertools.combinations(matrices, 2):
        cats = _bits.classify_pair_rows(matrices[tag_x], matrices[tag_y])
        tally += np.bincount(cats, minlength=4)
    eq, ni, ns, xx = (int(x) for x in tally)
    n_pairs = len(runs) * (len(runs) - 1) // 2
    return CategoryCounts(
        k=k, equal=eq, separable=ni + ns, non_separable=xx,
        total=len(topics) * n_pairs, mode="exact",
    )


def mean_metric_by_system(
    runs: Sequence[RunFile],
    qrels: Qrels,
    metric: Union[MetricSpec, str],
) -> dict:
    """Mean metric score per system over the shared judged topic set.

    All systems are averaged over the same topics (those with at least
    one relevant document), with all-0 SERPs standing in for topics a
    run did not retrieve.
    """
    spec = _as_metric(metric)
    serp_set = build_serps(runs, qrels, spec.depth)
    tags_topics = {run.system_tag: set(run.entries) for run in runs}
    topics = _evaluation_topics(tags_topics, qrels)
    rel_counts = qrels.relevant_counts()
    scored = [t for t in topics if rel_counts.get(t, 0) >= 1]
    if not scored:
        raise ValueError("no topics with relevant documents to score")
    means = {}
    for run in runs:
        total = sum(
            evaluate(spec, serp_set.serp_or_empty(run.system_tag, t),
                     TopicContext(rel_counts[t]))
            for t in scored
        )
        means[run.system_tag] = total / len(scored)
    return means


def percentile_run(
    runs: Sequence[RunFile],
    qrels: Qrels,
    metric: Union[MetricSpec, str],
    percentile: float,
) -> tuple:
    """(system tag, mean score) at a percentile of the per-system ranking.

    Systems are ranked ascending by mean score; the nearest-rank rule
    picks the entry, so percentile 100 is the best system and percentile
    25 the conventional lower-quartile pick.  Ties are broken by tag.
    """
    if not 0.0 < percentile <= 100.0:
        raise ValueError(f"percentile must be in (0, 100], got {percentile}")
    means = mean_metric_by_system(runs, qrels, metric)
    ranked = sorted(means.items(), key=lambda item: (item[1], item[0]))
    index = max(1, math.ceil(percentile / 100.0 * len(ranked))) - 1
    return ranked[index]
