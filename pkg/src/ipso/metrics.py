"""Effectiveness metrics over binary SERPs, all evaluated at a fixed depth.

Six families: precision, reciprocal rank, success, rank-biased precision,
average precision, and NDCG.  Scores are in [0, 1].  AP and NDCG need the
topic's total number of relevant documents R; in enumeration settings
without judgments, R defaults to the evaluation depth so that every
possible SERP has a well-defined score.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import _bits
from .serp import Relationship, Serp, SerpLike, as_serp

#: Persistence at which RBP weights satisfy w1 = w2 + w3, making a single
#: early hit worth exactly two later ones.
PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: Absolute tolerance for treating two metric scores as tied.
SCORE_TOLERANCE = 1e-12

_FAMILIES = ("P", "RR", "S", "RBP", "AP", "NDCG")


@dataclass(frozen=True)
class MetricSpec:
    """A metric family plus evaluation depth and any family parameters."""

    family: str
    depth: int
    persistence: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown metric family {self.family!r}")
        if self.depth < 1:
            raise ValueError(f"metric depth must be >= 1, got {self.depth}")
        if self.family == "RBP":
            if self.persistence is None:
                raise ValueError("RBP requires a persistence parameter")
            if not 0.0 < self.persistence < 1.0:
                raise ValueError(f"persistence must be in (0,1), got {self.persistence}")
        elif self.persistence is not None:
            raise ValueError(f"{self.family} takes no persistence parameter")

    @property
    def label(self) -> str:
        if self.family == "RBP":
            return f"RBP{self.persistence:g}@{self.depth}"
        return f"{self.family}@{self.depth}"

    def __str__(self) -> str:
        return self.label


_METRIC_RE = re.compile(r"^(P|PREC|RR|S|SUCC|AP|NDCG)@(\d+)$", re.IGNORECASE)
_RBP_RE = re.compile(r"^RBP(\d*\.?\d+)@(\d+)$", re.IGNORECASE)


def parse_metric(text: str) -> MetricSpec:
    """Parse a metric label such as ``P@10``, ``RBP0.5@3``, or ``NDCG@20``."""
    token = text.strip()
    m = _RBP_RE.match(token)
    if m:
        return MetricSpec("RBP", int(m.group(2)), float(m.group(1)))
    m = _METRIC_RE.match(token)
    if m:
        family = m.group(1).upper()
        family = {"PREC": "P", "SUCC": "S"}.get(family, family)
        return MetricSpec(family, int(m.group(2)))
    raise ValueError(f"unrecognised metric {text!r}")


@dataclass(frozen=True)
class TopicContext:
    """Per-topic evaluation context: R, the count of relevant documents."""

    total_relevant: int

    def __post_init__(self):
        if self.total_relevant < 0:
            raise ValueError(f"total_relevant must be >= 0, got {self.total_relevant}")


def _prefix(serp: SerpLike, k: int) -> Serp:
    return as_serp(serp).padded(k).prefix(k)


def precision(serp: SerpLike, k: int) -> float:
    """Fraction of the top k that is relevant."""
    return _prefix(serp, k).ones / k


def success(serp: SerpLike, k: int) -> float:
    """1 if anything relevant appears in the top k, else 0."""
    return 1.0 if _prefix(serp, k).ones else 0.0


def reciprocal_rank(serp: SerpLike, k: int) -> float:
    """1/rank of the first relevant document in the top k, 0 if none."""
    for i, v in enumerate(_prefix(serp, k)):
        if v:
            return 1.0 / (i + 1)
    return 0.0


def rbp(serp: SerpLike, persistence: float, k: int) -> float:
    """Rank-biased precision with the given persistence, truncated at k."""
    if not 0.0 < persistence < 1.0:
        raise ValueError(f"persistence must be in (0,1), got {persistence}")
    score = 0.0
    weight = 1.0 - persistence
    for v in _prefix(serp, k):
        if v:
            score += weight
        weight *= persistence
    return score


def _check_total_relevant(prefix: Serp, total_relevant: int) -> None:
    if total_relevant < prefix.ones:
        raise ValueError(
            f"total_relevant {total_relevant} is smaller than the "
            f"{prefix.ones} relevant documents in the prefix"
        )


def average_precision(serp: SerpLike, k: int, total_relevant: int) -> float:
    """AP truncated at k: mean of precision at relevant ranks over R."""
    p = _prefix(serp, k)
    _check_total_relevant(p, total_relevant)
    if total_relevant == 0:
        return 0.0
    seen = 0
    acc = 0.0
    for i, v in enumerate(p):
        if v:
            seen += 1
            acc += seen / (i + 1)
    return acc / total_relevant


def ndcg(serp: SerpLike, k: int, total_relevant: int) -> float:
    """NDCG at k with 1/log2(rank+1) discounts and an ideal of min(R, k) ones."""
    p = _prefix(serp, k)
    _check_total_relevant(p, total_relevant)
    if total_relevant == 0:
        return 0.0
    dcg = sum(v / math.log2(i + 2) for i, v in enumerate(p))
    ideal = sum(1.0 / math.log2(i + 2) for i in range(min(total_relevant, k)))
    return dcg / ideal


def evaluate(metric: MetricSpec, serp: SerpLike, ctx: TopicContext | None = None) -> float:
    """Score one SERP under a metric; pads with 0s if shorter than the depth.

    ctx supplies R for AP and NDCG and is ignored by the other families;
    without a ctx, R defaults to the metric depth.
    """
    k = metric.depth
    if metric.family == "P":
        return precision(serp, k)
    if metric.family == "RR":
        return reciprocal_rank(serp, k)
    if metric.family == "S":
        return success(serp, k)
    if metric.family == "RBP":
        return rbp(serp, metric.persistence, k)
    total_relevant = ctx.total_relevant if ctx is not None else k
    if metric.family == "AP":
        return average_precision(serp, k, total_relevant)
    return ndcg(serp, k, total_relevant)


def ordering_check(
    metric: MetricSpec,
    s1: SerpLike,
    s2: SerpLike,
    ctx: TopicContext | None = None,
    tolerance: float = SCORE_TOLERANCE,
) -> str:
    """Return '<', '=', or '>' for the two SERPs' scores under one metric."""
    delta = evaluate(metric, s1, ctx) - evaluate(metric, s2, ctx)
    if abs(delta) <= tolerance:
        return "="
    return ">" if delta > 0 else "<"


def score_all(metric: MetricSpec, k: int, ctx: TopicContext | None = None) -> np.ndarray:
    """Scores for every length-k SERP, indexed by MSB-first encoding.

    SERPs are truncated or zero-padded to the metric's own depth before
    scoring, mirroring evaluate(); without a ctx, R defaults to k.
    """
    d = metric.depth
    bits = _bits.bit_matrix(k).astype(np.float64)
    if d <= k:
        bits = bits[:, :d]
    else:
        bits = np.hstack([bits, np.zeros((bits.shape[0], d - k))])
    if metric.family == "P":
        return bits.sum(axis=1) / d
    if metric.family == "S":
        return bits.any(axis=1).astype(np.float64)
    if metric.family == "RR":
        first = np.argmax(bits, axis=1)
        return bits.any(axis=1) / (first + 1.0)
    if metric.family == "RBP":
        p = metric.persistence
        weights = (1.0 - p) * p ** np.arange(d)
        return bits @ weights
    total_relevant = ctx.total_relevant if ctx is not None else k
    if total_relevant < min(k, d):
        # the all-relevant SERP is in the enumeration, so a smaller R would
        # make evaluate() reject it — fail the whole batch the same way
        raise ValueError(
            f"total_relevant {total_relevant} cannot cover every length-{k} "
            f"SERP at depth {d}; need at least {min(k, d)}"
        )
    if metric.family == "AP":
        ranks = np.arange(1, d + 1, dtype=np.float64)
        prec = np.cumsum(bits, axis=1) / ranks
        return (bits * prec).sum(axis=1) / total_relevant
    discounts = 1.0 / np.log2(np.arange(2, d + 2, dtype=np.float64))
    ideal = discounts[: min(total_relevant, d)].sum()
    return (bits @ discounts) / ideal


MetricLike = Union[MetricSpec, Callable[[Serp], float]]


def certify_compliance(
    metric: MetricLike,
    k: int,
    ctx: TopicContext | None = None,
    tolerance: float = SCORE_TOLERANCE,
) -> list:
    """Exhaustively check a metric against the innate ordering at depth k.

    For every ordered pair of length-k SERPs where the first is
    non-inferior, the first's score must not fall below the second's
    (within tolerance); equal pairs must score identically.  Returns the
    offending (serp, serp) pairs, sorted by encoding — empty means the
    metric complies.  Accepts a MetricSpec or any callable Serp -> score.
    """
    if not 1 <= k <= 12:
        raise ValueError(f"certify_compliance supports 1 <= k <= 12, got {k}")
    n = 1 << k
    if isinstance(metric, MetricSpec):
        scores = score_all(metric, k, ctx)
    else:
        scores = np.array([float(metric(Serp.from_int(c, k))) for c in range(n)])
    cat = _bits.category_matrix(k)
    gap = scores[:, None] - scores[None, :]
    bad = ((cat == _bits.NI) & (gap < -tolerance)) | (
        (cat == _bits.EQ) & (np.abs(gap) > tolerance)
    )
    return [
        (Serp.from_int(int(a), k), Serp.from_int(int(b), k))
        for a, b in np.argwhere(bad)
    ]


def metric_suite(k: int, persistences: tuple = (0.5, 0.8)) -> list:
    """The standard palette of MetricSpecs at depth k, one per family."""
    specs = [MetricSpec("P", k), MetricSpec("RR", k), MetricSpec("S", k)]
    specs += [MetricSpec("RBP", k, p) for p in persistences]
    specs += [MetricSpec("AP", k), MetricSpec("NDCG", k)]
    return specs
