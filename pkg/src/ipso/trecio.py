"""TREC run and qrels ingestion, binarization, and depth-k SERP assembly.

Run lines carry six whitespace-separated fields (topic, literal Q0,
document, rank, score, system tag); qrels lines carry four (topic,
iteration, document, grade).  Rankings are rebuilt from the score field
-- descending, ties broken by document id descending -- because rank
columns in the wild are unreliable; a strict mode honours them instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, NamedTuple, Union

from .serp import Serp

#: Documents retained per topic after ordering, unless overridden.
DEFAULT_TRUNCATION = 100

SERPSET_CSV_HEADER = ("system", "topic", "bitstring")


class TrecParseError(ValueError):
    """Malformed run or qrels input; the message names the offending line."""


class RunEntry(NamedTuple):
    doc_id: str
    rank: int
    score: float


def topic_sort_key(topic_id: str):
    """Numeric order for all-digit topic ids, lexicographic otherwise."""
    if topic_id.isdigit():
        return (0, int(topic_id), topic_id)
    return (1, 0, topic_id)


@dataclass(frozen=True)
class RunFile:
    """One system's ranked document lists, one list per topic."""

    system_tag: str
    entries: dict  # topic_id -> tuple of RunEntry, already ordered and truncated
    truncation: int = DEFAULT_TRUNCATION

    def topics(self) -> list:
        return sorted(self.entries, key=topic_sort_key)

    def ranking(self, topic_id: str) -> tuple:
        return self.entries.get(topic_id, ())


Source = Union[str, Path, IO[str]]


def _lines(source: Source):
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="ascii", errors="replace") as handle:
            yield from enumerate(handle, start=1)
    else:
        yield from enumerate(source, start=1)


def parse_run(
    source: Source,
    truncate: int = DEFAULT_TRUNCATION,
    strict_ranks: bool = False,
) -> RunFile:
    """Parse a TREC run; blank lines are ignored.

    Entries are grouped per topic and ordered by score descending with
    document id descending on ties (or by the rank column when
    strict_ranks is set), then truncated.  The system tag is taken from
    the last field of the first line.
    """
    system_tag = None
    raw: dict = {}
    seen = set()
    for lineno, line in _lines(source):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 6:
            raise TrecParseError(
                f"line {lineno}: expected 6 fields (topic Q0 doc rank score tag), "
                f"got {len(fields)}"
            )
        topic_id, _, doc_id, rank_text, score_text, tag = fields
        try:
            rank = int(rank_text)
        except ValueError:
            raise TrecParseError(f"line {lineno}: rank {rank_text!r} is not an integer") from None
        try:
            score = float(score_text)
        except ValueError:
            raise TrecParseError(f"line {lineno}: score {score_text!r} is not numeric") from None
        if (topic_id, doc_id) in seen:
            raise TrecParseError(f"line {lineno}: duplicate document {doc_id!r} for topic {topic_id}")
        seen.add((topic_id, doc_id))
        if system_tag is None:
            system_tag = tag
        raw.setdefault(topic_id, []).append(RunEntry(doc_id, rank, score))
    if system_tag is None:
        raise TrecParseError("run contains no entries")
    entries = {}
    for topic_id, docs in raw.items():
        if strict_ranks:
            docs = sorted(docs, key=lambda e: (e.rank, e.doc_id))
        else:
            docs = sorted(docs, key=lambda e: (e.score, e.doc_id), reverse=True)
        entries[topic_id] = tuple(docs[:truncate])
    return RunFile(system_tag=system_tag, entries=entries, truncation=truncate)


def write_run(run: RunFile, stream: IO[str]) -> None:
    """Serialize a RunFile in TREC format; re-parsing restores it exactly."""
    for topic_id in run.topics():
        for entry in run.ranking(topic_id):
            stream.write(
                f"{topic_id} Q0 {entry.doc_id} {entry.rank} {entry.score!r} "
                f"{run.system_tag}\n"
            )


@dataclass(frozen=True)
class Qrels:
    """Relevance judgments: raw integer grade per (topic, document)."""

    judgments: dict  # (topic_id, doc_id) -> grade

    def topics(self) -> list:
        return sorted({t for t, _ in self.judgments}, key=topic_sort_key)

    def grade(self, topic_id: str, doc_id: str, default: int | None = None):
        return self.judgments.get((topic_id, doc_id), default)

    def relevant_count(self, topic_id: str) -> int:
        """Number of documents judged relevant (grade >= 1) for a topic."""
        return sum(
            1 for (t, _), g in self.judgments.items() if t == topic_id and g >= 1
        )

    def relevant_counts(self) -> dict:
        """topic_id -> count of documents judged relevant."""
        counts: dict = {}
        for (topic_id, _), grade in self.judgments.items():
            counts.setdefault(topic_id, 0)
            if grade >= 1:
                counts[topic_id] += 1
        return counts


def binarize(grade: int) -> int:
    """Collapse a raw grade to binary relevance: 1 iff grade >= 1."""
    return 1 if grade >= 1 else 0


def parse_qrels(source: Source) -> Qrels:
    """Parse a qrels file: four fields per line, grades kept raw."""
    judgments: dict = {}
    for lineno, line in _lines(source):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 4:
            raise TrecParseError(
                f"line {lineno}: expected 4 fields (topic iter doc grade), got {len(fields)}"
            )
        topic_id, _, doc_id, grade_text = fields
        try:
            grade = int(grade_text)
        except ValueError:
            raise TrecParseError(f"line {lineno}: grade {grade_text!r} is not an integer") from None
        if (topic_id, doc_id) in judgments:
            raise TrecParseError(f"line {lineno}: duplicate judgment for ({topic_id}, {doc_id})")
        judgments[(topic_id, doc_id)] = grade
    return Qrels(judgments=judgments)


class CoverageEntry(NamedTuple):
    """Judgment coverage of one ranked list."""

    first_unjudged_rank: int | None
    n_unjudged: int
    n_retrieved: int


@dataclass(frozen=True)
class SerpSet:
    """Depth-k binary SERPs for every (system, topic), plus coverage counts."""

    k: int
    serps: dict  # (system_tag, topic_id) -> Serp of length exactly k
    coverage: dict = field(default_factory=dict)  # (system_tag, topic_id) -> CoverageEntry

    def systems(self) -> list:
        return sorted({s for s, _ in self.serps})

    def topics(self) -> list:
        return sorted({t for _, t in self.serps}, key=topic_sort_key)

    def get(self, system_tag: str, topic_id: str) -> Serp | None:
        return self.serps.get((system_tag, topic_id))

    def serp_or_empty(self, system_tag: str, topic_id: str) -> Serp:
        """The stored SERP, or an all-0 SERP for a missing (system, topic)."""
        found = self.serps.get((system_tag, topic_id))
        return found if found is not None else Serp((0,) * self.k)

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(SERPSET_CSV_HEADER)
        for system_tag, topic_id in sorted(
            self.serps, key=lambda key: (key[0], topic_sort_key(key[1]))
        ):
            writer.writerow([system_tag, topic_id, self.serps[(system_tag, topic_id)].bitstring])


def build_serps(
    runs: Union[RunFile, Iterable[RunFile]],
    qrels: Qrels,
    k: int,
    include_qrels_only_topics: bool = False,
) -> SerpSet:
    """Materialize depth-k SERPs from one or more runs against judgments.

    Position i of a SERP is 1 exactly when the i-th ranked document is
    judged with grade >= 1; unjudged documents count as non-relevant and
    short lists are padded with 0s.  Topics that appear only in the qrels
    are added as all-0 SERPs when include_qrels_only_topics is set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if isinstance(runs, RunFile):
        runs = [runs]
    serps: dict = {}
    coverage: dict = {}
    for run in runs:
        topics = set(run.entries)
        if include_qrels_only_topics:
            topics |= set(t for t in qrels.topics())
        for topic_id in topics:
            ranking = run.ranking(topic_id)
            bits = []
            first_unjudged = None
            n_unjudged = 0
            for position, entry in enumerate(ranking, start=1):
                grade = qrels.grade(topic_id, entry.doc_id)
                if grade is None:
                    n_unjudged += 1
                    if first_unjudged is None:
                        first_unjudged = position
                    relevant = 0
                else:
                    relevant = binarize(grade)
                if position <= k:
                    bits.append(relevant)
            bits.extend([0] * (k - len(bits)))
            serps[(run.system_tag, topic_id)] = Serp(bits)
            coverage[(run.system_tag, topic_id)] = CoverageEntry(
                first_unjudged_rank=first_unjudged,
                n_unjudged=n_unjudged,
                n_retrieved=len(ranking),
            )
    return SerpSet(k=k, serps=serps, coverage=coverage)


class CoverageRow(NamedTuple):
    system: str
    topic: str
    first_unjudged_rank: int | None
    n_unjudged: int
    n_retrieved: int


@dataclass(frozen=True)
class CoverageReport:
    """Judgment coverage per ranked list, with corpus-level aggregates.

    A "list" is one (system, topic) ranking.  Aggregates: the fraction of
    lists containing at least one unjudged document, the mean rank of the
    first unjudged document over lists that have one, and the mean number
    of unjudged documents per list.
    """

    rows: tuple

    @property
    def n_lists(self) -> int:
        return len(self.rows)

    @property
    def fraction_with_unjudged(self) -> float:
        if not self.rows:
            return 0.0
        return sum(1 for r in self.rows if r.n_unjudged) / len(self.rows)

    @property
    def mean_first_unjudged_rank(self) -> float | None:
        ranks = [r.first_unjudged_rank for r in self.rows if r.first_unjudged_rank]
        if not ranks:
            return None
        return sum(ranks) / len(ranks)

    @property
    def mean_unjudged_per_list(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.n_unjudged for r in self.rows) / len(self.rows)

    def to_dict(self) -> dict:
        return {
            "n_lists": self.n_lists,
            "fraction_with_unjudged": self.fraction_with_unjudged,
            "mean_first_unjudged_rank": self.mean_first_unjudged_rank,
            "mean_unjudged_per_list": self.mean_unjudged_per_list,
            "rows": [row._asdict() for row in self.rows],
        }

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(CoverageRow._fields)
        for row in self.rows:
            writer.writerow([
                row.system, row.topic,
                "" if row.first_unjudged_rank is None else row.first_unjudged_rank,
                row.n_unjudged, row.n_retrieved,
            ])

    @classmethod
    def merged(cls, reports: Iterable["CoverageReport"]) -> "CoverageReport":
        rows: list = []
        for report in reports:
            rows.extend(report.rows)
        return cls(rows=tuple(rows))


def judgment_coverage(
    serp_set: SerpSet,
    runs: Union[RunFile, Iterable[RunFile], None] = None,
    qrels: Qrels | None = None,
) -> CoverageReport:
    """Coverage report for a SerpSet, recomputed from its runs when given.

    With runs and qrels supplied, coverage is rebuilt from the rankings
    directly; otherwise the counters recorded at build time are used.
    """
    if runs is not None and qrels is not None:
        serp_set = build_serps(runs, qrels, serp_set.k)
    rows = [
        CoverageRow(system, topic, entry.first_unjudged_rank,
                    entry.n_unjudged, entry.n_retrieved)
        for (system, topic), entry in sorted(
            serp_set.coverage.items(),
            key=lambda item: (item[0][0], topic_sort_key(item[0][1])),
        )
    ]
    return CoverageReport(rows=tuple(rows))
