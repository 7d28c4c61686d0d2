"""Ranking evaluation: ground-truth generation, NDCG, nn-CUI@K, Precision@K.

The evaluation treats every corpus document in turn as a query.  Candidate
documents are scored against the query's concept set with the configured
measure; sorting those scores (descending, ties broken by ascending id)
yields the ground-truth ranking.  A system's returned ranking is then
graded position by position: each result contributes its relevance divided
by log2(rank + 1), the resulting DCG is normalized by the ideal DCG of the
ground truth, and the final metric is the mean per-query NDCG.

Per-query evaluations are independent; report assembly is a deterministic
reduction over queries sorted by id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ConfigError, EvaluationError
from .neighbor_index import NeighborIndex
from .relevance import RelevanceParams, iou, nn_iou

MEASURES = ("iou", "nniou")


@dataclass
class Document:
    """A corpus item: id, concept set, optional categorical labels."""

    id: str
    concepts: frozenset[str]
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        self.concepts = frozenset(self.concepts)
        self.labels = dict(self.labels)


@dataclass
class RankingRun:
    """One query id plus the ordered document ids some system returned."""

    query_id: str
    ranked_ids: list[str]

    def __post_init__(self):
        self.ranked_ids = list(self.ranked_ids)
        if len(set(self.ranked_ids)) != len(self.ranked_ids):
            raise EvaluationError(
                f"run for query {self.query_id!r} contains duplicate document ids"
            )
        if self.query_id in self.ranked_ids:
            raise EvaluationError(
                f"run for query {self.query_id!r} retrieves the query itself"
            )


@dataclass(frozen=True)
class EvalConfig:
    """Cutoff, relevance parameters, and measure for one evaluation."""

    k: int
    relevance: RelevanceParams = RelevanceParams()
    measure: str = "nniou"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.measure not in MEASURES:
            raise ConfigError(
                f"measure must be one of {MEASURES}, got {self.measure!r}"
            )


@dataclass
class MetricReport:
    """Per-query scores plus their mean and the configuration that produced them."""

    metric: str
    config: dict[str, object]
    per_query: dict[str, float]
    aggregate: float
    exclusions: list[dict[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_scores(
        cls,
        metric: str,
        config: Mapping[str, object],
        per_query: Mapping[str, float],
        exclusions: Iterable[dict[str, str]] = (),
        notes: Iterable[str] = (),
    ) -> "MetricReport":
        scores = dict(per_query)
        aggregate = sum(scores.values()) / len(scores) if scores else 0.0
        return cls(metric, dict(config), scores, aggregate, list(exclusions), list(notes))

    def to_dict(self) -> dict[str, object]:
        return {
            "metric": self.metric,
            "config": self.config,
            "aggregate": self.aggregate,
            "per_query": self.per_query,
            "exclusions": self.exclusions,
            "notes": self.notes,
        }


def _scorer(
    cfg: EvalConfig, index: NeighborIndex | None
) -> Callable[[frozenset[str], frozenset[str]], float]:
    if cfg.measure == "iou":
        return iou
    return lambda a, b: nn_iou(a, b, cfg.relevance, index)


def _docs_by_id(corpus: Iterable[Document]) -> dict[str, Document]:
    by_id: dict[str, Document] = {}
    for doc in corpus:
        if doc.id in by_id:
            raise EvaluationError(f"duplicate document id {doc.id!r} in corpus")
        by_id[doc.id] = doc
    return by_id


def _runs_by_query(
    docs: Mapping[str, Document], runs: Iterable[RankingRun]
) -> dict[str, RankingRun]:
    by_query: dict[str, RankingRun] = {}
    for run in runs:
        if run.query_id not in docs:
            raise EvaluationError(
                f"run references unknown document id {run.query_id!r}"
            )
        if run.query_id in by_query:
            raise EvaluationError(f"multiple runs for query {run.query_id!r}")
        for ranked_id in run.ranked_ids:
            if ranked_id not in docs:
                raise EvaluationError(
                    f"run for query {run.query_id!r} references unknown document "
                    f"id {ranked_id!r}"
                )
        by_query[run.query_id] = run
    return by_query


def ground_truth_ranking(
    query: Document,
    corpus: Sequence[Document],
    cfg: EvalConfig,
    index: NeighborIndex | None = None,
) -> RankingRun:
    """Rank all candidates against the query by the configured measure.

    The query document itself is excluded from the candidate pool
    (self-retrieval trivially scores 1.0).  Ordering is by descending
    score with ties broken by ascending document id, so repeated calls are
    deterministic.  The full ranking is returned; callers truncate to K.
    """
    candidates = [doc for doc in corpus if doc.id != query.id]
    if not candidates:
        raise EvaluationError(
            f"no candidate documents for query {query.id!r} (corpus too small)"
        )
    score = _scorer(cfg, index)
    ranked = sorted(
        candidates, key=lambda doc: (-score(doc.concepts, query.concepts), doc.id)
    )
    return RankingRun(query.id, [doc.id for doc in ranked])


def dcg(relevances: Sequence[float]) -> float:
    """Discounted cumulative gain with a log2(rank + 1) position penalty.

    Ranks are 1-based, so the first item is undiscounted (log2(2) = 1).
    """
    return sum(rel / math.log2(j + 1) for j, rel in enumerate(relevances, start=1))


def ndcg_at_k(
    system_relevances: Sequence[float],
    ideal_relevances: Sequence[float],
    k: int,
) -> float:
    """DCG of the system's top-k over DCG of the ideal top-k.

    Lists longer than k are truncated; shorter lists are implicitly padded
    with zero relevance.  Returns 0.0 when the ideal DCG is zero.
    """
    idcg = dcg(list(ideal_relevances)[:k])
    if idcg == 0.0:
        return 0.0
    return dcg(list(system_relevances)[:k]) / idcg


def nn_cui_at_k(
    corpus: Sequence[Document],
    runs: Iterable[RankingRun],
    cfg: EvalConfig,
    index: NeighborIndex | None = None,
) -> MetricReport:
    """Mean NDCG@k of system rankings against measure-derived ground truth.

    For each query, the top-k system results are graded by the configured
    measure against the query's concepts; the ideal ranking is the measure's
    own descending ordering of the full candidate pool.  Corpus documents
    without a run are skipped as queries and recorded as exclusions; runs
    shorter than k are padded with zero relevance and noted.
    """
    docs = _docs_by_id(corpus)
    by_query = _runs_by_query(docs, runs)
    score = _scorer(cfg, index)

    per_query: dict[str, float] = {}
    exclusions: list[dict[str, str]] = []
    notes: list[str] = []
    for query_id in sorted(docs):
        run = by_query.get(query_id)
        if run is None:
            exclusions.append({"query_id": query_id, "reason": "no run provided"})
            continue
        query = docs[query_id]
        top = run.ranked_ids[: cfg.k]
        if len(top) < cfg.k:
            notes.append(
                f"query {query_id}: run returned {len(top)} of k={cfg.k} results; "
                "missing positions padded with zero relevance"
            )
        system_relevances = [
            score(docs[ranked_id].concepts, query.concepts) for ranked_id in top
        ]
        ideal = ground_truth_ranking(query, corpus, cfg, index)
        ideal_relevances = [
            score(docs[ranked_id].concepts, query.concepts)
            for ranked_id in ideal.ranked_ids[: cfg.k]
        ]
        per_query[query_id] = ndcg_at_k(system_relevances, ideal_relevances, cfg.k)

    metric = f"nn-CUI@{cfg.k}" if cfg.measure == "nniou" else f"CUI@{cfg.k}"
    config = {
        "k": cfg.k,
        "measure": cfg.measure,
        "lambda": cfg.relevance.lam,
        "n": cfg.relevance.radius,
    }
    return MetricReport.from_scores(metric, config, per_query, exclusions, notes)


def precision_at_k(
    corpus: Sequence[Document],
    runs: Iterable[RankingRun],
    k: int,
    label_categories: Sequence[str],
) -> MetricReport:
    """Fraction of top-k results matching the query on every given category.

    Queries lacking a label in any requested category are excluded and
    recorded.  Results lacking a label simply never match.  The fraction is
    over the results actually considered (at most k), so exhaustive
    retrieval on a small corpus is not penalized.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    categories = list(label_categories)
    if not categories:
        raise ConfigError("at least one label category is required")
    docs = _docs_by_id(corpus)
    for category in categories:
        if not any(category in doc.labels for doc in docs.values()):
            raise ConfigError(f"unknown label category {category!r}")
    by_query = _runs_by_query(docs, runs)

    per_query: dict[str, float] = {}
    exclusions: list[dict[str, str]] = []
    notes: list[str] = []
    for query_id in sorted(docs):
        run = by_query.get(query_id)
        if run is None:
            exclusions.append({"query_id": query_id, "reason": "no run provided"})
            continue
        query = docs[query_id]
        missing = [c for c in categories if c not in query.labels]
        if missing:
            exclusions.append(
                {
                    "query_id": query_id,
                    "reason": f"missing label(s): {', '.join(missing)}",
                }
            )
            continue
        top = run.ranked_ids[:k]
        if not top:
            per_query[query_id] = 0.0
            notes.append(f"query {query_id}: empty result list")
            continue
        hits = sum(
            1
            for ranked_id in top
            if all(
                docs[ranked_id].labels.get(c) == query.labels[c] for c in categories
            )
        )
        per_query[query_id] = hits / len(top)

    metric = f"Precision@{k}[{'&'.join(categories)}]"
    config = {"k": k, "categories": categories}
    return MetricReport.from_scores(metric, config, per_query, exclusions, notes)


def label_from_concepts(
    concepts: Iterable[str], value_map: Mapping[str, frozenset[str]]
) -> str | None:
    """Pick the single category value whose concept set intersects the document's.

    Zero or multiple intersecting values yield ``None`` (no label); callers
    exclude such documents from label-based metrics rather than guessing.
    """
    concepts = frozenset(concepts)
    matches = [value for value in sorted(value_map) if value_map[value] & concepts]
    if len(matches) == 1:
        return matches[0]
    return None


def derive_labels(
    corpus: Sequence[Document],
    class_map: Mapping[str, Mapping[str, frozenset[str]]],
) -> list[Document]:
    """Re-derive categorical labels from concepts for every class-map category.

    For each category the mapped value replaces any explicit label; an
    ambiguous or empty match leaves the category unset, which later excludes
    the document from that category's Precision@K.  Labels for categories
    outside the map are preserved.
    """
    out: list[Document] = []
    for doc in corpus:
        labels = dict(doc.labels)
        for category in sorted(class_map):
            labels.pop(category, None)
            value = label_from_concepts(doc.concepts, class_map[category])
            if value is not None:
                labels[category] = value
        out.append(Document(doc.id, doc.concepts, labels))
    return out
