"""Command-line front end.

Subcommands: ``build-index``, ``relevance``, ``retrieve``, ``eval``,
``ablate``.  Exit status 0 on success, 1 on usage/configuration errors,
2 on data errors.  All outputs are deterministic: identical inputs and
flags produce byte-identical runs, report, and CSV files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import (
    corpus_vocabulary,
    read_class_map,
    read_corpus,
    read_runs,
    write_runs,
)
from .errors import ConfigError, DataError, EvaluationError
from .kg_store import edge_file_checksum, parse_edge_file
from .neighbor_index import NeighborIndex, build_index, load_index, save_index
from .ranking_eval import (
    Document,
    EvalConfig,
    MetricReport,
    RankingRun,
    derive_labels,
    ground_truth_ranking,
    nn_cui_at_k,
    precision_at_k,
)
from .relevance import RelevanceParams, iou, nn_iou


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A002 - argparse API
        raise _UsageError(message)


@dataclass(frozen=True)
class AblationGrid:
    """Parameter grid for the (radius, lambda, k) precision sweep."""

    lambdas: tuple[float, ...]
    radii: tuple[int, ...]
    ks: tuple[int, ...]

    def __post_init__(self):
        if not self.lambdas or not self.radii or not self.ks:
            raise ConfigError("ablation grid lists must be non-empty")
        for lam in self.lambdas:
            if not 0.0 <= lam <= 1.0:
                raise ConfigError(f"lambda must be in [0, 1], got {lam}")
        for radius in self.radii:
            if radius < 0:
                raise ConfigError(f"radius must be >= 0, got {radius}")
        for k in self.ks:
            if k < 1:
                raise ConfigError(f"k must be >= 1, got {k}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nniou",
        description=(
            "Knowledge-graph-aware relevance scoring and retrieval evaluation"
        ),
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser(
        "build-index",
        help="precompute within-radius neighbor sets for a corpus vocabulary",
    )
    p.add_argument("--edges", required=True, help="edge file (child<TAB>parent lines)")
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--n", type=int, default=1, help="distance threshold (default 1)")
    p.add_argument("--out", required=True, help="output index path")
    p.add_argument(
        "--strict-cui",
        action="store_true",
        help="require identifiers shaped like 'C' + seven digits",
    )
    p.set_defaults(func=_cmd_build_index)

    p = sub.add_parser(
        "relevance",
        help="score two concept sets (or two corpus document ids)",
    )
    p.add_argument("set_a", help="comma-separated concepts or a document id")
    p.add_argument("set_b", help="comma-separated concepts or a document id")
    p.add_argument("--corpus", help="JSONL corpus used to resolve document ids")
    p.add_argument("--index", help="neighbor index path")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="related-concept weight (default 0.5)")
    p.add_argument("--n", type=int, default=None,
                   help="distance threshold (default 1, or the index radius)")
    p.set_defaults(func=_cmd_relevance)

    p = sub.add_parser(
        "retrieve",
        help="rank every corpus document against every other (brute force)",
    )
    p.add_argument("--corpus", required=True)
    p.add_argument("--index", help="neighbor index path")
    p.add_argument("--edges", help="edge file, only to cross-check the index checksum")
    p.add_argument("--measure", choices=["iou", "nniou"], default="nniou")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", required=True, help="output runs file (JSONL)")
    p.set_defaults(func=_cmd_retrieve)

    p = sub.add_parser("eval", help="score runs against a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--runs", required=True, help="JSONL runs file")
    p.add_argument("--index", help="neighbor index path")
    p.add_argument("--edges", help="edge file, only to cross-check the index checksum")
    p.add_argument("--measure", choices=["iou", "nniou"], default="nniou")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--class-map", help="JSON class map enabling Precision@K")
    p.add_argument("--categories", help="comma-separated subset of class-map categories")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser(
        "ablate",
        help="sweep (radius, lambda, k) and report precision per cell",
    )
    p.add_argument("--corpus", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--class-map", required=True)
    p.add_argument("--categories", help="comma-separated subset of class-map categories")
    p.add_argument("--lambdas", required=True, help="comma-separated lambda values")
    p.add_argument("--radii", required=True, help="comma-separated radius values")
    p.add_argument("--ks", required=True, help="comma-separated cutoff values")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.add_argument("--strict-cui", action="store_true")
    p.set_defaults(func=_cmd_ablate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            parser.print_usage(sys.stderr)
            print("error: a subcommand is required", file=sys.stderr)
            return 1
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_index_checked(index_path: str, edges_path: str | None) -> NeighborIndex:
    index = load_index(index_path)
    if edges_path:
        actual = edge_file_checksum(edges_path)
        if actual != index.source_checksum:
            _warn(
                f"index {index_path} was built from a different edge file "
                f"(checksum {index.source_checksum[:12]}.. != {actual[:12]}..)"
            )
    return index


def _resolve_radius(index: NeighborIndex | None, n_flag: int | None) -> int:
    """Radius comes from the index when one is loaded; --n must then agree."""
    if index is not None:
        if n_flag is not None and n_flag != index.radius:
            raise ConfigError(
                f"--n {n_flag} conflicts with index radius {index.radius}"
            )
        return index.radius
    return n_flag if n_flag is not None else 1


def _require_index_for(measure: str, lam: float, index: NeighborIndex | None) -> None:
    if measure == "nniou" and lam > 0 and index is None:
        raise ConfigError(
            "measure 'nniou' with lambda > 0 requires --index "
            "(build one with 'nniou build-index')"
        )


def _cmd_build_index(args) -> int:
    graph = parse_edge_file(args.edges, strict_cui=args.strict_cui)
    if not graph.acyclic:
        _warn(
            "edge set contains a directed cycle "
            f"({' -> '.join(graph.cycle)}); distances use the undirected view"
        )
    docs = read_corpus(args.corpus)
    vocabulary = corpus_vocabulary(docs)
    missing = sorted(c for c in vocabulary if not graph.has_node(c))
    if missing:
        _warn(
            f"{len(missing)} corpus concept(s) absent from the graph; "
            "indexed with empty neighbor sets"
        )
    start = time.perf_counter()
    index = build_index(graph, vocabulary, args.n)
    elapsed = time.perf_counter() - start
    save_index(index, args.out)
    print(
        f"nodes={graph.num_nodes} edges={graph.num_edges} "
        f"entries={len(index)} radius={args.n} seconds={elapsed:.3f}"
    )
    return 0


def _cmd_relevance(args) -> int:
    index = _load_index_checked(args.index, None) if args.index else None
    docs_by_id: dict[str, Document] = {}
    if args.corpus:
        docs_by_id = {d.id: d for d in read_corpus(args.corpus)}

    def resolve(token: str) -> frozenset[str]:
        if token in docs_by_id:
            return docs_by_id[token].concepts
        return frozenset(t.strip() for t in token.split(",") if t.strip())

    set_a = resolve(args.set_a)
    set_b = resolve(args.set_b)
    _require_index_for("nniou", args.lam, index)
    radius = _resolve_radius(index, args.n)
    params = RelevanceParams(lam=args.lam, radius=radius)
    print(f"iou={iou(set_a, set_b):.6f}")
    print(f"nniou={nn_iou(set_a, set_b, params, index):.6f}")
    return 0


def _retrieve_runs(
    docs: Sequence[Document],
    cfg: EvalConfig,
    index: NeighborIndex | None,
) -> list[RankingRun]:
    runs = []
    for doc in docs:
        full = ground_truth_ranking(doc, docs, cfg, index)
        runs.append(RankingRun(full.query_id, full.ranked_ids[: cfg.k]))
    return runs


def _cmd_retrieve(args) -> int:
    docs = read_corpus(args.corpus)
    if not docs:
        raise EvaluationError(f"corpus {args.corpus} contains no documents")
    index = _load_index_checked(args.index, args.edges) if args.index else None
    _require_index_for(args.measure, args.lam, index)
    radius = _resolve_radius(index, args.n)
    cfg = EvalConfig(
        k=args.k,
        relevance=RelevanceParams(lam=args.lam, radius=radius),
        measure=args.measure,
    )
    runs = _retrieve_runs(docs, cfg, index)
    write_runs(runs, args.out)
    print(f"queries={len(runs)} k={args.k} measure={args.measure} out={args.out}")
    return 0


def _split_categories(args, class_map) -> list[str]:
    if args.categories:
        categories = [c.strip() for c in args.categories.split(",") if c.strip()]
        if not categories:
            raise ConfigError("--categories must name at least one category")
        for category in categories:
            if category not in class_map:
                raise ConfigError(
                    f"unknown label category {category!r} (not in class map)"
                )
        return categories
    return sorted(class_map)


def _reports_to_csv(reports: Sequence[MetricReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["metric", "query_id", "score"])
    for report in reports:
        for query_id in sorted(report.per_query):
            writer.writerow([report.metric, query_id, f"{report.per_query[query_id]:.6f}"])
    return buffer.getvalue()


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        print(f"report written to {out_path}")
    else:
        sys.stdout.write(text)


def _cmd_eval(args) -> int:
    docs = read_corpus(args.corpus)
    runs = read_runs(args.runs)
    index = _load_index_checked(args.index, args.edges) if args.index else None
    _require_index_for(args.measure, args.lam, index)
    radius = _resolve_radius(index, args.n)
    cfg = EvalConfig(
        k=args.k,
        relevance=RelevanceParams(lam=args.lam, radius=radius),
        measure=args.measure,
    )
    reports = [nn_cui_at_k(docs, runs, cfg, index)]
    if args.class_map:
        class_map = read_class_map(args.class_map)
        categories = _split_categories(args, class_map)
        labeled = derive_labels(docs, class_map)
        for category in categories:
            reports.append(precision_at_k(labeled, runs, args.k, [category]))
        if len(categories) > 1:
            reports.append(precision_at_k(labeled, runs, args.k, categories))
    if args.format == "json":
        payload = {"reports": [r.to_dict() for r in reports]}
        text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    else:
        text = _reports_to_csv(reports)
    _emit(text, args.out)
    return 0


def ablation_rows(
    graph,
    docs: Sequence[Document],
    grid: AblationGrid,
    class_map,
    categories: Sequence[str],
) -> list[tuple[int, float, int, float]]:
    """Precision per (radius, lambda, k) cell, one index build per radius.

    At radius 0 approximate matching is inert, so the precision in those
    rows cannot depend on lambda; any variation would mean the measure
    degeneracy is broken, which is asserted here as an internal error.
    """
    vocabulary = corpus_vocabulary(docs)
    labeled = derive_labels(docs, class_map)
    rows: list[tuple[int, float, int, float]] = []
    max_k = max(grid.ks)
    for radius in grid.radii:
        index = build_index(graph, vocabulary, radius)
        for lam in grid.lambdas:
            cfg = EvalConfig(
                k=max_k,
                relevance=RelevanceParams(lam=lam, radius=radius),
                measure="nniou",
            )
            runs = _retrieve_runs(docs, cfg, index)
            for k in grid.ks:
                report = precision_at_k(labeled, runs, k, categories)
                rows.append((radius, lam, k, report.aggregate))
    baseline: dict[int, float] = {}
    for radius, lam, k, precision in rows:
        if radius != 0:
            continue
        if k in baseline and baseline[k] != precision:
            raise RuntimeError(
                "precision varies with lambda at radius 0 "
                f"(k={k}: {baseline[k]!r} != {precision!r})"
            )
        baseline.setdefault(k, precision)
    return rows


def _parse_number_list(raw: str, kind, flag: str) -> tuple:
    values = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(kind(token))
        except ValueError:
            raise ConfigError(f"{flag}: cannot parse {token!r}") from None
    if not values:
        raise ConfigError(f"{flag} must list at least one value")
    return tuple(values)


def _cmd_ablate(args) -> int:
    grid = AblationGrid(
        lambdas=_parse_number_list(args.lambdas, float, "--lambdas"),
        radii=_parse_number_list(args.radii, int, "--radii"),
        ks=_parse_number_list(args.ks, int, "--ks"),
    )
    graph = parse_edge_file(args.edges, strict_cui=args.strict_cui)
    if not graph.acyclic:
        _warn(
            "edge set contains a directed cycle "
            f"({' -> '.join(graph.cycle)}); distances use the undirected view"
        )
    docs = read_corpus(args.corpus)
    class_map = read_class_map(args.class_map)
    categories = _split_categories(args, class_map)
    rows = ablation_rows(graph, docs, grid, class_map, categories)
    lines = ["n,lambda,k,precision"]
    for radius, lam, k, precision in rows:
        lines.append(f"{radius},{lam:.6f},{k},{precision:.6f}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
