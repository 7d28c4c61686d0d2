"""Concept knowledge-graph loading and validation.

The graph holds hierarchical (is_a) relations between concepts.  Each edge
is a directed child -> parent pair; distance computations traverse the
undirected view.  Identifiers are interned to dense integers at load time
so traversals run over flat adjacency tuples with a bytearray visited map.

Edge file format (UTF-8 text, one record per line):
  - ``#`` starts a comment line; blank lines are ignored
  - ``child<TAB>parent`` declares an is_a edge
  - a bare ``node`` registers an isolated concept

Identifiers may not contain tabs or newlines; surrounding whitespace is
trimmed.  The graph is immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path
from typing import Iterable

from .errors import EdgeFileError, UnknownConceptError

CUI_PATTERN = re.compile(r"C\d{7}")


def normalize_concept_id(raw: str, strict_cui: bool = False) -> str:
    """Trim and validate a concept identifier.

    With ``strict_cui`` the identifier must be the letter ``C`` followed by
    exactly seven decimal digits.  Raises ValueError on violation.
    """
    concept = raw.strip()
    if not concept:
        raise ValueError("empty concept identifier")
    if strict_cui and not CUI_PATTERN.fullmatch(concept):
        raise ValueError(
            f"invalid CUI {concept!r}: expected the letter 'C' followed by seven digits"
        )
    return concept


def _find_cycle(
    num_nodes: int, out_edges: list[tuple[int, ...]]
) -> tuple[bool, list[int] | None]:
    """Detect a directed cycle; returns (acyclic, witness node sequence).

    The witness starts and ends on the same node, e.g. ``[a, b, a]`` for a
    2-cycle, so its edge count is ``len(witness) - 1``.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * num_nodes
    for start in range(num_nodes):
        if color[start] != WHITE:
            continue
        color[start] = GRAY
        stack = [(start, iter(out_edges[start]))]
        path = [start]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(out_edges[nxt])))
                    path.append(nxt)
                    advanced = True
                    break
                if color[nxt] == GRAY:
                    loop_start = path.index(nxt)
                    return False, path[loop_start:] + [nxt]
            if not advanced:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return True, None


class KnowledgeGraph:
    """Immutable concept graph: interned nodes plus directed is_a edges.

    ``acyclic`` records whether the directed edge set is a DAG; a witness
    cycle is kept when it is not.  Cyclic input is usable (distances run on
    the undirected view) but callers may want to surface the warning.
    """

    __slots__ = (
        "_names",
        "_index",
        "_edge_list",
        "_out",
        "_adj",
        "acyclic",
        "cycle",
        "source_checksum",
    )

    def __init__(
        self,
        names: list[str],
        edges: list[tuple[int, int]],
        source_checksum: str,
    ):
        # names: interned identifiers; edges: deduplicated (child, parent)
        # integer pairs with no self-loops.  Use the classmethods instead of
        # calling this directly.
        self._names = tuple(names)
        self._index = {name: i for i, name in enumerate(names)}
        self._edge_list = tuple(edges)
        out: list[list[int]] = [[] for _ in names]
        und: list[set[int]] = [set() for _ in names]
        for child, parent in edges:
            out[child].append(parent)
            und[child].add(parent)
            und[parent].add(child)
        self._out = [tuple(v) for v in out]
        self._adj = [tuple(sorted(v)) for v in und]
        self.acyclic, witness = _find_cycle(len(names), self._out)
        self.cycle = [self._names[i] for i in witness] if witness else None
        self.source_checksum = source_checksum

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        nodes: Iterable[str] = (),
        strict_cui: bool = False,
    ) -> "KnowledgeGraph":
        """Build a graph from (child, parent) pairs plus optional isolated nodes."""
        names: list[str] = []
        index: dict[str, int] = {}

        def intern(raw: str) -> int:
            concept = normalize_concept_id(raw, strict_cui)
            i = index.get(concept)
            if i is None:
                i = len(names)
                index[concept] = i
                names.append(concept)
            return i

        pairs: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for node in nodes:
            intern(node)
        for child, parent in edges:
            c, p = intern(child), intern(parent)
            if c == p:
                raise ValueError(f"self-loop edge {names[c]!r}")
            if (c, p) not in seen:
                seen.add((c, p))
                pairs.append((c, p))
        checksum = _canonical_checksum(names, [(names[c], names[p]) for c, p in pairs])
        return cls(names, pairs, checksum)

    @property
    def num_nodes(self) -> int:
        return len(self._names)

    @property
    def num_edges(self) -> int:
        return len(self._edge_list)

    @property
    def node_names(self) -> tuple[str, ...]:
        return self._names

    def edges(self) -> list[tuple[str, str]]:
        """Directed (child, parent) pairs in first-seen order."""
        return [(self._names[c], self._names[p]) for c, p in self._edge_list]

    def has_node(self, concept: str) -> bool:
        return concept in self._index

    def node_id(self, concept: str) -> int:
        try:
            return self._index[concept]
        except KeyError:
            raise UnknownConceptError(concept) from None

    def name_of(self, node_id: int) -> str:
        return self._names[node_id]

    def neighbor_ids(self, node_id: int) -> tuple[int, ...]:
        """Undirected neighbors (union of in- and out-edges), sorted."""
        return self._adj[node_id]

    def parent_ids(self, node_id: int) -> tuple[int, ...]:
        """Directed out-edges (the parents of a child node)."""
        return self._out[node_id]

    def neighbors(self, concept: str) -> tuple[str, ...]:
        return tuple(self._names[i] for i in self._adj[self.node_id(concept)])

    def __repr__(self) -> str:
        return (
            f"KnowledgeGraph(nodes={self.num_nodes}, edges={self.num_edges}, "
            f"acyclic={self.acyclic})"
        )


def parse_edge_file(path: str | Path, strict_cui: bool = False) -> KnowledgeGraph:
    """Parse an edge file into a :class:`KnowledgeGraph`.

    Edges are deduplicated; every endpoint becomes a node; self-loops and
    malformed records raise :class:`EdgeFileError` with the line number.
    The file's SHA-256 is recorded as the graph's ``source_checksum``.
    """
    data = Path(path).read_bytes()
    checksum = hashlib.sha256(data).hexdigest()

    names: list[str] = []
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def intern(raw: str, lineno: int) -> int:
        try:
            concept = normalize_concept_id(raw, strict_cui)
        except ValueError as exc:
            raise EdgeFileError(str(exc), line=lineno) from None
        i = index.get(concept)
        if i is None:
            i = len(names)
            index[concept] = i
            names.append(concept)
        return i

    for lineno, rawline in enumerate(data.decode("utf-8").splitlines(), start=1):
        stripped = rawline.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = rawline.split("\t")
        if len(fields) == 1:
            intern(fields[0], lineno)
        elif len(fields) == 2:
            c = intern(fields[0], lineno)
            p = intern(fields[1], lineno)
            if c == p:
                raise EdgeFileError(f"self-loop edge {names[c]!r}", line=lineno)
            if (c, p) not in seen:
                seen.add((c, p))
                pairs.append((c, p))
        else:
            raise EdgeFileError(
                f"expected 1 or 2 tab-separated fields, got {len(fields)}",
                line=lineno,
            )
    return KnowledgeGraph(names, pairs, checksum)


def validate_dag(graph: KnowledgeGraph) -> tuple[bool, list[str] | None]:
    """Report whether the directed edge set is acyclic.

    Returns ``(True, None)`` for a DAG, otherwise ``(False, witness)`` where
    the witness is a node sequence starting and ending on the same concept.
    """
    acyclic, witness = _find_cycle(graph.num_nodes, graph._out)
    if witness is None:
        return True, None
    return False, [graph.name_of(i) for i in witness]


def edge_file_checksum(path: str | Path) -> str:
    """SHA-256 hex digest of an edge file's raw bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _canonical_checksum(nodes: list[str], edges: list[tuple[str, str]]) -> str:
    """Checksum for graphs built in memory: hash of a canonical rendering."""
    lines = sorted(nodes) + ["--"] + sorted(f"{c}\t{p}" for c, p in edges)
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
