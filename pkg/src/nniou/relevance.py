"""Set-level relevance between concept sets: IoU and nn-IoU.

Plain intersection-over-union treats distinct concepts as unrelated even
when they sit one hop apart in the hierarchy.  nn-IoU credits those near
misses: concepts of either set that are within the distance threshold of
some concept on the other side join the numerator with weight ``lam``::

    nn_iou(A, B) = (|A & B| + lam * |rel(A, B)|) / |A | B|

where ``rel(A, B)`` contains every concept of the symmetric difference
that participates in at least one within-threshold pair; no concept is
counted twice, and exact matches stay in the intersection term.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection

from .errors import ConfigError
from .neighbor_index import NeighborIndex


@dataclass(frozen=True)
class RelevanceParams:
    """Weight and distance threshold for approximate matching.

    ``lam`` balances exact overlap against related-concept credit and must
    lie in [0, 1]; ``radius`` is the hop threshold (0 disables approximate
    matching entirely).
    """

    lam: float = 0.5
    radius: int = 1

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda must be in [0, 1], got {self.lam}")
        if self.radius < 0:
            raise ConfigError(f"radius must be >= 0, got {self.radius}")


def iou(a: Collection[str], b: Collection[str]) -> float:
    """Intersection over union; 0.0 when both sets are empty."""
    a, b = frozenset(a), frozenset(b)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def rel_set(a: Collection[str], b: Collection[str], index: NeighborIndex) -> frozenset[str]:
    """Related-but-not-shared concepts between two sets.

    A concept qualifies when it lies outside the intersection and the index
    places it within the threshold radius of some concept on the other
    side.  Equal pairs pass the distance test trivially but never
    contribute, since they belong to the intersection.  The result is a
    set, so it is independent of any iteration order.
    """
    a, b = frozenset(a), frozenset(b)
    shared = a & b
    related = set()
    for x in a - shared:
        if index.neighbors(x) & b:
            related.add(x)
    for y in b - shared:
        if index.neighbors(y) & a:
            related.add(y)
    return frozenset(related)


def nn_iou(
    a: Collection[str],
    b: Collection[str],
    params: RelevanceParams,
    index: NeighborIndex | None = None,
) -> float:
    """Nearest-neighbor-aware IoU; 0.0 when both sets are empty.

    The index is consulted only when both ``params.lam`` and
    ``params.radius`` are positive; it must then have been built at the
    configured radius.  Concepts absent from the index participate only in
    exact matching.
    """
    a, b = frozenset(a), frozenset(b)
    union = a | b
    if not union:
        return 0.0
    if params.lam == 0.0 or params.radius == 0:
        related = 0
    else:
        if index is None:
            raise ConfigError(
                "a neighbor index is required when lambda > 0 and radius > 0"
            )
        if index.radius != params.radius:
            raise ConfigError(
                f"index radius {index.radius} does not match configured radius "
                f"{params.radius}"
            )
        related = len(rel_set(a, b, index))
    return (len(a & b) + params.lam * related) / len(union)
