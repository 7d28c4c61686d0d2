from __future__ import annotations

import pytest
from hypothesis import settings

from nniou import KnowledgeGraph

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

# Real UMLS is_a fragments with well-known taxonomy distances: veins sit one
# hop from blood vessels; brain stem reaches head in three hops via brain
# and the intracranial region.  The middle edges point against each other so
# the three-hop path exists only under undirected traversal.
ANATOMY_EDGES = [
    ("C0042449", "C0005847"),
    ("C0006121", "C0006104"),
    ("C0926510", "C0006104"),
    ("C0926510", "C0018670"),
]


@pytest.fixture(scope="session")
def anatomy_graph() -> KnowledgeGraph:
    return KnowledgeGraph.from_edges(ANATOMY_EDGES)


@pytest.fixture(scope="session")
def chain_graph() -> KnowledgeGraph:
    # undirected chain d - b - a - c
    return KnowledgeGraph.from_edges([("d", "b"), ("b", "a"), ("a", "c")])


@pytest.fixture()
def anatomy_edge_file(tmp_path):
    path = tmp_path / "anatomy.tsv"
    lines = ["# is_a edges"] + [f"{c}\t{p}" for c, p in ANATOMY_EDGES]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
