from __future__ import annotations

import itertools
import random

import pytest

from hpartition import Graph, ModelGraph, catalog
from hpartition.graphs import LABELS, EdgeKind


@pytest.fixture(scope="session")
def models() -> dict[str, ModelGraph]:
    return catalog.load_builtin()


@pytest.fixture(scope="session")
def m23(models) -> ModelGraph:
    return models["m23"]


@pytest.fixture(scope="session")
def m7(models) -> ModelGraph:
    return models["m7"]


@pytest.fixture(scope="session")
def m13c(models) -> ModelGraph:
    return models["m13-compatible"]


@pytest.fixture(scope="session")
def m10c(models) -> ModelGraph:
    return models["m10-compatible"]


@pytest.fixture(scope="session")
def full_ab(models) -> ModelGraph:
    return models["full-ab"]


@pytest.fixture(scope="session")
def edgeless(models) -> ModelGraph:
    return models["m1-edgeless"]


@pytest.fixture(scope="session")
def g6_for_m7() -> Graph:
    """Six-vertex graph whose base (1,2,3,4) leaves vertex 5 the list ac
    and vertex 6 the list bd; a no-instance for the full-4-cycle model."""
    return Graph.from_edges(
        6, [(1, 2), (1, 4), (2, 3), (3, 4), (2, 5), (4, 5), (1, 6), (3, 6)]
    )


@pytest.fixture(scope="session")
def gfig_for_m10() -> Graph:
    """Graph where base (1,2,3,4) of the pair-lock model leaves vertex 5
    the list bc and vertex 6 the list ad with 5,6 nonadjacent (so that
    base fails), while base (1,2,5,4) extends to a solution."""
    return Graph.from_edges(
        6,
        [(1, 2), (1, 3), (2, 4), (3, 4), (1, 5), (4, 5),
         (2, 6), (3, 6), (1, 6), (4, 6)],
    )


def all_graphs(n: int):
    """Every labeled graph on vertices 1..n."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for bits in range(1 << len(pairs)):
        yield Graph.from_edges(
            n, (p for i, p in enumerate(pairs) if bits >> i & 1)
        )


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [
        (u, v)
        for u, v in itertools.combinations(range(1, n + 1), 2)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_graphs(n: int, count: int, seed: int):
    """Seeded sample with densities spread over (0, 1)."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_graph(n, rng.random(), rng)


def flat_yes(h: ModelGraph, g: Graph) -> bool:
    """Independent ground truth: enumerate all 4^n labelings flat, accept
    one using all four labels and violating no constraint. Kept free of
    any package solver machinery on purpose."""
    if g.n < 4:
        return False
    # kind table over label indices: True = full, False = dotted, None = free
    idx = {l: i for i, l in enumerate(LABELS)}
    kind: list[list[bool | None]] = [[None] * 4 for _ in range(4)]
    for (x, y), k in h.edges:
        kind[idx[x]][idx[y]] = kind[idx[y]][idx[x]] = k is EdgeKind.FULL
    pairs = [
        (u - 1, v - 1, g.adjacent(u, v))
        for u, v in itertools.combinations(g.vertices(), 2)
    ]
    for labeling in itertools.product(range(4), repeat=g.n):
        if len(set(labeling)) != 4:
            continue
        for u, v, adjacent in pairs:
            want = kind[labeling[u]][labeling[v]]
            if want is not None and want != adjacent:
                break
        else:
            return True
    return False
