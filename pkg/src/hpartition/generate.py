"""Instance generators: certified yes-instances via the minimum/maximum
edge-count sandwich, trivial and randomized no-instances, and the
yes/no-proportion experiment over random graphs.

All randomness flows through numpy's PCG64 so that a 64-bit seed gives
the same instances on every platform. Independent samples derive their
own generator from (seed, index), which keeps results stable under any
parallel evaluation order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graphs import LABELS, Graph, ModelGraph, Partition
from .solver import Decision, has_h_isomorphic_base, solve

ClassSizes = tuple[int, int, int, int]

DENSITY_MEAN = 0.5
DENSITY_SIGMA = 0.25  # "N(0.5, 0.25)" read as a standard deviation


class NoSuchInstanceError(ValueError):
    """No class sizes admit the requested vertex/edge combination."""

    def __init__(self, h_name: str, n: int, m: int):
        super().__init__(
            f"there is no such yes-instance (model {h_name}, n={n}, m={m})"
        )


class GivenUpError(RuntimeError):
    """Randomized no-instance search exhausted its tries."""


def _check_sizes(sizes: ClassSizes) -> None:
    if len(sizes) != 4 or any(s < 1 for s in sizes):
        raise ValueError(f"class sizes must be four positive integers, got {sizes}")


def m_min(h: ModelGraph, sizes: ClassSizes) -> int:
    """Fewest edges of any graph admitting a solution with these class
    sizes: one block of complete adjacency per full model edge."""
    _check_sizes(sizes)
    count = dict(zip(LABELS, sizes))
    return sum(count[x] * count[y] for x, y in h.full_pairs)


def m_max(h: ModelGraph, sizes: ClassSizes) -> int:
    """Most edges of any such graph: the complete graph minus one block of
    forced nonadjacency per dotted model edge."""
    _check_sizes(sizes)
    count = dict(zip(LABELS, sizes))
    n = sum(sizes)
    return n * (n - 1) // 2 - sum(count[x] * count[y] for x, y in h.dotted_pairs)


def _blocks(sizes: ClassSizes) -> dict[str, range]:
    out: dict[str, range] = {}
    start = 1
    for l, size in zip(LABELS, sizes):
        out[l] = range(start, start + size)
        start += size
    return out


def _block_partition(sizes: ClassSizes) -> Partition:
    blocks = _blocks(sizes)
    return Partition(classes={l: frozenset(blocks[l]) for l in LABELS})


def build_g_min(h: ModelGraph, sizes: ClassSizes) -> tuple[Graph, Partition]:
    """The minimum graph: classes laid out as consecutive blocks, with an
    edge u-v exactly when their labels form a full model edge."""
    _check_sizes(sizes)
    blocks = _blocks(sizes)
    edges = [
        (u, v)
        for x, y in h.full_pairs
        for u in blocks[x]
        for v in blocks[y]
    ]
    return Graph.from_edges(sum(sizes), edges), _block_partition(sizes)


def build_g_max(h: ModelGraph, sizes: ClassSizes) -> tuple[Graph, Partition]:
    """The maximum graph: complete graph minus every pair whose labels form
    a dotted model edge."""
    _check_sizes(sizes)
    n = sum(sizes)
    blocks = _blocks(sizes)
    forbidden = {
        (u, v) if u < v else (v, u)
        for x, y in h.dotted_pairs
        for u in blocks[x]
        for v in blocks[y]
    }
    edges = [
        p for p in itertools.combinations(range(1, n + 1), 2) if p not in forbidden
    ]
    return Graph.from_edges(n, edges), _block_partition(sizes)


def feasible_sizes(h: ModelGraph, n: int, m: int) -> Iterator[ClassSizes]:
    """Class-size quadruplets (lexicographic) whose edge-count window
    contains m."""
    for a in range(1, n - 2):
        for b in range(1, n - a - 1):
            for c in range(1, n - a - b):
                d = n - a - b - c
                sizes = (a, b, c, d)
                if m_min(h, sizes) <= m <= m_max(h, sizes):
                    yield sizes


def rng_for(seed: int, *index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, *index))))


def gen_yes(
    h: ModelGraph,
    n: int,
    m: int,
    seed: int,
    random_sizes: bool = False,
) -> tuple[Graph, Partition]:
    """Build a certified yes-instance with n vertices and m edges.

    Starts from the minimum graph of the first feasible class-size
    quadruplet (or a seeded uniform choice among them with random_sizes)
    and adds uniformly chosen edges that violate no dotted constraint
    until m is reached. Raises NoSuchInstanceError if no quadruplet
    qualifies.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if not 0 <= m <= n * (n - 1) // 2:
        raise ValueError(f"need 0 <= m <= n(n-1)/2, got m={m}")
    rng = rng_for(seed)
    if random_sizes:
        candidates = list(feasible_sizes(h, n, m))
        if not candidates:
            raise NoSuchInstanceError(h.name, n, m)
        sizes = candidates[int(rng.integers(len(candidates)))]
    else:
        sizes = next(feasible_sizes(h, n, m), None)
        if sizes is None:
            raise NoSuchInstanceError(h.name, n, m)
    g_min, partition = build_g_min(h, sizes)
    g_max, _ = build_g_max(h, sizes)
    admissible = sorted(g_max.edges - g_min.edges)
    extra = m - g_min.m
    picked = rng.permutation(len(admissible))[:extra]
    edges = set(g_min.edges)
    edges.update(admissible[i] for i in picked)
    return Graph(n=n, edges=frozenset(edges)), partition


def gen_no_trivial(h: ModelGraph, n: int) -> Graph:
    """The guaranteed no-instance: empty graph when the model has a full
    edge (the constraint can never be met), complete graph when it only
    has dotted edges. The edgeless model admits no no-instance at all."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if h.full_pairs:
        return Graph(n=n, edges=frozenset())
    if h.dotted_pairs:
        return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))
    raise ValueError(
        f"model {h.name} has no edges: every graph is a yes-instance"
    )


def sample_density(rng: np.random.Generator, sigma: float = DENSITY_SIGMA) -> float:
    """Edge density drawn from a normal around 1/2, clamped into [0, 1]."""
    return float(min(1.0, max(0.0, rng.normal(DENSITY_MEAN, sigma))))


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Include each of the n(n-1)/2 pairs independently with probability p."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    mask = rng.random(len(pairs)) < p
    return Graph.from_edges(n, (pair for pair, hit in zip(pairs, mask) if hit))


def gen_no_random(
    h: ModelGraph,
    n: int,
    seed: int,
    max_tries: int = 100,
    require_base: bool = False,
) -> Graph:
    """Draw random graphs (density resampled per graph) until one is
    decided "no"; with require_base, additionally insist the graph contains
    an H-isomorphic quadruplet so the solver's recursive part is exercised.
    Raises GivenUpError after max_tries graphs.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if not h.full_pairs and not h.dotted_pairs:
        raise ValueError(
            f"model {h.name} has no edges: every graph is a yes-instance"
        )
    for i in range(max_tries):
        rng = rng_for(seed, i)
        g = random_graph(n, sample_density(rng), rng)
        if require_base and not has_h_isomorphic_base(h, g):
            continue
        if not solve(h, g).yes:
            return g
    raise GivenUpError(
        f"no no-instance for {h.name} with n={n} in {max_tries} tries"
    )


@dataclass(frozen=True)
class SampleResult:
    index: int
    density: float
    graph: Graph
    decision: Decision


def iter_proportion_samples(
    h: ModelGraph, n: int, samples: int, seed: int
) -> Iterator[SampleResult]:
    for i in range(samples):
        rng = rng_for(seed, i)
        density = sample_density(rng)
        g = random_graph(n, density, rng)
        yield SampleResult(index=i, density=density, graph=g, decision=solve(h, g))


def proportion_experiment(
    h: ModelGraph, n: int, samples: int, seed: int
) -> tuple[int, int]:
    """Count solver decisions over `samples` random graphs; returns
    (yes_count, no_count). Deterministic for a fixed seed."""
    if samples < 1:
        raise ValueError("need samples >= 1")
    yes = sum(1 for s in iter_proportion_samples(h, n, samples, seed) if s.decision.yes)
    return yes, samples - yes
