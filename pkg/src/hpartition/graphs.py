"""Core data types: model graphs, input graphs, partitions, file formats.

Vertices of an input graph are the dense integers 1..n. Model graphs have
the four labels a, b, c, d; every labeled pair is unconstrained, "full"
(complete adjacency required between the two classes) or "dotted" (complete
nonadjacency required).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

LABELS: tuple[str, str, str, str] = ("a", "b", "c", "d")
LABEL_SET: frozenset[str] = frozenset(LABELS)

Quadruplet = tuple[int, int, int, int]


class ParseError(ValueError):
    """Malformed graph/model file; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EdgeKind(enum.Enum):
    FULL = "full"
    DOTTED = "dotted"


class Strategy(enum.Enum):
    """Which finishing rule the solver applies after propagation."""

    GENERIC = "generic"
    TWIN_LABELS = "twin-labels"
    PAIR_LOCK = "pair-lock"
    ISOLATED_SHORTCUT = "isolated-shortcut"
    ORACLE_ONLY = "oracle-only"


def _pair(x: str, y: str) -> tuple[str, str]:
    if x == y or x not in LABEL_SET or y not in LABEL_SET:
        raise ValueError(f"not a pair of distinct labels: {x!r}, {y!r}")
    return (x, y) if x < y else (y, x)


@dataclass(frozen=True)
class ModelGraph:
    """A 4-vertex constraint template with at most one kind per label pair."""

    name: str
    edges: tuple[tuple[tuple[str, str], EdgeKind], ...]
    strategy_hint: Strategy | None = None
    # label -> labels reached by a full / dotted edge, derived in __post_init__
    full_nbrs: Mapping[str, frozenset[str]] = field(
        init=False, compare=False, repr=False
    )
    dot_nbrs: Mapping[str, frozenset[str]] = field(
        init=False, compare=False, repr=False
    )

    def __post_init__(self):
        seen: dict[tuple[str, str], EdgeKind] = {}
        for pair, kind in self.edges:
            canon = _pair(*pair)
            if canon in seen and seen[canon] is not kind:
                raise ValueError(f"pair {canon} carries both full and dotted")
            seen[canon] = kind
        full = {l: set() for l in LABELS}
        dot = {l: set() for l in LABELS}
        for (x, y), kind in seen.items():
            nbrs = full if kind is EdgeKind.FULL else dot
            nbrs[x].add(y)
            nbrs[y].add(x)
        object.__setattr__(
            self, "full_nbrs", {l: frozenset(s) for l, s in full.items()}
        )
        object.__setattr__(
            self, "dot_nbrs", {l: frozenset(s) for l, s in dot.items()}
        )

    @classmethod
    def from_pairs(
        cls,
        name: str,
        full: Iterable[tuple[str, str]] = (),
        dotted: Iterable[tuple[str, str]] = (),
        strategy_hint: Strategy | None = None,
    ) -> "ModelGraph":
        edges = [(_pair(*p), EdgeKind.FULL) for p in full]
        edges += [(_pair(*p), EdgeKind.DOTTED) for p in dotted]
        edges.sort(key=lambda e: e[0])
        return cls(name=name, edges=tuple(edges), strategy_hint=strategy_hint)

    def edge_kind(self, x: str, y: str) -> EdgeKind | None:
        canon = _pair(x, y)
        for pair, kind in self.edges:
            if pair == canon:
                return kind
        return None

    @property
    def full_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(p for p, k in self.edges if k is EdgeKind.FULL)

    @property
    def dotted_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(p for p, k in self.edges if k is EdgeKind.DOTTED)


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]
    # adj[v] is a bitmask of v's neighbours (bit u set iff u adjacent to v)
    adj: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be >= 0")
        rows = [0] * (self.n + 1)
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
            if u == v:
                raise ValueError(f"loop edge ({u},{u})")
            if u > v:
                raise ValueError(f"edge ({u},{v}) not normalized (u < v required)")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "adj", tuple(rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        canon = frozenset((u, v) if u < v else (v, u) for u, v in edges)
        return cls(n=n, edges=canon)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def relabeled(self, perm: Mapping[int, int]) -> "Graph":
        """Apply a vertex permutation; perm maps old ids to new ids."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))


@dataclass(frozen=True)
class Partition:
    """Assignment of every vertex to one of the four classes."""

    classes: dict[str, frozenset[int]]

    def __post_init__(self):
        if set(self.classes) != LABEL_SET:
            raise ValueError("partition must map exactly the labels a,b,c,d")

    @classmethod
    def from_classes(cls, **kw: Iterable[int]) -> "Partition":
        classes = {l: frozenset(kw.get(l, ())) for l in LABELS}
        return cls(classes=classes)

    def vertices(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for vs in self.classes.values():
            out |= vs
        return out

    def label_of(self, v: int) -> str | None:
        for l, vs in self.classes.items():
            if v in vs:
                return l
        return None


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the graph file format: "p <n>" then "e <u> <v>" lines.

    '#' lines are comments. Ids are 1-based; loops and out-of-range ids are
    rejected; duplicate edges (in either orientation) collapse.
    """
    n: int | None = None
    edges: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError(line_no, "duplicate 'p' line")
            if len(parts) != 2:
                raise ParseError(line_no, "expected 'p <n>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(line_no, f"bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise ParseError(line_no, "vertex count must be >= 0")
        elif parts[0] == "e":
            if n is None:
                raise ParseError(line_no, "'e' line before 'p' line")
            if len(parts) != 3:
                raise ParseError(line_no, "expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(line_no, "edge endpoints must be integers") from None
            if u == v:
                raise ParseError(line_no, f"loop edge {u} {v}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(line_no, f"vertex id out of range 1..{n}")
            edges.add((u, v) if u < v else (v, u))
        else:
            raise ParseError(line_no, f"unknown directive {parts[0]!r}")
    if n is None:
        raise ParseError(1, "missing 'p <n>' line")
    return Graph(n=n, edges=frozenset(edges))


def serialize_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p {g.n}")
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_model(text: str, name: str = "model") -> ModelGraph:
    """Parse the model file format: "full <x> <y>" / "dotted <x> <y>" lines.

    An optional "strategy <name>" line attaches a solver strategy hint
    (catalog entries use it). A pair listed with both kinds is an error.
    """
    kinds: dict[tuple[str, str], EdgeKind] = {}
    hint: Strategy | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] in ("full", "dotted"):
            if len(parts) != 3:
                raise ParseError(line_no, f"expected '{parts[0]} <x> <y>'")
            x, y = parts[1], parts[2]
            if x not in LABEL_SET or y not in LABEL_SET:
                raise ParseError(line_no, f"unknown label in {x!r} {y!r}")
            if x == y:
                raise ParseError(line_no, f"model edge needs distinct labels, got {x!r}")
            pair = _pair(x, y)
            kind = EdgeKind.FULL if parts[0] == "full" else EdgeKind.DOTTED
            if pair in kinds and kinds[pair] is not kind:
                raise ParseError(line_no, f"pair {pair} listed with conflicting kinds")
            kinds[pair] = kind
        elif parts[0] == "strategy":
            if len(parts) != 2:
                raise ParseError(line_no, "expected 'strategy <name>'")
            try:
                hint = Strategy(parts[1])
            except ValueError:
                raise ParseError(line_no, f"unknown strategy {parts[1]!r}") from None
        else:
            raise ParseError(line_no, f"unknown directive {parts[0]!r}")
    edges = tuple(sorted(kinds.items()))
    return ModelGraph(name=name, edges=edges, strategy_hint=hint)


def serialize_model(h: ModelGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.extend(f"{kind.value} {x} {y}" for (x, y), kind in h.edges)
    if h.strategy_hint is not None:
        lines.append(f"strategy {h.strategy_hint.value}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Validity checks
# ---------------------------------------------------------------------------

def verify_partition(h: ModelGraph, g: Graph, p: Partition) -> bool:
    """Check that p is a solution: four non-empty classes covering V(G),
    full pairs completely adjacent, dotted pairs completely nonadjacent.

    Raises ValueError when p is not a partition of V(G) at all.
    """
    seen: set[int] = set()
    for vs in p.classes.values():
        if vs & seen:
            raise ValueError("partition classes overlap")
        seen |= vs
    if seen != set(g.vertices()):
        raise ValueError("partition does not cover exactly V(G)")
    if any(not p.classes[l] for l in LABELS):
        return False
    for (x, y), kind in h.edges:
        for u in p.classes[x]:
            row = g.adj[u]
            for v in p.classes[y]:
                if kind is EdgeKind.FULL:
                    if not (row >> v) & 1:
                        return False
                else:
                    if (row >> v) & 1:
                        return False
    return True


def is_h_isomorphic(h: ModelGraph, g: Graph, quad: Quadruplet) -> bool:
    """Does labeling quad = (x_a, x_b, x_c, x_d) satisfy h on the induced
    subgraph? The quadruplet must consist of four distinct in-range vertices."""
    if len(set(quad)) != 4:
        raise ValueError(f"quadruplet {quad} has repeated vertices")
    if any(not (1 <= v <= g.n) for v in quad):
        raise ValueError(f"quadruplet {quad} out of range 1..{g.n}")
    by_label = dict(zip(LABELS, quad))
    for (x, y), kind in h.edges:
        adjacent = g.adjacent(by_label[x], by_label[y])
        if (kind is EdgeKind.FULL) != adjacent:
            return False
    return True
