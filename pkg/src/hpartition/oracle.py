"""Ground-truth exponential solver: native guess-and-check semantics.

`oracle_solve` backtracks over label assignments, pruning any full/dotted
violation against already-assigned vertices and requiring all four classes
non-empty at the leaves. It is the correctness reference for the
polynomial solver, not a performance contender.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import LABELS, EdgeKind, Graph, ModelGraph, Partition, Quadruplet

DEFAULT_VERTEX_CAP = 20


class OracleCapExceeded(ValueError):
    """Instance too large for exhaustive search; raise the cap explicitly."""


def oracle_solve(
    h: ModelGraph, g: Graph, vertex_cap: int = DEFAULT_VERTEX_CAP
) -> Partition | None:
    """Return a partition satisfying every model constraint, or None.

    Vertices are assigned in descending-degree order (fail-fast); a branch
    is cut when fewer vertices remain than classes still empty.
    """
    if g.n > vertex_cap:
        raise OracleCapExceeded(
            f"n={g.n} exceeds cap {vertex_cap}; pass vertex_cap to override"
        )
    if g.n < 4:
        return None

    order = sorted(g.vertices(), key=lambda v: (-g.degree(v), v))
    adj = g.adj
    # per-label constraint masks: assigning v to label l is valid iff every
    # class full-adjacent to l lies inside adj[v] and every class
    # dotted-adjacent to l avoids adj[v]
    full_of = {l: tuple(h.full_nbrs[l]) for l in LABELS}
    dot_of = {l: tuple(h.dot_nbrs[l]) for l in LABELS}
    classes = {l: 0 for l in LABELS}  # bitmask per class

    def extend(i: int) -> bool:
        if i == len(order):
            return all(classes[l] for l in LABELS)
        remaining = len(order) - i
        empty = sum(1 for l in LABELS if not classes[l])
        if remaining < empty:
            return False
        v = order[i]
        row = adj[v]
        for l in LABELS:
            ok = True
            for q in full_of[l]:
                if classes[q] & ~row:
                    ok = False
                    break
            if ok:
                for q in dot_of[l]:
                    if classes[q] & row:
                        ok = False
                        break
            if ok:
                classes[l] |= 1 << v
                if extend(i + 1):
                    return True
                classes[l] &= ~(1 << v)
        return False

    if not extend(0):
        return None
    return Partition(
        classes={
            l: frozenset(v for v in g.vertices() if classes[l] >> v & 1)
            for l in LABELS
        }
    )


@dataclass(frozen=True)
class NaiveState:
    """Naive bottom-up evaluation state for one base: assigned labels plus
    the per-vertex impossible sets, recomputed from scratch each round."""

    assigned: dict[int, str]
    impossible: dict[int, frozenset[str]]
    rejected: bool


def oracle_possible_sets(
    h: ModelGraph, g: Graph, base: Quadruplet
) -> dict[int, frozenset[str]]:
    """Definition-level fixpoint of the impossibility rules for one base.

    Recomputes every (vertex, label) impossibility from scratch each round
    and applies the forced-singleton rule until nothing changes. No
    incremental bookkeeping: this is the independent check for the
    solver's propagation. Returns the possible set of every non-base
    vertex (assigned vertices show their singleton).
    """
    state = evaluate_naive(h, g, base)
    out: dict[int, frozenset[str]] = {}
    for v in g.vertices():
        if v in base:
            continue
        out[v] = frozenset(LABELS) - state.impossible[v]
    return out


def evaluate_naive(h: ModelGraph, g: Graph, base: Quadruplet) -> NaiveState:
    assigned = dict(zip(base, LABELS))
    non_base = [v for v in g.vertices() if v not in base]
    impossible: dict[int, set[str]] = {v: set() for v in non_base}

    def imp(v: int, p: str) -> bool:
        for (x, y), kind in h.edges:
            for (pp, q) in ((x, y), (y, x)):
                if pp != p:
                    continue
                for w, lab in assigned.items():
                    if lab != q:
                        continue
                    adjacent = g.adjacent(v, w) if v != w else False
                    if kind is EdgeKind.FULL and not adjacent:
                        return True
                    if kind is EdgeKind.DOTTED and adjacent:
                        return True
        return False

    rejected = False
    changed = True
    while changed and not rejected:
        changed = False
        for v in non_base:
            new = {p for p in LABELS if imp(v, p)}
            if new != impossible[v]:
                impossible[v] = new
                changed = True
            if len(new) == 4:
                rejected = True
        if rejected:
            break
        for v in non_base:
            if v in assigned:
                continue
            possible = [p for p in LABELS if p not in impossible[v]]
            if len(possible) == 1:
                assigned[v] = possible[0]
                changed = True
    return NaiveState(
        assigned=assigned,
        impossible={v: frozenset(s) for v, s in impossible.items()},
        rejected=rejected,
    )
