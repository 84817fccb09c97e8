"""Polynomial-time H-partition decision: base enumeration, propagation to
fixpoint, and the strategy-specific finishing rules.

A base is an ordered quadruplet of distinct vertices whose induced subgraph
satisfies the model under the canonical labeling. For each base we track,
per label, the set of vertices for which that label is still possible
(as vertex bitmasks), remove labels forced out by full/dotted constraints
against labeled vertices, and assign forced labels until nothing changes.
A base certifies "yes" when propagation never empties a possible set and
the strategy's finishing rule accepts the fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import analysis
from .graphs import (
    LABELS,
    EdgeKind,
    Graph,
    ModelGraph,
    Partition,
    Quadruplet,
    Strategy,
    is_h_isomorphic,
)
from .oracle import oracle_solve

LabelSet = frozenset[str]


@dataclass(frozen=True)
class PartialLabeling:
    """Labels fixed so far for one base; labeled vertices are never relabeled."""

    base: Quadruplet
    assigned: dict[int, str]
    done: frozenset[int]

    def __post_init__(self):
        for v, l in zip(self.base, LABELS):
            if self.assigned.get(v) != l:
                raise ValueError("base vertices must carry labels a,b,c,d in order")
        if not set(self.assigned) <= self.done:
            raise ValueError("assigned vertices must be done")


@dataclass(frozen=True)
class Rejected:
    """Propagation emptied the possible set of `vertex`; base cannot extend."""

    base: Quadruplet
    vertex: int


@dataclass(frozen=True)
class Fixpoint:
    labeling: PartialLabeling
    possible: dict[int, LabelSet]  # unlabeled vertices only


PropagationOutcome = Rejected | Fixpoint


@dataclass(frozen=True)
class Decision:
    yes: bool
    strategy: Strategy


@dataclass
class PropagationAudit:
    """Collects fixpoint statistics for the propagation-invariant check:
    every possible set of size >= 2 at a fixpoint must be neither
    conflicting nor non-maximal. When an audit is attached, solve() visits
    every base instead of stopping at the first success."""

    fixpoints: int = 0
    sets_checked: int = 0
    violations: list[tuple[str, Quadruplet, int, LabelSet]] = field(
        default_factory=list
    )

    def check(self, h: ModelGraph, out: Fixpoint) -> None:
        self.fixpoints += 1
        for v, labels in out.possible.items():
            if len(labels) < 2:
                continue
            self.sets_checked += 1
            if analysis.is_conflicting(h, labels) or analysis.is_non_maximal(
                h, labels
            ):
                self.violations.append((h.name, out.labeling.base, v, labels))


def impossible_labels(
    h: ModelGraph, g: Graph, pl: PartialLabeling, v: int
) -> LabelSet:
    """Labels ruled out for unlabeled v by the labels fixed in pl: a full
    model edge (p,q) with a q-labeled vertex nonadjacent to v kills p, a
    dotted edge (p,q) with a q-labeled vertex adjacent to v kills p."""
    if v in pl.assigned:
        raise ValueError(f"vertex {v} is already labeled")
    out: set[str] = set()
    for p in LABELS:
        hit = False
        for q in h.full_nbrs[p]:
            for w, lab in pl.assigned.items():
                if lab == q and not g.adjacent(v, w):
                    hit = True
                    break
            if hit:
                break
        if not hit:
            for q in h.dot_nbrs[p]:
                for w, lab in pl.assigned.items():
                    if lab == q and g.adjacent(v, w):
                        hit = True
                        break
                if hit:
                    break
        if hit:
            out.add(p)
    return frozenset(out)


def _label_bit(l: str) -> int:
    return LABELS.index(l)


class _Engine:
    """Bitmask propagation for one (model, graph) pair."""

    __slots__ = ("h", "g", "adj", "universe", "full_idx", "dot_idx", "kind")

    def __init__(self, h: ModelGraph, g: Graph):
        self.h = h
        self.g = g
        self.adj = g.adj
        self.universe = (1 << (g.n + 1)) - 2
        # per label index: indices of labels reached by full / dotted edges
        self.full_idx = [
            tuple(_label_bit(q) for q in h.full_nbrs[l]) for l in LABELS
        ]
        self.dot_idx = [
            tuple(_label_bit(q) for q in h.dot_nbrs[l]) for l in LABELS
        ]
        # kind[i][j]: EdgeKind or None between LABELS[i] and LABELS[j]
        self.kind = [
            [h.edge_kind(x, y) if x != y else None for y in LABELS]
            for x in LABELS
        ]

    def initial_possible(self, base: Quadruplet) -> list[int]:
        """Per-label bitmask of non-base vertices consistent with the base."""
        adj = self.adj
        base_bits = 0
        for v in base:
            base_bits |= 1 << v
        nonbase = self.universe & ~base_bits
        poss = []
        for i in range(4):
            mask = nonbase
            for j in self.full_idx[i]:
                mask &= adj[base[j]]
            for j in self.dot_idx[i]:
                mask &= ~adj[base[j]]
            poss.append(mask & nonbase)
        return poss

    def propagate(self, base: Quadruplet, twin_rules: bool) -> PropagationOutcome:
        adj = self.adj
        base_bits = 0
        for v in base:
            base_bits |= 1 << v
        nonbase = self.universe & ~base_bits
        poss = self.initial_possible(base)
        assigned_mask = 0
        assigned: dict[int, str] = dict(zip(base, LABELS))

        while True:
            pa, pb, pc, pd = poss
            dead = nonbase & ~(pa | pb | pc | pd)
            if dead:
                return Rejected(base=base, vertex=(dead & -dead).bit_length() - 1)
            if twin_rules:
                # possible set within {a,c} forces a; within {b,d} forces b
                todo = [
                    (0, nonbase & ~pb & ~pd & ~assigned_mask),
                    (1, nonbase & ~pa & ~pc & ~assigned_mask),
                ]
            else:
                ge2 = (
                    (pa & pb) | (pa & pc) | (pa & pd)
                    | (pb & pc) | (pb & pd) | (pc & pd)
                )
                forced = (pa | pb | pc | pd) & ~ge2 & ~assigned_mask
                todo = [(i, forced & poss[i]) for i in range(4)]
            if not any(mask for _, mask in todo):
                possible = {}
                rest = nonbase & ~assigned_mask
                while rest:
                    bit = rest & -rest
                    v = bit.bit_length() - 1
                    rest ^= bit
                    possible[v] = frozenset(
                        LABELS[i] for i in range(4) if poss[i] & bit
                    )
                labeling = PartialLabeling(
                    base=base,
                    assigned=assigned,
                    done=frozenset(assigned),
                )
                return Fixpoint(labeling=labeling, possible=possible)
            for i, mask in todo:
                label = LABELS[i]
                while mask:
                    bit = mask & -mask
                    v = bit.bit_length() - 1
                    mask ^= bit
                    assigned[v] = label
                    assigned_mask |= bit
                    row = adj[v]
                    for j in self.full_idx[i]:
                        poss[j] &= row
                    for j in self.dot_idx[i]:
                        poss[j] &= ~row

    def iter_bases(self):
        """All H-isomorphic ordered quadruplets, lexicographically."""
        adj = self.adj
        kind = self.kind
        universe = self.universe

        def constrain(mask: int, row: int, k: EdgeKind | None) -> int:
            if k is EdgeKind.FULL:
                return mask & row
            if k is EdgeKind.DOTTED:
                return mask & ~row
            return mask

        for xa in _bits(universe):
            ba = 1 << xa
            cb = constrain(universe & ~ba, adj[xa], kind[0][1])
            for xb in _bits(cb):
                bb = ba | (1 << xb)
                cc = constrain(
                    constrain(universe & ~bb, adj[xa], kind[0][2]),
                    adj[xb],
                    kind[1][2],
                )
                for xc in _bits(cc):
                    bc = bb | (1 << xc)
                    cd = constrain(
                        constrain(
                            constrain(universe & ~bc, adj[xa], kind[0][3]),
                            adj[xb],
                            kind[1][3],
                        ),
                        adj[xc],
                        kind[2][3],
                    )
                    for xd in _bits(cd):
                        yield (xa, xb, xc, xd)

    def iter_surviving_bases(self):
        """H-isomorphic bases that survive round zero, i.e. no non-base
        vertex loses all four labels against the base labels alone.

        Prunes whole prefixes: relative to three placed base vertices, a
        vertex with an empty possible set stays empty for every choice of
        the fourth (labeled vertices only add impossibilities), so it must
        itself become the fourth base vertex or the prefix is hopeless.
        """
        adj = self.adj
        kind = self.kind
        universe = self.universe
        full_idx, dot_idx = self.full_idx, self.dot_idx
        d_kind = [kind[i][3] for i in range(4)]

        def constrain(mask: int, row: int, k: EdgeKind | None) -> int:
            if k is EdgeKind.FULL:
                return mask & row
            if k is EdgeKind.DOTTED:
                return mask & ~row
            return mask

        for xa in _bits(universe):
            ba = 1 << xa
            cb = constrain(universe & ~ba, adj[xa], kind[0][1])
            for xb in _bits(cb):
                bb = ba | (1 << xb)
                cc = constrain(
                    constrain(universe & ~bb, adj[xa], kind[0][2]),
                    adj[xb],
                    kind[1][2],
                )
                for xc in _bits(cc):
                    placed = bb | (1 << xc)
                    cand = constrain(
                        constrain(
                            constrain(universe & ~placed, adj[xa], kind[0][3]),
                            adj[xb],
                            kind[1][3],
                        ),
                        adj[xc],
                        kind[2][3],
                    )
                    if not cand:
                        continue
                    rest = universe & ~placed
                    base3 = (xa, xb, xc)
                    prefix = []
                    for i in range(4):
                        mask = rest
                        for j in full_idx[i]:
                            if j < 3:
                                mask &= adj[base3[j]]
                        for j in dot_idx[i]:
                            if j < 3:
                                mask &= ~adj[base3[j]]
                        prefix.append(mask)
                    pra, prb, prc, prd = prefix
                    dead3 = rest & ~(pra | prb | prc | prd)
                    if dead3:
                        if dead3 & ~cand or dead3 & (dead3 - 1):
                            continue
                        cand = dead3  # the lone doomed vertex must be x_d
                    for xd in _bits(cand):
                        bd = 1 << xd
                        row = adj[xd]
                        pa, pb, pc, pd = pra, prb, prc, prd
                        k = d_kind[0]
                        if k is not None:
                            pa = pa & row if k is EdgeKind.FULL else pa & ~row
                        k = d_kind[1]
                        if k is not None:
                            pb = pb & row if k is EdgeKind.FULL else pb & ~row
                        k = d_kind[2]
                        if k is not None:
                            pc = pc & row if k is EdgeKind.FULL else pc & ~row
                        k = d_kind[3]
                        if k is not None:
                            pd = pd & row if k is EdgeKind.FULL else pd & ~row
                        if rest & ~bd & ~(pa | pb | pc | pd):
                            continue
                        yield (xa, xb, xc, xd)


def _bits(mask: int):
    while mask:
        bit = mask & -mask
        yield bit.bit_length() - 1
        mask ^= bit


def propagate(
    h: ModelGraph,
    g: Graph,
    base: Quadruplet,
    twin_rules: bool = False,
    audit: PropagationAudit | None = None,
) -> PropagationOutcome:
    """Run propagation for one base. The caller guarantees the base is
    H-isomorphic; anything else is a contract violation."""
    if not is_h_isomorphic(h, g, base):
        raise ValueError(f"base {base} is not H-isomorphic")
    out = _Engine(h, g).propagate(base, twin_rules=twin_rules)
    if audit is not None and isinstance(out, Fixpoint):
        audit.check(h, out)
    return out


def finish_generic(out: PropagationOutcome) -> bool:
    """Generic strategy: a surviving fixpoint certifies yes (every remaining
    vertex keeps at least two possible labels)."""
    if isinstance(out, Rejected):
        raise ValueError("finish_generic expects a fixpoint")
    return True


def finish_twin(
    h: ModelGraph,
    g: Graph,
    out: Fixpoint,
    audit: PropagationAudit | None = None,
) -> bool:
    """Twin-label strategy: re-run propagation with the forced-singleton
    rule replaced by the two twin rules (possible within {a,c} assigns a,
    within {b,d} assigns b). True iff no possible set empties."""
    if isinstance(out, Rejected):
        raise ValueError("finish_twin expects a fixpoint")
    res = propagate(h, g, out.labeling.base, twin_rules=True, audit=audit)
    return isinstance(res, Fixpoint)


def finish_pairlock(h: ModelGraph, g: Graph, out: Fixpoint) -> bool:
    """Pair-lock strategy: keep propagated labels, give a to every vertex
    with a possible and b impossible, b to every vertex with b possible and
    a impossible, then verify every full/dotted constraint globally."""
    if isinstance(out, Rejected):
        raise ValueError("finish_pairlock expects a fixpoint")
    g_adj = g.adj
    labels = dict(out.labeling.assigned)
    for v, poss in out.possible.items():
        if "a" in poss and "b" not in poss:
            labels[v] = "a"
        elif "b" in poss and "a" not in poss:
            labels[v] = "b"
    classes = {l: 0 for l in LABELS}
    for v, l in labels.items():
        classes[l] |= 1 << v
    for (x, y), kind in h.edges:
        for p, q in ((x, y), (y, x)):
            mask = classes[p]
            other = classes[q]
            while mask:
                bit = mask & -mask
                u = bit.bit_length() - 1
                mask ^= bit
                if kind is EdgeKind.FULL:
                    if other & ~g_adj[u] & ~bit:
                        return False
                else:
                    if other & g_adj[u]:
                        return False
    return True


def solve(
    h: ModelGraph,
    g: Graph,
    strategy: Strategy | None = None,
    audit: PropagationAudit | None = None,
) -> Decision:
    """Decide whether g admits an H-partition.

    The strategy defaults to classify(h). With an audit attached, every
    H-isomorphic base is evaluated (no early exit) so that all propagation
    fixpoints get checked.
    """
    strat = strategy if strategy is not None else analysis.classify(h)
    if strat is Strategy.ORACLE_ONLY:
        witness = oracle_solve(h, g, vertex_cap=max(g.n, 20))
        return Decision(yes=witness is not None, strategy=strat)
    if g.n < 4:
        return Decision(yes=False, strategy=strat)
    engine = _Engine(h, g)
    if strat is Strategy.ISOLATED_SHORTCUT:
        for _ in engine.iter_bases():
            return Decision(yes=True, strategy=strat)
        return Decision(yes=False, strategy=strat)

    twin = strat is Strategy.TWIN_LABELS
    pairlock = strat is Strategy.PAIR_LOCK
    found = False
    for base in engine.iter_surviving_bases():
        out = engine.propagate(base, twin_rules=False)
        if isinstance(out, Rejected):
            continue
        if audit is not None:
            audit.check(h, out)
        if twin:
            ok = finish_twin(h, g, out, audit=audit)
        elif pairlock:
            ok = finish_pairlock(h, g, out)
        else:
            ok = finish_generic(out)
        if ok:
            if audit is None:
                return Decision(yes=True, strategy=strat)
            found = True
    return Decision(yes=found, strategy=strat)


def has_h_isomorphic_base(h: ModelGraph, g: Graph) -> bool:
    if g.n < 4:
        return False
    for _ in _Engine(h, g).iter_bases():
        return True
    return False


def solve_isolated(h: ModelGraph, g: Graph) -> bool:
    """For models with an isolated label, the instance is a yes exactly
    when some quadruplet of distinct vertices is H-isomorphic (everything
    else takes the isolated label)."""
    if not analysis.isolated_labels(h):
        raise ValueError(f"model {h.name} has no isolated label")
    return has_h_isomorphic_base(h, g)


def certificate(
    h: ModelGraph, g: Graph, strategy: Strategy | None = None
) -> Partition | None:
    """Extract a witness partition, or None when no H-partition exists.

    Bases are tried in lexicographic order; within a base, completion runs
    constrained backtracking over the propagation possible sets, so the
    witness is deterministic for a fixed input.
    """
    strat = strategy if strategy is not None else analysis.classify(h)
    if strat is Strategy.ORACLE_ONLY:
        return oracle_solve(h, g, vertex_cap=max(g.n, 20))
    if g.n < 4:
        return None
    engine = _Engine(h, g)
    if strat is Strategy.ISOLATED_SHORTCUT:
        spare = min(analysis.isolated_labels(h))
        for base in engine.iter_bases():
            labels = dict(zip(base, LABELS))
            for v in g.vertices():
                if v not in labels:
                    labels[v] = spare
            return _to_partition(g, labels)
        return None
    for base in engine.iter_bases():
        out = engine.propagate(base, twin_rules=False)
        if isinstance(out, Rejected):
            continue
        labels = _complete(h, g, out)
        if labels is not None:
            return _to_partition(g, labels)
    return None


def _complete(h: ModelGraph, g: Graph, out: Fixpoint) -> dict[int, str] | None:
    """Backtracking completion of a fixpoint, most constrained vertex first."""
    labels = dict(out.labeling.assigned)
    classes = {l: 0 for l in LABELS}
    for v, l in labels.items():
        classes[l] |= 1 << v
    order = sorted(out.possible, key=lambda v: (len(out.possible[v]), v))
    adj = g.adj
    full_of = {l: tuple(h.full_nbrs[l]) for l in LABELS}
    dot_of = {l: tuple(h.dot_nbrs[l]) for l in LABELS}

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        row = adj[v]
        bit = 1 << v
        for l in sorted(out.possible[v]):
            ok = all((classes[q] & ~row & ~bit) == 0 for q in full_of[l]) and all(
                (classes[q] & row) == 0 for q in dot_of[l]
            )
            if not ok:
                continue
            classes[l] |= bit
            labels[v] = l
            if assign(i + 1):
                return True
            classes[l] &= ~bit
            del labels[v]
        return False

    return labels if assign(0) else None


def _to_partition(g: Graph, labels: dict[int, str]) -> Partition:
    return Partition(
        classes={
            l: frozenset(v for v in g.vertices() if labels.get(v) == l)
            for l in LABELS
        }
    )
