"""Label-list analysis over a model graph.

A list is a subset of {a,b,c,d}. Its full/dotted neighborhoods determine
whether it is conflicting (imposes an unsatisfiable constraint) or
non-maximal (a strict superset imposes the same constraint). These drive
the choice of solver strategy.
"""

from __future__ import annotations

from itertools import combinations

from .graphs import LABELS, ModelGraph, Strategy

LabelSet = frozenset[str]

EMPTY: LabelSet = frozenset()


def n_full(h: ModelGraph, labels: LabelSet) -> LabelSet:
    """Labels adjacent through a full edge to some member of `labels`."""
    out: set[str] = set()
    for l in labels:
        out |= h.full_nbrs[l]
    return frozenset(out)


def n_dot(h: ModelGraph, labels: LabelSet) -> LabelSet:
    """Labels adjacent through a dotted edge to some member of `labels`."""
    out: set[str] = set()
    for l in labels:
        out |= h.dot_nbrs[l]
    return frozenset(out)


def is_conflicting(h: ModelGraph, labels: LabelSet) -> bool:
    return bool(n_full(h, labels) & n_dot(h, labels))


def is_non_maximal(h: ModelGraph, labels: LabelSet) -> bool:
    """True iff some strict superset has identical full and dotted
    neighborhoods (and therefore imposes the same constraint)."""
    nf, nd = n_full(h, labels), n_dot(h, labels)
    rest = [l for l in LABELS if l not in labels]
    for k in range(1, len(rest) + 1):
        for extra in combinations(rest, k):
            sup = labels | frozenset(extra)
            if n_full(h, sup) == nf and n_dot(h, sup) == nd:
                return True
    return False


def isolated_labels(h: ModelGraph) -> LabelSet:
    """Labels with no incident model edge of either kind."""
    return frozenset(
        l for l in LABELS if not h.full_nbrs[l] and not h.dot_nbrs[l]
    )


def twin_classes(h: ModelGraph) -> frozenset[LabelSet]:
    """Partition of the labels into groups with identical singleton
    neighborhoods (identical constraints)."""
    by_sig: dict[tuple[LabelSet, LabelSet], set[str]] = {}
    for l in LABELS:
        by_sig.setdefault((h.full_nbrs[l], h.dot_nbrs[l]), set()).add(l)
    return frozenset(frozenset(group) for group in by_sig.values())

_TWIN_PATTERN = frozenset({frozenset("ac"), frozenset("bd")})


def classify(h: ModelGraph) -> Strategy:
    """Pick the solver strategy for a model.

    Isolated labels make the problem equivalent to base existence. A
    catalog hint wins next (pair-lock is only ever hinted, never inferred).
    The twin replacement rules apply when a and c, and likewise b and d,
    impose identical constraints. Everything else runs the generic loop.
    """
    if isolated_labels(h):
        return Strategy.ISOLATED_SHORTCUT
    if h.strategy_hint is not None:
        return h.strategy_hint
    if twin_classes(h) == _TWIN_PATTERN:
        return Strategy.TWIN_LABELS
    return Strategy.GENERIC
