"""Emit the guess-and-check and stratified-Datalog programs as text, plus
instance fact files, and lint Datalog stratification.

Normalizations applied to the published listings (deliberate deviations):
the instance stores one e/2 fact per undirected edge and two closure rules
define a symmetric adjacent/2, which the programs use wherever adjacency
is meant; vertex/1 is used throughout (never vert/1); distinct/4 is
defined by an explicit rule with the six pairwise inequalities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .graphs import Graph, ModelGraph, Strategy


class Dialect(enum.Enum):
    GUESS_CHECK = "guess-check"
    DATALOG_GENERAL = "datalog-general"
    DATALOG_TWIN = "datalog-twin"
    DATALOG_PAIR_LOCK = "datalog-pair-lock"
    DATALOG_NON_RECURSIVE = "datalog-non-recursive"


@dataclass(frozen=True)
class ProgramText:
    program: str
    dialect: Dialect


class NotApplicableError(ValueError):
    """Stratification is undefined for programs with choice rules."""


GUESS_CHECK_PROGRAM = """\
1 { placedIn(X,P) : partition(P) } 1 :- vertex(X).
filled(P) :- placedIn(X,P).
:- partition(P), not filled(P).
:- placedIn(X,P), placedIn(Y,Q), full(P,Q), not adjacent(X,Y).
:- placedIn(X,P), placedIn(Y,Q), dotted(P,Q), adjacent(X,Y).
"""

# variable position of each label inside base(X,Y,Z,T)
_POS = {"a": "X", "b": "Y", "c": "Z", "d": "T"}
_PAIRS = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]


def _base_rules() -> list[str]:
    ineqs = "X != Y, X != Z, X != T, Y != Z, Y != T, Z != T"
    rules = [
        "distinct(X,Y,Z,T) :- vertex(X), vertex(Y), vertex(Z), vertex(T), "
        + ineqs + ".",
        "base(X,Y,Z,T) :- distinct(X,Y,Z,T), not problematic_base(X,Y,Z,T).",
    ]
    for x, y in _PAIRS:
        u, v = _POS[x], _POS[y]
        others = ", ".join(
            f"vertex({w})" for w in ("X", "Y", "Z", "T") if w not in (u, v)
        )
        rules.append(
            f"problematic_base(X,Y,Z,T) :- dotted({x},{y}), "
            f"adjacent({u},{v}), {others}."
        )
        rules.append(
            f"problematic_base(X,Y,Z,T) :- full({x},{y}), "
            f"not adjacent({u},{v}), vertex({u}), vertex({v}), {others}."
        )
    return rules


_SEED_RULES = [
    "inPart(I,a,I,J,K,L) :- base(I,J,K,L).",
    "inPart(J,b,I,J,K,L) :- base(I,J,K,L).",
    "inPart(K,c,I,J,K,L) :- base(I,J,K,L).",
    "inPart(L,d,I,J,K,L) :- base(I,J,K,L).",
    "done(I,I,J,K,L) :- base(I,J,K,L).",
    "done(J,I,J,K,L) :- base(I,J,K,L).",
    "done(K,I,J,K,L) :- base(I,J,K,L).",
    "done(L,I,J,K,L) :- base(I,J,K,L).",
]

_IMP_RULES = [
    "imp(X,P,I,J,K,L) :- vertex(X), full_prob(X,P,I,J,K,L), not done(X,I,J,K,L).",
    "full_prob(X,P,I,J,K,L) :- full(P,Q), inPart(Y,Q,I,J,K,L), "
    "not adjacent(X,Y), vertex(X).",
    "imp(X,P,I,J,K,L) :- vertex(X), dot_prob(X,P,I,J,K,L), not done(X,I,J,K,L).",
    "dot_prob(X,P,I,J,K,L) :- dotted(P,Q), inPart(Y,Q,I,J,K,L), adjacent(X,Y).",
]

_SINGLETON_RULES = [
    "inPart(X,a,I,J,K,L) :- imp(X,b,I,J,K,L), imp(X,c,I,J,K,L), imp(X,d,I,J,K,L).",
    "inPart(X,b,I,J,K,L) :- imp(X,a,I,J,K,L), imp(X,c,I,J,K,L), imp(X,d,I,J,K,L).",
    "inPart(X,c,I,J,K,L) :- imp(X,a,I,J,K,L), imp(X,b,I,J,K,L), imp(X,d,I,J,K,L).",
    "inPart(X,d,I,J,K,L) :- imp(X,a,I,J,K,L), imp(X,b,I,J,K,L), imp(X,c,I,J,K,L).",
]

_TWIN_RULES = [
    "inPart(X,a,I,J,K,L) :- imp(X,b,I,J,K,L), imp(X,d,I,J,K,L).",
    "inPart(X,b,I,J,K,L) :- imp(X,a,I,J,K,L), imp(X,c,I,J,K,L).",
]

_BAD_INIT_RULE = (
    "bad_init(I,J,K,L) :- vertex(X), base(I,J,K,L), imp(X,a,I,J,K,L), "
    "imp(X,b,I,J,K,L), imp(X,c,I,J,K,L), imp(X,d,I,J,K,L)."
)

_PAIR_LOCK_RULES = [
    "label(X,a,I,J,K,L) :- inPart(X,a,I,J,K,L).",
    "label(X,b,I,J,K,L) :- inPart(X,b,I,J,K,L).",
    "label(X,c,I,J,K,L) :- inPart(X,c,I,J,K,L).",
    "label(X,d,I,J,K,L) :- inPart(X,d,I,J,K,L).",
    "label(X,a,I,J,K,L) :- not imp(X,a,I,J,K,L), imp(X,b,I,J,K,L).",
    "label(X,b,I,J,K,L) :- imp(X,a,I,J,K,L), not imp(X,b,I,J,K,L).",
    "problem(X,P,I,J,K,L) :- label(X,P,I,J,K,L), full(P,Q), "
    "label(Y,Q,I,J,K,L), not adjacent(X,Y).",
    "problem(X,P,I,J,K,L) :- label(X,P,I,J,K,L), dotted(P,Q), "
    "label(Y,Q,I,J,K,L), adjacent(X,Y).",
    "bad_base(I,J,K,L) :- problem(X,P,I,J,K,L).",
]


def emit_guess_check() -> ProgramText:
    """The guess-and-check program: place every vertex in exactly one
    partition, require all four filled, forbid any violated constraint."""
    return ProgramText(program=GUESS_CHECK_PROGRAM, dialect=Dialect.GUESS_CHECK)


def emit_datalog(h: ModelGraph, strategy: Strategy) -> ProgramText:
    """The stratified-Datalog program in the variant matching `strategy`.

    The rule text is model-independent (full/dotted guard literals in the
    bodies activate the relevant rules once the instance facts for h are
    loaded); h is accepted for interface symmetry with the fact emitter.
    """
    if strategy is Strategy.ORACLE_ONLY:
        raise ValueError("the oracle-only strategy has no Datalog form")
    rules = _base_rules()
    if strategy is Strategy.ISOLATED_SHORTCUT:
        rules.append("yes_instance() :- base(I,J,K,L).")
        rules.append("no_instance() :- not yes_instance().")
        return ProgramText("\n".join(rules) + "\n", Dialect.DATALOG_NON_RECURSIVE)
    rules += _SEED_RULES
    rules += _IMP_RULES
    if strategy is Strategy.TWIN_LABELS:
        rules += _TWIN_RULES
        dialect = Dialect.DATALOG_TWIN
    else:
        rules += _SINGLETON_RULES
        dialect = Dialect.DATALOG_PAIR_LOCK if strategy is Strategy.PAIR_LOCK \
            else Dialect.DATALOG_GENERAL
    rules.append(_BAD_INIT_RULE)
    if strategy is Strategy.PAIR_LOCK:
        rules += _PAIR_LOCK_RULES
        rules.append(
            "yes_instance() :- base(I,J,K,L), not bad_base(I,J,K,L), "
            "not bad_init(I,J,K,L)."
        )
    else:
        rules.append("yes_instance() :- base(I,J,K,L), not bad_init(I,J,K,L).")
    rules.append("no_instance() :- not yes_instance().")
    return ProgramText("\n".join(rules) + "\n", dialect)


def emit_instance_facts(h: ModelGraph, g: Graph) -> str:
    """Facts for one instance: partition/1, vertex/1, e/2 (one per edge,
    smaller id first), full/2 and dotted/2 in both orientations, plus the
    closure rules defining adjacent/2."""
    lines = [f"% model {h.name}, graph with {g.n} vertices, {g.m} edges"]
    lines += [f"partition({l})." for l in ("a", "b", "c", "d")]
    lines += [f"vertex({v})." for v in g.vertices()]
    lines += [f"e({u},{v})." for u, v in sorted(g.edges)]
    for x, y in h.full_pairs:
        lines.append(f"full({x},{y}).")
        lines.append(f"full({y},{x}).")
    for x, y in h.dotted_pairs:
        lines.append(f"dotted({x},{y}).")
        lines.append(f"dotted({y},{x}).")
    lines.append("adjacent(X,Y) :- e(X,Y).")
    lines.append("adjacent(X,Y) :- e(Y,X).")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Stratification linter
# ---------------------------------------------------------------------------

def _predicate_of(literal: str) -> str | None:
    """Predicate name of a body/head literal; None for builtins like X != Y."""
    lit = literal.strip()
    if not lit:
        return None
    head = lit.split("(", 1)[0].strip()
    if not head or not (head[0].isalpha() or head[0] == "_"):
        return None
    if not all(c.isalnum() or c == "_" for c in head):
        return None  # comparison operators or arithmetic
    return head


def _split_literals(body: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def precedence_edges(p: ProgramText) -> set[tuple[str, str, bool]]:
    """(head, body, negated) edges of the predicate precedence graph."""
    edges: set[tuple[str, str, bool]] = set()
    for raw in p.program.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if "{" in line or "}" in line:
            raise NotApplicableError(
                "stratification does not apply to choice rules"
            )
        if not line.endswith("."):
            raise ValueError(f"rule does not end in '.': {line!r}")
        line = line[:-1]
        if ":-" in line:
            head_txt, body_txt = line.split(":-", 1)
        else:
            head_txt, body_txt = line, ""
        head = _predicate_of(head_txt)
        if head is None:
            head = "#false"  # integrity constraint
        for lit in _split_literals(body_txt):
            lit = lit.strip()
            if not lit:
                continue
            negated = lit.startswith("not ")
            if negated:
                lit = lit[4:]
            pred = _predicate_of(lit)
            if pred is not None:
                edges.add((head, pred, negated))
    return edges


def stratify_check(p: ProgramText) -> bool:
    """True iff no cycle of the precedence graph passes through a negated
    edge, i.e. the program is stratifiable."""
    edges = precedence_edges(p)
    nodes = {u for u, _, _ in edges} | {v for _, v, _ in edges}
    succ: dict[str, list[str]] = {v: [] for v in nodes}
    for u, v, _ in edges:
        succ[u].append(v)
    component = _strongly_connected(nodes, succ)
    return not any(
        negated and component[u] == component[v] for u, v, negated in edges
    )


def _strongly_connected(
    nodes: set[str], succ: dict[str, list[str]]
) -> dict[str, int]:
    """Iterative Tarjan; maps each node to its component id."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    component: dict[str, int] = {}
    counter = iter(range(10**9))
    comp_id = 0

    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = next(counter)
                stack.append(node)
                on_stack.add(node)
            recurse = False
            children = succ[node]
            while i < len(children):
                child = children[i]
                i += 1
                if child not in index:
                    work.append((node, i))
                    work.append((child, 0))
                    recurse = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if recurse:
                continue
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component[w] = comp_id
                    if w == node:
                        break
                comp_id += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return component
