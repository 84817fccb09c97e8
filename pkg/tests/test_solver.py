import itertools
import random

import pytest

from hpartition import (
    Graph,
    PropagationAudit,
    Strategy,
    certificate,
    has_h_isomorphic_base,
    impossible_labels,
    propagate,
    solve,
    solve_isolated,
    verify_partition,
)
from hpartition.generate import build_g_min
from hpartition.solver import (
    Fixpoint,
    PartialLabeling,
    Rejected,
    finish_generic,
    finish_pairlock,
    finish_twin,
)
from hpartition.oracle import oracle_solve

from conftest import all_graphs, flat_yes, random_graph, random_graphs

F = frozenset


def pl_for_base(base, extra=None):
    assigned = dict(zip(base, "abcd"))
    if extra:
        assigned.update(extra)
    return PartialLabeling(
        base=base, assigned=assigned, done=frozenset(assigned)
    )


class TestImpossibleLabels:
    def test_fresh_isolated_vertex(self, m23):
        # path 1-2-3 plus isolated 4 and a fresh disconnected vertex 5:
        # a, b, c each need a full adjacency that 5 lacks, d survives
        g = Graph.from_edges(5, [(1, 2), (2, 3)])
        imp = impossible_labels(m23, g, pl_for_base((1, 2, 3, 4)), 5)
        assert imp >= F("abc")
        assert "d" not in imp
        assert imp == F("abc")

    def test_edgeless_model_nothing_fires(self, edgeless):
        g = Graph.from_edges(5, [(1, 5), (2, 3)])
        assert impossible_labels(edgeless, g, pl_for_base((1, 2, 3, 4)), 5) == F()

    def test_vertex_adjacent_only_to_c(self, m23):
        # adjacency to the c-labeled base vertex kills d through dotted(c,d)
        # while the missing full adjacencies kill a, b, c
        g = Graph.from_edges(5, [(1, 2), (2, 3), (3, 5)])
        imp = impossible_labels(m23, g, pl_for_base((1, 2, 3, 4)), 5)
        assert imp == F("abcd")

    def test_labeled_vertex_rejected(self, m23):
        g = Graph.from_edges(5, [(1, 2), (2, 3)])
        with pytest.raises(ValueError, match="already labeled"):
            impossible_labels(m23, g, pl_for_base((1, 2, 3, 4)), 1)

    def test_monotone_in_assignments(self, m23):
        """Labeling one more vertex never shrinks any impossible set."""
        rng = random.Random(7)
        for _ in range(50):
            g = random_graph(7, rng.random(), rng)
            base = tuple(rng.sample(range(1, 8), 4))
            rest = [v for v in g.vertices() if v not in base]
            before = {
                v: impossible_labels(m23, g, pl_for_base(base), v) for v in rest
            }
            w = rng.choice(rest)
            bigger = pl_for_base(base, extra={w: rng.choice("abcd")})
            for v in rest:
                if v == w:
                    continue
                after = impossible_labels(m23, g, bigger, v)
                assert before[v] <= after


class TestPropagate:
    def test_all_vertices_in_base(self, m23):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        out = propagate(m23, g, (1, 2, 3, 4))
        assert isinstance(out, Fixpoint)
        assert out.possible == {}
        assert out.labeling.assigned == {1: "a", 2: "b", 3: "c", 4: "d"}

    def test_k5_has_no_base(self, m23):
        g = Graph.from_edges(5, itertools.combinations(range(1, 6), 2))
        assert not has_h_isomorphic_base(m23, g)
        with pytest.raises(ValueError, match="not H-isomorphic"):
            propagate(m23, g, (1, 2, 3, 4))

    def test_m7_g6_quoted_possible_sets(self, m7, g6_for_m7):
        out = propagate(m7, g6_for_m7, (1, 2, 3, 4))
        assert isinstance(out, Fixpoint)
        assert out.possible == {5: F("ac"), 6: F("bd")}

    def test_rejection_reports_vertex(self, m23):
        # vertex 5 adjacent only to the c-vertex: every label impossible
        g = Graph.from_edges(5, [(1, 2), (2, 3), (3, 5)])
        out = propagate(m23, g, (1, 2, 3, 4))
        assert isinstance(out, Rejected)
        assert out.vertex == 5

    def test_forced_assignment_cascade(self, m23):
        """A vertex with exactly one possible label gets labeled and its
        constraints propagate."""
        # 5 adjacent to 1 and 3: a impossible (nonadj 2), b impossible
        # (nonadj... adj 1, adj 3, nonadj 4 ok -> b needs full ab: adj a=1 ok,
        # full bc: adj c=3 ok, dotted bd: nonadj 4 ok -> b possible), so use
        # the naive evaluator as reference instead of hand-waving
        from hpartition.oracle import oracle_possible_sets

        rng = random.Random(3)
        for _ in range(80):
            g = random_graph(7, rng.random(), rng)
            for base in itertools.permutations(range(1, 8), 4):
                from hpartition import is_h_isomorphic

                if not is_h_isomorphic(m23, g, base):
                    continue
                out = propagate(m23, g, base)
                naive = oracle_possible_sets(m23, g, base)
                if isinstance(out, Rejected):
                    assert any(not s for s in naive.values())
                else:
                    for v, poss in out.possible.items():
                        assert naive[v] == poss
                    for v, lab in out.labeling.assigned.items():
                        if v not in base:
                            assert naive[v] == F({lab})
                break
            else:
                continue


class TestFinishers:
    def test_generic_accepts_fixpoint(self, m23):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        out = propagate(m23, g, (1, 2, 3, 4))
        assert finish_generic(out) is True

    def test_generic_rejects_rejected(self, m23):
        g = Graph.from_edges(5, [(1, 2), (2, 3), (3, 5)])
        out = propagate(m23, g, (1, 2, 3, 4))
        with pytest.raises(ValueError):
            finish_generic(out)

    def test_twin_g6_vertex6_empties(self, m7, g6_for_m7):
        out = propagate(m7, g6_for_m7, (1, 2, 3, 4))
        assert finish_twin(m7, g6_for_m7, out) is False

    def test_twin_complete_base_accepts(self, m7):
        g, _ = build_g_min(m7, (1, 1, 1, 1))
        out = propagate(m7, g, (1, 2, 3, 4))
        assert out.possible == {}
        assert finish_twin(m7, g, out) is True

    def test_twin_gmin_2111(self, m7):
        g, _ = build_g_min(m7, (2, 1, 1, 1))
        out = propagate(m7, g, (1, 3, 4, 5))
        assert isinstance(out, Fixpoint)
        assert finish_twin(m7, g, out) is True
        assert solve(m7, g).yes is True
        assert oracle_solve(m7, g) is not None

    def test_pairlock_bad_base_then_good_base(self, m10c, gfig_for_m10):
        out = propagate(m10c, gfig_for_m10, (1, 2, 3, 4))
        assert isinstance(out, Fixpoint)
        assert out.possible == {5: F("bc"), 6: F("ad")}
        assert not gfig_for_m10.adjacent(5, 6)
        assert finish_pairlock(m10c, gfig_for_m10, out) is False
        out2 = propagate(m10c, gfig_for_m10, (1, 2, 5, 4))
        assert isinstance(out2, Fixpoint)
        assert finish_pairlock(m10c, gfig_for_m10, out2) is True
        assert solve(m10c, gfig_for_m10).yes is True
        assert oracle_solve(m10c, gfig_for_m10) is not None

    def test_pairlock_complete_base_accepts(self, m10c):
        g, _ = build_g_min(m10c, (1, 1, 1, 1))
        out = propagate(m10c, g, (1, 2, 3, 4))
        assert out.possible == {}
        assert finish_pairlock(m10c, g, out) is True


class TestSolve:
    def test_m23_gmin_yes(self, m23):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        assert solve(m23, g).yes is True

    def test_m23_empty_no(self, m23):
        g = Graph(n=6, edges=frozenset())
        assert solve(m23, g).yes is False

    def test_m7_g6_no(self, m7, g6_for_m7):
        assert solve(m7, g6_for_m7).yes is False
        assert oracle_solve(m7, g6_for_m7) is None
        assert flat_yes(m7, g6_for_m7) is False

    def test_generic_wrong_without_twin_rules(self, m7, g6_for_m7):
        """G6 shows why the twin finisher exists: the generic conclusion
        rule wrongly accepts the base whose pair lists cannot combine."""
        assert solve(m7, g6_for_m7, strategy=Strategy.GENERIC).yes is True

    def test_generic_wrong_without_pairlock(self, m10c):
        g = Graph.from_edges(
            6, [(1, 2), (1, 3), (2, 4), (3, 4), (1, 5), (4, 5), (2, 6), (3, 6)]
        )
        assert oracle_solve(m10c, g) is None
        assert solve(m10c, g, strategy=Strategy.GENERIC).yes is True
        assert solve(m10c, g).yes is False

    def test_small_graphs_always_no(self, models):
        for n in range(4):
            g = Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))
            for h in models.values():
                assert solve(h, g).yes is False

    def test_oracle_only_strategy(self, m23):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        d = solve(m23, g, strategy=Strategy.ORACLE_ONLY)
        assert d.yes is True and d.strategy is Strategy.ORACLE_ONLY

    def test_strategy_reported(self, m7, m23, full_ab):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        assert solve(m23, g).strategy is Strategy.GENERIC
        assert solve(full_ab, g).strategy is Strategy.ISOLATED_SHORTCUT
        assert solve(m7, g).strategy is Strategy.TWIN_LABELS

    def test_relabeling_invariance(self, m23, m7):
        rng = random.Random(11)
        for h in (m23, m7):
            for _ in range(30):
                g = random_graph(7, rng.random(), rng)
                perm = list(range(1, 8))
                rng.shuffle(perm)
                g2 = g.relabeled(dict(zip(range(1, 8), perm)))
                assert solve(h, g).yes == solve(h, g2).yes


class TestSolveIsolated:
    def test_edge_present_yes(self, full_ab):
        g = Graph.from_edges(5, [(2, 4)])
        assert solve_isolated(full_ab, g) is True
        assert solve(full_ab, g).yes is True

    def test_empty_graph_no(self, full_ab):
        g = Graph(n=10, edges=frozenset())
        assert solve_isolated(full_ab, g) is False

    def test_edgeless_model_any_graph(self, edgeless):
        for g in (Graph(n=4, edges=frozenset()), Graph.from_edges(5, [(1, 2)])):
            assert solve_isolated(edgeless, g) is True

    def test_precondition(self, m23):
        with pytest.raises(ValueError, match="no isolated label"):
            solve_isolated(m23, Graph(n=4, edges=frozenset()))


class TestOracleEquivalence:
    """Smoke-sized version of the acceptance scan."""

    def test_exhaustive_n4(self, models):
        for h in models.values():
            for g in all_graphs(4):
                assert solve(h, g).yes == (oracle_solve(h, g) is not None), (
                    h.name,
                    sorted(g.edges),
                )

    def test_random_n9(self, models):
        for h in models.values():
            for g in random_graphs(9, 60, seed=17):
                assert solve(h, g).yes == (oracle_solve(h, g) is not None), (
                    h.name,
                    sorted(g.edges),
                )


class TestCertificate:
    def test_witness_verifies(self, m23):
        g, _ = build_g_min(m23, (2, 1, 1, 1))
        witness = certificate(m23, g)
        assert witness is not None
        assert verify_partition(m23, g, witness) is True

    def test_none_iff_no(self, models):
        rng = random.Random(23)
        for h in models.values():
            for _ in range(25):
                g = random_graph(6, rng.random(), rng)
                witness = certificate(h, g)
                if solve(h, g).yes:
                    assert witness is not None
                    assert verify_partition(h, g, witness) is True
                else:
                    assert witness is None

    def test_edgeless_n4_singletons(self, edgeless):
        g = Graph(n=4, edges=frozenset())
        witness = certificate(edgeless, g)
        assert witness is not None
        assert all(len(c) == 1 for c in witness.classes.values())

    def test_oracle_only_certificate(self, m23):
        g, _ = build_g_min(m23, (1, 2, 1, 1))
        witness = certificate(m23, g, strategy=Strategy.ORACLE_ONLY)
        assert witness is not None and verify_partition(m23, g, witness)


class TestLemmaAudit:
    def test_no_violations_on_sample(self, models):
        audit = PropagationAudit()
        for h in models.values():
            for g in random_graphs(7, 40, seed=29):
                solve(h, g, audit=audit)
        assert audit.fixpoints > 0
        assert audit.sets_checked > 0
        assert audit.violations == []

    def test_audit_scans_all_bases(self, m23):
        g, _ = build_g_min(m23, (2, 2, 2, 2))
        audit = PropagationAudit()
        d = solve(m23, g, audit=audit)
        assert d.yes is True
        assert audit.fixpoints > 1
