import itertools
import random

import pytest

from hpartition import Graph, verify_partition
from hpartition.oracle import (
    OracleCapExceeded,
    evaluate_naive,
    oracle_possible_sets,
    oracle_solve,
)

from conftest import all_graphs, flat_yes, random_graph

F = frozenset


class TestOracleSolve:
    def test_gmin_yes_with_valid_witness(self, m23):
        g = Graph.from_edges(4, [(1, 2), (2, 3)])
        p = oracle_solve(m23, g)
        assert p is not None
        assert verify_partition(m23, g, p) is True

    def test_k4_no(self, m23):
        g = Graph.from_edges(4, itertools.combinations(range(1, 5), 2))
        assert oracle_solve(m23, g) is None

    def test_edgeless_model_empty_graph(self, edgeless):
        g = Graph(n=4, edges=frozenset())
        p = oracle_solve(edgeless, g)
        assert p is not None
        assert all(len(c) == 1 for c in p.classes.values())

    def test_small_n_no(self, m23, edgeless):
        for n in range(4):
            g = Graph(n=n, edges=frozenset())
            assert oracle_solve(m23, g) is None
            assert oracle_solve(edgeless, g) is None

    def test_cap_guard(self, m23):
        g = Graph(n=21, edges=frozenset())
        with pytest.raises(OracleCapExceeded):
            oracle_solve(m23, g)
        assert oracle_solve(m23, g, vertex_cap=25) is None

    def test_witness_always_verifies(self, models):
        rng = random.Random(5)
        for h in models.values():
            for _ in range(30):
                g = random_graph(7, rng.random(), rng)
                p = oracle_solve(h, g)
                if p is not None:
                    assert verify_partition(h, g, p) is True

    def test_permutation_invariance(self, m23, m7):
        rng = random.Random(9)
        for h in (m23, m7):
            for _ in range(25):
                g = random_graph(7, rng.random(), rng)
                perm = list(range(1, 8))
                rng.shuffle(perm)
                g2 = g.relabeled(dict(zip(range(1, 8), perm)))
                assert (oracle_solve(h, g) is None) == (oracle_solve(h, g2) is None)


class TestFlatEnumerationCrossCheck:
    """The backtracking oracle must agree with the flat enumeration of all
    4^n labelings on every small graph."""

    def test_exhaustive_n4(self, models):
        for h in models.values():
            for g in all_graphs(4):
                assert (oracle_solve(h, g) is not None) == flat_yes(h, g), (
                    h.name,
                    sorted(g.edges),
                )

    def test_sampled_n5(self, m23, m7, m10c):
        rng = random.Random(13)
        for h in (m23, m7, m10c):
            for _ in range(120):
                g = random_graph(5, rng.random(), rng)
                assert (oracle_solve(h, g) is not None) == flat_yes(h, g)


class TestOraclePossibleSets:
    def test_m7_g6_quote(self, m7, g6_for_m7):
        poss = oracle_possible_sets(m7, g6_for_m7, (1, 2, 3, 4))
        assert poss[5] == F("ac")
        assert poss[6] == F("bd")

    def test_edgeless_everything_possible(self, edgeless):
        g = Graph.from_edges(6, [(1, 5), (2, 6)])
        poss = oracle_possible_sets(edgeless, g, (1, 2, 3, 4))
        assert poss == {5: F("abcd"), 6: F("abcd")}

    def test_matches_solver_propagation(self, models):
        """Definitional evaluation and the solver's incremental propagation
        agree on every state of a random corpus (the acceptance-critical
        dual-route check at module scale)."""
        from hpartition import is_h_isomorphic, propagate
        from hpartition.solver import Fixpoint, Rejected

        rng = random.Random(31)
        for h in models.values():
            checked = 0
            for _ in range(120):
                g = random_graph(6, rng.random(), rng)
                for base in itertools.permutations(range(1, 7), 4):
                    if not is_h_isomorphic(h, g, base):
                        continue
                    naive = evaluate_naive(h, g, base)
                    out = propagate(h, g, base)
                    if isinstance(out, Rejected):
                        assert naive.rejected
                    else:
                        assert not naive.rejected
                        poss = oracle_possible_sets(h, g, base)
                        for v, labels in out.possible.items():
                            assert poss[v] == labels
                        for v, lab in out.labeling.assigned.items():
                            if v not in base:
                                assert poss[v] == F({lab})
                    checked += 1
                    break  # one base per graph keeps the corpus broad
                if checked >= 40:
                    break
            assert checked > 0
