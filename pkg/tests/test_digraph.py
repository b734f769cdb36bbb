import itertools
import random
from fractions import Fraction

import pytest

from conftest import (
    back_edge_subset_valid,
    fits_anchored_window,
    order12_sparsest,
    random_stochastic,
    single_edge_cycle_lengths,
)
from karpelevic.algebra import StochMatrix, charpoly_exact, cyclic_shift_matrix
from karpelevic.digraph import (
    WeightedDigraph,
    charpoly_coates,
    cycle_structure_check,
    cyclic_distance,
    find_similarity_permutation,
    is_perm_similar,
    simple_cycles,
    to_dot,
)
from karpelevic.farey import arc_params, ArcType
from karpelevic.realize import Composition, type0, type1, type2_sparsest

F = Fraction


def brute_force_similar(a, b):
    n = a.n
    for p in itertools.permutations(range(n)):
        if all(a[p[i], p[j]] == b[i, j] for i in range(n) for j in range(n)):
            return True
    return False


class TestWeightedDigraph:
    def test_zero_weight_edges_absent(self):
        m = type0(3, F(1, 2))
        g = WeightedDigraph.from_matrix(m)
        assert len(g.edges) == 6
        assert all(w > 0 for w in g.edges.values())

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            WeightedDigraph(2, {(0, 1): F(0)})

    def test_adjacency_roundtrip(self):
        m = type0(4, F(1, 3))
        g = WeightedDigraph.from_matrix(m)
        assert g.adjacency() == [list(r) for r in m.entries]


class TestSimpleCycles:
    def test_pure_cycle(self):
        report = simple_cycles(WeightedDigraph.from_matrix(cyclic_shift_matrix(5)))
        assert report.by_length == {5: [((0, 1, 2, 3, 4), F(1))]}

    def test_type1_order5(self):
        m = type1(5, 4, [F(1, 2), F(1, 2)])
        report = simple_cycles(WeightedDigraph.from_matrix(m))
        assert sorted(report.lengths()) == [4, 5]
        assert len(report.cycles_of_length(4)) == 2
        assert len(report.cycles_of_length(5)) == 1

    def test_order12_first_fixture(self):
        a1 = order12_sparsest(F(1, 3))["A1"]
        report = simple_cycles(WeightedDigraph.from_matrix(a1))
        assert len(report.cycles_of_length(4)) == 3
        assert len(report.cycles_of_length(9)) == 1
        assert report.count() == 4

    def test_weights_exact(self):
        m = type0(4, F(1, 3))
        report = simple_cycles(WeightedDigraph.from_matrix(m))
        loops = report.cycles_of_length(1)
        assert [w for _, w in loops] == [F(2, 3)] * 4
        assert report.cycles_of_length(4)[0][1] == F(1, 81)

    def test_no_short_cycles_in_realizations(self):
        # Realization digraphs never contain cycles shorter than q.
        cases = [
            type1(5, 4, [F(1, 6), F(1)]),
            type2_sparsest(4, 3, 3, F(1, 3), Composition((0, 3, 3), 4)),
        ]
        for m, q in zip(cases, (4, 4)):
            lengths = simple_cycles(WeightedDigraph.from_matrix(m)).lengths()
            assert min(lengths) >= q


class TestCoates:
    def test_single_loop(self):
        g = WeightedDigraph(1, {(0, 0): F(1, 3)})
        assert charpoly_coates(g).to_json() == ["-1/3", "1"]

    def test_two_cycle_with_loop(self):
        a, b, c = F(1, 2), F(1, 4), F(1, 5)
        g = WeightedDigraph(2, {(0, 1): a, (1, 0): b, (0, 0): c})
        p = charpoly_coates(g)
        assert p.coeff(2) == 1 and p.coeff(1) == -c and p.coeff(0) == -a * b
        assert p == charpoly_exact(g.adjacency())

    def test_lazy_triangle(self):
        m = StochMatrix(
            [[F(1, 2) if j in (i, (i + 1) % 3) else 0 for j in range(3)] for i in range(3)]
        )
        assert charpoly_coates(WeightedDigraph.from_matrix(m)) == charpoly_exact(m)

    def test_random_agreement(self):
        rng = random.Random(11)
        for n in range(2, 7):
            for _ in range(20):
                m = random_stochastic(rng, n)
                g = WeightedDigraph.from_matrix(m)
                assert charpoly_coates(g) == charpoly_exact(m)

    def test_bound(self):
        g = WeightedDigraph.from_matrix(cyclic_shift_matrix(17))
        with pytest.raises(ValueError):
            charpoly_coates(g)
        assert charpoly_coates(g, bound=17).degree == 17


class TestPermSimilar:
    def test_reflexive(self):
        m = random_stochastic(random.Random(2), 6)
        assert is_perm_similar(m, m)

    def test_cycle_vs_reversed(self):
        c4 = cyclic_shift_matrix(4)
        assert is_perm_similar(c4, c4.transpose())

    def test_paper_rotation_equivalence(self):
        a = type2_sparsest(4, 3, 3, F(1, 3), Composition((1, 2, 3), 4))
        b = type2_sparsest(4, 3, 3, F(1, 3), Composition((2, 3, 1), 4))
        assert is_perm_similar(a, b)

    def test_agrees_with_brute_force(self):
        rng = random.Random(5)
        for n in (3, 4, 5):
            for _ in range(10):
                a = random_stochastic(rng, n, density=0.4)
                if rng.random() < 0.5:
                    perm = list(range(n))
                    rng.shuffle(perm)
                    b = a.permuted(perm)
                else:
                    b = random_stochastic(rng, n, density=0.4)
                assert is_perm_similar(a, b) == brute_force_similar(a, b)

    def test_equivalence_relation_spot_checks(self):
        rng = random.Random(9)
        base = random_stochastic(rng, 6, density=0.5)
        p1, p2 = list(range(6)), list(range(6))
        rng.shuffle(p1)
        rng.shuffle(p2)
        m1, m2 = base.permuted(p1), base.permuted(p2)
        assert is_perm_similar(m1, base) and is_perm_similar(base, m1)  # symmetric
        assert is_perm_similar(m1, m2)  # transitive through base

    def test_returns_witness(self):
        a = random_stochastic(random.Random(4), 5, density=0.5)
        perm = [3, 0, 4, 1, 2]
        b = a.permuted(perm)
        sigma = find_similarity_permutation(a, b)
        assert sigma is not None
        assert a.permuted(sigma) == b

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            is_perm_similar(cyclic_shift_matrix(3), cyclic_shift_matrix(4))

    def test_size_bound_from_environment(self, monkeypatch):
        big = cyclic_shift_matrix(24)
        with pytest.raises(ValueError, match="bound"):
            is_perm_similar(big, big)
        monkeypatch.setenv("KARPELEVIC_MAX_BRUTE", "12")
        assert is_perm_similar(big, big)
        monkeypatch.setenv("KARPELEVIC_MAX_BRUTE", "not a number")
        with pytest.raises(ValueError, match="KARPELEVIC_MAX_BRUTE"):
            is_perm_similar(big, big)


class TestCycleStructure:
    def test_type0_ok(self):
        arc = arc_params(ArcType.TYPE_0, n=4)
        report = cycle_structure_check(WeightedDigraph.from_matrix(type0(4, F(1, 2))), arc)
        assert report.ok
        assert report.lengths == (1, 4)
        assert report.q_cycle_count == 4
        assert report.at_least_d_q_cycles is True

    def test_order12_fixture_ok(self):
        arc = arc_params(ArcType.TYPE_II, q=4, d=3, z=3)
        a2 = order12_sparsest(F(1, 3))["A2"]
        report = cycle_structure_check(WeightedDigraph.from_matrix(a2), arc)
        assert report.ok
        assert report.exactly_d_disjoint_equal is True

    def test_forbidden_chord(self):
        arc = arc_params(ArcType.TYPE_I, n=5, q=4)
        g = WeightedDigraph(
            5,
            {(i, (i + 1) % 5): F(1) for i in range(5)} | {(1, 0): F(1, 2)},
        )
        report = cycle_structure_check(g, arc)
        assert not report
        assert any("forbidden" in p for p in report.problems)


class TestOnlyQNCycleDigraphs:
    """Exhaustive confirmation of the {q, n}-cycle characterization at (5, 3)."""

    def test_single_extra_edges(self):
        for (i, j), lengths in single_edge_cycle_lengths(5, 3).items():
            expected_ok = (j == (i + 1 - 3) % 5)
            assert (lengths <= {3, 5}) == expected_ok

    def test_subsets_match_window_rule(self):
        n, q = 5, 3
        for bits in range(1, 2 ** n):
            sources = frozenset(i for i in range(n) if bits >> i & 1)
            assert back_edge_subset_valid(n, q, sources) == fits_anchored_window(n, q, sources)


class TestDot:
    def test_labels_and_weights(self):
        m = type0(3, F(1, 2))
        dot = to_dot(WeightedDigraph.from_matrix(m))
        assert "1 -> 2" in dot and '[label="1/2"]' in dot
        assert dot.startswith("digraph")


def test_cyclic_distance():
    assert cyclic_distance(15, 4, 8) == 4
    assert cyclic_distance(15, 14, 0) == 1
    assert cyclic_distance(15, 0, 0) == 0
