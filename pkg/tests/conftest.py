"""Shared fixtures and oracles for the test suite.

Holds the matrices transcribed from the worked order-12 and order-15
examples, a seeded random-stochastic-matrix generator, and the
exhaustive search used to confirm the characterization of digraphs whose
cycle lengths are exactly {q, n}.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from karpelevic.algebra import StochMatrix
from karpelevic.digraph import WeightedDigraph, simple_cycles


def grid_matrix(rows: dict[int, dict[int, Fraction]], n: int) -> StochMatrix:
    """Build a matrix from 1-based {row: {col: weight}} sparse data."""
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i, cols in rows.items():
        for j, w in cols.items():
            grid[i - 1][j - 1] = Fraction(w)
    return StochMatrix(grid)


def order12_sparsest(alpha: Fraction) -> dict[str, StochMatrix]:
    """The four sparsest order-12 fixtures (q=4, d=3, z=3), keyed A1..A4."""
    b = 1 - alpha
    a = alpha
    common = {2: {3: 1}, 3: {4: 1}, 4: {1: 1}, 5: {6: 1}, 6: {7: 1}}
    return {
        "A1": grid_matrix(
            {**common, 1: {2: b, 5: a}, 7: {8: 1}, 8: {5: b, 12: a},
             9: {10: 1}, 10: {11: 1}, 11: {1: a, 12: b}, 12: {9: 1}}, 12),
        "A2": grid_matrix(
            {**common, 1: {2: b, 5: a}, 7: {8: b, 11: a}, 8: {5: 1},
             9: {3: a, 10: b}, 10: {11: 1}, 11: {12: 1}, 12: {9: 1}}, 12),
        "A3": grid_matrix(
            {**common, 1: {2: b, 5: a}, 7: {8: b, 11: a}, 8: {5: 1},
             9: {10: 1}, 10: {4: a, 11: b}, 11: {12: 1}, 12: {9: 1}}, 12),
        "A4": grid_matrix(
            {**common, 1: {2: b, 5: a}, 7: {8: 1}, 8: {5: b, 12: a},
             9: {10: 1}, 10: {4: a, 11: b}, 11: {12: 1}, 12: {9: 1}}, 12),
    }


def order12_augmented(alpha: Fraction, free: Fraction) -> dict[str, StochMatrix]:
    """The three augmented order-12 fixtures A11/A12/A13 with every free
    weight set to the same value ``free``."""
    a, b, f = alpha, 1 - alpha, free
    dep3 = b / f ** 3   # dependent weight when a block has three free sources
    dep2 = b / f ** 2
    dep1 = b / f
    a11 = grid_matrix(
        {1: {2: f, 5: 1 - f}, 2: {3: f, 6: 1 - f}, 3: {4: f, 7: 1 - f},
         4: {1: dep3, 8: 1 - dep3},
         5: {6: 1}, 6: {7: 1}, 7: {8: 1}, 8: {5: b, 12: a},
         9: {10: 1}, 10: {11: 1}, 11: {1: a, 12: b}, 12: {9: 1}}, 12)
    a12 = grid_matrix(
        {1: {2: b, 5: a}, 2: {3: 1}, 3: {4: 1}, 4: {1: 1},
         5: {6: 1}, 6: {7: 1}, 7: {8: 1}, 8: {5: b, 12: a},
         9: {3: 1 - f, 10: f}, 10: {4: 1 - f, 11: f}, 11: {1: 1 - f, 12: f},
         12: {2: 1 - dep3, 9: dep3}}, 12)
    a13 = grid_matrix(
        {1: {2: f, 5: 1 - f}, 2: {3: dep1, 6: 1 - dep1}, 3: {4: 1}, 4: {1: 1},
         5: {6: 1}, 6: {7: 1}, 7: {8: 1}, 8: {5: b, 12: a},
         9: {3: 1 - f, 10: f}, 10: {4: 1 - f, 11: f},
         11: {1: 1 - dep2, 12: dep2}, 12: {9: 1}}, 12)
    return {"A11": a11, "A12": a12, "A13": a13}


@pytest.fixture
def paper_order12(request):
    return order12_sparsest(Fraction(1, 3))


def random_stochastic(rng, n: int, density: float = 0.6) -> StochMatrix:
    """Random rational stochastic matrix with random support (seeded rng)."""
    rows = []
    for _ in range(n):
        weights = [rng.randint(1, 9) if rng.random() < density else 0 for _ in range(n)]
        if sum(weights) == 0:
            weights[rng.randrange(n)] = 1
        total = sum(weights)
        rows.append([Fraction(w, total) for w in weights])
    return StochMatrix(rows)


# -- exhaustive {q, n}-cycle digraph search -----------------------------
#
# Any digraph with an n-cycle is isomorphic to one containing the standard
# cycle 0 -> 1 -> ... -> n-1 -> 0, so the search space is the 2^(n^2 - n)
# supersets of that cycle.  Two exact reductions shrink it to 2^n:
# adding a single edge (i, j) to the standard cycle creates a cycle of
# length (i - j) mod n + 1 using cycle edges only, and a subgraph's cycles
# persist in every supergraph.  Hence any admissible extra edge must
# individually create a q-cycle, i.e. lie in the back-edge rotation class,
# and it suffices to enumerate all subsets of those n back edges.


def standard_cycle_edges(n: int) -> set[tuple[int, int]]:
    return {(i, (i + 1) % n) for i in range(n)}


def single_edge_cycle_lengths(n: int, q: int) -> dict[tuple[int, int], set[int]]:
    """Cycle lengths of (standard n-cycle + one extra edge), for every
    possible extra edge including self-loops."""
    out = {}
    cycle = standard_cycle_edges(n)
    for i in range(n):
        for j in range(n):
            if (i, j) in cycle:
                continue
            g = WeightedDigraph.from_edge_list(n, cycle | {(i, j)})
            out[(i, j)] = simple_cycles(g).lengths()
    return out


def back_edge_subset_valid(n: int, q: int, sources: frozenset) -> bool:
    """True iff the n-cycle plus back edges i -> (i+1-q) mod n from the
    given sources has cycle lengths exactly {q, n}."""
    edges = standard_cycle_edges(n) | {(i, (i + 1 - q) % n) for i in sources}
    g = WeightedDigraph.from_edge_list(n, edges)
    return simple_cycles(g).lengths() == {q, n}


def fits_anchored_window(n: int, q: int, sources: frozenset) -> bool:
    """True iff some rotation maps the sources into {0, ..., n-q} with a
    source landing on 0 (the anchored normal form)."""
    for r in sources:
        shifted = {(s - r) % n for s in sources}
        if all(v <= n - q for v in shifted):
            return True
    return False
