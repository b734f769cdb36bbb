"""Weighted digraphs of stochastic matrices and their cycle combinatorics.

A matrix and its digraph are two views of the same object: vertices are
row indices, an edge (i, j) with weight w > 0 records entry w in position
(i, j).  Zero entries are absent edges, never stored.

Two independent characteristic-polynomial routes meet here: the digraph
route assembles each coefficient k_i as a signed sum of weight products
over linear digraphs (sets of vertex-disjoint simple cycles) on i
vertices, which is checked elsewhere against exact elimination.  Cycle
enumeration itself is delegated to networkx's simple_cycles (Johnson's
algorithm); results are canonicalised so output order is deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from karpelevic.algebra import RatLike, RatPoly, StochMatrix, rat, rat_str
from karpelevic.farey import ArcParams

__all__ = [
    "WeightedDigraph",
    "CycleReport",
    "CycleStructureReport",
    "simple_cycles",
    "charpoly_coates",
    "is_perm_similar",
    "find_similarity_permutation",
    "cycle_structure_check",
    "to_dot",
    "cyclic_distance",
    "max_brute_order",
]

COATES_DEFAULT_BOUND = 16


def max_brute_order(default: int = 10) -> int:
    """Size cap for factorial-flavoured searches, from KARPELEVIC_MAX_BRUTE."""
    raw = os.environ.get("KARPELEVIC_MAX_BRUTE")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"KARPELEVIC_MAX_BRUTE must be an integer, got {raw!r}")


def cyclic_distance(n: int, i: int, j: int) -> int:
    """min((i-j) mod n, (j-i) mod n), the circular distance on 0..n-1."""
    a = (i - j) % n
    return min(a, n - a)


class WeightedDigraph:
    """Digraph on vertices 0..n-1 with positive rational edge weights.

    At most one edge per ordered pair; self-loops allowed.  Immutable
    after construction.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Mapping[tuple[int, int], RatLike]):
        if n < 1:
            raise ValueError("need at least one vertex")
        ed: dict[tuple[int, int], Fraction] = {}
        for (u, v), w in edges.items():
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            wv = rat(w)
            if wv <= 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {wv}")
            ed[(u, v)] = wv
        self.n = n
        self.edges = dict(sorted(ed.items()))

    @classmethod
    def from_matrix(cls, m: StochMatrix) -> "WeightedDigraph":
        edges = {
            (i, j): e
            for i, row in enumerate(m.entries)
            for j, e in enumerate(row)
            if e != 0
        }
        return cls(m.n, edges)

    @classmethod
    def from_edge_list(
        cls, n: int, edges: Iterable[tuple[int, int]], weight: RatLike = 1
    ) -> "WeightedDigraph":
        w = rat(weight)
        return cls(n, {e: w for e in edges})

    def weight(self, u: int, v: int) -> Fraction:
        return self.edges.get((u, v), Fraction(0))

    def adjacency(self) -> list[list[Fraction]]:
        grid = [[Fraction(0)] * self.n for _ in range(self.n)]
        for (u, v), w in self.edges.items():
            grid[u][v] = w
        return grid

    def out_edges(self, u: int) -> list[tuple[int, Fraction]]:
        return [(v, w) for (a, v), w in self.edges.items() if a == u]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"WeightedDigraph(n={self.n}, edges={len(self.edges)})"


@dataclass(frozen=True)
class CycleReport:
    """All simple cycles of a digraph, keyed by length.

    Each cycle is a vertex tuple rotated so its minimum vertex comes
    first, paired with the exact product of its edge weights; lists are
    sorted, so reports are canonical.
    """

    by_length: dict[int, list[tuple[tuple[int, ...], Fraction]]]

    def lengths(self) -> set[int]:
        return set(self.by_length)

    def cycles_of_length(self, length: int) -> list[tuple[tuple[int, ...], Fraction]]:
        return self.by_length.get(length, [])

    def all_cycles(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return [c for length in sorted(self.by_length) for c in self.by_length[length]]

    def count(self) -> int:
        return sum(len(v) for v in self.by_length.values())


def _canonical_rotation(cycle: Sequence[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def simple_cycles(g: WeightedDigraph) -> CycleReport:
    """Enumerate every simple cycle once, up to rotation, with its weight."""
    by_length: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
    for raw in nx.simple_cycles(g.to_networkx()):
        cyc = _canonical_rotation(raw)
        w = Fraction(1)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            w *= g.edges[(a, b)]
        by_length.setdefault(len(cyc), []).append((cyc, w))
    for length in by_length:
        by_length[length].sort(key=lambda cw: cw[0])
    return CycleReport(by_length=dict(sorted(by_length.items())))


def charpoly_coates(g: WeightedDigraph, bound: int = COATES_DEFAULT_BOUND) -> RatPoly:
    """Characteristic polynomial from the linear-digraph expansion.

    k_i = sum over all sets L of vertex-disjoint simple cycles covering i
    vertices of (-1)^(number of cycles) * (product of edge weights), and
    det(tI - A) = t^n + k_1 t^(n-1) + ... + k_n.  Exponential in general,
    hence the order bound; this is the independent oracle for
    :func:`karpelevic.algebra.charpoly_exact`, not a production path.
    """
    if g.n > bound:
        raise ValueError(f"order {g.n} exceeds the Coates enumeration bound {bound}")
    cycles = [
        (frozenset(cyc), w, len(cyc))
        for cyc, w in simple_cycles(g).all_cycles()
    ]
    coeffs = [Fraction(0)] * (g.n + 1)  # coeffs[i] = k_i

    def extend(start: int, used: frozenset, nverts: int, ncyc: int, prod: Fraction) -> None:
        for idx in range(start, len(cycles)):
            verts, w, length = cycles[idx]
            if used & verts:
                continue
            total = nverts + length
            contrib = prod * w
            coeffs[total] += -contrib if (ncyc + 1) % 2 else contrib
            if total < g.n:
                extend(idx + 1, used | verts, total, ncyc + 1, contrib)

    extend(0, frozenset(), 0, 0, Fraction(1))
    poly = [Fraction(0)] * (g.n + 1)
    poly[g.n] = Fraction(1)
    for i in range(1, g.n + 1):
        poly[g.n - i] = coeffs[i]
    return RatPoly(poly)


# -- permutation similarity -------------------------------------------


def _edge_maps(g: WeightedDigraph):
    out: list[dict[int, Fraction]] = [dict() for _ in range(g.n)]
    inc: list[dict[int, Fraction]] = [dict() for _ in range(g.n)]
    for (u, v), w in g.edges.items():
        out[u][v] = w
        inc[v][u] = w
    return out, inc


def _refine_colors_joint(ga: WeightedDigraph, gb: WeightedDigraph):
    """Weighted colour refinement run jointly over two graphs.

    The palette is shared, so equal colours mean equal refinement
    signatures across graphs; returns (colors_a, colors_b).
    """
    out_a, in_a = _edge_maps(ga)
    out_b, in_b = _edge_maps(gb)
    # B's vertices are shifted by ga.n in the joint numbering.
    outs = out_a + [{u + ga.n: w for u, w in d.items()} for d in out_b]
    ins = in_a + [{u + ga.n: w for u, w in d.items()} for d in in_b]
    total = ga.n + gb.n
    signature = [
        (tuple(sorted(outs[v].values())), tuple(sorted(ins[v].values())))
        for v in range(total)
    ]
    palette = {sig: i for i, sig in enumerate(sorted(set(signature)))}
    colors = [palette[sig] for sig in signature]
    while True:
        signature = [
            (
                colors[v],
                tuple(sorted((colors[u], w) for u, w in outs[v].items())),
                tuple(sorted((colors[u], w) for u, w in ins[v].items())),
            )
            for v in range(total)
        ]
        palette = {sig: i for i, sig in enumerate(sorted(set(signature)))}
        new_colors = [palette[sig] for sig in signature]
        if new_colors == colors:
            return colors[: ga.n], colors[ga.n :]
        colors = new_colors


def find_similarity_permutation(
    a: StochMatrix, b: StochMatrix, max_order: Optional[int] = None
) -> Optional[list[int]]:
    """A permutation sigma with a[sigma[i], sigma[j]] == b[i, j], or None.

    Colour refinement on the weighted digraphs prunes the candidate map,
    then backtracking assigns vertices most-constrained-first with exact
    weight checks in both directions.  Realization digraphs are sparse and
    nearly rigid, so this is fast far beyond the factorial bound a naive
    search would impose.
    """
    if a.n != b.n:
        raise ValueError("order mismatch")
    limit = max_order if max_order is not None else max_brute_order(default=10) * 2
    if a.n > limit:
        raise ValueError(f"order {a.n} exceeds the similarity search bound {limit}")
    ga, gb = WeightedDigraph.from_matrix(a), WeightedDigraph.from_matrix(b)
    ca, cb = _refine_colors_joint(ga, gb)
    if sorted(ca) != sorted(cb):
        return None
    out_a, in_a = _edge_maps(ga)
    out_b, in_b = _edge_maps(gb)

    candidates = [[u for u in range(a.n) if ca[u] == cb[v]] for v in range(b.n)]
    order = sorted(range(b.n), key=lambda v: (len(candidates[v]), v))
    sigma: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v: int, u: int) -> bool:
        for vv, uu in sigma.items():
            if out_b[v].get(vv, 0) != out_a[u].get(uu, 0):
                return False
            if in_b[v].get(vv, 0) != in_a[u].get(uu, 0):
                return False
        return out_b[v].get(v, 0) == out_a[u].get(u, 0)

    def assign(pos: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        for u in candidates[v]:
            if u in used or not consistent(v, u):
                continue
            sigma[v] = u
            used.add(u)
            if assign(pos + 1):
                return True
            del sigma[v]
            used.remove(u)
        return False

    if assign(0):
        return [sigma[v] for v in range(b.n)]
    return None


def is_perm_similar(a: StochMatrix, b: StochMatrix, max_order: Optional[int] = None) -> bool:
    """True iff some permutation matrix P gives P A P^T = B, exactly."""
    return find_similarity_permutation(a, b, max_order=max_order) is not None


# -- cycle structure against an arc ------------------------------------


@dataclass(frozen=True)
class CycleStructureReport:
    """Outcome of checking a digraph's cycles against its arc's constraints.

    ``ok`` is the headline verdict: all lengths allowed, and both an
    s-cycle and a q-cycle present.  The remaining fields report the
    q-cycle count facts that sparsest realizations must additionally
    satisfy.
    """

    ok: bool
    lengths: tuple[int, ...]
    allowed_lengths: tuple[int, ...]
    q_cycle_count: int
    has_s_cycle: bool
    at_least_d_q_cycles: Optional[bool] = None
    exactly_d_disjoint_equal: Optional[bool] = None
    problems: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def cycle_structure_check(g: WeightedDigraph, arc: ArcParams) -> CycleStructureReport:
    """Check that every cycle length lies in {s} | {k*q : 1 <= k <= d},
    with at least one s-cycle and one q-cycle present.

    For d >= 2 the report also says whether there are at least d q-cycles
    and, when there are exactly d, whether they are vertex-disjoint with
    equal weights (what any realization must satisfy).
    """
    report = simple_cycles(g)
    q, s, d = arc.q, arc.s, arc.d
    allowed = sorted({s} | {k * q for k in range(1, d + 1)})
    lengths = sorted(report.lengths())
    problems = []
    bad = [length for length in lengths if length not in allowed]
    if bad:
        problems.append(f"forbidden cycle lengths {bad}")
    if s not in lengths:
        problems.append(f"no cycle of length s={s}")
    if q not in lengths:
        problems.append(f"no cycle of length q={q}")
    q_cycles = report.cycles_of_length(q)
    at_least = None
    exactly = None
    if d >= 2:
        at_least = len(q_cycles) >= d
        if len(q_cycles) == d:
            seen: set[int] = set()
            disjoint = True
            for cyc, _ in q_cycles:
                if seen & set(cyc):
                    disjoint = False
                seen |= set(cyc)
            weights = {w for _, w in q_cycles}
            exactly = disjoint and len(weights) == 1
    return CycleStructureReport(
        ok=not problems,
        lengths=tuple(lengths),
        allowed_lengths=tuple(allowed),
        q_cycle_count=len(q_cycles),
        has_s_cycle=s in lengths,
        at_least_d_q_cycles=at_least,
        exactly_d_disjoint_equal=exactly,
        problems=tuple(problems),
    )


def to_dot(g: WeightedDigraph, name: str = "gamma") -> str:
    """DOT source with vertices labelled 1..n and rational edge labels."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in range(g.n):
        lines.append(f"  {v + 1};")
    for (u, v), w in g.edges.items():
        lines.append(f'  {u + 1} -> {v + 1} [label="{rat_str(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
