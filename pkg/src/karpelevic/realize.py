"""Stochastic matrices realising each boundary-arc polynomial type.

All constructions work at matrix order n equal to the reduced-polynomial
degree (Type II: n = q*d, Type III: n = q*d + y), with the family
parameter held as an exact rational in (0, 1).

Construction catalogue, 0-based throughout:

- Type 0:   b*I + a*C, the unique realization up to relabelling.
- Type I:   an n-cycle with the first n+1-q rows split between the step
            edge i -> i+1 (weight a_i) and the back edge i -> i+1-q.
- Type II:  d disjoint q-cycles joined into a single long cycle by d
            connector edges; the connector offsets are indexed by a
            composition of n - z - d into d parts below q.  Extra
            connectors can be grafted on as long as every resulting long
            cycle keeps length n - z.
- Type III: an n-cycle plus d back edges i -> i+1-q whose positions are
            indexed by a composition of y; more generally, d blocks of
            clustered back edges with per-block weight products all equal.

Compositions are deduplicated up to cyclic rotation (necklace classes);
rotating a composition relabels the realization, so necklace classes
index realizations up to permutation similarity.  Reflections are NOT
identified: reversed compositions generally give genuinely dissimilar
matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from karpelevic.algebra import (
    RatLike,
    RatPoly,
    StochMatrix,
    charpoly_exact,
    rat,
)
from karpelevic.digraph import (
    CycleStructureReport,
    WeightedDigraph,
    cycle_structure_check,
    cyclic_distance,
    max_brute_order,
    simple_cycles,
)
from karpelevic.farey import ArcParams, ArcType
from karpelevic.itopoly import reduced_ito

__all__ = [
    "Composition",
    "TypeIIRealization",
    "TypeIIIFamilySpec",
    "VerificationResult",
    "ProbeOutcome",
    "ProbeReport",
    "type0",
    "type1",
    "type2_sparsest",
    "type2_base",
    "type2_augment",
    "type3_sparsest",
    "type3_family",
    "enumerate_sparsest",
    "build_sparsest",
    "verify_realization",
    "dd_support_check",
    "conjecture_probe",
]


def _check_open_unit(a: Fraction, what: str = "parameter") -> None:
    if not (0 < a < 1):
        raise ValueError(f"{what} must lie strictly between 0 and 1, got {a}")


# -- compositions -------------------------------------------------------


@dataclass(frozen=True)
class Composition:
    """Ordered tuple of integers in 0..bound-1 indexing a sparsest realization."""

    parts: tuple[int, ...]
    bound: int

    def __post_init__(self) -> None:
        if any(not 0 <= p < self.bound for p in self.parts):
            raise ValueError(f"parts must lie in 0..{self.bound - 1}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def rotations(self) -> list[tuple[int, ...]]:
        p = self.parts
        return [p[k:] + p[:k] for k in range(len(p))]

    def canonical(self) -> "Composition":
        """Lexicographically minimal cyclic rotation."""
        return Composition(min(self.rotations()), self.bound)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _necklace_classes(total: int, length: int, bound: int) -> list[Composition]:
    seen: set[tuple[int, ...]] = set()
    out: list[Composition] = []
    for parts in itertools.product(range(bound), repeat=length):
        if sum(parts) != total:
            continue
        canon = min(parts[k:] + parts[:k] for k in range(length))
        if canon in seen:
            continue
        seen.add(canon)
        out.append(Composition(canon, bound))
    out.sort(key=lambda c: c.parts)
    return out


# -- Type 0 --------------------------------------------------------------


def type0(n: int, alpha: RatLike) -> StochMatrix:
    """b*I_n + a*C_n: the unique order-n realization of (t - b)^n - a^n."""
    if n < 1:
        raise ValueError("order must be at least 1")
    a = rat(alpha)
    _check_open_unit(a)
    b = 1 - a
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] += b
        rows[i][(i + 1) % n] += a
    return StochMatrix(rows)


# -- Type I --------------------------------------------------------------


def type1(n: int, q: int, alphas: Sequence[RatLike]) -> StochMatrix:
    """The general Type I realization of t^n - b*t^(n-q) - a.

    Rows 0..n-q carry weight alphas[i] on the step edge i -> i+1 and
    1 - alphas[i] on the back edge i -> (i+1-q) mod n; the remaining q-1
    rows step forward with weight 1.  Each alphas[i] lies in (0, 1] and
    a is their product.
    """
    if not (2 <= q < n):
        raise ValueError("need 2 <= q < n")
    if 2 * q <= n:
        raise ValueError("Type I requires 2q > n")
    from math import gcd

    if gcd(q, n) != 1:
        raise ValueError("q and n must be coprime")
    weights = [rat(a) for a in alphas]
    if len(weights) != n + 1 - q:
        raise ValueError(f"need exactly n+1-q = {n + 1 - q} weights, got {len(weights)}")
    for w in weights:
        if not (0 < w <= 1):
            raise ValueError(f"weights must lie in (0, 1], got {w}")
    a = Fraction(1)
    for w in weights:
        a *= w
    _check_open_unit(a, "the product of the weights")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if i < n + 1 - q:
            rows[i][(i + 1) % n] += weights[i]
            if weights[i] != 1:
                rows[i][(i + 1 - q) % n] += 1 - weights[i]
        else:
            rows[i][(i + 1) % n] = Fraction(1)
    return StochMatrix(rows)


# -- Type II -------------------------------------------------------------


def _type2_connectors(q: int, d: int, z: int, parts: Sequence[int]) -> list[tuple[int, int]]:
    """Base connector edges (a_t, b_t), 0-based, one per consecutive block pair."""
    prefix = 0
    conns: list[tuple[int, int]] = []
    for t in range(d):
        if t == 0:
            a_t = 0
            b_t = q
        else:
            prefix = (prefix + parts[t]) % q
            a_t = t * q + prefix
            b_t = (t + 1) * q + prefix if t <= d - 2 else (q - parts[0]) % q
        conns.append((a_t, b_t))
    return conns


def _allowed_connectors(q: int, d: int, z: int, t: int) -> list[tuple[int, int]]:
    """The full candidate connector set between block t and block (t+1) mod d."""
    if t < d - 1:
        return [(t * q + i, (t + 1) * q + i) for i in range(q)]
    return [((d - 1) * q + i, (z + d + i) % q) for i in range(q)]


@dataclass(frozen=True)
class TypeIIRealization:
    """A Type II digraph: d disjoint q-cycles plus connector edges.

    ``connectors[t]`` lists the edges from block t (vertices t*q .. t*q+q-1)
    into block (t+1) mod d.  The sparsest realization has one connector per
    pair; augmentation adds more, subject to every induced long cycle
    keeping length n - z.  Weights enter only at instantiation.
    """

    q: int
    d: int
    z: int
    composition: Composition
    connectors: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n(self) -> int:
        return self.q * self.d

    @classmethod
    def sparsest(cls, q: int, d: int, z: int, composition: Composition) -> "TypeIIRealization":
        if d < 2:
            raise ValueError("Type II requires d >= 2")
        if not (1 <= z <= q - 1):
            raise ValueError("need z in 1..q-1")
        n = q * d
        if composition.bound != q:
            raise ValueError(f"composition bound must be q = {q}")
        if len(composition.parts) != d:
            raise ValueError(f"composition must have d = {d} parts")
        if composition.total != n - z - d:
            raise ValueError(
                f"composition must sum to n-z-d = {n - z - d}, got {composition.total}"
            )
        conns = _type2_connectors(q, d, z, composition.parts)
        real = cls(
            q=q,
            d=d,
            z=z,
            composition=composition,
            connectors=tuple((c,) for c in conns),
        )
        assert real.long_cycle_lengths() == {n - z}
        return real

    def block_of(self, v: int) -> int:
        return v // self.q

    def long_cycle_lengths(self) -> set[int]:
        """Lengths of all cycles using one connector per block pair.

        Each choice of one connector (a_t, b_t) per t closes a cycle that
        runs through every block; its length is
        d + sum_t (a_t - b_(t-1)) mod q.
        """
        lengths: set[int] = set()
        for combo in itertools.product(*self.connectors):
            total = self.d
            for t in range(self.d):
                a_t = combo[t][0]
                b_prev = combo[(t - 1) % self.d][1]
                total += (a_t - b_prev) % self.q
            lengths.add(total)
        return lengths

    def augmented(self, edge: tuple[int, int]) -> "TypeIIRealization":
        """Add one connector edge, or raise if it breaks the length law.

        The edge must belong to the candidate set between some block t and
        its successor; it is accepted only if every long cycle of the
        enlarged digraph (the number doubles) still has length n - z.
        """
        src, dst = edge
        t = self.block_of(src)
        if not (0 <= src < self.n and 0 <= dst < self.n):
            raise ValueError(f"edge {edge} out of range")
        if edge not in _allowed_connectors(self.q, self.d, self.z, t):
            raise ValueError(
                f"edge {edge} is not a candidate connector from block {t} "
                f"to block {(t + 1) % self.d}"
            )
        if edge in self.connectors[t]:
            raise ValueError(f"edge {edge} is already present")
        new_connectors = list(self.connectors)
        new_connectors[t] = tuple(sorted(new_connectors[t] + (edge,)))
        candidate = TypeIIRealization(
            q=self.q,
            d=self.d,
            z=self.z,
            composition=self.composition,
            connectors=tuple(new_connectors),
        )
        lengths = candidate.long_cycle_lengths()
        if lengths != {self.n - self.z}:
            raise ValueError(
                f"edge {edge} rejected: it would create a long cycle of length "
                f"{sorted(lengths - {self.n - self.z})} instead of {self.n - self.z}"
            )
        return candidate

    def free_parameters(self) -> list[str]:
        """Names of the free cycle weights, one per connector source except
        the last source of each block (whose weight is determined)."""
        names = []
        for conns in self.connectors:
            sources = sorted(a for a, _ in conns)
            for v in sources[:-1]:
                names.append(f"alpha_{v + 1}")
        return names

    def instantiate(
        self, alpha: RatLike, params: Optional[Mapping[str, RatLike]] = None
    ) -> StochMatrix:
        """Assign weights and return the stochastic matrix.

        ``params`` supplies the free cycle weights by name (see
        :meth:`free_parameters`); the last connector source of each block
        gets the dependent weight that makes the q-cycle product equal
        1 - alpha.  Any weight falling outside the open unit interval
        makes the instantiation infeasible and raises.
        """
        a = rat(alpha)
        _check_open_unit(a)
        b = 1 - a
        given = {k: rat(v) for k, v in (params or {}).items()}
        expected = set(self.free_parameters())
        unknown = set(given) - expected
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}; expected {sorted(expected)}")
        missing = expected - set(given)
        if missing:
            raise ValueError(f"missing parameters {sorted(missing)}")

        forward: dict[int, Fraction] = {}
        for conns in self.connectors:
            sources = sorted(v for v, _ in conns)
            prod = Fraction(1)
            for v in sources[:-1]:
                w = given[f"alpha_{v + 1}"]
                _check_open_unit(w, f"alpha_{v + 1}")
                forward[v] = w
                prod *= w
            dependent = b / prod
            if not (0 < dependent < 1):
                raise ValueError(
                    f"infeasible: the dependent weight at vertex {sources[-1] + 1} "
                    f"is {dependent}, outside (0, 1)"
                )
            forward[sources[-1]] = dependent

        rows = [[Fraction(0)] * self.n for _ in range(self.n)]
        for v in range(self.n):
            t = self.block_of(v)
            successor = t * self.q + (v + 1 - t * self.q) % self.q
            rows[v][successor] = forward.get(v, Fraction(1))
        for conns in self.connectors:
            for src, dst in conns:
                rows[src][dst] = 1 - forward[src]
        return StochMatrix(rows)

    def digraph(self, alpha: RatLike, params: Optional[Mapping[str, RatLike]] = None) -> WeightedDigraph:
        return WeightedDigraph.from_matrix(self.instantiate(alpha, params))


def type2_base(q: int, d: int, z: int, x: Composition) -> TypeIIRealization:
    """The sparsest Type II digraph for a composition of n - z - d."""
    return TypeIIRealization.sparsest(q, d, z, x)


def type2_sparsest(q: int, d: int, z: int, alpha: RatLike, x: Composition) -> StochMatrix:
    """Sparsest realization of (t^q - b)^d - a^d t^z for one composition."""
    return type2_base(q, d, z, x).instantiate(alpha)


def type2_augment(base: TypeIIRealization, new_edge: tuple[int, int]) -> TypeIIRealization:
    """Add a connector edge to a Type II digraph; raises if rejected."""
    return base.augmented(new_edge)


# -- Type III ------------------------------------------------------------


def _type3_alpha_rows(q: int, d: int, y: int, parts: Sequence[int]) -> list[int]:
    """0-based rows carrying the split (back-edge) weights.

    Row k (1-based formula) sits at position k*q + parts[0] + ... + parts[k-1]
    on the n-cycle; the d-th one always lands on the last vertex.
    """
    n = q * d + y
    rows = []
    acc = 0
    for k in range(1, d + 1):
        acc += parts[k - 1]
        rows.append((k * q + acc - 1) % n)
    return rows


def type3_sparsest(q: int, d: int, y: int, alpha: RatLike, parts: Composition) -> StochMatrix:
    """Sparsest realization of t^y (t^q - b)^d - a^d for one composition.

    An n-cycle (n = q*d + y) in which d rows split between the step edge
    (weight a) and the back edge i -> (i+1-q) mod n (weight 1 - a); the
    splitting rows are spaced so the d q-cycles are vertex-disjoint.
    """
    if d < 2:
        raise ValueError("Type III requires d >= 2")
    if not (1 <= y <= q - 1):
        raise ValueError("need y in 1..q-1")
    n = q * d + y
    if parts.bound != q:
        raise ValueError(f"composition bound must be q = {q}")
    if len(parts.parts) != d:
        raise ValueError(f"composition must have d = {d} parts")
    if parts.total != y:
        raise ValueError(f"composition must sum to y = {y}, got {parts.total}")
    a = rat(alpha)
    _check_open_unit(a)
    split_rows = set(_type3_alpha_rows(q, d, y, parts.parts))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if i in split_rows:
            rows[i][(i + 1) % n] = a
            rows[i][(i + 1 - q) % n] = 1 - a
        else:
            rows[i][(i + 1) % n] = Fraction(1)
    return StochMatrix(rows)


@dataclass(frozen=True)
class TypeIIIFamilySpec:
    """Blocks of clustered back edges defining a Type III family member.

    ``blocks[t]`` is a set of 0-based vertices i carrying the back edge
    i -> (i+1-q) mod n.  Within a block all circular distances stay below
    q (the q-cycles share vertices); across blocks they are at least q
    (vertex-disjoint).  ``weights[i]`` is the step-edge weight at block
    vertex i, in (0, 1); each block's weights multiply to the family
    parameter.
    """

    n: int
    q: int
    d: int
    y: int
    blocks: tuple[frozenset[int], ...]
    weights: Mapping[int, Fraction]

    def __init__(
        self,
        n: int,
        q: int,
        d: int,
        y: int,
        blocks: Iterable[Iterable[int]],
        weights: Mapping[int, RatLike],
    ):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in blocks))
        object.__setattr__(
            self, "weights", {int(v): rat(w) for v, w in weights.items()}
        )
        self._validate()

    def _validate(self) -> None:
        if self.n != self.q * self.d + self.y:
            raise ValueError("need n = q*d + y")
        if not (1 <= self.y <= self.q - 1) or self.d < 2:
            raise ValueError("need d >= 2 and y in 1..q-1")
        if len(self.blocks) != self.d:
            raise ValueError(f"need exactly d = {self.d} blocks")
        members = [v for block in self.blocks for v in block]
        if len(members) != len(set(members)):
            raise ValueError("blocks must be pairwise disjoint")
        if any(not block for block in self.blocks):
            raise ValueError("blocks must be nonempty")
        if any(not 0 <= v < self.n for v in members):
            raise ValueError("block vertices out of range")
        for t, block in enumerate(self.blocks):
            for i in block:
                for j in block:
                    if i < j and cyclic_distance(self.n, i, j) >= self.q:
                        raise ValueError(
                            f"vertices {i} and {j} in block {t} are at circular "
                            f"distance >= q = {self.q}"
                        )
        for t, bt in enumerate(self.blocks):
            for u, bu in enumerate(self.blocks):
                if t >= u:
                    continue
                for i in bt:
                    for j in bu:
                        if cyclic_distance(self.n, i, j) < self.q:
                            raise ValueError(
                                f"vertices {i} (block {t}) and {j} (block {u}) are at "
                                f"circular distance < q = {self.q}"
                            )
        if set(self.weights) != set(members):
            raise ValueError("weights must be given exactly on the block vertices")
        for v, w in self.weights.items():
            _check_open_unit(w, f"weight at vertex {v}")
        products = {
            t: _product(self.weights[v] for v in block)
            for t, block in enumerate(self.blocks)
        }
        if len(set(products.values())) != 1:
            raise ValueError(f"block weight products differ: {products}")

    @property
    def alpha(self) -> Fraction:
        return _product(self.weights[v] for v in self.blocks[0])


def _product(values: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def type3_family(spec: TypeIIIFamilySpec) -> StochMatrix:
    """The family matrix: step edges weighted per spec, back edges filling
    each split row to a unit sum."""
    n, q = spec.n, spec.q
    rows = [[Fraction(0)] * n for _ in range(n)]
    block_vertices = {v for block in spec.blocks for v in block}
    for i in range(n):
        if i in block_vertices:
            w = spec.weights[i]
            rows[i][(i + 1) % n] = w
            rows[i][(i + 1 - q) % n] = 1 - w
        else:
            rows[i][(i + 1) % n] = Fraction(1)
    return StochMatrix(rows)


# -- enumeration ---------------------------------------------------------


def enumerate_sparsest(arc: ArcParams) -> list[Composition]:
    """All sparsest-realization classes of the arc, as canonical compositions.

    Type II/III arcs yield the necklace classes (lexicographically minimal
    cyclic rotations) of the compositions of n-z-d resp. y into d parts
    below q.  Type 0 and Type I have a single sparsest class, reported as
    one empty composition.
    """
    if arc.reduced_degree != arc.n:
        raise ValueError(
            "sparsest enumeration requires matrix order = reduced degree "
            f"(got n = {arc.n}, degree = {arc.reduced_degree})"
        )
    if arc.type_tag in (ArcType.TYPE_0, ArcType.TYPE_I):
        return [Composition((), max(arc.q, 1))]
    if arc.type_tag is ArcType.TYPE_II:
        assert arc.z is not None
        return _necklace_classes(arc.n - arc.z - arc.d, arc.d, arc.q)
    assert arc.y is not None
    return _necklace_classes(arc.y, arc.d, arc.q)


def build_sparsest(arc: ArcParams, alpha: RatLike, composition: Composition) -> StochMatrix:
    """Materialise one sparsest realization class at a parameter value."""
    if arc.type_tag is ArcType.TYPE_0:
        return type0(arc.n, alpha)
    if arc.type_tag is ArcType.TYPE_I:
        weights: list[RatLike] = [alpha] + [1] * (arc.n - arc.q)
        return type1(arc.n, arc.q, weights)
    if arc.type_tag is ArcType.TYPE_II:
        assert arc.z is not None
        return type2_sparsest(arc.q, arc.d, arc.z, alpha, composition)
    assert arc.y is not None
    return type3_sparsest(arc.q, arc.d, arc.y, alpha, composition)


# -- verification --------------------------------------------------------


@dataclass(frozen=True)
class VerificationResult:
    """Joint verdict of the polynomial and cycle-structure checks.

    Truthiness follows the polynomial check alone, which is the defining
    property; the cycle report carries the structural diagnostics.
    """

    charpoly_ok: bool
    cycle_report: CycleStructureReport
    expected: RatPoly
    actual: RatPoly

    def __bool__(self) -> bool:
        return self.charpoly_ok

    @property
    def cycle_ok(self) -> bool:
        return self.cycle_report.ok

    def describe(self) -> str:
        poly = "charpoly exact match" if self.charpoly_ok else "charpoly MISMATCH"
        if self.cycle_report.ok:
            cyc = (
                f"cycle structure ok (lengths {list(self.cycle_report.lengths)}, "
                f"{self.cycle_report.q_cycle_count} q-cycles)"
            )
        else:
            cyc = "cycle structure BAD: " + "; ".join(self.cycle_report.problems)
        return f"{poly}; {cyc}"


def verify_realization(m: StochMatrix, arc: ArcParams, alpha: RatLike) -> VerificationResult:
    """Compare charpoly_exact(m) with the arc's reduced polynomial, exactly,
    and report the digraph cycle structure alongside."""
    if m.n != arc.reduced_degree:
        raise ValueError(
            f"matrix order {m.n} does not match the reduced degree {arc.reduced_degree}"
        )
    expected = reduced_ito(arc, alpha).poly
    actual = charpoly_exact(m)
    report = cycle_structure_check(WeightedDigraph.from_matrix(m), arc)
    return VerificationResult(
        charpoly_ok=(expected == actual),
        cycle_report=report,
        expected=expected,
        actual=actual,
    )


# -- two-diagonal support (Dmitriev--Dynkin shape) ------------------------


def dd_band_index(arc: ArcParams) -> int:
    """The two-diagonal window index k for the arc's angular interval.

    Matrices with an eigenvalue on the arc can be relabelled so the
    support sits on offsets {k, k+1} (mod n), where the arc's angular
    interval lies within [k/n, (k+1)/n] turns.  Equals p*d when p/q is the
    arc's lower endpoint and p*d - 1 when it is the upper one.
    """
    lo = min(Fraction(arc.p, arc.q), Fraction(arc.r, arc.s))
    return (arc.n * lo.numerator) // lo.denominator


def dd_support_check(m: StochMatrix, k: int) -> Optional[list[int]]:
    """A relabelling confining the support to two cyclic diagonals, or None.

    Searches for a permutation sigma such that every nonzero entry of the
    relabelled matrix sits at (i, j) with j - i = k or k + 1 (mod n).
    Backtracking with propagation: each out-neighbour of an assigned
    vertex has only the two band positions available.  Returns sigma with
    relabelled[i][j] = m[sigma[i]][sigma[j]], or None when no relabelling
    exists.
    """
    n = m.n
    limit = max_brute_order(default=10) * 2
    if n > limit:
        raise ValueError(f"order {n} exceeds the support search bound {limit}")
    offsets = {k % n, (k + 1) % n}
    support = m.support()

    # BFS order over the undirected support keeps every vertex after the
    # first adjacent to an already-placed one, so its slot is forced to
    # two candidates.
    neighbours = [set() for _ in range(n)]
    for i, j in support:
        neighbours[i].add(j)
        neighbours[j].add(i)
    vertices: list[int] = []
    seen: set[int] = set()
    for root in range(n):
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            v = queue.pop(0)
            vertices.append(v)
            for u in sorted(neighbours[v]):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)

    # position[v] = slot of vertex v in the relabelled matrix.
    position: dict[int, int] = {}
    taken: dict[int, int] = {}

    def ok(v: int, slot: int) -> bool:
        if m[v, v] != 0 and 0 not in offsets:
            return False
        for u, s in position.items():
            if m[u, v] != 0 and (slot - s) % n not in offsets:
                return False
            if m[v, u] != 0 and (s - slot) % n not in offsets:
                return False
        return True

    def search(idx: int) -> bool:
        if idx == n:
            return True
        v = vertices[idx]
        forced: Optional[list[int]] = None
        for u, s in position.items():
            if m[u, v] != 0:
                forced = [(s + o) % n for o in offsets]
                break
            if m[v, u] != 0:
                forced = [(s - o) % n for o in offsets]
                break
        slots: Iterable[int] = forced if forced is not None else range(n)
        for slot in slots:
            if slot in taken or not ok(v, slot):
                continue
            position[v] = slot
            taken[slot] = v
            if search(idx + 1):
                return True
            del position[v]
            del taken[slot]
        return False

    if not search(0):
        return None
    sigma = [taken[slot] for slot in range(n)]
    assert all(
        (j - i) % n in offsets
        for i in range(n)
        for j in range(n)
        if m[sigma[i], sigma[j]] != 0
    )
    return sigma


# -- conjecture probe ------------------------------------------------------


class ProbeOutcome:
    FOUND = "FOUND"
    NOT_FOUND = "NOT-FOUND"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ProbeReport:
    """Result of searching for a block-family relabelling of a Type III
    realization."""

    outcome: str
    spec: Optional[TypeIIIFamilySpec] = None
    permutation: Optional[tuple[int, ...]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.outcome == ProbeOutcome.FOUND


def conjecture_probe(
    m: StochMatrix, arc: ArcParams, alpha: RatLike, cycle_budget: int = 10000
) -> ProbeReport:
    """Search for a relabelling putting a Type III realization in family form.

    Requires verify_realization to pass first.  Any family-form digraph
    has exactly one n-cycle, so every family relabelling maps some n-cycle
    of m onto the standard cycle; the search is therefore exhaustive over
    (n-cycle, rotation) pairs.  INCONCLUSIVE is returned only when cycle
    enumeration exceeds the budget.
    """
    if arc.type_tag is not ArcType.TYPE_III:
        raise ValueError("the probe applies to Type III arcs only")
    a = rat(alpha)
    check = verify_realization(m, arc, a)
    if not check:
        raise ValueError("matrix does not realise the arc polynomial; probe refused")
    n, q, d, y = arc.n, arc.q, arc.d, arc.y
    assert y is not None
    report = simple_cycles(WeightedDigraph.from_matrix(m))
    if report.count() > cycle_budget:
        return ProbeReport(
            outcome=ProbeOutcome.INCONCLUSIVE,
            detail=f"cycle enumeration produced {report.count()} cycles, over budget",
        )
    n_cycles = report.cycles_of_length(n)
    tried = 0
    for cyc, _ in n_cycles:
        for rot in range(n):
            tried += 1
            # Vertex ordering[k] goes to slot k; the n-cycle becomes standard.
            ordering = cyc[rot:] + cyc[:rot]
            relabelled = m.permuted(list(ordering))
            spec = _family_spec_of(relabelled, n, q, d, y)
            if spec is not None:
                return ProbeReport(
                    outcome=ProbeOutcome.FOUND,
                    spec=spec,
                    permutation=tuple(ordering),
                    detail=f"family form found after {tried} relabellings",
                )
    return ProbeReport(
        outcome=ProbeOutcome.NOT_FOUND,
        detail=(
            f"exhausted {len(n_cycles)} n-cycles x {n} rotations "
            f"({tried} relabellings) without finding family form"
        ),
    )


def _family_spec_of(m: StochMatrix, n: int, q: int, d: int, y: int) -> Optional[TypeIIIFamilySpec]:
    """Read a family spec off a matrix already aligned to the standard
    n-cycle, or None if it is not in family form."""
    weights: dict[int, Fraction] = {}
    sources: list[int] = []
    for i in range(n):
        row = [(j, w) for j, w in enumerate(m.row(i)) if w != 0]
        step = (i + 1) % n
        back = (i + 1 - q) % n
        if len(row) == 1:
            if row[0] != (step, 1):
                return None
        elif len(row) == 2:
            entries = dict(row)
            if set(entries) != {step, back}:
                return None
            w = entries[step]
            if not (0 < w < 1):
                return None
            weights[i] = w
            sources.append(i)
        else:
            return None
    if not sources:
        return None
    # Blocks must be the components of the distance-below-q relation.
    adjacency = {
        (i, j)
        for i in sources
        for j in sources
        if i != j and cyclic_distance(n, i, j) < q
    }
    blocks: list[set[int]] = []
    remaining = set(sources)
    while remaining:
        seed = min(remaining)
        block = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for u in list(remaining - block):
                if (v, u) in adjacency:
                    block.add(u)
                    frontier.append(u)
        blocks.append(block)
        remaining -= block
    if len(blocks) != d:
        return None
    try:
        return TypeIIIFamilySpec(n=n, q=q, d=d, y=y, blocks=blocks, weights=weights)
    except ValueError:
        return None
