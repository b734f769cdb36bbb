"""Exact rational scalars, dense rational polynomials, and stochastic matrices.

Everything in this module is exact: scalars are ``fractions.Fraction``
(arbitrary-precision, always in lowest terms), polynomials are dense
coefficient lists over Fraction, and matrices are immutable grids of
Fraction.  No floating point enters anywhere; the float world lives in
:mod:`karpelevic.boundary` only.

Indexing convention: matrices and vertices are 0-based throughout the
package.  The cyclic shift ``C(n)`` maps index i to i+1 (mod n), i.e. it has
ones in positions (i, (i+1) % n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

__all__ = [
    "Rat",
    "RatPoly",
    "StochMatrix",
    "rat",
    "rat_str",
    "poly_eval",
    "charpoly_exact",
    "cyclic_shift_matrix",
    "identity_matrix",
]


def rat(value: RatLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction.

    Decimal strings are rejected: rationals cross the API boundary as
    "p/q" (or plain integer) strings only.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text or "E" in text:
            raise ValueError(f"not an exact rational literal: {value!r}")
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def rat_str(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class RatPoly:
    """Dense univariate polynomial over the rationals.

    Coefficients are stored ascending: ``coeffs[i]`` multiplies t**i.
    Trailing zeros are trimmed, so the leading coefficient of a nonzero
    polynomial is nonzero; the zero polynomial has an empty tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree: int, coeff: RatLike = 1) -> "RatPoly":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls((0,) * degree + (rat(coeff),))

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        """Coefficient of t**i (0 beyond the stored degree)."""
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def coeff_from_top(self, j: int) -> Fraction:
        """Coefficient of t**(degree - j).

        This is the k_j of the monic expansion t**n + k_1 t**(n-1) + ...,
        the convention used everywhere a coefficient identity is checked.
        """
        return self.coeff(self.degree - j)

    # -- arithmetic ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: Union["RatPoly", RatLike]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            s = rat(other)
            return RatPoly(tuple(c * s for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return RatPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        if k < 0:
            raise ValueError("negative power")
        result = RatPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "RatPoly":
        """Multiply by t**k."""
        if self.is_zero():
            return self
        return RatPoly((Fraction(0),) * k + self.coeffs)

    def compose(self, inner: "RatPoly") -> "RatPoly":
        """Exact composition self(inner(t)) by Horner over polynomials."""
        result = RatPoly.zero()
        for c in reversed(self.coeffs):
            result = result * inner + RatPoly((c,))
        return result

    def strip_zero_roots(self) -> tuple["RatPoly", int]:
        """Divide out the maximal power of t; returns (quotient, multiplicity)."""
        if self.is_zero():
            raise ValueError("cannot strip zero roots from the zero polynomial")
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return RatPoly(self.coeffs[k:]), k

    def __call__(self, x: RatLike) -> Fraction:
        return poly_eval(self, x)

    # -- serialization ------------------------------------------------

    def to_json(self) -> list[str]:
        """JSON form: array of "p/q" coefficient strings, ascending degree."""
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RatPoly":
        return cls(rat(c) for c in data)

    def __repr__(self) -> str:
        if self.is_zero():
            return "RatPoly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{rat_str(c)}*{mono}")
        return "RatPoly(" + " + ".join(parts).replace("+ -", "- ") + ")"


def poly_eval(p: RatPoly, x: RatLike) -> Fraction:
    """Exact Horner evaluation of p at x."""
    xv = rat(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * xv + c
    return acc


@dataclass(frozen=True)
class StochMatrix:
    """Dense square matrix of exact rationals with unit row sums.

    Entries are validated at construction: each in [0, 1], each row summing
    to exactly 1.  Instances are immutable; all operations return new
    matrices.
    """

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries: Iterable[Iterable[RatLike]], *, _validate: bool = True):
        rows = tuple(tuple(rat(e) for e in row) for row in entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        if _validate:
            for i, row in enumerate(rows):
                if any(e < 0 or e > 1 for e in row):
                    raise ValueError(f"row {i} has an entry outside [0, 1]")
                if sum(row) != 1:
                    raise ValueError(f"row {i} sums to {sum(row)}, not 1")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __matmul__(self, other: "StochMatrix") -> "StochMatrix":
        if self.n != other.n:
            raise ValueError("order mismatch")
        n = self.n
        cols = list(zip(*other.entries))
        prod = [
            [sum(a * b for a, b in zip(row, col)) for col in cols]
            for row in self.entries
        ]
        return StochMatrix(prod)

    def transpose(self) -> "StochMatrix":
        # The transpose of a stochastic matrix need not be stochastic; this
        # exists for permutation matrices, where it is the inverse.
        return StochMatrix(tuple(zip(*self.entries)), _validate=False)

    def permuted(self, perm: Sequence[int]) -> "StochMatrix":
        """Relabel by perm: entry (i, j) of the result is self[perm[i], perm[j]].

        Equivalent to P A P^T where P has ones at (i, perm[i]).
        """
        n = self.n
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation of 0..n-1")
        return StochMatrix(
            tuple(tuple(self.entries[perm[i]][perm[j]] for j in range(n)) for i in range(n)),
            _validate=False,
        )

    def support(self) -> set[tuple[int, int]]:
        return {
            (i, j)
            for i, row in enumerate(self.entries)
            for j, e in enumerate(row)
            if e != 0
        }

    def nnz(self) -> int:
        return sum(1 for row in self.entries for e in row if e != 0)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        """Shared wire format: {"n": int, "entries": [["p/q", ...], ...]}."""
        return {
            "n": self.n,
            "entries": [[rat_str(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StochMatrix":
        entries = [[rat(e) for e in row] for row in data["entries"]]
        if len(entries) != data["n"]:
            raise ValueError("matrix order does not match 'n'")
        return cls(entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "StochMatrix":
        return cls.from_json(json.loads(text))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rat_str(e) for e in row) for row in self.entries)
        return f"StochMatrix[{self.n}]({body})"


def identity_matrix(n: int) -> StochMatrix:
    if n < 1:
        raise ValueError("order must be at least 1")
    return StochMatrix(
        tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)),
        _validate=False,
    )


def cyclic_shift_matrix(n: int, power: int = 1) -> StochMatrix:
    """C(n)**power, where C(n) has ones in positions (i, (i+1) % n)."""
    if n < 1:
        raise ValueError("order must be at least 1")
    k = power % n
    return StochMatrix(
        tuple(
            tuple(Fraction(1 if j == (i + k) % n else 0) for j in range(n))
            for i in range(n)
        ),
        _validate=False,
    )


def charpoly_exact(matrix) -> RatPoly:
    """Monic characteristic polynomial det(tI - M) over exact rationals.

    Works on a StochMatrix or any square grid of rationals.  The matrix is
    reduced to upper Hessenberg form by exact similarity transforms, then
    the characteristic polynomial is assembled by the leading-principal-
    minor recurrence.  Division by a rational pivot is exact, so the result
    carries no rounding of any kind.  Comfortable for orders up to ~60.
    """
    if isinstance(matrix, StochMatrix):
        grid = [list(row) for row in matrix.entries]
    else:
        grid = [[rat(e) for e in row] for row in matrix]
    n = len(grid)
    for i, row in enumerate(grid):
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
    if n == 0:
        return RatPoly.one()

    h = grid
    # Similarity reduction to upper Hessenberg with exact pivoting.
    for j in range(n - 2):
        pivot_row = None
        for i in range(j + 1, n):
            if h[i][j] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != j + 1:
            h[j + 1], h[pivot_row] = h[pivot_row], h[j + 1]
            for row in h:
                row[j + 1], row[pivot_row] = row[pivot_row], row[j + 1]
        pivot = h[j + 1][j]
        for i in range(j + 2, n):
            factor = h[i][j]
            if factor == 0:
                continue
            m = factor / pivot
            row_i, row_p = h[i], h[j + 1]
            for k in range(j, n):
                if row_p[k] != 0:
                    row_i[k] -= m * row_p[k]
            for k in range(n):
                if h[k][i] != 0:
                    h[k][j + 1] += m * h[k][i]

    # p_k(t) = (t - h[k-1][k-1]) p_{k-1}(t)
    #          - sum_{i<k-1} h[i][k-1] * (prod of subdiagonal h[m][m-1], m=i+1..k-1) * p_i(t)
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        diag = h[k - 1][k - 1]
        cur = [Fraction(0)] + list(prev)
        for idx in range(len(prev)):
            if prev[idx] != 0 and diag != 0:
                cur[idx] -= diag * prev[idx]
        running = Fraction(1)
        for i in range(k - 2, -1, -1):
            running *= h[i + 1][i]
            if running == 0:
                break
            top = h[i][k - 1]
            if top == 0:
                continue
            scale = top * running
            pi = polys[i]
            for idx in range(len(pi)):
                if pi[idx] != 0:
                    cur[idx] -= scale * pi[idx]
        polys.append(cur)
    return RatPoly(polys[n])
