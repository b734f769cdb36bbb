"""Boundary-arc polynomials: the unreduced parametric form and its reduction.

Every boundary arc of the order-n region is cut out by the one-parameter
family

    t^s (t^q - b)^d  =  a^d t^(q d),      a in [0, 1],  b = 1 - a,

where (p/q, r/s) are the arc endpoints and d = floor(n/q).  The polynomial
has extraneous zero roots; dividing out the maximal power of t leaves the
reduced polynomial, whose closed form depends only on the arc type:

    Type 0:   (t - b)^d - a^d                (q = 1, d = n = s)
    Type I:   t^s - b t^(s-q) - a            (d = 1)
    Type II:  (t^q - b)^d - a^d t^z          (z = q d - s)
    Type III: t^y (t^q - b)^d - a^d          (y = s - q d)

Coefficient bookkeeping follows the monic convention: k_j is the
coefficient of t^(deg - j), so that k_q = -b*d and
k_(2q) = d(d-1) b^2 / 2 for every reduced polynomial with 2q < deg.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from karpelevic.algebra import RatLike, RatPoly, rat
from karpelevic.farey import ArcParams, ArcType

__all__ = [
    "ItoInstance",
    "full_arc_poly",
    "reduce_poly",
    "reduced_ito",
    "coefficient_identity_check",
]


def _check_alpha(alpha: Fraction) -> None:
    if not (0 <= alpha <= 1):
        raise ValueError(f"parameter must lie in [0, 1], got {alpha}")


def full_arc_poly(arc: ArcParams, alpha: RatLike) -> RatPoly:
    """The unreduced arc polynomial t^s (t^q - b)^d - a^d t^(q d), expanded."""
    a = rat(alpha)
    _check_alpha(a)
    b = 1 - a
    binomial = RatPoly.monomial(arc.q) - RatPoly([b])
    lhs = (binomial ** arc.d).shift(arc.s)
    rhs = RatPoly.monomial(arc.q * arc.d, a ** arc.d)
    return lhs - rhs


def reduce_poly(full: RatPoly) -> RatPoly:
    """Divide out the maximal power of t, leaving a nonzero constant term."""
    reduced, _ = full.strip_zero_roots()
    return reduced


@dataclass(frozen=True)
class ItoInstance:
    """A reduced arc polynomial at a specific rational parameter value."""

    arc: ArcParams
    alpha: Fraction
    poly: RatPoly

    @property
    def beta(self) -> Fraction:
        return 1 - self.alpha

    def k(self, j: int) -> Fraction:
        """Coefficient k_j of t^(deg - j) in the monic expansion."""
        return self.poly.coeff_from_top(j)


def _closed_form(arc: ArcParams, a: Fraction) -> RatPoly:
    b = 1 - a
    if arc.type_tag is ArcType.TYPE_0:
        return (RatPoly.x() - RatPoly([b])) ** arc.d - RatPoly([a ** arc.d])
    if arc.type_tag is ArcType.TYPE_I:
        return (
            RatPoly.monomial(arc.s)
            - RatPoly.monomial(arc.s - arc.q, b)
            - RatPoly([a])
        )
    binomial = RatPoly.monomial(arc.q) - RatPoly([b])
    if arc.type_tag is ArcType.TYPE_II:
        assert arc.z is not None
        return binomial ** arc.d - RatPoly.monomial(arc.z, a ** arc.d)
    assert arc.y is not None
    return (binomial ** arc.d).shift(arc.y) - RatPoly([a ** arc.d])


def reduced_ito(arc: ArcParams, alpha: RatLike) -> ItoInstance:
    """Build the reduced polynomial for the arc's type at the given parameter.

    The closed form is cross-checked against stripping zero roots from the
    unreduced polynomial; a mismatch would mean the arc was classified
    wrongly and is raised, never returned.
    """
    a = rat(alpha)
    _check_alpha(a)
    closed = _closed_form(arc, a)
    # Cross-check against the unreduced polynomial with the number of
    # extraneous zero roots the classification predicts.  (Comparing with
    # reduce_poly would over-strip at special parameters where the closed
    # form itself vanishes at 0, e.g. Type 0 with even degree at a = 1/2.)
    extraneous = arc.s + arc.q * arc.d - arc.reduced_degree
    if closed.shift(extraneous) != full_arc_poly(arc, a):
        raise AssertionError(f"closed form disagrees with reduction for {arc} at {a}")
    return ItoInstance(arc=arc, alpha=a, poly=closed)


def coefficient_identity_check(inst: ItoInstance) -> bool:
    """Exact test of 2*d*k_(2q) = (d-1)*k_q**2.

    k_(2q) is taken as 0 when 2q exceeds the degree (the Type I case,
    where the identity holds vacuously).
    """
    d = inst.arc.d
    q = inst.arc.q
    k_q = inst.k(q)
    k_2q = inst.k(2 * q) if 2 * q <= inst.poly.degree else Fraction(0)
    return 2 * d * k_2q == (d - 1) * k_q ** 2
