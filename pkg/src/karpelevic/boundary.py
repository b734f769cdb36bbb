"""Numerical tracing of the boundary arcs and region membership tests.

This is the only floating-point module; everything upstream hands over
exact data and the tolerances live here as explicit parameters.

Each arc is the locus of one root of the reduced polynomial as the
parameter a runs over [0, 1].  At a = 1 the reduced polynomial is
t^s - 1 (times a power of t for Type II), so the endpoint e^(2*pi*i*r/s)
is a simple root; continuation therefore starts there and walks a
backwards, matching at every step the root nearest the previous point
and halving the step whenever the jump approaches the distance to the
nearest competing root.  Walking forwards from a = 0 would be ambiguous:
the a = 0 endpoint is a d-fold root (and for arcs anchored at angle 0 it
coincides with the constant eigenvalue 1), so the branch cannot be
selected by proximity there.  The a = 0 sample is the analytic endpoint
itself.

Membership in the region uses its star shape: the boundary radius at a
given argument is read off the traced polylines and compared with the
query's modulus.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from karpelevic.algebra import RatLike, rat
from karpelevic.farey import ArcParams, ArcType, classify_arc, farey_pairs

__all__ = [
    "ComplexPoint",
    "ArcTrace",
    "RootFindingError",
    "ContinuationError",
    "poly_roots",
    "reduced_coeffs_float",
    "trace_arc",
    "point_at",
    "region_boundary",
    "Region",
    "contains",
    "trace_csv",
    "traces_json_payload",
    "boundary_svg",
]

ComplexPoint = complex

DEFAULT_RESIDUAL_SCALE = 1e-10
ENDPOINT_TOL = 1e-9


class RootFindingError(RuntimeError):
    """Polishing failed to reach the residual target."""


class ContinuationError(RuntimeError):
    """Step refinement hit its floor without resolving the branch."""


def _as_float_coeffs(coeffs: Sequence) -> np.ndarray:
    arr = np.asarray([float(c) for c in coeffs], dtype=float)
    if arr.size == 0 or arr[-1] == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    return arr


def _eval_with_derivative(coeffs: np.ndarray, z: complex) -> tuple[complex, complex]:
    p = 0.0 + 0.0j
    dp = 0.0 + 0.0j
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _newton_polish(coeffs: np.ndarray, z: complex, target: float, iters: int = 60) -> complex:
    best = z
    best_res = abs(_eval_with_derivative(coeffs, z)[0])
    for _ in range(iters):
        p, dp = _eval_with_derivative(coeffs, z)
        if abs(p) < best_res:
            best, best_res = z, abs(p)
        if abs(p) <= target:
            return z
        if dp == 0:
            break
        step = p / dp
        z = z - step
        if abs(step) < 1e-17 * max(1.0, abs(z)):
            break
    p = _eval_with_derivative(coeffs, z)[0]
    if abs(p) < best_res:
        best, best_res = z, abs(p)
    if best_res <= target:
        return best
    raise RootFindingError(
        f"Newton polish stalled at residual {best_res:.3e} (target {target:.3e})"
    )


def _residual_target(coeffs: np.ndarray, scale: float) -> float:
    degree = len(coeffs) - 1
    return scale * degree * float(np.max(np.abs(coeffs)))


def poly_roots(coeffs: Sequence, residual_scale: float = DEFAULT_RESIDUAL_SCALE) -> list[complex]:
    """All complex roots of a polynomial given by ascending coefficients.

    Companion-matrix start (numpy.roots) followed by a Newton polish to
    residual |p(root)| <= residual_scale * degree * max|coeff|.  Roots are
    returned sorted by (argument in [0, 2*pi), modulus), so the ordering
    is deterministic.
    """
    arr = _as_float_coeffs(coeffs)
    if len(arr) < 2:
        raise ValueError("degree must be at least 1")
    target = _residual_target(arr, residual_scale)
    raw = np.roots(arr[::-1])
    polished = []
    for z in raw:
        try:
            polished.append(_newton_polish(arr, complex(z), target))
        except RootFindingError:
            # Multiple roots converge slowly; accept the companion value if
            # it already meets a relaxed residual, else re-raise.
            res = abs(_eval_with_derivative(arr, complex(z))[0])
            if res <= 100 * target:
                polished.append(complex(z))
            else:
                raise

    def key(z: complex):
        angle = cmath.phase(z) % (2 * math.pi)
        if angle > 2 * math.pi - 1e-12:
            angle = 0.0
        return (round(angle, 12), round(abs(z), 12))

    return sorted(polished, key=key)


def reduced_coeffs_float(arc: ArcParams, a: float) -> np.ndarray:
    """Ascending float coefficients of the arc's reduced polynomial at a."""
    b = 1.0 - a
    q, d = arc.q, arc.d
    if arc.type_tag is ArcType.TYPE_0:
        base = np.array([-b, 1.0])
    else:
        base = np.zeros(q + 1)
        base[0] = -b
        base[q] = 1.0
    if arc.type_tag is ArcType.TYPE_I:
        out = np.zeros(arc.s + 1)
        out[arc.s] = 1.0
        out[arc.s - q] -= b
        out[0] -= a
        return out
    power = np.array([1.0])
    for _ in range(d):
        power = np.convolve(power, base)
    if arc.type_tag is ArcType.TYPE_0:
        power[0] -= a ** d
        return power
    if arc.type_tag is ArcType.TYPE_II:
        assert arc.z is not None
        power[arc.z] -= a ** d
        return power
    assert arc.y is not None
    out = np.concatenate([np.zeros(arc.y), power])
    out[0] -= a ** d
    return out


# Near 0 the reduced polynomial has a d-fold root at the arc endpoint, and
# binary64 root finding smears such clusters over a radius of roughly
# eps**(1/d).  Below this parameter threshold the continuation switches to
# high-precision root solving; the threshold keeps the double-precision
# root uncertainty eps / (d * a**(d-1)) under ~1e-12.


def _mp_threshold(d: int) -> float:
    if d < 2:
        return 0.0
    return float((2.2e-4 / d) ** (1.0 / (d - 1)))


def _roots_mp(arc: ArcParams, a: float) -> list[complex]:
    """All roots of the reduced polynomial at a, solved at 40 digits."""
    import mpmath

    with mpmath.workdps(40):
        av = mpmath.mpf(a)
        b = 1 - av
        q, d = arc.q, arc.d
        if arc.type_tag is ArcType.TYPE_I:
            coeffs = [mpmath.mpf(0)] * (arc.s + 1)
            coeffs[arc.s] = mpmath.mpf(1)
            coeffs[arc.s - q] = -b
            coeffs[0] = -av
        else:
            if arc.type_tag is ArcType.TYPE_0:
                base = [-b, mpmath.mpf(1)]
            else:
                base = [mpmath.mpf(0)] * (q + 1)
                base[0] = -b
                base[q] = mpmath.mpf(1)
            power = [mpmath.mpf(1)]
            for _ in range(d):
                power = _conv(power, base)
            if arc.type_tag is ArcType.TYPE_0:
                power[0] -= av ** d
                coeffs = power
            elif arc.type_tag is ArcType.TYPE_II:
                assert arc.z is not None
                power[arc.z] -= av ** d
                coeffs = power
            else:
                assert arc.y is not None
                coeffs = [mpmath.mpf(0)] * arc.y + power
                coeffs[0] -= av ** d
        try:
            roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=80)
        except mpmath.libmp.libhyper.NoConvergence as exc:
            raise RootFindingError(f"high-precision solve failed at a = {a}: {exc}")
    return [complex(r) for r in roots]


def _conv(p, q):
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


@dataclass(frozen=True)
class ArcTrace:
    """A traced arc: (parameter, point) samples ascending in the parameter.

    samples[0] is the exact analytic endpoint e^(2*pi*i*p/q) at 0;
    samples[-1] is the polished root at 1, within ``residual_bound`` of
    e^(2*pi*i*r/s).  Every interior point is Newton-polished to the
    module's residual target.
    """

    arc: ArcParams
    samples: tuple[tuple[float, complex], ...]
    residual_bound: float

    @property
    def start_point(self) -> complex:
        return self.samples[0][1]

    @property
    def end_point(self) -> complex:
        return self.samples[-1][1]

    def conjugated(self, arc: ArcParams) -> "ArcTrace":
        """The mirror trace across the real axis, for the mirror arc."""
        return ArcTrace(
            arc=arc,
            samples=tuple((a, z.conjugate()) for a, z in self.samples),
            residual_bound=self.residual_bound,
        )


def _endpoint(fraction_num: int, fraction_den: int) -> complex:
    return cmath.exp(2j * math.pi * fraction_num / fraction_den)


def trace_arc(
    arc: ArcParams,
    m: int,
    residual_scale: float = DEFAULT_RESIDUAL_SCALE,
    step_floor: float = 1e-12,
) -> ArcTrace:
    """Trace one arc with m parameter steps plus adaptive refinement.

    Continuation runs from 1 down to 1/(4m) (the analytic endpoint fills
    in 0 itself, sidestepping the d-fold root there).  A step is accepted
    when the jump from the previous point stays below 0.45 times the
    distance to the nearest competing root; otherwise the step is halved,
    down to ``step_floor``.
    """
    if m < 2:
        raise ValueError("need at least 2 samples")
    start = _endpoint(arc.p, arc.q)
    goal = _endpoint(arc.r, arc.s)

    # Linear grid, then geometric refinement toward 0: near the d-fold
    # root the branch's angular geometry concentrates, and the finer tail
    # keeps polyline chords tight at the circle cusps.
    targets = [k / m for k in range(m - 1, 0, -1)]
    tail = 1.0 / m
    while tail / 2 >= 1e-6:
        tail /= 2
        targets.append(tail)

    if arc.type_tag is ArcType.TYPE_0:
        # The branch is exactly b + a * e^(2*pi*i*r/s): sample the closed
        # form instead of continuing through the n-fold root at 0.
        samples = [(0.0, start)]
        worst = 0.0
        for a in sorted(targets) + [1.0]:
            z = (1.0 - a) + a * goal
            coeffs = reduced_coeffs_float(arc, a)
            worst = max(worst, abs(_eval_with_derivative(coeffs, z)[0]))
            samples.append((a, z))
        return ArcTrace(arc=arc, samples=tuple(samples), residual_bound=max(worst, 1e-15))

    coeffs_1 = reduced_coeffs_float(arc, 1.0)
    target_1 = _residual_target(coeffs_1, residual_scale)
    z = _newton_polish(coeffs_1, goal, target_1)
    if abs(z - goal) > ENDPOINT_TOL:
        raise ContinuationError(
            f"polished endpoint {z} strays {abs(z - goal):.2e} from e^(2*pi*i*{arc.r}/{arc.s})"
        )
    worst = abs(_eval_with_derivative(coeffs_1, z)[0])
    samples = [(1.0, z)]
    mp_below = _mp_threshold(arc.d)

    # Arcs in the closed upper half plane keep Im >= 0 through a collision
    # with the conjugate branch (a touchdown onto the real axis); mirrored
    # arcs keep Im <= 0.
    mid = (Fraction(arc.p, arc.q) + Fraction(arc.r, arc.s)) / 2
    half_sign = 1.0 if mid <= Fraction(1, 2) else -1.0

    def tie_break(cands: list[complex]) -> complex:
        return min(
            cands,
            key=lambda w: (-half_sign * round(w.imag, 12), abs(w - start)),
        )

    a_cur = 1.0
    for a_target in targets:
        while a_cur > a_target + 1e-18:
            a_try = a_target
            while True:
                if a_try < mp_below:
                    roots = _roots_mp(arc, a_try)
                else:
                    roots = poly_roots(reduced_coeffs_float(arc, a_try), residual_scale)
                dists = sorted(roots, key=lambda w: abs(w - z))
                nearest = dists[0]
                jump = abs(nearest - z)
                margin = abs(dists[1] - nearest) if len(dists) > 1 else math.inf
                if jump <= 0.45 * margin:
                    break
                a_mid = 0.5 * (a_cur + a_try)
                if a_cur - a_mid < step_floor:
                    if abs(dists[1] - z) <= 1.6 * jump:
                        # Two branches collide here (the arc crosses a
                        # near-double root, e.g. touching down onto the
                        # real axis): both candidates sit essentially
                        # equidistant, so distance cannot decide.  Resolve
                        # by half plane, then by proximity to the
                        # parameter-0 endpoint.
                        nearest = tie_break(dists[:2])
                        break
                    raise ContinuationError(
                        f"ambiguous continuation near a = {a_try:.6g}: jump {jump:.3e} "
                        f"vs root separation {margin:.3e} at the refinement floor"
                    )
                a_try = a_mid
            z = nearest
            a_cur = a_try
            residual = abs(_eval_with_derivative(reduced_coeffs_float(arc, a_cur), z)[0])
            worst = max(worst, residual)
            samples.append((a_cur, z))

    samples.append((0.0, start))
    samples.reverse()
    return ArcTrace(arc=arc, samples=tuple(samples), residual_bound=max(worst, 1e-15))


def point_at(
    trace: ArcTrace, alpha: Union[RatLike, float], residual_scale: float = DEFAULT_RESIDUAL_SCALE
) -> complex:
    """The traced branch's root at an arbitrary parameter value.

    Seeds from the linear interpolation of the bracketing samples and
    snaps to the nearest root of the reduced polynomial at that value.
    """
    a = float(alpha if isinstance(alpha, float) else rat(alpha))
    if not (0.0 <= a <= 1.0):
        raise ValueError("parameter must lie in [0, 1]")
    pts = trace.samples
    if a <= pts[0][0]:
        seed = pts[0][1]
    elif a >= pts[-1][0]:
        seed = pts[-1][1]
    else:
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= a:
                lo = mid
            else:
                hi = mid
        (a0, z0), (a1, z1) = pts[lo], pts[hi]
        t = (a - a0) / (a1 - a0) if a1 > a0 else 0.0
        seed = z0 + t * (z1 - z0)
    if a == 0.0:
        return seed
    if trace.arc.type_tag is ArcType.TYPE_0:
        return (1.0 - a) + a * _endpoint(trace.arc.r, trace.arc.s)
    if a < _mp_threshold(trace.arc.d):
        roots = _roots_mp(trace.arc, a)
    else:
        roots = poly_roots(reduced_coeffs_float(trace.arc, a), residual_scale)
    return min(roots, key=lambda w: abs(w - seed))


def region_boundary(n: int, m: int) -> list[ArcTrace]:
    """Traces of every boundary arc of the order-n region, in circular order.

    Arcs in the closed upper half plane are traced by continuation; lower
    half arcs are the exact mirror images of their conjugates, which both
    enforces the region's symmetry and halves the work.
    """
    if n < 2:
        raise ValueError("order must be at least 2")
    pairs = farey_pairs(n)
    half = Fraction(1, 2)
    traced: dict[tuple[Fraction, Fraction], ArcTrace] = {}
    for pair in pairs:
        if pair.hi <= half:
            traced[(pair.lo, pair.hi)] = trace_arc(classify_arc(n, pair), m)
    out: list[ArcTrace] = []
    for pair in pairs:
        if pair.hi <= half:
            out.append(traced[(pair.lo, pair.hi)])
        else:
            mirror = (1 - pair.hi, 1 - pair.lo)
            out.append(traced[mirror].conjugated(classify_arc(n, pair)))
    return out


class Region:
    """The traced region of one order, with a radial membership test.

    The boundary polyline segments are bucketed by angle so a membership
    query touches only a handful of segments.
    """

    BUCKETS = 4096

    def __init__(self, n: int, m: int = 512):
        self.n = n
        self.m = m
        self.traces = region_boundary(n, m)
        self._segments: list[tuple[complex, complex]] = []
        for trace in self.traces:
            pts = [z for _, z in trace.samples]
            self._segments.extend(zip(pts, pts[1:]))
        self._buckets: list[list[int]] = [[] for _ in range(self.BUCKETS)]
        two_pi = 2 * math.pi
        for idx, (p1, p2) in enumerate(self._segments):
            a1 = cmath.phase(p1) % two_pi
            a2 = cmath.phase(p2) % two_pi
            lo, hi = min(a1, a2), max(a1, a2)
            if hi - lo > math.pi:
                # Segment straddles the 0/2pi cut.
                spans = [(0.0, lo), (hi, two_pi)]
            else:
                spans = [(lo, hi)]
            for s_lo, s_hi in spans:
                b_lo = int(s_lo / two_pi * self.BUCKETS)
                b_hi = int(s_hi / two_pi * self.BUCKETS)
                for b in range(max(b_lo - 1, 0), min(b_hi + 1, self.BUCKETS - 1) + 1):
                    self._buckets[b].append(idx)

    def radius_at(self, theta: float) -> float:
        """Boundary radius along the ray at angle theta (0 when no arc covers it)."""
        two_pi = 2 * math.pi
        theta = theta % two_pi
        u = cmath.exp(1j * theta)
        bucket = self._buckets[int(theta / two_pi * self.BUCKETS) % self.BUCKETS]
        best = 0.0
        for idx in bucket:
            p1, p2 = self._segments[idx]
            c1 = (u.conjugate() * p1).imag
            c2 = (u.conjugate() * p2).imag
            r1 = (u.conjugate() * p1).real
            r2 = (u.conjugate() * p2).real
            eps = 1e-15
            if abs(c1) <= eps and abs(c2) <= eps:
                # Collinear with the ray (e.g. the real segment of order 2).
                if r1 >= 0:
                    best = max(best, r1)
                if r2 >= 0:
                    best = max(best, r2)
                continue
            if (c1 <= 0 <= c2) or (c2 <= 0 <= c1):
                t = c1 / (c1 - c2)
                r = r1 + t * (r2 - r1)
                if r >= 0:
                    best = max(best, r)
        return best

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        """Radial membership: |z| <= boundary radius at arg(z), within tol."""
        if abs(z) <= tol:
            return True
        return abs(z) <= self.radius_at(cmath.phase(z)) + tol


@lru_cache(maxsize=8)
def _cached_region(n: int, m: int) -> Region:
    return Region(n, m)


def contains(n: int, z: complex, tol: float = 1e-9, m: int = 512) -> bool:
    """Membership of z in the order-n region (cached traced boundary)."""
    return _cached_region(n, m).contains(z, tol)


# -- emitters ------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def trace_csv(trace: ArcTrace) -> str:
    lines = ["alpha,re,im"]
    for a, z in trace.samples:
        lines.append(f"{_fmt(a)},{_fmt(z.real)},{_fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def traces_json_payload(traces: Sequence[ArcTrace]) -> list[dict]:
    return [
        {
            "arc": trace.arc.to_json(),
            "residual_bound": trace.residual_bound,
            "samples": [[a, z.real, z.imag] for a, z in trace.samples],
        }
        for trace in traces
    ]


def boundary_svg(traces: Sequence[ArcTrace], size: int = 800) -> str:
    """Static SVG: unit-circle underlay plus one polyline per arc."""
    half = size / 2
    scale = size / 2.4

    def sx(z: complex) -> float:
        return half + z.real * scale

    def sy(z: complex) -> float:
        return half - z.imag * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{half}" cy="{half}" r="{scale}" fill="none" '
        f'stroke="#bbbbbb" stroke-dasharray="4 4"/>',
        f'<line x1="0" y1="{half}" x2="{size}" y2="{half}" stroke="#dddddd"/>',
        f'<line x1="{half}" y1="0" x2="{half}" y2="{size}" stroke="#dddddd"/>',
    ]
    for trace in traces:
        pts = " ".join(f"{sx(z):.3f},{sy(z):.3f}" for _, z in trace.samples)
        lines.append(
            f'<polyline points="{pts}" fill="none" stroke="#23427b" stroke-width="1.2"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
