"""Hull operators: closed convex hull and the e-convex hull on the line.

The closed convex hull is the Fenchel biconjugate.  Convex inputs get the
exact piecewise closure; everything else goes through the numeric conjugate
descriptor (grid provenance).  The e-convex hull follows from a one
dimensional endpoint rule: it matches the closed convex hull on the interior
of its domain, and a finite domain endpoint keeps the hull value exactly when
the original function is finite there, else stays at +inf.  The conjugation
pipeline f^{cc'} is the independent oracle for this rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import conj
from .conj import FenchelConj, GatedFn, PiecewiseScalar, RealFn, conj_of
from .errors import NoMinorant
from .extreal import Interval
from .pwfn import DCFn, PiecewiseFn, closure_piecewise


@dataclass(frozen=True, slots=True)
class HullResult:
    fn: RealFn
    provenance: str  # "closed_form" | "grid"


def _as_pw(f) -> PiecewiseFn:
    if isinstance(f, DCFn):
        return f.to_piecewise()
    if isinstance(f, PiecewiseFn):
        return f
    raise TypeError(f"not a piecewise function: {f!r}")


def convex_lsc_hull(f, cfg=None) -> HullResult:
    """Largest lsc convex minorant, f**.

    Convex inputs close exactly (drop endpoint jumps, include finite
    endpoints); non-convex inputs return the numeric biconjugate descriptor.
    """
    pw = _as_pw(f)
    fc = FenchelConj(pw)
    if fc.improper:
        raise NoMinorant("function admits no affine minorant")
    if pw.is_convex():
        return HullResult(PiecewiseScalar(closure_piecewise(pw)), "closed_form")
    return HullResult(conj_of(fc), "grid")


def _endpoint_gate(pw: PiecewiseFn) -> Interval:
    """Closure of the domain hull, reopened at endpoints not in dom f."""
    hull = pw.domain_hull()
    lo_in = hull.lo.is_finite and pw.domain_contains(hull.lo.value)
    hi_in = hull.hi.is_finite and pw.domain_contains(hull.hi.value)
    return Interval.make(hull.lo, lo_in, hull.hi, hi_in)


def eco_hull(f, cfg=None) -> HullResult:
    """Largest e-convex minorant via the endpoint rule on the convex hull."""
    pw = _as_pw(f)
    base = convex_lsc_hull(pw, cfg)
    gate = _endpoint_gate(pw)
    if base.provenance == "closed_form":
        return HullResult(PiecewiseScalar(base.fn.pw.restrict(gate)), "closed_form")
    return HullResult(GatedFn(base.fn, gate), "grid")


def _comparison_points(f: PiecewiseFn, g: PiecewiseFn) -> list[Fraction | float]:
    """Point set that separates any two piecewise quartics with these knots.

    Every refinement cell of the two piece lists receives its endpoints plus
    five interior nodes, and each unbounded side five more; two polynomials of
    degree at most four that agree on all of them agree identically.
    """
    ends: set = set()
    for pw in (f, g):
        for I, _ in pw.pieces:
            if I.lo.is_finite:
                ends.add(Fraction(I.lo.value))
            if I.hi.is_finite:
                ends.add(Fraction(I.hi.value))
    if not ends:
        ends.add(Fraction(0))
    knots = sorted(ends)
    pts: list = list(knots)
    for a, b in zip(knots, knots[1:]):
        for k in range(1, 6):
            pts.append(a + Fraction(k, 6) * (b - a))
    for k in range(1, 6):
        pts.append(knots[0] - k)
        pts.append(knots[-1] + k)
    return pts


def _pw_equal(f: PiecewiseFn, g: PiecewiseFn) -> bool:
    return all(f.eval(x) == g.eval(x) for x in _comparison_points(f, g))


def is_econvex(f, cfg=None) -> bool:
    """Whether f equals its own e-convex hull.

    Non-convex functions are never e-convex, so the interesting case is the
    exact comparison of a convex piecewise function with its closed hull
    reopened at excluded endpoints.
    """
    pw = _as_pw(f)
    if not pw.is_convex():
        return False
    eco = eco_hull(pw, cfg)
    return _pw_equal(pw, eco.fn.pw)
