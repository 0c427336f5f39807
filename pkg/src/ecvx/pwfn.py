"""Piecewise-polynomial functions on R and DC (difference-of-convex) pairs.

A `PiecewiseFn` is a finite ordered list of (interval, polynomial) pieces with
pairwise-disjoint intervals; the function is +inf off the union.  Indicator
functions are zero on their set.  A `DCFn` keeps its two convex parts
separate: its value is plus(x) - minus(x) with the lower-addition convention,
and +inf wherever plus is +inf (so the difference is -inf at points of
dom(plus) \\ dom(minus)).

`combine` forms nonnegative weighted sums, dropping zero-weight entries; an
empty combination is the zero function on all of R (this is the convention
used for the zero multiplier of a constraint family).  `infimum_over`
minimizes a DC objective over an interval exactly on each polynomial piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .errors import EmptyDomain, ImproperResult
from .extreal import (EMPTY, ExtReal, Interval, MINUS_INF, PLUS_INF, Scalar,
                      ZERO, as_scalar, sub_lower)


@dataclass(frozen=True)
class PiecewiseFn:
    pieces: tuple[tuple[Interval, poly.Coeffs], ...]

    def __post_init__(self):
        prev: Interval | None = None
        for I, c in self.pieces:
            if I.is_empty:
                raise ValueError("empty piece interval")
            if prev is not None:
                if not (prev.hi < I.lo or (prev.hi == I.lo and not (prev.hi_closed and I.lo_closed))):
                    raise ValueError("pieces overlap or are out of order")
            prev = I

    @staticmethod
    def from_pieces(pieces: Iterable[tuple[Interval, Sequence]]) -> "PiecewiseFn":
        ps = sorted(((I, poly.make(c)) for I, c in pieces), key=lambda p: (float(p[0].lo), float(p[0].hi)))
        return PiecewiseFn(tuple(ps))

    @staticmethod
    def zero(on: Interval | None = None) -> "PiecewiseFn":
        return PiecewiseFn(((on or Interval.all(), (Fraction(0),)),))

    @staticmethod
    def indicator(I: Interval) -> "PiecewiseFn":
        """delta_I: zero on I, +inf outside."""
        if I.is_empty:
            raise EmptyDomain("indicator of the empty set")
        return PiecewiseFn(((I, (Fraction(0),)),))

    @staticmethod
    def single(coeffs: Sequence, I: Interval | None = None) -> "PiecewiseFn":
        return PiecewiseFn.from_pieces([(I or Interval.all(), coeffs)])

    # -- pointwise -----------------------------------------------------------

    def _float_pieces(self):
        fp = self.__dict__.get("_fp")
        if fp is None:
            fp = tuple((float(I.lo), float(I.hi),
                        tuple(float(v) for v in c))
                       for I, c in self.pieces)
            object.__setattr__(self, "_fp", fp)
        return fp

    def feval(self, x: float) -> float:
        """Float value with +inf off the pieces; exact fallback on endpoint
        ties, where openness decides membership."""
        for (flo, fhi, fc), (I, c) in zip(self._float_pieces(), self.pieces):
            if flo < x < fhi:
                r = 0.0
                for v in reversed(fc):
                    r = r * x + v
                return r
            if x == flo or x == fhi:
                if I.contains(x):
                    return float(poly.peval(c, x))
        return math.inf

    def eval(self, x: Scalar) -> ExtReal:
        if type(x) is float:
            r = self.feval(x)
            if math.isinf(r):
                return PLUS_INF if r > 0 else MINUS_INF
            return ExtReal.of(r)
        x = as_scalar(x)
        for I, c in self.pieces:
            if I.contains(x):
                return ExtReal.of(poly.peval(c, x))
        return PLUS_INF

    def __call__(self, x: Scalar) -> ExtReal:
        return self.eval(x)

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        out = np.full(xs.shape, np.inf)
        for I, c in self.pieces:
            lo, hi = float(I.lo), float(I.hi)
            m = (xs >= lo if I.lo_closed else xs > lo) & (xs <= hi if I.hi_closed else xs < hi)
            if m.any():
                out[m] = poly.peval_grid(c, xs[m])
        return out

    # -- domain --------------------------------------------------------------

    def domain_list(self) -> tuple[Interval, ...]:
        return tuple(I for I, _ in self.pieces)

    def domain_hull(self) -> Interval:
        first, last = self.pieces[0][0], self.pieces[-1][0]
        return Interval.make(first.lo, first.lo_closed, last.hi, last.hi_closed)

    def domain_is_interval(self) -> bool:
        for (a, _), (b, _) in zip(self.pieces, self.pieces[1:]):
            if a.hi < b.lo:
                return False
            if a.hi == b.lo and not (a.hi_closed or b.lo_closed):
                return False
        return True

    def domain_contains(self, x: Scalar) -> bool:
        return any(I.contains(x) for I, _ in self.pieces)

    # -- algebra ---------------------------------------------------------------

    def restrict(self, S: Interval) -> "PiecewiseFn":
        """f + delta_S as an explicit piecewise function."""
        ps = []
        for I, c in self.pieces:
            J = I.intersect(S)
            if not J.is_empty:
                ps.append((J, c))
        if not ps:
            raise ImproperResult("restriction has empty domain")
        return PiecewiseFn(tuple(ps))

    def shift_by_affine(self, a, b) -> "PiecewiseFn":
        """f(x) + a + b*x on the same domain."""
        add = poly.make((a, b))
        return PiecewiseFn(tuple((I, poly.padd(c, add)) for I, c in self.pieces))

    def negate(self) -> "PiecewiseFn":
        return PiecewiseFn(tuple((I, poly.pscale(c, -1)) for I, c in self.pieces))

    # -- convexity -------------------------------------------------------------

    def is_convex(self) -> bool:
        """Exact convexity test.

        Pieces must be convex polynomials, the domain an interval, interior
        knots continuous with nondecreasing one-sided slopes; a value jump is
        allowed only upward and only at an included endpoint of the domain.
        """
        if not self.domain_is_interval():
            return False
        for I, c in self.pieces:
            if not poly.is_convex_on(c, I):
                return False
        hull = self.domain_hull()
        for (I1, c1), (I2, c2) in zip(self.pieces, self.pieces[1:]):
            b = I1.hi.value  # shared knot, finite by disjointness+touching
            v1, v2 = poly.peval(c1, b), poly.peval(c2, b)
            left_end = I1.is_singleton and I1.lo == hull.lo
            right_end = I2.is_singleton and I2.hi == hull.hi
            if left_end:
                if v1 < v2:   # downward jump into the domain
                    return False
                continue
            if right_end:
                if v2 < v1:
                    return False
                continue
            if v1 != v2:
                return False
            d1 = poly.peval(poly.deriv(c1), b) if not I1.is_singleton else None
            d2 = poly.peval(poly.deriv(c2), b) if not I2.is_singleton else None
            if d1 is not None and d2 is not None and d1 > d2:
                return False
        return True

    def __str__(self) -> str:
        return "; ".join(f"{poly.fmt(c)} on {I}" for I, c in self.pieces)


@dataclass(frozen=True)
class DCFn:
    """f - g with the two convex parts kept separate."""

    plus: PiecewiseFn
    minus: PiecewiseFn

    @staticmethod
    def of(f: PiecewiseFn, g: PiecewiseFn | None = None) -> "DCFn":
        return DCFn(f, g if g is not None else PiecewiseFn.zero())

    def eval(self, x: Scalar) -> ExtReal:
        fx = self.plus.eval(x)
        if fx.is_pinf:
            return PLUS_INF
        return sub_lower(fx, self.minus.eval(x))

    def __call__(self, x):
        return self.eval(x)

    def to_piecewise(self) -> PiecewiseFn:
        """Explicit difference; raises if it takes -inf somewhere.

        The difference is -inf on dom(plus) \\ dom(minus), which has no
        piecewise-polynomial representation.
        """
        gaps = _subtract_interval_lists(self.plus.domain_list(), self.minus.domain_list())
        if gaps:
            raise ImproperResult(f"difference is -inf on {gaps[0]}")
        out = []
        for I, c in self.plus.pieces:
            for J, d in self.minus.pieces:
                K = I.intersect(J)
                if not K.is_empty:
                    out.append((K, poly.psub(c, d)))
        return PiecewiseFn.from_pieces(out)


def _subtract_interval_lists(base: Sequence[Interval], cover: Sequence[Interval]) -> list[Interval]:
    """Parts of the union of `base` not covered by the union of `cover` (exact)."""
    remains: list[Interval] = list(base)
    for C in cover:
        nxt: list[Interval] = []
        for I in remains:
            if I.intersect(C).is_empty:
                nxt.append(I)
                continue
            left = Interval.make(I.lo, I.lo_closed, C.lo, not C.lo_closed)
            right = Interval.make(C.hi, not C.hi_closed, I.hi, I.hi_closed)
            left = left.intersect(I)
            right = right.intersect(I)
            if not left.is_empty:
                nxt.append(left)
            if not right.is_empty:
                nxt.append(right)
        remains = nxt
    return remains


def closure_piecewise(f: PiecewiseFn) -> PiecewiseFn:
    """Lower-semicontinuous closure of a convex piecewise function, exactly.

    For convex f the only discontinuities are upward jumps at included domain
    endpoints and missing values at excluded finite endpoints; the closure
    replaces a jump value by the adjacent piece's limit and closes open finite
    endpoints.  The convexity contract is the caller's responsibility.
    """
    ps = list(f.pieces)
    if len(ps) >= 2 and ps[0][0].is_singleton:
        b = ps[0][0].lo
        I2, c2 = ps[1]
        if poly.peval(ps[0][1], b.value) >= poly.peval(c2, b.value):
            ps = [(Interval.make(b, True, I2.hi, I2.hi_closed), c2)] + ps[2:]
    I1, c1 = ps[0]
    if I1.lo.is_finite and not I1.lo_closed:
        ps[0] = (Interval.make(I1.lo, True, I1.hi, I1.hi_closed), c1)
    if len(ps) >= 2 and ps[-1][0].is_singleton:
        b = ps[-1][0].hi
        I2, c2 = ps[-2]
        if poly.peval(ps[-1][1], b.value) >= poly.peval(c2, b.value):
            ps = ps[:-2] + [(Interval.make(I2.lo, I2.lo_closed, b, True), c2)]
    In, cn = ps[-1]
    if In.hi.is_finite and not In.hi_closed:
        ps[-1] = (Interval.make(In.lo, In.lo_closed, In.hi, True), cn)
    return PiecewiseFn(tuple(ps))


def combine(entries: Sequence[tuple[Scalar, PiecewiseFn]]) -> PiecewiseFn:
    """Nonnegative weighted sum sum_i w_i * f_i.

    Zero-weight entries are dropped before the domain intersection; the empty
    combination is the zero function on all of R.  Raises ImproperResult when
    the intersected domain is empty.
    """
    live = [(Fraction(w), f) for w, f in entries if Fraction(w) != 0]
    for w, _ in live:
        if w < 0:
            raise ValueError("combine weights must be nonnegative")
    if not live:
        return PiecewiseFn.zero()
    acc_w, acc_f = live[0]
    acc = PiecewiseFn(tuple((I, poly.pscale(c, acc_w)) for I, c in acc_f.pieces))
    for w, f in live[1:]:
        out = []
        for I, c in acc.pieces:
            for J, d in f.pieces:
                K = I.intersect(J)
                if not K.is_empty:
                    out.append((K, poly.padd(c, poly.pscale(d, w))))
        if not out:
            raise ImproperResult("combination has empty domain")
        acc = PiecewiseFn.from_pieces(out)
    return acc


def add(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    return combine([(1, f), (1, g)])


def infimum_over(f: DCFn | PiecewiseFn, S: Interval, *, want_arg: bool = True):
    """inf_{x in S} f(x) with attainment.

    Returns (value: ExtReal, argmin | None); argmin is None when the infimum
    is not attained (open-endpoint or at-infinity limits).  Exact on each
    polynomial piece: interior critical points are solved, endpoints and
    one-sided limits enumerated.  Raises EmptyDomain when S misses dom f.
    """
    dc = f if isinstance(f, DCFn) else DCFn.of(f)
    best: tuple[ExtReal, bool, object] | None = None

    def consider(val: ExtReal, att: bool, arg):
        nonlocal best
        if best is None or val < best[0] or (val == best[0] and att and not best[1]):
            best = (val, att, arg)

    touched = False
    minus_dom = dc.minus.domain_list()
    for I, c in dc.plus.pieces:
        J = I.intersect(S)
        if J.is_empty:
            continue
        touched = True
        # points where the minus part is +inf make the difference -inf
        if _subtract_interval_lists([J], minus_dom):
            return MINUS_INF, None
        for K, d in dc.minus.pieces:
            L = J.intersect(K)
            if L.is_empty:
                continue
            diff = poly.psub(c, d)
            val, att, arg = poly.extremum_on(diff, L, maximize=False)
            if val.is_minf:
                return MINUS_INF, None
            consider(val, att, arg)
    if not touched:
        raise EmptyDomain("feasible set misses the objective domain")
    val, att, arg = best
    return val, (arg if att and want_arg else None)
