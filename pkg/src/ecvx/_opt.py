"""Deterministic one-dimensional minimizers.

Two engines.  `minimize_convex` brackets by convexity (asymptotic slopes
classify unbounded directions exactly), then runs a ternary search whose
probes stay rational in exact mode so flat segments keep exact values, and
finally tries to snap the minimizer to a small-denominator rational.
`minimize_sampled` is the honest fallback for nonconvex objectives
(difference-of-convex inner duals): golden-offset grid, zoom rounds, same
rational snap.  Asymptotic slopes come from conjugate-domain bookkeeping
upstream; in this package every flat tail is exactly flat past a knot, so
doubling probes terminate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np

from .config import GOLDEN_FRAC
from .errors import EmptyDomain
from .extreal import ExtReal, Interval, MINUS_INF, PLUS_INF, ZERO

_SNAP_DENS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 27, 48, 60, 720, 10**4, 10**6)

HFn = Callable[[object], ExtReal]


def _lift(x, exact: bool):
    if exact:
        return x if isinstance(x, Fraction) else Fraction(x)
    return float(x)


def _probe_tail(h: HFn, anchor, sign: int, exact: bool):
    """Chase a monotone tail by doubling steps.

    Returns (value, farthest point, flat) where flat means the last two
    probes agreed exactly (the tail is a true constant segment, so the value
    is attained at the probe).
    """
    one = Fraction(1) if exact else 1.0
    prev = h(anchor + sign * one)
    t = anchor + sign * one
    for k in range(1, 64):
        t = anchor + sign * (one * 2**k)
        cur = h(t)
        if cur.is_minf:
            return MINUS_INF, t, False
        if cur == prev:
            return cur, t, True
        if prev.is_finite and cur.is_finite and \
                abs(float(cur) - float(prev)) <= 1e-13 * (1.0 + abs(float(cur))):
            return cur, t, False
        prev = cur
    return prev, t, False


def _expand(h: HFn, anchor, sign: int, exact: bool, k_min: int = 0):
    """March away from anchor until the objective starts increasing.

    Returns the bracket edge, or (edge, True) when a -inf value was hit.
    """
    one = Fraction(1) if exact else 1.0
    prev = None
    t = anchor
    for k in range(64):
        t = anchor + sign * (one * 2**k)
        cur = h(t)
        if cur.is_minf:
            return t, True
        if prev is not None and k >= k_min and cur > prev:
            return t, False
        if not cur.is_pinf:
            prev = cur
    return t, False


def _inset_probe(h: HFn, end, inward: int, span, exact: bool):
    """Approach an endpoint where h is +inf from inside; limit candidate."""
    step = span if span > 0 else (Fraction(1) if exact else 1.0)
    best = None
    point = None
    for k in range(1, 40):
        p = end + inward * step / 4**k
        if not exact and p == end:
            break
        v = h(p)
        if v.is_minf:
            return MINUS_INF, p
        if v.is_pinf:
            continue
        if best is not None and abs(float(v) - float(best)) <= 1e-13 * (1.0 + abs(float(v))):
            return v, p
        best, point = v, p
    return best, point


_INVPHI = 0.6180339887498949


def _ternary(h: HFn, a, b, exact: bool):
    """Section search for convex h on [a, b]; returns (best value, best arg).

    Exact mode keeps rational probe points (thirds); inexact mode runs a
    golden-section search, one evaluation per step.
    """
    best_v, best_x = None, None

    def look(x):
        nonlocal best_v, best_x
        v = h(x)
        if best_v is None or v < best_v:
            best_v, best_x = v, x
        return v

    if exact:
        for _ in range(300):
            if best_v is not None and best_v.is_minf:
                return best_v, best_x
            w = b - a
            fw = float(w)
            if fw <= 1e-12 * (1.0 + abs(float(a)) + abs(float(b))):
                break
            # Snap probes to a bounded-denominator grid: exact thirds triple
            # the denominator every step and the bigint arithmetic dominates.
            # Any two interior points shrink a convex bracket, so the snap
            # only has to keep a < m1 < m2 < b.
            den = max(48, int(32.0 / fw)) if fw > 0 else 48
            m1 = (a + w / 3).limit_denominator(den)
            m2 = (b - w / 3).limit_denominator(den)
            if not (a < m1 < m2 < b):
                m1 = a + w / 3
                m2 = b - w / 3
            if look(m1) <= look(m2):
                b = m2
            else:
                a = m1
        look(a + (b - a) / 2)
        return best_v, best_x

    a, b = float(a), float(b)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = look(x1), look(x2)
    for _ in range(300):
        if best_v.is_minf:
            return best_v, best_x
        if b - a <= 1e-12 * (1.0 + abs(a) + abs(b)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = look(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = look(x2)
    look(a + (b - a) / 2)
    return best_v, best_x


def _snap(h: HFn, J: Interval, v: ExtReal, x):
    """Try small-denominator rationals near x that do not increase h."""
    if x is None or not v.is_finite:
        return v, x
    xf = float(x)
    fv = float(v)
    fuzz = 1e-12 * (1.0 + abs(fv))
    prev = None
    for d in _SNAP_DENS:
        s = Fraction(xf).limit_denominator(d)
        if s == prev:
            continue
        prev = s
        if not J.contains(s):
            continue
        # Cheap float look first; the exact evaluation only confirms
        # near-hits (the float value is within rounding of the exact one).
        fs = h(float(s))
        if fs.is_pinf or (fs.is_finite and float(fs) > fv + 2 * fuzz + 1e-9 * abs(fv)):
            continue
        vs = h(s)
        if vs.is_pinf:
            continue
        ok = vs <= v if (vs.is_exact and v.is_exact) else \
            float(vs) <= fv + fuzz
        if ok:
            return vs, s
    return v, x


def minimize_convex(h: HFn, J: Interval, slope_neg: ExtReal | None = None,
                    slope_pos: ExtReal | None = None, exact: bool = True):
    """Infimum of a convex extended-real function over a nonempty interval.

    slope_neg / slope_pos are the asymptotic slopes of h toward -inf / +inf
    and are required when J is unbounded on that side.  Returns
    (value, attained, arg); arg is None when the infimum is a limit.
    """
    if J.is_empty:
        raise EmptyDomain("minimizing over the empty interval")
    if J.is_singleton:
        p = _lift(J.lo.value, exact)
        v = h(p)
        if v.is_pinf:
            return PLUS_INF, False, None
        return v, True, p

    cands: list[tuple[ExtReal, bool, object]] = []
    span = (ExtReal.of(float(J.hi) - float(J.lo)) if J.bounded else None)

    def edge(side_val, closed, sign):
        """Resolve one finite endpoint; returns bracket edge or None on -inf."""
        e = _lift(side_val, exact)
        v = h(e)
        if v.is_minf:
            cands.append((MINUS_INF, True, e))
            return None
        if not v.is_pinf:
            cands.append((v, closed, e if closed else None))
            return e
        sp = _lift(float(span) if span is not None else 1, exact)
        lim, point = _inset_probe(h, e, sign, sp, exact)
        if lim is MINUS_INF:
            cands.append((MINUS_INF, True, point))
            return None
        if lim is not None:
            cands.append((lim, False, None))
        return point if point is not None else e

    if J.lo.is_finite:
        a = edge(J.lo.value, J.lo_closed, +1)
        if a is None:
            return MINUS_INF, True, cands[-1][2]
    else:
        if slope_neg is None:
            raise ValueError("slope_neg required: interval unbounded below")
        anchor = _lift(J.hi.value if J.hi.is_finite else 0, exact)
        if slope_neg > ZERO:
            return MINUS_INF, False, None
        if slope_neg == ZERO:
            val, far, flat = _probe_tail(h, anchor, -1, exact)
            if val.is_minf:
                return MINUS_INF, False, None
            cands.append((val, flat, far if flat else None))
            a = far
        else:
            a, hit = _expand(h, anchor, -1, exact)
            if hit:
                return MINUS_INF, True, a

    if J.hi.is_finite:
        b = edge(J.hi.value, J.hi_closed, -1)
        if b is None:
            return MINUS_INF, True, cands[-1][2]
    else:
        if slope_pos is None:
            raise ValueError("slope_pos required: interval unbounded above")
        anchor = _lift(J.lo.value if J.lo.is_finite else 0, exact)
        if slope_pos < ZERO:
            return MINUS_INF, False, None
        if slope_pos == ZERO:
            val, far, flat = _probe_tail(h, anchor, +1, exact)
            if val.is_minf:
                return MINUS_INF, False, None
            cands.append((val, flat, far if flat else None))
            b = far
        else:
            b, hit = _expand(h, anchor, +1, exact)
            if hit:
                return MINUS_INF, True, b

    if float(a) > float(b):
        a, b = b, a
    # Float section search regardless of mode; `_snap` then recovers an exact
    # rational minimizer whenever one exists on the candidate ladder, which is
    # the same guarantee the rational search gave (its probes were generic
    # rationals, so exact values also came from the snap or from flat pieces,
    # and the ladder re-finds flat pieces).
    vm, xm = _ternary(h, a, b, False)
    if vm is not None and vm.is_minf:
        return MINUS_INF, True, xm
    if vm is not None and not vm.is_pinf:
        vm, xm = _snap(h, J, vm, xm)
        cands.append((vm, True, xm))

    best = None
    for v, att, arg in cands:
        if v.is_pinf:
            continue
        if best is None or v < best[0] or (v == best[0] and att and not best[1]):
            best = (v, att, arg)
    if best is None:
        return PLUS_INF, False, None
    return best


def maximize_concave(h: HFn, J: Interval, slope_neg: ExtReal | None = None,
                     slope_pos: ExtReal | None = None, exact: bool = True):
    """Supremum of a concave function; slopes are those of h itself."""
    v, att, arg = minimize_convex(
        lambda u: -h(u), J,
        None if slope_neg is None else -slope_neg,
        None if slope_pos is None else -slope_pos,
        exact,
    )
    return -v, att, arg


def minimize_sampled(h: HFn, J: Interval, slope_neg: ExtReal | None = None,
                     slope_pos: ExtReal | None = None,
                     h_vec: Callable[[np.ndarray], np.ndarray] | None = None,
                     n: int = 257, rounds: int = 3,
                     window: tuple[float, float] = (-16.0, 16.0)):
    """Grid-with-zoom infimum for objectives with no convexity guarantee.

    The asymptotic-slope classification still bounds the search box exactly;
    inside the box the result is grid-accurate (refined by zoom rounds and a
    rational snap), which is the honest best available for DC differences.
    """
    if J.is_empty:
        raise EmptyDomain("minimizing over the empty interval")
    if J.is_singleton:
        p = J.lo.value
        v = h(p)
        return (v, True, p) if not v.is_pinf else (PLUS_INF, False, None)

    cands: list[tuple[ExtReal, bool, object]] = []

    if J.lo.is_finite:
        blo = float(J.lo)
        v = h(J.lo.value)
        if v.is_minf:
            return MINUS_INF, True, J.lo.value
        if not v.is_pinf:
            cands.append((v, J.lo_closed, J.lo.value if J.lo_closed else None))
    else:
        if slope_neg is None:
            raise ValueError("slope_neg required: interval unbounded below")
        if slope_neg > ZERO:
            return MINUS_INF, False, None
        anchor = float(J.hi) if J.hi.is_finite else 0.0
        if slope_neg == ZERO:
            val, far, flat = _probe_tail(h, anchor, -1, exact=False)
            if val.is_minf:
                return MINUS_INF, False, None
            cands.append((val, flat, far if flat else None))
            blo = min(window[0], far)
        else:
            far, hit = _expand(h, anchor, -1, exact=False, k_min=6)
            if hit:
                return MINUS_INF, True, far
            blo = min(window[0], far)

    if J.hi.is_finite:
        bhi = float(J.hi)
        v = h(J.hi.value)
        if v.is_minf:
            return MINUS_INF, True, J.hi.value
        if not v.is_pinf:
            cands.append((v, J.hi_closed, J.hi.value if J.hi_closed else None))
    else:
        if slope_pos is None:
            raise ValueError("slope_pos required: interval unbounded above")
        if slope_pos < ZERO:
            return MINUS_INF, False, None
        anchor = float(J.lo) if J.lo.is_finite else 0.0
        if slope_pos == ZERO:
            val, far, flat = _probe_tail(h, anchor, +1, exact=False)
            if val.is_minf:
                return MINUS_INF, False, None
            cands.append((val, flat, far if flat else None))
            bhi = max(window[1], far)
        else:
            far, hit = _expand(h, anchor, +1, exact=False, k_min=6)
            if hit:
                return MINUS_INF, True, far
            bhi = max(window[1], far)

    if blo > bhi:
        blo, bhi = bhi, blo
    best_v, best_x = None, None
    lo_r, hi_r = blo, bhi
    for _ in range(rounds + 1):
        width = hi_r - lo_r
        if width <= 0:
            break
        xs = lo_r + (np.arange(n) + GOLDEN_FRAC) * (width / n)
        if h_vec is not None:
            vals = h_vec(xs)
        else:
            vals = np.array([float(h(float(x))) for x in xs])
        if np.isneginf(vals).any():
            k = int(np.argmax(np.isneginf(vals)))
            return MINUS_INF, True, float(xs[k])
        finite = np.isfinite(vals)
        if not finite.any():
            break
        k = int(np.argmin(np.where(finite, vals, np.inf)))
        if best_v is None or vals[k] < best_v:
            best_v, best_x = float(vals[k]), float(xs[k])
        lo_r = float(xs[max(0, k - 2)])
        hi_r = float(xs[min(n - 1, k + 2)])
    if best_v is not None:
        v, x = _snap(h, J, ExtReal.of(best_v), best_x)
        cands.append((v, True, x))

    best = None
    for v, att, arg in cands:
        if v.is_pinf:
            continue
        if best is None or v < best[0] or (v == best[0] and att and not best[1]):
            best = (v, att, arg)
    if best is None:
        return PLUS_INF, False, None
    return best
