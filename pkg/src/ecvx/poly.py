"""Dense low-degree polynomials with exact rational coefficients.

Coefficients are little-endian tuples, degree <= 4 end to end (differences of
two deg-4 pieces stay deg 4; derivatives used in optimization are deg <= 3).
User-facing data is exact (`Fraction`); internal conjugate evaluations may mix
in float coefficients, and every helper here tolerates mixed tuples without
silently converting floats to giant binary rationals.  Root finding is exact
for degree <= 2 whenever the discriminant is a rational square and whenever
rational-root extraction succeeds on cubics/quartics; the rest goes through
closed-form float solvers with a Newton polish.  Consumers treat Fraction
roots as exact and float roots as ~1e-12-accurate.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .extreal import ExtReal, Interval, MINUS_INF, PLUS_INF, as_scalar

Coeffs = tuple  # of Fraction (exact) or float (numeric)

MAX_DEGREE = 4


def make(coeffs) -> tuple[Fraction, ...]:
    """Exact constructor for user data; rejects degrees above the cap."""
    out = tuple(Fraction(c) for c in coeffs)
    while len(out) > 1 and out[-1] == 0:
        out = out[:-1]
    if len(out) - 1 > MAX_DEGREE:
        raise ValueError(f"degree {len(out) - 1} exceeds the supported cap {MAX_DEGREE}")
    return out if out else (Fraction(0),)


def trim(c: Coeffs) -> Coeffs:
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    return c


def is_exact(c: Coeffs) -> bool:
    return all(isinstance(a, Fraction) for a in c)


def degree(c: Coeffs) -> int:
    d = len(c) - 1
    while d > 0 and c[d] == 0:
        d -= 1
    return d


def peval(c: Coeffs, x):
    x = as_scalar(x)
    acc = c[-1]
    for k in range(len(c) - 2, -1, -1):
        acc = acc * x + c[k]
    return acc


def peval_grid(c: Coeffs, xs: np.ndarray) -> np.ndarray:
    acc = np.full_like(xs, float(c[-1]), dtype=float)
    for k in range(len(c) - 2, -1, -1):
        acc = acc * xs + float(c[k])
    return acc


def deriv(c: Coeffs) -> Coeffs:
    if len(c) == 1:
        return (Fraction(0),)
    return trim(tuple(k * c[k] for k in range(1, len(c))))


def padd(a: Coeffs, b: Coeffs) -> Coeffs:
    n = max(len(a), len(b))
    a = tuple(a) + (Fraction(0),) * (n - len(a))
    b = tuple(b) + (Fraction(0),) * (n - len(b))
    return trim(tuple(x + y for x, y in zip(a, b)))


def pscale(a: Coeffs, s) -> Coeffs:
    s = Fraction(s) if not isinstance(s, float) else s
    return trim(tuple(s * x for x in a))


def psub(a: Coeffs, b: Coeffs) -> Coeffs:
    return padd(a, pscale(b, -1))


def qshift(c: Coeffs, t) -> Coeffs:
    """Coefficients of q(x) = t*x - c(x); float t stays float."""
    n = max(len(c), 2)
    out = [-a for a in c] + [Fraction(0)] * (n - len(c))
    out[1] = t + out[1]
    return trim(tuple(out))


def _frac_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _divisors(n: int, cap: int = 4000) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    out = []
    k = 1
    while k * k <= n and len(out) < cap:
        if n % k == 0:
            out.append(k)
            if k != n // k:
                out.append(n // k)
        k += 1
    return out


def _rational_roots(c: tuple[Fraction, ...]):
    """Extract rational roots with deflation; returns (roots, remaining poly)."""
    roots: list[Fraction] = []
    cur = trim(c)
    while degree(cur) > 0:
        if cur[0] == 0:
            roots.append(Fraction(0))
            cur = trim(cur[1:])
            continue
        if degree(cur) == 1:
            roots.append(-cur[0] / cur[1])
            cur = (Fraction(1),)
            break
        if degree(cur) == 2:
            a, b, q = cur[2], cur[1], cur[0]
            r = _frac_sqrt(b * b - 4 * a * q)
            if r is None:
                break
            roots.extend(((-b - r) / (2 * a), (-b + r) / (2 * a)))
            cur = (Fraction(1),)
            break
        den_lcm = math.lcm(*[x.denominator for x in cur])
        ic = [int(x * den_lcm) for x in cur]
        lead, const = ic[degree(cur)], ic[0]
        if abs(lead) > 10**9 or abs(const) > 10**9:
            break
        found = None
        for p in _divisors(const):
            for q in _divisors(lead):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if peval(cur, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        out, acc = [], Fraction(0)
        for k in range(degree(cur), -1, -1):
            acc = cur[k] + acc * found
            out.append(acc)
        cur = trim(tuple(reversed(out[:-1])))
    return roots, cur


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _roots_float(c: Coeffs) -> list[float]:
    """Real roots of a float polynomial via closed forms (numpy only for quartics)."""
    fc = [float(a) for a in trim(c)]
    d = degree(tuple(fc))
    if d == 0:
        return []
    if d == 1:
        return [-fc[0] / fc[1]]
    if d == 2:
        a, b, q = fc[2], fc[1], fc[0]
        disc = b * b - 4 * a * q
        if disc < 0:
            return []
        if disc == 0:
            return [-b / (2 * a)]
        s = math.sqrt(disc)
        r1 = (-b - s) / (2 * a) if b >= 0 else (-b + s) / (2 * a)
        r2 = q / (a * r1) if r1 != 0 else (-b + (s if b < 0 else -s)) / (2 * a)
        return sorted((r1, r2))
    if d == 3:
        a3, a2, a1, a0 = fc[3], fc[2], fc[1], fc[0]
        b, cc, dd = a2 / a3, a1 / a3, a0 / a3
        p = cc - b * b / 3
        q = 2 * b**3 / 27 - b * cc / 3 + dd
        shift = -b / 3
        disc = (q / 2) ** 2 + (p / 3) ** 3
        if disc > 0:
            s = math.sqrt(disc)
            return [shift + _cbrt(-q / 2 + s) + _cbrt(-q / 2 - s)]
        if disc == 0:
            u = _cbrt(-q / 2)
            return sorted({shift + 2 * u, shift - u})
        r = math.sqrt(-p / 3)
        theta = math.acos(max(-1.0, min(1.0, (-q / 2) / r**3)))
        return sorted(shift + 2 * r * math.cos((theta - 2 * math.pi * k) / 3) for k in range(3))
    arr = np.array(list(reversed(fc)))
    return sorted(float(z.real) for z in np.roots(arr)
                  if abs(z.imag) <= 1e-9 * (1 + abs(z.real)))


def _polish(c: Coeffs, x: float) -> float:
    d = deriv(c)
    for _ in range(4):
        fx = float(peval(c, x))
        dx = float(peval(d, x))
        if dx == 0.0:
            break
        step = fx / dx
        x -= step
        if abs(step) < 1e-15 * (1 + abs(x)):
            break
    return x


def real_roots(c: Coeffs) -> list[Fraction | float]:
    """All real roots, exact where rational/square extraction succeeds."""
    c = trim(tuple(c))
    if degree(c) == 0:
        return []
    out: list[Fraction | float] = []
    if is_exact(c):
        roots, rest = _rational_roots(c)
        out.extend(roots)
        if degree(rest) > 0:
            out.extend(_polish(rest, r) for r in _roots_float(rest))
    else:
        out.extend(_polish(c, r) for r in _roots_float(c))
    uniq: list[Fraction | float] = []
    for r in sorted(out, key=float):
        if uniq and abs(float(r) - float(uniq[-1])) <= 1e-12 * (1 + abs(float(r))):
            continue
        uniq.append(r)
    return uniq


def tail_limit(c: Coeffs, direction: int) -> ExtReal:
    """Limit of c(x) as x -> +inf (direction=+1) or -inf (direction=-1)."""
    d = degree(c)
    if d == 0:
        return ExtReal.of(c[0])
    lead = c[d]
    sign = lead if (direction > 0 or d % 2 == 0) else -lead
    return PLUS_INF if sign > 0 else MINUS_INF


def extremum_on(c: Coeffs, I: Interval, maximize: bool = True):
    """Extremum of the polynomial over an interval.

    Returns (value: ExtReal, attained: bool, arg) where arg achieves the
    extremum when attained (exact Fraction when available).  Open endpoints
    contribute limit candidates (attained=False); unbounded ends contribute
    +-inf limits from the leading term.
    """
    c = trim(tuple(c))
    if I.is_empty:
        raise ValueError("extremum over the empty interval")
    cands: list[tuple[ExtReal, bool, object]] = []

    def add(val, attained, arg):
        cands.append((ExtReal.of(val), attained, arg))

    if degree(c) == 0:
        return ExtReal.of(c[0]), True, I.interior_point()

    for end, closed in ((I.lo, I.lo_closed), (I.hi, I.hi_closed)):
        if end.is_finite:
            add(peval(c, end.value), closed, end.value if closed else None)
    for side, direction in ((I.lo, -1), (I.hi, +1)):
        if not side.is_finite:
            lim = tail_limit(c, direction)
            if (lim.is_pinf and maximize) or (lim.is_minf and not maximize):
                return (PLUS_INF if maximize else MINUS_INF), False, None
            if lim.is_finite:
                add(lim, False, None)

    for r in real_roots(deriv(c)):
        if I.contains(r):
            add(peval(c, r), True, r)

    best = None
    for val, att, arg in cands:
        if best is None:
            best = (val, att, arg)
            continue
        better = val > best[0] if maximize else val < best[0]
        if better or (val == best[0] and att and not best[1]):
            best = (val, att, arg)
    return best


def _fpeval(q, x: float) -> float:
    acc = 0.0
    for a in reversed(q):
        acc = acc * x + a
    return acc


def fmax_on(q, lo: float, hi: float) -> float:
    """Max of a float-coefficient polynomial over [lo, hi], ends may be +-inf.

    Pure float arithmetic for hot inexact paths; endpoint values stand in for
    one-sided limits (openness never changes a supremum's value).
    """
    while len(q) > 1 and q[-1] == 0.0:
        q = q[:-1]
    d = len(q) - 1
    if d == 0:
        return q[0]
    best = -math.inf
    for end, direction in ((lo, -1), (hi, +1)):
        if math.isinf(end):
            lead = q[-1] if (direction > 0 or d % 2 == 0) else -q[-1]
            if lead > 0:
                return math.inf
        else:
            v = _fpeval(q, end)
            if v > best:
                best = v
    if d == 1:
        return best
    if d == 2:
        r = -q[1] / (2.0 * q[2])
        if lo <= r <= hi:
            best = max(best, _fpeval(q, r))
        return best
    if d == 3:
        a2, b2, c2 = 3.0 * q[3], 2.0 * q[2], q[1]
        disc = b2 * b2 - 4.0 * a2 * c2
        if disc >= 0.0:
            s = math.sqrt(disc)
            for r in ((-b2 + s) / (2.0 * a2), (-b2 - s) / (2.0 * a2)):
                if lo <= r <= hi:
                    best = max(best, _fpeval(q, r))
        return best
    dq = [k * q[k] for k in range(1, d + 1)]
    for r in np.roots(dq[::-1]):
        if abs(r.imag) < 1e-9:
            x = float(r.real)
            if lo <= x <= hi:
                best = max(best, _fpeval(q, x))
    return best


def is_convex_on(c: Coeffs, I: Interval) -> bool:
    """Exact test: second derivative nonnegative on the closure of the interval."""
    if I.is_empty or I.is_singleton:
        return True
    c2 = deriv(deriv(c))
    lo, _, _ = extremum_on(c2, I.closure() if I.bounded else I, maximize=False)
    if lo.is_minf:
        return False
    if lo.is_finite:
        return lo.value >= 0
    return True


def fmt(c: Coeffs) -> str:
    terms = []
    for k, a in enumerate(c):
        if a == 0 and len(c) > 1:
            continue
        if k == 0:
            terms.append(str(a))
        elif k == 1:
            terms.append(f"{a}*x")
        else:
            terms.append(f"{a}*x^{k}")
    return " + ".join(terms) if terms else "0"
