"""Fenchel conjugation on R and product-form c-conjugates on W = R^3.

The coupling c(x, (x*, y*, alpha)) = x*x* when x*y* < alpha (else +inf) makes
every c-conjugate factor into a scalar Fenchel part in x* and a feasibility
region F(dom f) in the (y*, alpha) half-plane.  Regions are kept as Minkowski
sums of single-interval regions; membership, boundary attainment and the open
set U(F) = {x : x*y* < alpha for all (y*, alpha) in F} all reduce to interval
endpoint/closedness case analysis, which is exactly where the strict-versus-
nonstrict distinctions of even convexity live.

Scalar descriptors form a small closed algebra (`RealFn`): Fenchel conjugates
of piecewise polynomials, infimal convolutions, sums, pointwise maxima,
interval gates, and numeric conjugates of anything else.  Each descriptor
carries its domain and the closed domain of its own conjugate; the latter
doubles as asymptotic-slope data for the optimizers (the slopes of a closed
convex function are the endpoints of its conjugate's domain).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import poly
from ._opt import maximize_concave, minimize_convex
from .errors import EmptyDomain, ImproperResult, NoMinorant
from .extreal import (EMPTY, ExtReal, Interval, MINUS_INF, PLUS_INF, Scalar,
                      ZERO, add_lower, as_scalar, sub_lower)
from .pwfn import DCFn, PiecewiseFn, closure_piecewise


# ---------------------------------------------------------------------------
# feasibility regions in the (y*, alpha) plane


class FeasRegion:
    """F(I1) + ... + F(Ik), the Minkowski sum of single-interval regions.

    With L = max of the lower endpoints and U = min of the upper endpoints,
    the infimal convolution of the summand support functions is the support
    function of [L, U] (identically -inf when L > U, in which case the region
    is the whole plane).  A boundary pair (y, m(y)) belongs to the sum iff an
    all-summands-nonattained split exists; that is a finite condition on which
    summands have an open endpoint at the active value.
    """

    __slots__ = ("summands", "_L", "_U", "_disjoint", "_b_pos", "_b_neg", "_b_zero")

    def __init__(self, summands: Sequence[Interval]):
        summands = tuple(summands)
        if not summands:
            raise ValueError("a region needs at least one summand")
        for I in summands:
            if I.is_empty:
                raise EmptyDomain("region of an empty interval")
        self.summands = summands
        L = max(I.lo for I in summands)
        U = min(I.hi for I in summands)
        self._L, self._U = L, U
        self._disjoint = L > U

        def open_hi_at(t):
            return any(I.hi == t and not I.hi_closed for I in summands)

        def open_lo_at(t):
            return any(I.lo == t and not I.lo_closed for I in summands)

        def all_roles_at(t):
            return all((I.hi == t and not I.hi_closed) or
                       (I.lo == t and not I.lo_closed) for I in summands)

        self._b_pos = U.is_finite and open_hi_at(U) and \
            all((I.hi == U and not I.hi_closed) or (I.lo == U and not I.lo_closed)
                for I in summands)
        self._b_neg = L.is_finite and open_lo_at(L) and \
            all((I.lo == L and not I.lo_closed) or (I.hi == L and not I.hi_closed)
                for I in summands)
        self._b_zero = L.is_finite and L == U and \
            open_hi_at(U) and open_lo_at(L) and all_roles_at(L)

    # -- scalar queries --------------------------------------------------------

    @property
    def is_universe(self) -> bool:
        """True when the summand closures are disjoint: every (y, alpha) belongs."""
        return self._disjoint

    def m_value(self, y: Scalar) -> ExtReal:
        """Infimum over splits of the summed support values at y."""
        if self._disjoint:
            return MINUS_INF
        y = as_scalar(y)
        if y == 0:
            return ZERO
        if y > 0:
            return ExtReal.of(self._U.value * y) if self._U.is_finite else PLUS_INF
        return ExtReal.of(self._L.value * y) if self._L.is_finite else PLUS_INF

    def boundary_member(self, y: Scalar) -> bool:
        """Whether (y, m(y)) itself belongs (m(y) finite assumed)."""
        y = as_scalar(y)
        if y > 0:
            return self._b_pos
        if y < 0:
            return self._b_neg
        return self._b_zero

    def member(self, ystar: Scalar, alpha: Scalar) -> bool:
        if self._disjoint:
            return True
        y, a = as_scalar(ystar), as_scalar(alpha)
        m = self.m_value(y)
        if m.is_pinf:
            return False
        return a > m.value or (a == m.value and self.boundary_member(y))

    def mask(self, ys: np.ndarray, als: np.ndarray) -> np.ndarray:
        """Membership over a (y-grid) x (alpha-grid) product, vectorized."""
        ys = np.asarray(ys, dtype=float)
        als = np.asarray(als, dtype=float)
        if self._disjoint:
            return np.ones((ys.size, als.size), dtype=bool)
        m = np.zeros(ys.size)
        b = np.zeros(ys.size, dtype=bool)
        pos, neg = ys > 0, ys < 0
        m[pos] = float(self._U) * ys[pos]
        m[neg] = float(self._L) * ys[neg]
        b[pos], b[neg], b[~pos & ~neg] = self._b_pos, self._b_neg, self._b_zero
        A, M, B = als[None, :], m[:, None], b[:, None]
        return (A > M) | ((A == M) & B)

    # -- set algebra -----------------------------------------------------------

    def minkowski(self, other: "FeasRegion") -> "FeasRegion":
        return FeasRegion(self.summands + other.summands)

    def contains(self, other: "FeasRegion") -> bool:
        """other is a subset of self; exact via the three rays y in {1,0,-1}.

        Both membership functions are positively homogeneous with
        scale-invariant boundary flags, so the three rays decide the plane.
        """
        if self._disjoint:
            return True
        if other._disjoint:
            return False
        for y in (Fraction(1), Fraction(0), Fraction(-1)):
            mo = other.m_value(y)
            if mo.is_pinf:
                continue
            ms = self.m_value(y)
            if ms.is_pinf or ms > mo:
                return False
            if ms == mo and other.boundary_member(y) and not self.boundary_member(y):
                return False
        return True

    def equals(self, other: "FeasRegion") -> bool:
        return self.contains(other) and other.contains(self)

    def u_set(self) -> Interval:
        """{x : x*y < alpha for every (y, alpha) in the region}.

        Closedness flips against boundary membership: when (1, m(1)) belongs
        the bound x < m(1) is strict, otherwise x <= m(1).  Empty iff (0,0)
        belongs.  For a single summand this recovers the interval itself.
        """
        if self.member(0, 0):
            return EMPTY
        mp = self.m_value(Fraction(1))
        mm = self.m_value(Fraction(-1))
        hi, hi_c = (PLUS_INF, False) if mp.is_pinf else (mp, not self.boundary_member(1))
        lo, lo_c = (MINUS_INF, False) if mm.is_pinf else (-mm, not self.boundary_member(-1))
        return Interval.make(lo, lo_c, hi, hi_c)

    def sample_points(self) -> list[tuple[Fraction, Fraction]]:
        """Deterministic member pairs covering each ray and its boundary."""
        if self._disjoint:
            return [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(-2)),
                    (Fraction(-1), Fraction(-2)), (Fraction(0), Fraction(-5))]
        pts = []
        for y in (Fraction(1), Fraction(0), Fraction(-1)):
            m = self.m_value(y)
            if m.is_pinf:
                continue
            if self.boundary_member(y):
                pts.append((y, Fraction(m.value)))
            pts.append((y, Fraction(m.value) + Fraction(1, 7)))
            pts.append((y, Fraction(m.value) + 2))
        return pts

    def describe(self) -> str:
        if self._disjoint:
            return "{all (y*,alpha)}"
        parts = []
        for tag, y in (("y*>0", Fraction(1)), ("y*=0", Fraction(0)), ("y*<0", Fraction(-1))):
            m = self.m_value(y)
            if m.is_pinf:
                continue
            rel = ">=" if self.boundary_member(y) else ">"
            parts.append(f"{tag}: alpha {rel} {m.value}*|y*|" if y != 0
                         else f"y*=0: alpha {rel} 0")
        return "{" + "; ".join(parts) + "}" if parts else "{empty}"

    def __repr__(self) -> str:
        return f"FeasRegion({len(self.summands)} summands, {self.describe()})"


def feas_region(I: Interval) -> FeasRegion:
    """Canonical single-summand region F(I)."""
    return FeasRegion((I,))


def feas_membership(R: FeasRegion, ystar: Scalar, alpha: Scalar) -> bool:
    return R.member(ystar, alpha)


# ---------------------------------------------------------------------------
# scalar descriptors


class RealFn:
    """A convex extended-real function of one variable.

    `domain` is where values are below +inf; `conj_dom` is the closed domain
    of the Fenchel conjugate, whose endpoints are the asymptotic slopes.  The
    second element of eval_ex reports whether the defining extremum (where
    there is one) is attained.
    """

    domain: Interval
    conj_dom: Interval

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        raise NotImplementedError

    def eval(self, x: Scalar) -> ExtReal:
        return self.eval_ex(x)[0]

    def feval(self, x: float) -> float:
        """Float value (+-inf for infinite); bypasses exact bookkeeping."""
        return float(self.eval_ex(x)[0])

    def __call__(self, x: Scalar) -> ExtReal:
        return self.eval(x)

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        return np.array([float(self.eval(float(t))) for t in xs])


def _conj_domain_of(src: PiecewiseFn) -> tuple[Interval, bool]:
    """Domain of the conjugate of a piecewise polynomial, from tail slopes.

    Returns (domain, improper); improper means the conjugate is +inf
    everywhere (no affine minorant).  Finite bounds are attained (closed)
    because the tails that produce them are affine or constant.
    """
    lo: ExtReal = MINUS_INF
    hi: ExtReal = PLUS_INF
    improper = False
    first_i, first_c = src.pieces[0]
    last_i, last_c = src.pieces[-1]
    if not last_i.hi.is_finite:
        d = poly.degree(last_c)
        if d == 0:
            hi = ZERO
        elif d == 1:
            hi = ExtReal.of(last_c[1])
        elif last_c[d] < 0:
            improper = True
    if not first_i.lo.is_finite:
        d = poly.degree(first_c)
        if d == 0:
            lo = ZERO
        elif d == 1:
            lo = ExtReal.of(first_c[1])
        elif poly.tail_limit(first_c, -1).is_minf:
            improper = True
    if improper:
        return EMPTY, True
    dom = Interval.make(lo, lo.is_finite, hi, hi.is_finite)
    return dom, dom.is_empty


class FenchelConj(RealFn):
    """f*(t) = sup_x {t*x - f(x)} for piecewise-polynomial f, piece by piece."""

    __slots__ = ("src", "domain", "conj_dom", "improper", "_cache",
                 "_src_convex", "_fpieces")

    def __init__(self, src: PiecewiseFn):
        self.src = src
        dom, improper = _conj_domain_of(src)
        self.domain = dom
        self.improper = improper
        self.conj_dom = src.domain_hull().closure()
        self._cache: dict = {}
        self._src_convex: bool | None = None
        self._fpieces: list | None = None

    def src_is_convex(self) -> bool:
        if self._src_convex is None:
            self._src_convex = self.src.is_convex()
        return self._src_convex

    def _float_pieces(self) -> list:
        if self._fpieces is None:
            fp = []
            for I, c in self.src.pieces:
                neg = [-float(v) for v in c]
                if len(neg) == 1:
                    neg.append(0.0)
                lo = float(I.lo) if I.lo.is_finite else -math.inf
                hi = float(I.hi) if I.hi.is_finite else math.inf
                fp.append((neg, lo, hi))
            self._fpieces = fp
        return self._fpieces

    def eval_ex(self, t: Scalar) -> tuple[ExtReal, bool]:
        t = as_scalar(t)
        key = (isinstance(t, Fraction), t)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.improper or not self.domain.contains(t):
            out = (PLUS_INF, False)
        elif not isinstance(t, Fraction):
            best = self.feval(float(t))
            out = (PLUS_INF, False) if best == math.inf \
                else (ExtReal.of(best), False)
        else:
            best, att = MINUS_INF, False
            for I, c in self.src.pieces:
                q = poly.qshift(c, t)
                v, a, _ = poly.extremum_on(q, I, maximize=True)
                if v > best:
                    best, att = v, a
                elif v == best and a:
                    att = True
            out = (best, att) if not best.is_pinf else (PLUS_INF, False)
        self._cache[key] = out
        return out

    def feval(self, x: float) -> float:
        if self.improper or not self.domain.contains(x):
            return math.inf
        best = -math.inf
        for neg, lo, hi in self._float_pieces():
            q = list(neg)
            q[1] += x
            v = poly.fmax_on(q, lo, hi)
            if v > best:
                best = v
                if best == math.inf:
                    break
        return best


class PiecewiseScalar(RealFn):
    """Exact piecewise values promoted to the descriptor interface."""

    __slots__ = ("pw", "domain", "conj_dom")

    def __init__(self, pw: PiecewiseFn, conj_dom: Interval | None = None):
        if not pw.domain_is_interval():
            raise ValueError("descriptor requires an interval domain")
        self.pw = pw
        self.domain = pw.domain_hull()
        if conj_dom is None:
            conj_dom = _conj_domain_of(pw)[0].closure()
        self.conj_dom = conj_dom

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        return self.pw.eval(x), True

    def feval(self, x: float) -> float:
        return self.pw.feval(x)

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        return self.pw.eval_grid(xs)


class InfConvScalar(RealFn):
    """(a + b at split u)(t) = inf_u {a(u) + b(t-u)} with exactness flags.

    Identically -inf on its domain when the conjugate domains have disjoint
    closures (equivalently, some direction has negative total slope).
    """

    __slots__ = ("a", "b", "domain", "conj_dom", "improper", "_cache")

    def __init__(self, a: RealFn, b: RealFn):
        self.a, self.b = a, b
        self.domain = a.domain.minkowski(b.domain)
        cd = a.conj_dom.intersect(b.conj_dom)
        self.conj_dom = cd
        self.improper = cd.is_empty
        self._cache = {}

    def eval_ex(self, t: Scalar) -> tuple[ExtReal, bool]:
        t = as_scalar(t)
        key = (isinstance(t, Fraction), t)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not self.domain.contains(t):
            out = (PLUS_INF, False)
        elif self.improper:
            out = (MINUS_INF, False)
        else:
            Ju = self.a.domain.intersect(self.b.domain.negate().shift(t))
            if Ju.is_empty:
                out = (PLUS_INF, False)
            else:
                a, b = self.a, self.b
                exact = isinstance(t, Fraction)

                if exact:
                    def phi(u):
                        return add_lower(a.eval(u), b.eval(t - u))
                else:
                    tf = float(t)

                    def phi(u):
                        va = a.feval(u)
                        if va == -math.inf:
                            return MINUS_INF
                        vb = b.feval(tf - u)
                        if vb == -math.inf:
                            return MINUS_INF
                        s = va + vb
                        if s == math.inf:
                            return PLUS_INF
                        return ExtReal.of(s)

                s_neg = sub_lower(a.conj_dom.lo, b.conj_dom.hi)
                s_pos = sub_lower(a.conj_dom.hi, b.conj_dom.lo)
                v, att, _ = minimize_convex(phi, Ju, s_neg, s_pos, exact)
                out = (v, att)
        self._cache[key] = out
        return out


class NumericConj(RealFn):
    """s*(x) by concave maximization of x*u - s(u) over dom s."""

    __slots__ = ("src", "domain", "conj_dom", "_cache")

    def __init__(self, src: RealFn):
        self.src = src
        self.domain = src.conj_dom
        self.conj_dom = src.domain.closure()
        self._cache = {}

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        x = as_scalar(x)
        key = (isinstance(x, Fraction), x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not self.domain.contains(x):
            out = (PLUS_INF, False)
        else:
            s = self.src
            exact = isinstance(x, Fraction)

            if exact:
                def psi(u):
                    return sub_lower(ExtReal.of(x * u), s.eval(u))
            else:
                xf = float(x)

                def psi(u):
                    v = s.feval(u)
                    if v == math.inf:
                        return MINUS_INF
                    if v == -math.inf:
                        return PLUS_INF
                    r = xf * u - v
                    if r == math.inf:
                        return PLUS_INF
                    if r == -math.inf:
                        return MINUS_INF
                    return ExtReal.of(r)

            xe = ExtReal.of(x)
            v, att, _ = maximize_concave(
                psi, s.domain,
                sub_lower(xe, s.conj_dom.lo), sub_lower(xe, s.conj_dom.hi),
                exact)
            out = (v, att) if not v.is_pinf else (PLUS_INF, False)
        self._cache[key] = out
        return out


class SumFn(RealFn):
    """Pointwise sum of descriptors (lower addition)."""

    __slots__ = ("parts", "domain", "conj_dom")

    def __init__(self, parts: Sequence[RealFn]):
        self.parts = tuple(parts)
        if not self.parts:
            raise ValueError("empty sum")
        dom = self.parts[0].domain
        cd = self.parts[0].conj_dom
        for p in self.parts[1:]:
            dom = dom.intersect(p.domain)
            cd = cd.minkowski(p.conj_dom)
        self.domain = dom
        self.conj_dom = cd

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        total, att = ZERO, True
        for p in self.parts:
            v, a = p.eval_ex(x)
            if v.is_pinf:
                return PLUS_INF, False
            total = add_lower(total, v)
            att = att and a
        return total, att

    def feval(self, x: float) -> float:
        total = 0.0
        for p in self.parts:
            v = p.feval(x)
            if v == math.inf:
                return math.inf
            if v == -math.inf:
                total = -math.inf
            elif total != -math.inf:
                total += v
        return total

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        acc = self.parts[0].eval_grid(xs)
        for p in self.parts[1:]:
            acc = acc + p.eval_grid(xs)
        return acc


class GatedFn(RealFn):
    """inner + indicator of a gate interval."""

    __slots__ = ("inner", "gate", "domain", "conj_dom")

    def __init__(self, inner: RealFn, gate: Interval):
        self.inner = inner
        self.gate = gate
        self.domain = inner.domain.intersect(gate)
        lo = MINUS_INF if self.domain.is_empty or self.domain.lo.is_finite \
            else inner.conj_dom.lo
        hi = PLUS_INF if self.domain.is_empty or self.domain.hi.is_finite \
            else inner.conj_dom.hi
        self.conj_dom = Interval.make(lo, lo.is_finite, hi, hi.is_finite)

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        if not self.gate.contains(x):
            return PLUS_INF, False
        return self.inner.eval_ex(x)

    def feval(self, x: float) -> float:
        if not self.gate.contains(x):
            return math.inf
        return self.inner.feval(x)

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        if self.gate.is_empty:
            return np.full(np.asarray(xs).shape, np.inf)
        out = self.inner.eval_grid(xs)
        lo, hi = float(self.gate.lo), float(self.gate.hi)
        inside = (xs >= lo if self.gate.lo_closed else xs > lo) & \
                 (xs <= hi if self.gate.hi_closed else xs < hi)
        return np.where(inside, out, np.inf)


class MaxFn(RealFn):
    """Pointwise maximum of descriptors (+inf wherever any part is)."""

    __slots__ = ("parts", "domain", "conj_dom")

    def __init__(self, parts: Sequence[RealFn]):
        self.parts = tuple(parts)
        if not self.parts:
            raise ValueError("empty maximum")
        dom = self.parts[0].domain
        for p in self.parts[1:]:
            dom = dom.intersect(p.domain)
        self.domain = dom
        lo = min((p.conj_dom.lo for p in self.parts), default=MINUS_INF)
        hi = max((p.conj_dom.hi for p in self.parts), default=PLUS_INF)
        self.conj_dom = Interval.make(lo, lo.is_finite, hi, hi.is_finite)

    def eval_ex(self, x: Scalar) -> tuple[ExtReal, bool]:
        best, att = MINUS_INF, True
        for p in self.parts:
            v, a = p.eval_ex(x)
            if v.is_pinf:
                return PLUS_INF, False
            if v > best:
                best, att = v, a
            elif v == best:
                att = att or a
        return best, att

    def feval(self, x: float) -> float:
        best = -math.inf
        for p in self.parts:
            v = p.feval(x)
            if v == math.inf:
                return math.inf
            if v > best:
                best = v
        return best

    def eval_grid(self, xs: np.ndarray) -> np.ndarray:
        acc = self.parts[0].eval_grid(xs)
        for p in self.parts[1:]:
            acc = np.maximum(acc, p.eval_grid(xs))
        return acc


def conj_of(h) -> RealFn:
    """Fenchel conjugate within the descriptor algebra.

    Piecewise sources use the exact engine; conjugates of convex piecewise
    sources short-circuit to the exact lsc closure (f** = cl f); infimal
    convolutions conjugate to sums; a numeric conjugate unwraps to its source
    (everything in the algebra is closed convex); the rest go numeric.
    """
    if isinstance(h, PiecewiseFn):
        return FenchelConj(h)
    if isinstance(h, FenchelConj):
        if h.improper:
            raise NoMinorant("conjugate is identically +inf; no affine minorant")
        if h.src_is_convex():
            return PiecewiseScalar(closure_piecewise(h.src), conj_dom=h.domain.closure())
        return NumericConj(h)
    if isinstance(h, InfConvScalar):
        if h.improper:
            raise ImproperResult("conjugating an improper infimal convolution")
        return SumFn([conj_of(h.a), conj_of(h.b)])
    if isinstance(h, PiecewiseScalar):
        return FenchelConj(h.pw)
    if isinstance(h, NumericConj):
        return h.src
    return NumericConj(h)


# ---------------------------------------------------------------------------
# c-conjugates


class CConjugate:
    """phi^c in product form: scalar part in x*, feasibility region in (y*, alpha)."""

    __slots__ = ("scalar", "feas", "label")

    def __init__(self, scalar: RealFn, feas: FeasRegion, label: str = ""):
        self.scalar = scalar
        self.feas = feas
        self.label = label

    def value_ex(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> tuple[ExtReal, bool]:
        if not self.feas.member(ystar, alpha):
            return PLUS_INF, False
        return self.scalar.eval_ex(xstar)

    def value(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> ExtReal:
        return self.value_ex(xstar, ystar, alpha)[0]

    def __call__(self, w) -> ExtReal:
        return self.value(*w)

    def epi_contains(self, xstar: Scalar, ystar: Scalar, alpha: Scalar,
                     beta: Scalar) -> bool:
        """Exact epigraph membership: the beta comparison is non-strict."""
        if not self.feas.member(ystar, alpha):
            return False
        v = self.scalar.eval(xstar)
        return not v.is_pinf and ExtReal.of(beta) >= v

    def env_grid(self, xs: np.ndarray, ys: np.ndarray, als: np.ndarray) -> np.ndarray:
        """Values on the product grid, shape (len(xs), len(ys), len(als))."""
        sv = self.scalar.eval_grid(np.asarray(xs, dtype=float))
        mask = self.feas.mask(ys, als)
        return np.where(mask[None, :, :], sv[:, None, None], np.inf)

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"CConjugate{tag}(feas={self.feas.describe()})"


def _as_piecewise(f) -> PiecewiseFn:
    if isinstance(f, DCFn):
        return f.to_piecewise()
    if isinstance(f, PiecewiseFn):
        return f
    raise TypeError(f"not a piecewise function: {f!r}")


def fenchel(f, cfg=None) -> FenchelConj:
    """Fenchel conjugate of a piecewise (or explicit DC) function."""
    return FenchelConj(_as_piecewise(f))


def c_conjugate(f, cfg=None, label: str = "") -> CConjugate:
    """f^c = (f*, F(dom f)) in product form."""
    pw = _as_piecewise(f)
    return CConjugate(FenchelConj(pw), feas_region(pw.domain_hull()), label)


def _as_realfn(a) -> RealFn:
    if isinstance(a, RealFn):
        return a
    if isinstance(a, PiecewiseFn):
        return PiecewiseScalar(a)
    raise TypeError(f"not a scalar descriptor: {a!r}")


def inf_convolution_scalar(a, b) -> InfConvScalar:
    """Scalar infimal convolution with per-point exactness flags."""
    return InfConvScalar(_as_realfn(a), _as_realfn(b))


def c_infconv(A: CConjugate, B: CConjugate, label: str = "") -> CConjugate:
    """W-space infimal convolution of two product-form conjugates.

    Splits decouple: the x* part convolves the scalars, the (y*, alpha) part
    Minkowski-sums the regions.
    """
    return CConjugate(InfConvScalar(A.scalar, B.scalar),
                      A.feas.minkowski(B.feas), label)


def c_prime_conjugate(k, cfg=None) -> RealFn:
    """k^{c'}(x) = sup_w {c'(w, x) - k(w)} for product-form k.

    Reduction: the supremum over (y*, alpha) forces x into
    U(feas) = {x : x*y* < alpha on the region}; there the x*-supremum is the
    scalar part's Fenchel conjugate.  Unions of blocks (k = min of block
    envelopes) conjugate to the pointwise maximum.
    """
    blocks = [k] if isinstance(k, CConjugate) else list(k)
    parts = [GatedFn(conj_of(b.scalar), b.feas.u_set()) for b in blocks]
    return parts[0] if len(parts) == 1 else MaxFn(parts)


def biconjugate_ccprime(f, cfg=None) -> RealFn:
    """f^{cc'}: the c-conjugate followed by the c'-conjugate."""
    fc = c_conjugate(f)
    if fc.scalar.improper:
        raise NoMinorant("function admits no affine minorant")
    return c_prime_conjugate(fc, cfg)


class EAffineSet:
    """The parameter set of e-affine minorants of f.

    (x*, beta, y*, alpha) belongs iff (y*, alpha) lies in F(dom f) and
    f*(x*) <= beta, i.e. the e-affine function x -> x*x* - beta on the open
    half-line of (y*, alpha) minorizes f.
    """

    __slots__ = ("fstar", "feas")

    def __init__(self, fstar: RealFn, feas: FeasRegion):
        self.fstar = fstar
        self.feas = feas

    def contains(self, xstar: Scalar, beta: Scalar, ystar: Scalar,
                 alpha: Scalar, tol: float = 0.0) -> bool:
        if not self.feas.member(ystar, alpha):
            return False
        v = self.fstar.eval(xstar)
        if v.is_pinf:
            return False
        if tol == 0.0 and v.is_exact:
            return v <= ExtReal.of(beta)
        return float(v) <= float(beta) + tol

    def is_empty(self) -> bool:
        return self.fstar.domain.is_empty

    def sample_members(self, n: int = 5) -> list[tuple]:
        """Deterministic member tuples (x*, beta, y*, alpha)."""
        out = []
        region_pts = self.feas.sample_points()
        for x in self.fstar.domain.sample(n):
            v = self.fstar.eval(x)
            if v.is_pinf:
                continue
            for db in (0, 1):
                beta = v.value + db
                for (y, a) in region_pts[:3]:
                    out.append((x, beta, y, a))
        return out


def eaffine_minorant_set(f, cfg=None) -> EAffineSet:
    pw = _as_piecewise(f)
    return EAffineSet(FenchelConj(pw), feas_region(pw.domain_hull()))


def sup_etilde(f1, f2, cfg=None) -> RealFn:
    """Supremum of the composite e-affine minorants of the pair (f1, f2).

    Reduction: (f1* + split f2*)* = f1** + f2** pointwise, gated to the open
    set of the summed regions U(F(dom f1) + F(dom f2)).
    """
    c1, c2 = c_conjugate(f1), c_conjugate(f2)
    for c in (c1, c2):
        if c.scalar.improper:
            raise NoMinorant("function admits no affine minorant")
    gate = c1.feas.minkowski(c2.feas).u_set()
    return GatedFn(SumFn([conj_of(c1.scalar), conj_of(c2.scalar)]), gate)
