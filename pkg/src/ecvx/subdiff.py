"""Epsilon-subdifferentials, their c-analogues, and two set identities.

The classical set reduces to a sublevel set of the convex function
t -> f*(t) - xbar*t, so it is always a closed interval; endpoints come from
the exact conjugate-domain boundary where possible, else from bisection with
a rational snap that is only accepted when it solves the level equation
exactly.  The c-subdifferential is that interval times the feasibility region
of dom f, and is empty whenever f(xbar) is not finite.

The reconstruction of epi f^c from epsilon-c-subdifferentials (union over an
epsilon grid) and the sum rule for f + delta_B under a constraint family are
both verified pointwise; the epsilon grid is geometric, so the reconstruction
carries a per-point quantization certificate rather than a uniform bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import hull, pwfn
from ._opt import minimize_convex
from .config import DEFAULT, EvalConfig
from .conj import FeasRegion, FenchelConj, c_conjugate, feas_region
from .episet import EnvelopeFn
from .errors import EmptyDomain
from .extreal import (EMPTY, ExtReal, Interval, MINUS_INF, PLUS_INF, Scalar,
                      ZERO, as_scalar, sub_lower)
from .pwfn import DCFn, PiecewiseFn

_SNAP_DENS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 48, 720, 10**4, 10**6)


def _as_pw(f) -> PiecewiseFn:
    if isinstance(f, DCFn):
        return f.to_piecewise()
    return f


def _crossing_above(r, a, b, c: ExtReal):
    """Largest t in [a, b] with r(t) <= c, given r(a) <= c < r(b), r convex
    and strictly above its minimum at the crossing.

    Float bisection plus a rational snap.  A snapped t >= a with r(t) = c
    exactly is the exact endpoint: past the minimum a convex function crosses
    a strict upper level once and stays above it.
    """
    fa, fb = float(a), float(b)
    for _ in range(200):
        m = 0.5 * (fa + fb)
        if m in (fa, fb):
            break
        if r(m) <= c:
            fa = m
        else:
            fb = m
    for d in _SNAP_DENS:
        t = Fraction(fa).limit_denominator(d)
        if t < a or float(t) > fb:
            continue
        vt = r(t)
        if vt == c and vt.is_exact and c.is_exact:
            return t
    return fa


def _flat_end(r, arg: Fraction, v: ExtReal, sign: int) -> ExtReal:
    """Far end of the exact flat {r = v} around arg, in one direction.

    Only exactly-represented matches extend the flat; a float evaluation that
    happens to round to v is noise, not evidence of flatness.
    """
    def flat(t):
        vt = r(t)
        return vt == v and vt.is_exact

    step = Fraction(1, 4)
    end = arg
    while flat(end + sign * step):
        end += sign * step
        step *= 2
        if step > 2**80:
            return PLUS_INF if sign > 0 else MINUS_INF
    floor = Fraction(1, 2**60)
    while step > floor:
        step /= 2
        if flat(end + sign * step):
            end += sign * step
    return ExtReal.of(end)


def _upper_end(r, D: Interval, t0, c: ExtReal, s_pos: ExtReal) -> ExtReal:
    if D.hi.is_finite:
        b = D.hi.value
        if r(b) <= c:
            return ExtReal.of(b)
        return ExtReal.of(_crossing_above(r, t0, b, c))
    if s_pos <= ZERO:
        return PLUS_INF
    step, b = 1, as_scalar(t0) + 1
    while r(b) <= c:
        b += step
        step *= 2
        if step > 2**120:
            return PLUS_INF
    return ExtReal.of(_crossing_above(r, t0, b, c))


def eps_subdiff(f, xbar: Scalar, eps: Scalar = 0, cfg: EvalConfig = DEFAULT) -> Interval:
    """{x* : f*(x*) <= xbar*x* - f(xbar) + eps}, a closed interval.

    Empty when f(xbar) is not finite, and possibly empty for small eps when
    f(xbar) sits strictly above the closed convex hull.
    """
    pw = _as_pw(f)
    xbar = as_scalar(xbar)
    eps = as_scalar(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    fx = pw.eval(xbar)
    if not fx.is_finite:
        return EMPTY
    fstar = FenchelConj(pw)
    if fstar.improper or fstar.domain.is_empty:
        return EMPTY
    c = ExtReal.of(eps - fx.value)

    def r(t):
        return sub_lower(fstar.eval(t), ExtReal.of(xbar * t))

    xb = ExtReal.of(xbar)
    s_neg = sub_lower(fstar.conj_dom.lo, xb)
    s_pos = sub_lower(fstar.conj_dom.hi, xb)
    exact = isinstance(xbar, Fraction) and isinstance(eps, Fraction)
    vmin, _, arg = minimize_convex(r, fstar.domain, s_neg, s_pos, exact)
    if vmin > c:
        return EMPTY
    if vmin == c and vmin.is_exact and c.is_exact and isinstance(arg, Fraction):
        lo = _flat_end(r, arg, vmin, -1)
        hi = _flat_end(r, arg, vmin, +1)
        return Interval.make(lo, lo.is_finite, hi, hi.is_finite)
    if arg is None:
        arg = fstar.domain.interior_point()
    hi = _upper_end(r, fstar.domain, arg, c, s_pos)

    def r_ref(t):
        return r(-t)

    lo_ref = _upper_end(r_ref, fstar.domain.negate(), -arg, c, -s_neg)
    return Interval.make(-lo_ref, (-lo_ref).is_finite, hi, hi.is_finite)


@dataclass(frozen=True, slots=True)
class CSubdiff:
    """Product form of the eps-c-subdifferential: x*-interval times region."""

    xstar_set: Interval
    feas: FeasRegion

    @property
    def is_empty(self) -> bool:
        return self.xstar_set.is_empty

    def member(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> bool:
        return (not self.is_empty) and self.xstar_set.contains(xstar) \
            and self.feas.member(ystar, alpha)

    def minkowski(self, other: "CSubdiff") -> "CSubdiff":
        if self.is_empty or other.is_empty:
            return CSubdiff(EMPTY, self.feas)
        return CSubdiff(self.xstar_set.minkowski(other.xstar_set),
                        self.feas.minkowski(other.feas))

    def describe(self) -> str:
        if self.is_empty:
            return "{} (empty)"
        return f"{self.xstar_set} x {self.feas.describe()}"


def c_subdiff(f, xbar: Scalar, eps: Scalar = 0, cfg: EvalConfig = DEFAULT) -> CSubdiff:
    """eps-c-subdifferential of f at xbar in product form."""
    pw = _as_pw(f)
    I = eps_subdiff(pw, xbar, eps, cfg)
    return CSubdiff(I, feas_region(pw.domain_hull()))


class _ReconEnvelope:
    """Envelope of the union over an eps grid of subdifferential graphs."""

    __slots__ = ("x0", "fx0", "layers", "feas")

    def __init__(self, x0, fx0, layers: Sequence[tuple[Fraction, Interval]],
                 feas: FeasRegion):
        self.x0 = x0
        self.fx0 = fx0
        self.layers = tuple(layers)
        self.feas = feas

    def value(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> ExtReal:
        if not self.feas.member(ystar, alpha):
            return PLUS_INF
        for eps, I in self.layers:
            if I.contains(xstar):
                return ExtReal.of(self.x0 * as_scalar(xstar) - self.fx0 + eps)
        return PLUS_INF

    def __call__(self, w) -> ExtReal:
        return self.value(*w)

    def env_grid(self, xs: np.ndarray, ys: np.ndarray, als: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        emin = np.full(xs.shape, np.inf)
        for eps, I in self.layers:
            lo, hi = float(I.lo), float(I.hi)
            if I.is_empty:
                continue
            inside = (xs >= lo if I.lo_closed else xs > lo) & \
                     (xs <= hi if I.hi_closed else xs < hi)
            emin = np.where(inside & np.isinf(emin), float(eps), emin)
        sv = float(self.x0) * xs - float(self.fx0) + emin
        mask = self.feas.mask(ys, als)
        return np.where(mask[None, :, :], sv[:, None, None], np.inf)


@dataclass(frozen=True, slots=True)
class Lemma9Result:
    x0: object
    recon: _ReconEnvelope
    conj_env: EnvelopeFn
    sound: bool        # recon >= f^c everywhere sampled (no undercut)
    certified: bool    # recon - f^c within the grid's quantization certificate
    max_gap: float     # worst sampled recon - f^c over points where f^c is finite
    eps_grid: tuple

    @property
    def equal(self) -> bool:
        return self.sound and self.certified


def lemma9_reconstruct(f, x0: Scalar, cfg: EvalConfig = DEFAULT) -> Lemma9Result:
    """Rebuild the envelope of epi f^c from eps-c-subdifferentials at x0.

    For each grid eps, the graph slice {(w, <x0,x*> + eps - f(x0))} over
    the eps-c-subdifferential is added; the envelope of the union is compared
    with f^c.  The union over all eps >= 0 gives f^c exactly; a geometric
    grid reproduces it up to the per-point gap e(w) = f^c(w) - (x0 x* - f(x0))
    (the quantization step below e(w) is at most e(w) itself, and below the
    base step it is the base step).  `sound` asserts no undercut, `certified`
    asserts the gap stays within that bound.
    """
    pw = _as_pw(f)
    x0 = as_scalar(x0)
    fx0 = pw.eval(x0)
    if not fx0.is_finite:
        raise EmptyDomain("x0 outside dom f")
    steps = cfg.eps_grid()
    base = Fraction(steps[1]).limit_denominator(10**15) if len(steps) > 1 \
        else Fraction(0)
    eps_grid = (Fraction(0),) + tuple(base * 2**k
                                      for k in range(len(steps) - 1))
    layers = []
    for e in eps_grid:
        I = eps_subdiff(pw, x0, e, cfg)
        if not I.is_empty:
            layers.append((e, I))
    feas = feas_region(pw.domain_hull())
    recon = _ReconEnvelope(x0, fx0.value, layers, feas)
    fc = c_conjugate(pw)
    conj_env = EnvelopeFn(((fc, False),))

    xs, ys, als = cfg.w_axes()
    R = recon.env_grid(xs, ys, als)
    C = conj_env.env_grid(xs, ys, als)
    finite = np.isfinite(C)
    sound = bool(np.all(R[finite] >= C[finite] - cfg.value_tol)
                 and np.all(np.isinf(R[~finite])))
    affine = np.broadcast_to(float(x0) * xs[:, None, None] - float(fx0.value),
                             C.shape)
    evals = C[finite] - affine[finite]
    base = float(eps_grid[1]) if len(eps_grid) > 1 else cfg.value_tol
    bound = np.maximum(evals, base) + cfg.tol
    gaps = R[finite] - C[finite]
    certified = bool(np.all(gaps <= bound))
    max_gap = float(np.max(gaps)) if gaps.size else 0.0
    return Lemma9Result(x0, recon, conj_env, sound, certified, max_gap, eps_grid)


@dataclass(frozen=True, slots=True)
class Thm31iiiResult:
    equal: bool
    witnesses: tuple
    lhs: CSubdiff
    rhs_atoms: tuple
    note: str = "relative to lambda grid"

    def __bool__(self) -> bool:
        return self.equal


def thm31iii_check(f, constraints: Sequence, B: Interval, xbar: Scalar,
                   eps: Scalar = 0, lam_grid: Sequence[Sequence] | None = None,
                   cfg: EvalConfig = DEFAULT) -> Thm31iiiResult:
    """Sum rule for the eps-c-subdifferential of f + delta_B.

    Compares the left side with the union over the lambda grid and sampled
    eps splits of Minkowski sums
    eps1-c-subdiff of f at xbar + eps2-c-subdiff of eco(lambda h) at xbar,
    where eps1 + eps2 = eps + (eco lambda h)(xbar).  Membership is compared
    on a probe battery drawn from both sides' interval and region boundaries.
    """
    pw = _as_pw(f)
    xbar = as_scalar(xbar)
    eps = as_scalar(eps)
    lhs = c_subdiff(pwfn.add(pw, PiecewiseFn.indicator(B)), xbar, eps, cfg)

    if lam_grid is None:
        lam_grid = [[w] for w in (Fraction(0),) + tuple(cfg.lambda_weights)]
    atoms: list[CSubdiff] = []
    for lams in lam_grid:
        combo = pwfn.combine([(l, _as_pw(h)) for l, h in zip(lams, constraints)]) \
            if any(lams) else PiecewiseFn.zero(_as_pw(constraints[0]).domain_hull())
        eco = hull.eco_hull(combo, cfg).fn.pw
        ecx = eco.eval(xbar)
        if not ecx.is_finite:
            continue
        total = eps + ecx.value
        if total < 0:
            continue
        for t in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            e1 = t * total
            d1 = c_subdiff(pw, xbar, e1, cfg)
            d2 = c_subdiff(eco, xbar, total - e1, cfg)
            s = d1.minkowski(d2)
            if not s.is_empty:
                atoms.append(s)

    xs: set = set()
    for S in [lhs] + atoms:
        if S.is_empty:
            continue
        for end in (S.xstar_set.lo, S.xstar_set.hi):
            if end.is_finite:
                v = end.value if isinstance(end.value, Fraction) else Fraction(end.value).limit_denominator(10**9)
                xs.update((v, v - 1, v + 1, v - Fraction(1, 7), v + Fraction(1, 7)))
        xs.update(S.xstar_set.sample(3))
    if not xs:
        xs = {Fraction(0)}
    ya: set = set()
    for S in [lhs] + atoms:
        ya.update(S.feas.sample_points())
        for y in (Fraction(1), Fraction(0), Fraction(-1)):
            m = S.feas.m_value(y)
            if m.is_finite:
                mv = Fraction(m.value)
                ya.update(((y, mv), (y, mv - Fraction(1, 7)), (y, mv + Fraction(1, 7))))
    witnesses = []
    for x in sorted(xs, key=float):
        for (y, a) in sorted(ya, key=lambda p: (float(p[0]), float(p[1]))):
            inl = lhs.member(x, y, a)
            inr = any(S.member(x, y, a) for S in atoms)
            if inl != inr:
                witnesses.append((x, y, a, "lhs" if inl else "rhs"))
                if len(witnesses) >= 5:
                    return Thm31iiiResult(False, tuple(witnesses), lhs, tuple(atoms))
    return Thm31iiiResult(not witnesses, tuple(witnesses), lhs, tuple(atoms))
