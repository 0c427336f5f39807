"""DC problems on the line and their Lagrange dual battery.

A problem is inf {f(x) - g(x) : h_t(x) <= 0 for every t}, all parts convex
piecewise-polynomial.  Three dual values are computed over a finite grid of
multiplier vectors: the standard Lagrangian dual, the conjugate rewrite of it,
and the infimal-convolution dual.  The inner objective of the conjugate duals
is evaluated over the domain of the left conjugate with finite - (+inf) kept
at -inf; applying the global -inf priority at points where both conjugates are
+inf would collapse every inner infimum, which contradicts the worked values
the evaluators must reproduce.  Reports flag this convention.

Dual values over a finite multiplier grid are lower bounds of the true
suprema; enlarging a grid never lowers them.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import hull, poly, pwfn
from ._opt import minimize_sampled
from .config import DEFAULT, EvalConfig
from .conj import (CConjugate, EAffineSet, InfConvScalar, MaxFn, RealFn,
                   c_conjugate, c_infconv, conj_of, eaffine_minorant_set,
                   feas_region, sup_etilde)
from .episet import (EnvelopeFn, EpiCSet, SetCompare, eprime_hull,
                     is_eprime_convex, lower_envelope, set_equal,
                     _envelopes_equal, _probe_axes)
from .errors import EmptyDomain, InvalidProblem, NoMinorant
from .extreal import (EMPTY, ExtReal, Interval, MINUS_INF, PLUS_INF, Scalar,
                      ZERO, as_scalar, sub_lower)
from .pwfn import DCFn, PiecewiseFn, infimum_over

# A multiplier vector with finite support: ((constraint id, weight > 0), ...)
# sorted by id.  The empty tuple is the zero multiplier.
LambdaVec = tuple[tuple[str, Fraction], ...]


def lam_str(lam: LambdaVec) -> str:
    if not lam:
        return "0"
    return ",".join(f"{cid}:{w}" for cid, w in lam)


def _lam_key(lam: LambdaVec):
    return tuple((cid, float(w)) for cid, w in lam)


@dataclass(frozen=True, slots=True)
class DCProblem:
    """inf f - g subject to h_t <= 0; g defaults to the zero function."""

    f: PiecewiseFn
    g: PiecewiseFn | None = None
    constraints: tuple[tuple[str, PiecewiseFn], ...] = ()
    name: str = ""
    dom_contained: bool = field(default=True, compare=False)
    _memo: dict = field(default_factory=dict, init=False, compare=False,
                        repr=False)

    def __post_init__(self):
        if self.g is None:
            object.__setattr__(self, "g", PiecewiseFn.zero())
        object.__setattr__(self, "constraints",
                           tuple((str(cid), h) for cid, h in self.constraints))
        if not self.f.is_convex():
            raise InvalidProblem("objective part f is not convex")
        if not self.g.is_convex():
            raise InvalidProblem("objective part g is not convex")
        for cid, h in self.constraints:
            if not h.is_convex():
                raise InvalidProblem(f"constraint {cid!r} is not convex")
        ok = self.g.domain_hull().contains_interval(self.f.domain_hull())
        object.__setattr__(self, "dom_contained", ok)
        if not ok:
            warnings.warn("dom f is not contained in dom g; the objective "
                          "takes -inf values off dom g", stacklevel=2)

    def objective(self) -> DCFn:
        return DCFn.of(self.f, self.g)

    def constraint(self, cid: str) -> PiecewiseFn:
        for k, h in self.constraints:
            if k == cid:
                return h
        raise KeyError(cid)

    def lagrangian_term(self, lam: LambdaVec) -> PiecewiseFn:
        """The weighted constraint sum over the support of lam.

        The zero multiplier keeps the constraint domains: 0.h is the
        indicator of the intersection of the dom h_t, the limit shape of the
        weighted sums as the weights vanish.  A zero times a finite value is
        zero, but the sets these terms generate are domain-sensitive, and the
        worked unions the package reproduces close up only under the
        domain-retaining reading.
        """
        entries = [(w, self.constraint(cid)) for cid, w in lam if w != 0]
        if not entries:
            D = Interval.all()
            for _, h in self.constraints:
                D = D.intersect(h.domain_hull())
            if D.is_empty:
                raise InvalidProblem("constraint domains have empty "
                                     "intersection")
            return PiecewiseFn.indicator(D)
        return pwfn.combine(entries)


@dataclass(frozen=True, slots=True)
class LambdaGrid:
    """Finite multiplier vectors: active-constraint patterns times weights."""

    patterns: tuple[LambdaVec, ...]

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    @staticmethod
    def of(patterns: Sequence[LambdaVec]) -> "LambdaGrid":
        seen, out = set(), []
        for lam in patterns:
            key = tuple(sorted((str(cid), Fraction(w)) for cid, w in lam
                               if Fraction(w) != 0))
            if any(w < 0 for _, w in key):
                raise InvalidProblem("multiplier weights must be nonnegative")
            if key not in seen:
                seen.add(key)
                out.append(key)
        return LambdaGrid(tuple(out))

    @staticmethod
    def default(p: DCProblem, cfg: EvalConfig = DEFAULT) -> "LambdaGrid":
        ids = [cid for cid, _ in p.constraints]
        pats: list[LambdaVec] = [()]
        for cid in ids:
            pats.extend(((cid, w),) for w in cfg.lambda_weights)
        if cfg.lambda_max_active >= 2:
            for i in range(len(ids)):
                for j in range(i + 1, len(ids)):
                    for w in cfg.lambda_weights:
                        for rho in cfg.lambda_pair_weights:
                            pair = sorted(((ids[i], w * rho), (ids[j], w)))
                            pats.append(tuple(pair))
        return LambdaGrid.of(pats)


# ---------------------------------------------------------------------------
# feasible sets


def _seg_probe(a: ExtReal, b: ExtReal):
    """A point strictly between a and b, exact when both ends are rational."""
    if a == b:
        return None
    if a.is_finite and b.is_finite:
        if isinstance(a.value, Fraction) and isinstance(b.value, Fraction):
            return (a.value + b.value) / 2
        return (float(a) + float(b)) / 2
    if a.is_minf and b.is_finite:
        return b.value - 1
    if a.is_finite and b.is_pinf:
        return a.value + 1
    return Fraction(0)


def _span_union(parts: Sequence[Interval]) -> Interval:
    parts = [P for P in parts if not P.is_empty]
    if not parts:
        return EMPTY
    lo, lo_c = parts[0].lo, parts[0].lo_closed
    hi, hi_c = parts[0].hi, parts[0].hi_closed
    for P in parts[1:]:
        if P.lo < lo:
            lo, lo_c = P.lo, P.lo_closed
        elif P.lo == lo:
            lo_c = lo_c or P.lo_closed
        if P.hi > hi:
            hi, hi_c = P.hi, P.hi_closed
        elif P.hi == hi:
            hi_c = hi_c or P.hi_closed
    return Interval.make(lo, lo_c, hi, hi_c)


def _poly_sublevel(c, I: Interval) -> Interval:
    """{x in I : p(x) <= 0} for p convex on I; exact where roots are exact."""
    if I.is_empty:
        return EMPTY
    c = poly.trim(tuple(c))
    if poly.degree(c) == 0:
        return I if not (c[0] > 0) else EMPTY
    cuts = sorted((r for r in poly.real_roots(c) if I.contains(r)), key=float)
    included: list[Interval] = [Interval.point(r) for r in cuts]
    pts = [I.lo] + [ExtReal.of(r) for r in cuts] + [I.hi]
    for k in range(len(pts) - 1):
        t = _seg_probe(pts[k], pts[k + 1])
        if t is None:
            continue
        if not (poly.peval(c, t) > 0):
            first, last = k == 0, k == len(pts) - 2
            included.append(Interval.make(
                pts[k], I.lo_closed if first else True,
                pts[k + 1], I.hi_closed if last else True))
    return _span_union(included)


def sublevel_zero(h: PiecewiseFn) -> Interval:
    """{x : h(x) <= 0} for convex piecewise h, as one exact interval."""
    return _span_union([_poly_sublevel(c, I) for I, c in h.pieces])


def feasible_set(p: DCProblem) -> Interval:
    """A = {x : h_t(x) <= 0 for every t}; the whole line when T is empty."""
    A = Interval.all()
    for _, h in p.constraints:
        A = A.intersect(sublevel_zero(h))
        if A.is_empty:
            break
    return A


def set_B(p: DCProblem, grid: LambdaGrid | None = None,
          cfg: EvalConfig = DEFAULT) -> Interval:
    """Intersection over the grid of {x : (eco lambda.h)(x) <= 0}."""
    grid = grid or LambdaGrid.default(p, cfg)
    key = ("set_B", grid.patterns, id(cfg))
    hit = p._memo.get(key)
    if hit is not None:
        return hit
    B = Interval.all()
    for lam in grid:
        lh = p.lagrangian_term(lam)
        e = hull.eco_hull(lh, cfg).fn
        B = B.intersect(sublevel_zero(e.pw))
        if B.is_empty:
            break
    p._memo[key] = B
    return B


# ---------------------------------------------------------------------------
# optimal values


def v_primal(p: DCProblem, cfg: EvalConfig = DEFAULT) -> ExtReal:
    """inf of f - g over the feasible set (+inf when infeasible)."""
    A = feasible_set(p)
    if A.is_empty:
        return PLUS_INF
    try:
        v, _ = infimum_over(p.objective(), A)
    except EmptyDomain:
        return PLUS_INF
    return v


def _sweep(grid: LambdaGrid, inner: Callable[[LambdaVec], ExtReal],
           cfg: EvalConfig) -> tuple[ExtReal, LambdaVec | None]:
    """Deterministic sup over the grid; ties take the smallest pattern."""
    pats = list(grid.patterns)
    if cfg.threads > 1 and len(pats) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            vals = list(ex.map(inner, pats))
    else:
        vals = [inner(lam) for lam in pats]
    best: ExtReal | None = None
    best_lam: LambdaVec | None = None
    for lam, v in zip(pats, vals):
        if best is None or v > best or (v == best and best_lam is not None
                                        and _lam_key(lam) < _lam_key(best_lam)):
            best, best_lam = v, lam
    if best is None:
        return MINUS_INF, None
    return best, (None if best.is_minf else best_lam)


def _memo_inner(p: DCProblem, cfg: EvalConfig, kind: str,
                fn: Callable[[LambdaVec], ExtReal]) -> Callable[[LambdaVec], ExtReal]:
    """Cache inner dual values per multiplier; the sweeps, the per-multiplier
    tables and the strong-duality report all walk the same grid."""
    def inner(lam: LambdaVec) -> ExtReal:
        key = ("inner", kind, lam, id(cfg))
        hit = p._memo.get(key)
        if hit is None:
            hit = fn(lam)
            p._memo[key] = hit
        return hit

    return inner


def _fc(p: DCProblem) -> CConjugate:
    hit = p._memo.get("fc")
    if hit is None:
        hit = c_conjugate(p.f)
        p._memo["fc"] = hit
    return hit


def _gc(p: DCProblem) -> CConjugate:
    hit = p._memo.get("gc")
    if hit is None:
        hit = c_conjugate(p.g)
        p._memo["gc"] = hit
    return hit


def _lam_conj(p: DCProblem, lam: LambdaVec) -> CConjugate:
    key = ("lamc", lam)
    hit = p._memo.get(key)
    if hit is None:
        hit = c_conjugate(p.lagrangian_term(lam),
                          label=f"({lam_str(lam)}).h")
        p._memo[key] = hit
    return hit


def _lam_infconv(p: DCProblem, lam: LambdaVec) -> CConjugate:
    key = ("icv", lam)
    hit = p._memo.get(key)
    if hit is None:
        hit = c_infconv(_fc(p), _lam_conj(p, lam), label=lam_str(lam))
        p._memo[key] = hit
    return hit


def _standard_inner(p: DCProblem, cfg: EvalConfig) -> Callable[[LambdaVec], ExtReal]:
    def inner(lam: LambdaVec) -> ExtReal:
        lh = p.lagrangian_term(lam)
        if p.f.domain_hull().intersect(lh.domain_hull()).is_empty:
            return MINUS_INF
        plus = pwfn.add(p.f, lh)
        try:
            v, _ = infimum_over(DCFn.of(plus, p.g), Interval.all())
        except EmptyDomain:
            return MINUS_INF
        return v

    return _memo_inner(p, cfg, "standard", inner)


def v_dual_standard(p: DCProblem, grid: LambdaGrid | None = None,
                    cfg: EvalConfig = DEFAULT) -> tuple[ExtReal, LambdaVec | None]:
    """sup over the grid of inf_x {f - g + lambda.h}, with the attaining
    multiplier.  A multiplier whose constraint domain misses dom f contributes
    -inf (its Lagrangian has no finite point)."""
    grid = grid or LambdaGrid.default(p, cfg)
    return _sweep(grid, _standard_inner(p, cfg), cfg)


def _inner_product(G: CConjugate, Phi: CConjugate,
                   cfg: EvalConfig = DEFAULT) -> ExtReal:
    """inf over dom G of G - Phi for product-form conjugates.

    -inf as soon as dom G sticks out of dom Phi in either factor (a finite
    G value minus +inf); when the infimal-convolution scalar of Phi is
    improper (identically -inf on its domain) the difference is +inf.
    """
    Dg = G.scalar.domain
    if Dg.is_empty:
        raise EmptyDomain("inner dual term: left conjugate has empty domain")
    if not Phi.feas.contains(G.feas):
        return MINUS_INF
    if not Phi.scalar.domain.contains_interval(Dg):
        return MINUS_INF
    if isinstance(Phi.scalar, InfConvScalar) and Phi.scalar.improper:
        return PLUS_INF

    def h(t):
        return sub_lower(G.scalar.eval(t), Phi.scalar.eval(t))

    s_neg = sub_lower(G.scalar.conj_dom.lo, Phi.scalar.conj_dom.lo)
    s_pos = sub_lower(G.scalar.conj_dom.hi, Phi.scalar.conj_dom.hi)
    v, _, _ = minimize_sampled(h, Dg, s_neg, s_pos, window=cfg.x_window)
    return v


def _bar_inner(p: DCProblem, cfg: EvalConfig) -> Callable[[LambdaVec], ExtReal]:
    G = _gc(p)

    def inner(lam: LambdaVec) -> ExtReal:
        lh = p.lagrangian_term(lam)
        if p.f.domain_hull().intersect(lh.domain_hull()).is_empty:
            return MINUS_INF
        Phi = c_conjugate(pwfn.add(p.f, lh))
        return _inner_product(G, Phi, cfg)

    return _memo_inner(p, cfg, "bar", inner)


def _bar_sweep(p: DCProblem, grid: LambdaGrid, cfg: EvalConfig):
    return _sweep(grid, _bar_inner(p, cfg), cfg)


def v_dual_bar(p: DCProblem, grid: LambdaGrid | None = None,
               cfg: EvalConfig = DEFAULT) -> ExtReal:
    """sup over the grid of the inner value of g^c against (f + lambda.h)^c."""
    grid = grid or LambdaGrid.default(p, cfg)
    return _bar_sweep(p, grid, cfg)[0]


def _tilde_inner(p: DCProblem, cfg: EvalConfig) -> Callable[[LambdaVec], ExtReal]:
    G = _gc(p)

    def inner(lam: LambdaVec) -> ExtReal:
        return _inner_product(G, _lam_infconv(p, lam), cfg)

    return _memo_inner(p, cfg, "tilde", inner)


def _tilde_sweep(p: DCProblem, grid: LambdaGrid, cfg: EvalConfig):
    return _sweep(grid, _tilde_inner(p, cfg), cfg)


def v_dual_tilde(p: DCProblem, grid: LambdaGrid | None = None,
                 cfg: EvalConfig = DEFAULT) -> ExtReal:
    """sup over the grid of the inner value of g^c against f^c conv (lambda.h)^c."""
    grid = grid or LambdaGrid.default(p, cfg)
    return _tilde_sweep(p, grid, cfg)[0]


_INNER_FACTORIES = {"standard": _standard_inner, "bar": _bar_inner,
                    "tilde": _tilde_inner}


def dual_inner_table(p: DCProblem, grid: LambdaGrid | None = None,
                     cfg: EvalConfig = DEFAULT, kind: str = "tilde",
                     ) -> tuple[tuple[LambdaVec, ExtReal], ...]:
    """Per-multiplier inner values of one dual, in grid order."""
    if kind not in _INNER_FACTORIES:
        raise ValueError(f"unknown dual kind {kind!r}")
    grid = grid or LambdaGrid.default(p, cfg)
    inner = _INNER_FACTORIES[kind](p, cfg)
    return tuple((lam, inner(lam)) for lam in grid.patterns)


# ---------------------------------------------------------------------------
# condition checkers


def _pw(f) -> PiecewiseFn:
    return f.to_piecewise() if isinstance(f, DCFn) else f


def _fn_probes(fns: Sequence[RealFn], cfg: EvalConfig):
    xs: set = {Fraction(k) for k in range(-3, 4)}
    for f in fns:
        d = f.domain
        for end in (d.lo, d.hi):
            if end.is_finite:
                v = end.value
                if isinstance(v, Fraction):
                    xs.update((v, v - 1, v + 1, v - Fraction(1, 7),
                               v + Fraction(1, 7)))
                else:
                    xs.update((v, v - 1.0, v + 1.0))
        xs.update(d.sample(5))
    return sorted(xs, key=float) + [float(t) for t in cfg.line_grid(n=129)]


def _realfns_equal(a: RealFn, b: RealFn, cfg: EvalConfig) -> bool:
    for x in _fn_probes((a, b), cfg):
        va, vb = a.eval(x), b.eval(x)
        if va.is_pinf or vb.is_pinf:
            if va.is_pinf != vb.is_pinf:
                return False
            continue
        if va.is_minf or vb.is_minf:
            if va.is_minf != vb.is_minf:
                return False
            continue
        if abs(float(va) - float(vb)) > cfg.tol:
            return False
    return True


def check_AC(f1, f2, cfg: EvalConfig = DEFAULT) -> bool:
    """Additivity condition: eco(f1 + f2) is the supremum of the composite
    e-affine minorants of the pair; cross-checked through the equivalent
    epigraph identity epi(f1+f2)^c = e'co(epi f1^c + epi f2^c)."""
    s = pwfn.add(_pw(f1), _pw(f2))
    e = hull.eco_hull(s, cfg).fn
    t = sup_etilde(f1, f2, cfg)
    primary = _realfns_equal(e, t, cfg)
    lhs = EpiCSet.of(c_conjugate(s), label="(f1+f2)^c")
    rhs = eprime_hull(EpiCSet.msum([EpiCSet.of(c_conjugate(_pw(f1))),
                                    EpiCSet.of(c_conjugate(_pw(f2)))]), cfg)
    cross = set_equal(lhs, rhs, cfg).equal
    return primary and cross


def union_K(p: DCProblem, grid: LambdaGrid | None = None,
            cfg: EvalConfig = DEFAULT) -> EpiCSet:
    """K = union over the grid of epi (lambda.h)^c.

    The result is memoized on the problem so the checks that revisit K (hull
    comparisons, duality conditions) share one object and its value caches.
    """
    grid = grid or LambdaGrid.default(p, cfg)
    key = ("union_K", grid.patterns, id(cfg))
    hit = p._memo.get(key)
    if hit is None:
        hit = EpiCSet.union([_lam_conj(p, lam) for lam in grid], label="K")
        p._memo[key] = hit
    return hit


def epigraph_sum(p: DCProblem, grid: LambdaGrid | None = None,
                 cfg: EvalConfig = DEFAULT) -> EpiCSet:
    """epi f^c + K, memoized on the problem like `union_K`."""
    grid = grid or LambdaGrid.default(p, cfg)
    key = ("epi_sum", grid.patterns, id(cfg))
    hit = p._memo.get(key)
    if hit is None:
        hit = EpiCSet.msum(
            [EpiCSet.of(_fc(p), label="f^c"), union_K(p, grid, cfg)],
            label="f^c+K")
        p._memo[key] = hit
    return hit


def check_ECCQ(p: DCProblem, grid: LambdaGrid | None = None,
               cfg: EvalConfig = DEFAULT) -> SetCompare:
    """epi delta_A^c = union over the grid of epi (lambda.h)^c."""
    A = feasible_set(p)
    if A.is_empty:
        return SetCompare(False, None, "feasible set is empty")
    lhs = EpiCSet.of(c_conjugate(PiecewiseFn.indicator(A)), label="dA^c")
    return set_equal(lhs, union_K(p, grid, cfg), cfg)


def check_ECCQII(p: DCProblem, grid: LambdaGrid | None = None,
                 cfg: EvalConfig = DEFAULT) -> bool:
    """Whether the union of the epi (lambda.h)^c is e'-convex; cross-checked
    against equality with epi delta_B^c, which is the union's hull."""
    grid = grid or LambdaGrid.default(p, cfg)
    K = union_K(p, grid, cfg)
    verdict = is_eprime_convex(K, cfg)
    B = set_B(p, grid, cfg)
    if B.is_empty:
        return verdict
    cross = set_equal(
        K, EpiCSet.of(c_conjugate(PiecewiseFn.indicator(B))), cfg).equal
    return verdict and cross


def check_ECC(p: DCProblem, grid: LambdaGrid | None = None,
              cfg: EvalConfig = DEFAULT) -> bool:
    """Whether epi f^c + K is e'-convex."""
    return is_eprime_convex(epigraph_sum(p, grid, cfg), cfg)


@dataclass(frozen=True, slots=True)
class Thm31iiResult:
    """Grid verdict for the min-min conjugate formula of (f + delta_B)^c."""

    equal: bool
    attained: bool
    hypotheses_met: bool
    witnesses: tuple = ()

    @property
    def holds(self) -> bool:
        return self.equal and self.attained

    @property
    def diagnostic(self) -> bool:
        return not self.hypotheses_met


def thm31ii_conjugate_formula(p: DCProblem, grid: LambdaGrid | None = None,
                              cfg: EvalConfig = DEFAULT) -> Thm31iiResult:
    """(f + delta_B)^c = min over the grid of f^c conv (lambda.h)^c, with the
    convolution infima attained where the left side is finite.  Labeled
    diagnostic when the additivity condition for (f, delta_B) or the
    e'-convexity of K fails."""
    grid = grid or LambdaGrid.default(p, cfg)
    B = set_B(p, grid, cfg)
    lhs = c_conjugate(pwfn.add(p.f, PiecewiseFn.indicator(B)))
    atoms = [_lam_infconv(p, lam) for lam in grid]
    e1 = EnvelopeFn([(lhs, False)])
    e2 = EnvelopeFn([(a, False) for a in atoms])
    equal = _envelopes_equal(e1, e2, cfg).equal

    try:
        ac = check_AC(p.f, PiecewiseFn.indicator(B), cfg)
    except NoMinorant:
        ac = False
    hyp = ac and is_eprime_convex(union_K(p, grid, cfg), cfg)

    witnesses: list = []
    xs, ya = _probe_axes(e1, e2, cfg)
    xs = [x for x in xs if isinstance(x, Fraction)][:12]
    for (y, a) in ya[:24]:
        for x in xs:
            v, _ = e1.value_ex(x, y, a)
            if not v.is_finite:
                continue
            hit = False
            for atom in atoms:
                av, att = atom.value_ex(x, y, a)
                if not av.is_finite:
                    continue
                same = (av == v if (av.is_exact and v.is_exact)
                        else abs(float(av) - float(v)) <= cfg.value_tol)
                if same and att:
                    hit = True
                    break
            if not hit:
                witnesses.append((x, y, a))
                if len(witnesses) >= 5:
                    break
        if len(witnesses) >= 5:
            break
    return Thm31iiResult(equal, not witnesses, hyp, tuple(witnesses))


def _ext_close(a: ExtReal, b: ExtReal, tol: float) -> bool:
    if a.is_pinf or b.is_pinf:
        return a.is_pinf and b.is_pinf
    if a.is_minf or b.is_minf:
        return a.is_minf and b.is_minf
    return abs(float(a) - float(b)) <= tol


@dataclass(frozen=True, slots=True)
class TolandResult:
    equal: bool
    lhs: ExtReal
    rhs: ExtReal
    g_econvex: bool


def toland_check(f, g, cfg: EvalConfig = DEFAULT) -> TolandResult:
    """inf (f - g) against inf over dom g^c of g^c - f^c, for e-convex g."""
    fpw, gpw = _pw(f), _pw(g)
    ge = hull.is_econvex(gpw, cfg)
    try:
        lhs, _ = infimum_over(DCFn.of(fpw, gpw), Interval.all())
    except EmptyDomain:
        lhs = PLUS_INF
    rhs = _inner_product(c_conjugate(gpw), c_conjugate(fpw), cfg)
    return TolandResult(_ext_close(lhs, rhs, cfg.tol), lhs, rhs, ge)


# ---------------------------------------------------------------------------
# duality reports


@dataclass(frozen=True, slots=True)
class DualityReport:
    vP: ExtReal
    vDL: ExtReal
    vDLbar: ExtReal
    vDLtilde: ExtReal
    lamDL: LambdaVec | None
    lamDLbar: LambdaVec | None
    lamDLtilde: LambdaVec | None
    conditions: Mapping[str, bool]
    gap: str
    vp_equals_infB: bool
    hypotheses_met: bool
    notes: tuple[str, ...]

    def describe(self) -> dict:
        def ext(v: ExtReal):
            return str(v) if not v.is_finite else float(v)

        return {
            "vP": ext(self.vP),
            "vDL": ext(self.vDL),
            "vDLbar": ext(self.vDLbar),
            "vDLtilde": ext(self.vDLtilde),
            "lamDL": lam_str(self.lamDL) if self.lamDL is not None else None,
            "lamDLbar": (lam_str(self.lamDLbar)
                         if self.lamDLbar is not None else None),
            "lamDLtilde": (lam_str(self.lamDLtilde)
                           if self.lamDLtilde is not None else None),
            "conditions": dict(self.conditions),
            "gap": self.gap,
            "vp_equals_infB": self.vp_equals_infB,
            "hypotheses_met": self.hypotheses_met,
            "notes": list(self.notes),
        }


def _classify_gap(vP: ExtReal, vD: ExtReal, lam: LambdaVec | None,
                  tol: float) -> str:
    if _ext_close(vP, vD, tol):
        return "strong-duality" if lam is not None else "zero-gap"
    if vD > vP:
        return "weak-duality-fails"
    return "weak-duality-holds"


def tfl_strong_duality(p: DCProblem, grid: LambdaGrid | None = None,
                       cfg: EvalConfig = DEFAULT) -> DualityReport:
    """Full report: the four values, the condition battery, and the duality
    classification of the pair (P, D-tilde)."""
    grid = grid or LambdaGrid.default(p, cfg)
    vP = v_primal(p, cfg)
    vDL, lamDL = v_dual_standard(p, grid, cfg)
    vDb, lamDb = _bar_sweep(p, grid, cfg)
    vDt, lamDt = _tilde_sweep(p, grid, cfg)

    B = set_B(p, grid, cfg)
    conds: dict[str, bool] = {}
    try:
        conds["AC"] = (check_AC(p.f, PiecewiseFn.indicator(B), cfg)
                       if not B.is_empty else False)
    except NoMinorant:
        conds["AC"] = False
    conds["ECCQ"] = check_ECCQ(p, grid, cfg).equal
    conds["ECCQII"] = check_ECCQII(p, grid, cfg)
    conds["ECC"] = check_ECC(p, grid, cfg)
    conds["g_econvex"] = hull.is_econvex(p.g, cfg)

    if B.is_empty:
        infB: ExtReal = PLUS_INF
    else:
        try:
            infB, _ = infimum_over(p.objective(), B)
        except EmptyDomain:
            infB = PLUS_INF
    vp_eq_infB = _ext_close(vP, infB, cfg.value_tol)

    hyp = (conds["AC"] and conds["g_econvex"] and conds["ECCQII"]
           and conds["ECC"] and vp_eq_infB)
    gap = _classify_gap(vP, vDt, lamDt, cfg.tol)

    notes = ["inner dual infima run over the domain of the left conjugate "
             "with finite - (+inf) = -inf",
             f"dual values are grid-relative lower bounds "
             f"({len(grid)} multiplier patterns)",
             "constraint sample: " + (",".join(cid for cid, _ in p.constraints)
                                      or "(none)")]
    if not conds["g_econvex"]:
        notes.append("g is not e-convex: no relation between the rewritten "
                     "duals and the standard dual is guaranteed")
    if hyp and not (gap == "strong-duality"):
        notes.append("hypotheses hold but strong duality was not observed "
                     "on this grid")
    return DualityReport(vP, vDL, vDb, vDt, lamDL, lamDb, lamDt, conds, gap,
                         vp_eq_infB, hyp, tuple(notes))


@dataclass(frozen=True, slots=True)
class StandardDualSD:
    """Strong duality for the standard dual under the epigraph hypotheses."""

    hypotheses: Mapping[str, bool]
    hypotheses_met: bool
    strong_duality: bool
    implication_ok: bool


def prop_sd_standard(p: DCProblem, grid: LambdaGrid | None = None,
                     cfg: EvalConfig = DEFAULT) -> StandardDualSD:
    grid = grid or LambdaGrid.default(p, cfg)
    B = set_B(p, grid, cfg)
    fg = p.objective().to_piecewise()
    hyp: dict[str, bool] = {}
    hyp["ECCQII"] = check_ECCQII(p, grid, cfg)
    hyp["E_fg_nonempty"] = not eaffine_minorant_set(fg).is_empty()
    if B.is_empty:
        hyp["AC_fg_dB"] = False
        hyp["sum_eprime_convex"] = False
        infB: ExtReal = PLUS_INF
    else:
        dB = PiecewiseFn.indicator(B)
        try:
            hyp["AC_fg_dB"] = check_AC(fg, dB, cfg)
        except NoMinorant:
            hyp["AC_fg_dB"] = False
        S = EpiCSet.msum([EpiCSet.of(c_conjugate(fg)),
                          EpiCSet.of(c_conjugate(dB))])
        hyp["sum_eprime_convex"] = is_eprime_convex(S, cfg)
        try:
            infB, _ = infimum_over(p.objective(), B)
        except EmptyDomain:
            infB = PLUS_INF
    vP = v_primal(p, cfg)
    hyp["vP_equals_infB"] = _ext_close(vP, infB, cfg.value_tol)
    vDL, lamDL = v_dual_standard(p, grid, cfg)
    sd = _ext_close(vP, vDL, cfg.tol) and lamDL is not None
    met = all(hyp.values())
    return StandardDualSD(hyp, met, sd, (not met) or sd)


# ---------------------------------------------------------------------------
# conjugate-of-difference identities


class _SupDeconvFn(RealFn):
    """t -> sup over u of {fstar(t + u) - gstar(u)}, the scalar part of the
    intersection of the translates of epi f^c along dom g*.

    Evaluated per point by sampled minimization of gstar(u) - fstar(t + u);
    the supremum's asymptotic slopes are those of fstar.
    """

    __slots__ = ("fstar", "gstar")

    def __init__(self, fstar: RealFn, gstar: RealFn):
        self.fstar = fstar
        self.gstar = gstar
        self.domain = fstar.domain.minkowski(gstar.domain.negate())
        self.conj_dom = fstar.conj_dom
        self.improper = fstar.improper

    def eval_ex(self, x: Scalar):
        if not self.domain.contains(x):
            return PLUS_INF, False
        xe = as_scalar(x)

        def h(u):
            return sub_lower(self.gstar.eval(u), self.fstar.eval(xe + u))

        s_neg = sub_lower(self.gstar.conj_dom.lo, self.fstar.conj_dom.lo)
        s_pos = sub_lower(self.gstar.conj_dom.hi, self.fstar.conj_dom.hi)
        v, att, _ = minimize_sampled(h, self.gstar.domain, s_neg, s_pos)
        return -v, att


@dataclass(frozen=True, slots=True)
class PropMoreResults:
    """The three conjugate-of-difference verdicts for (f, g, B)."""

    i_ok: bool
    ii: SetCompare
    iii: SetCompare
    i_failures: tuple = ()

    @property
    def all_hold(self) -> bool:
        return self.i_ok and self.ii.equal and self.iii.equal


def prop_more_results_check(f: PiecewiseFn, g: PiecewiseFn, B: Interval,
                            cfg: EvalConfig = DEFAULT) -> PropMoreResults:
    """(i) sampled members of E_{f-g} decompose against E_g into E_f;
    (ii) epi(f-g)^c equals the intersection of the g*-translates of epi f^c;
    (iii) e'co{epi(f-g)^c + epi delta_B^c} is the epigraph of the conjugate
    of the composite-minorant supremum."""
    fg = DCFn.of(f, g).to_piecewise()
    E_fg = eaffine_minorant_set(fg)
    E_g = eaffine_minorant_set(g)
    E_f = eaffine_minorant_set(f)
    failures: list = []
    g_cands = [m for m in E_g.sample_members(5) if m[2] == 0] \
        or E_g.sample_members(5)
    for a in E_fg.sample_members(4):
        x1, b1, y1, a1 = a
        found = False
        for (x2, b2, y2, a2) in g_cands:
            if y2 != 0:
                continue
            if E_f.contains(as_scalar(x1) + as_scalar(x2),
                            as_scalar(b1) + as_scalar(b2), y1, a1):
                found = True
                break
        if not found:
            failures.append(a)
    i_ok = not failures

    lhs = c_conjugate(fg, label="(f-g)^c")
    fstar = conj_of(f)
    gstar = conj_of(g)
    rhs = CConjugate(_SupDeconvFn(fstar, gstar),
                     feas_region(f.domain_hull()), label="translates")
    ii = set_equal(EpiCSet.of(lhs), EpiCSet.of(rhs), cfg)

    dB = PiecewiseFn.indicator(B)
    lhs3 = eprime_hull(EpiCSet.msum([EpiCSet.of(lhs),
                                     EpiCSet.of(c_conjugate(dB))]), cfg)
    s = sup_etilde(fg, dB, cfg)
    rhs3 = EpiCSet.of(CConjugate(conj_of(s), feas_region(s.domain),
                                 label="sup-minorants^c"))
    iii = set_equal(lhs3, rhs3, cfg)
    return PropMoreResults(i_ok, ii, iii, tuple(failures))
