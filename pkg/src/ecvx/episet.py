"""Epigraph sets over W x R: unions, Minkowski sums, envelopes, e'-hulls.

Every set handled here is upward closed in the last coordinate and is built
from epigraphs of product-form c-conjugates.  A set normalizes to a union of
product atoms: unions stay unions, and a Minkowski sum of unions distributes
into the cross product of its operands' atoms, where a pairwise sum of
epigraphs is again product-form (scalar infimal convolution times region
Minkowski sum).  Atoms arising from sums are only sub-epigraphs when some
infimum is unattained, so membership at the envelope boundary consults the
attainment flag; plain blocks are honest epigraphs and stay closed in beta.

The e'-convex hull of such a set is the epigraph of (envelope)^{c'c}; its
envelope comes back in product form, which keeps equality testing exact at
rational probe points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import conj as _conj
from .config import DEFAULT, EvalConfig
from .conj import CConjugate, FenchelConj, InfConvScalar, c_infconv, conj_of, feas_region
from .errors import ImproperEnvelope
from .extreal import ExtReal, Scalar, as_scalar


Atom = tuple[CConjugate, bool]  # (product block, arose from a Minkowski sum)


class EpiCSet:
    """Union of c-conjugate epigraphs, or a Minkowski sum of such unions."""

    __slots__ = ("blocks", "sums", "label", "_atoms", "_memo")

    def __init__(self, blocks: Sequence[CConjugate] = (),
                 sums: Sequence["EpiCSet"] | None = None, label: str = ""):
        self.blocks = tuple(blocks)
        self.sums = tuple(sums) if sums is not None else None
        self.label = label
        if self.sums is not None:
            if self.blocks:
                raise ValueError("a set is either a union of blocks or a sum of sets")
            if not self.sums:
                raise ValueError("empty Minkowski sum")
        elif not self.blocks:
            raise ValueError("a union needs at least one block")
        self._atoms: tuple[Atom, ...] | None = None
        self._memo: dict = {}

    @staticmethod
    def of(block: CConjugate, label: str = "") -> "EpiCSet":
        return EpiCSet(blocks=(block,), label=label)

    @staticmethod
    def union(blocks: Sequence[CConjugate], label: str = "") -> "EpiCSet":
        return EpiCSet(blocks=tuple(blocks), label=label)

    @staticmethod
    def msum(sets: Sequence["EpiCSet"], label: str = "") -> "EpiCSet":
        return EpiCSet(sums=tuple(sets), label=label)

    def atoms(self) -> tuple[Atom, ...]:
        if self._atoms is None:
            if self.sums is None:
                self._atoms = tuple((b, False) for b in self.blocks)
            else:
                acc = list(self.sums[0].atoms())
                for nxt in self.sums[1:]:
                    acc = [(c_infconv(a, b), True)
                           for (a, _) in acc for (b, _) in nxt.atoms()]
                self._atoms = tuple(acc)
        return self._atoms

    def member(self, xstar: Scalar, ystar: Scalar, alpha: Scalar,
               beta: Scalar) -> bool:
        return _member(self.atoms(), xstar, ystar, alpha, beta)

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        mode = f"sum of {len(self.sums)}" if self.sums is not None \
            else f"union of {len(self.blocks)}"
        return f"EpiCSet{tag}({mode})"


def _member(atoms: Sequence[Atom], xstar, ystar, alpha, beta) -> bool:
    b = ExtReal.of(beta)
    for blk, from_sum in atoms:
        if not blk.feas.member(ystar, alpha):
            continue
        v, att = blk.scalar.eval_ex(xstar)
        if v.is_pinf:
            continue
        if b > v or (b == v and (att or not from_sum)):
            return True
    return False


def membership(S: EpiCSet, w, beta: Scalar) -> bool:
    """Exact membership of ((x*, y*, alpha), beta)."""
    x, y, a = w
    return S.member(x, y, a, beta)


class EnvelopeFn:
    """w -> inf{beta : (w, beta) in S}, with closedness at the infimum."""

    __slots__ = ("atoms", "_grid_cache")

    def __init__(self, atoms: Sequence[Atom]):
        self.atoms = tuple(atoms)
        self._grid_cache: dict = {}

    def value_ex(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> tuple[ExtReal, bool]:
        """(envelope value, whether (w, value) itself belongs)."""
        from .extreal import PLUS_INF
        best, closed = PLUS_INF, False
        for blk, from_sum in self.atoms:
            if not blk.feas.member(ystar, alpha):
                continue
            v, att = blk.scalar.eval_ex(xstar)
            if v.is_pinf:
                continue
            c = att or not from_sum
            if v < best:
                best, closed = v, c
            elif v == best:
                closed = closed or c
        return best, closed

    def value(self, xstar: Scalar, ystar: Scalar, alpha: Scalar) -> ExtReal:
        return self.value_ex(xstar, ystar, alpha)[0]

    def __call__(self, w) -> ExtReal:
        return self.value(*w)

    def member(self, xstar, ystar, alpha, beta) -> bool:
        return _member(self.atoms, xstar, ystar, alpha, beta)

    def env_grid(self, xs: np.ndarray, ys: np.ndarray, als: np.ndarray) -> np.ndarray:
        key = (xs.tobytes(), ys.tobytes(), als.tobytes())
        hit = self._grid_cache.get(key)
        if hit is not None:
            return hit
        acc = None
        for blk, _ in self.atoms:
            g = blk.env_grid(xs, ys, als)
            acc = g if acc is None else np.minimum(acc, g)
        if acc is None:
            acc = np.full((len(xs), len(ys), len(als)), np.inf)
        self._grid_cache[key] = acc
        return acc


def lower_envelope(S: EpiCSet) -> EnvelopeFn:
    return EnvelopeFn(S.atoms())


def _live_atoms(atoms: Sequence[Atom]) -> list[Atom]:
    """Drop empty blocks; reject blocks whose envelope takes -inf."""
    live = []
    for blk, from_sum in atoms:
        sc = blk.scalar
        if isinstance(sc, InfConvScalar) and sc.improper:
            raise ImproperEnvelope("envelope takes -inf on a feasibility band")
        if isinstance(sc, FenchelConj) and sc.improper:
            continue
        if sc.domain.is_empty:
            continue
        live.append((blk, from_sum))
    return live


def eprime_hull(S: EpiCSet, cfg: EvalConfig = DEFAULT) -> EnvelopeFn:
    """Envelope of the e'-convex hull, (lower_envelope(S))^{c'c} in product form."""
    hit = S._memo.get("hull")
    if hit is not None:
        return hit
    live = _live_atoms(S.atoms())
    if not live:
        raise ImproperEnvelope("envelope is identically +inf")
    g = _conj.c_prime_conjugate([blk for blk, _ in live])
    if g.domain.is_empty:
        raise ImproperEnvelope("hull envelope is identically -inf")
    hull_block = CConjugate(conj_of(g), feas_region(g.domain), label="e'co")
    env = EnvelopeFn(((hull_block, False),))
    S._memo["hull"] = env
    return env


@dataclass(frozen=True, slots=True)
class SetCompare:
    equal: bool
    witness: tuple | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.equal


def _probe_axes(e1: EnvelopeFn, e2: EnvelopeFn, cfg: EvalConfig):
    atoms = e1.atoms + e2.atoms
    xs: set = {Fraction(k) for k in range(-3, 4)}
    for blk, _ in atoms:
        d = blk.scalar.domain
        for end in (d.lo, d.hi):
            if end.is_finite:
                v = Fraction(end.value) if not isinstance(end.value, float) else end.value
                if isinstance(v, Fraction):
                    xs.update((v, v - 1, v + 1, v - Fraction(1, 7), v + Fraction(1, 7)))
                else:
                    xs.update((v, v - 1.0, v + 1.0))
        xs.update(d.sample(5))
    regions = [blk.feas for blk, _ in atoms]
    ya: set = set()
    for y in (Fraction(1), Fraction(0), Fraction(-1), Fraction(2), Fraction(-2),
              Fraction(1, 3), Fraction(-1, 3)):
        alphas: set = {Fraction(0), Fraction(1)}
        for R in regions:
            m = R.m_value(y)
            if m.is_finite:
                mv = m.value if isinstance(m.value, Fraction) else Fraction(m.value)
                alphas.update((mv, mv - Fraction(1, 7), mv + Fraction(1, 7), mv + 1))
        ya.update((y, a) for a in alphas)
    for R in regions:
        ya.update(R.sample_points())
    xg = [float(t) for t in cfg.line_grid(cfg.w_window[0], cfg.w_window[1],
                                          cfg.w_axis_n)]
    return sorted(xs, key=float) + xg, sorted(ya, key=lambda p: (float(p[0]), float(p[1])))


def _envelopes_equal(e1: EnvelopeFn, e2: EnvelopeFn,
                     cfg: EvalConfig = DEFAULT) -> SetCompare:
    """Envelope equality plus boundary-closedness agreement on a probe battery.

    Two upward-closed sets coincide iff their envelopes match and membership
    at the envelope value itself matches everywhere; the battery covers scalar
    domain endpoints, region boundary rays of both sides, and a generic
    golden-offset grid.  Closedness is only compared where both values are
    exact, so numeric atoms cannot produce spurious strictness verdicts.
    """
    xs, ya = _probe_axes(e1, e2, cfg)
    for (y, a) in ya:
        for x in xs:
            v1, c1 = e1.value_ex(x, y, a)
            v2, c2 = e2.value_ex(x, y, a)
            if v1.is_pinf and v2.is_pinf:
                continue
            if v1.is_pinf or v2.is_pinf:
                fin = v2 if v1.is_pinf else v1
                if fin.is_minf:
                    return SetCompare(False, (x, y, a, 0),
                                      "-inf on one side, +inf on the other")
                return SetCompare(False, (x, y, a, fin.value + 1),
                                  "finite on one side, +inf on the other")
            if v1.is_minf or v2.is_minf:
                if v1.is_minf and v2.is_minf:
                    continue
                fin = v2 if v1.is_minf else v1
                return SetCompare(False, (x, y, a, fin.value - 1),
                                  "-inf on one side only")
            if abs(float(v1) - float(v2)) > cfg.tol:
                beta = (float(v1) + float(v2)) / 2
                return SetCompare(False, (x, y, a, beta), "envelope values differ")
            if v1.is_exact and v2.is_exact and v1 == v2 and c1 != c2:
                return SetCompare(False, (x, y, a, v1.value),
                                  "boundary membership differs")
    return SetCompare(True)


def _as_envelope(S) -> EnvelopeFn:
    if isinstance(S, EnvelopeFn):
        return S
    if isinstance(S, EpiCSet):
        return lower_envelope(S)
    raise TypeError(f"not an epigraph set or envelope: {S!r}")


def set_equal(S1, S2, cfg: EvalConfig = DEFAULT) -> SetCompare:
    """Equality of two upward-closed sets, with a symmetric-difference witness."""
    return _envelopes_equal(_as_envelope(S1), _as_envelope(S2), cfg)


def is_eprime_convex(S: EpiCSet, cfg: EvalConfig = DEFAULT) -> bool:
    """Whether S equals its own e'-convex hull."""
    key = ("eprime", id(cfg))
    hit = S._memo.get(key)
    if hit is None:
        hit = _envelopes_equal(lower_envelope(S), eprime_hull(S, cfg),
                               cfg).equal
        S._memo[key] = hit
    return hit
