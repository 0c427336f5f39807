"""Extended-real scalars and intervals of the real line.

Values live in R u {-inf, +inf}.  Finite values are kept exact
(`fractions.Fraction`) whenever the data is rational; floats appear only when
an upstream computation was forced through irrational algebra.  The addition
used everywhere downstream is the *lower* addition

    (+inf) + (-inf) = (-inf) + (+inf) = -inf

so that (+inf) - (+inf) = (-inf) - (-inf) = -inf as well.  Subtraction is
``sub_lower(a, b) = add_lower(a, -b)``.

Intervals carry explicit endpoint-closedness flags; infinite endpoints are
never closed.  The empty interval is the module constant ``EMPTY``.
`strict_support` computes sup_{x in I} x*y together with an attainment flag,
which is the primitive behind every feasibility-region test downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import EmptyDomain

Scalar = Union[int, float, Fraction]

_MINF, _FIN, _PINF = -1, 0, 1


def as_scalar(x: Scalar) -> Fraction | float:
    """Coerce to an exact Fraction when possible, keep floats as floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError("non-finite float is not a scalar; use ExtReal")
        return x
    raise TypeError(f"not a scalar: {x!r}")


@total_ordering
@dataclass(frozen=True, slots=True)
class ExtReal:
    """A point of the extended real line."""

    kind: int
    value: Fraction | float

    @staticmethod
    def of(x: "Scalar | ExtReal") -> "ExtReal":
        if isinstance(x, ExtReal):
            return x
        return ExtReal(_FIN, as_scalar(x))

    @property
    def is_finite(self) -> bool:
        return self.kind == _FIN

    @property
    def is_pinf(self) -> bool:
        return self.kind == _PINF

    @property
    def is_minf(self) -> bool:
        return self.kind == _MINF

    @property
    def is_exact(self) -> bool:
        """True for infinities and Fraction-valued finites."""
        return self.kind != _FIN or isinstance(self.value, Fraction)

    def finite(self) -> Fraction | float:
        if self.kind != _FIN:
            raise ValueError(f"not finite: {self}")
        return self.value

    def __float__(self) -> float:
        if self.kind == _PINF:
            return float("inf")
        if self.kind == _MINF:
            return float("-inf")
        return float(self.value)

    def _key(self):
        return self.kind, self.value

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.kind != o.kind:
            return False
        return self.kind != _FIN or self.value == o.value

    def __lt__(self, other) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.kind != o.kind:
            return self.kind < o.kind
        return self.kind == _FIN and self.value < o.value

    def __hash__(self):
        if self.kind == _FIN:
            return hash(self.value)
        return hash(("ExtReal", self.kind))

    def __neg__(self) -> "ExtReal":
        if self.kind == _FIN:
            return ExtReal(_FIN, -self.value)
        return MINUS_INF if self.kind == _PINF else PLUS_INF

    def scale(self, c: Scalar) -> "ExtReal":
        """Multiply by a finite scalar; 0 * (+-inf) = 0."""
        c = as_scalar(c)
        if self.kind == _FIN:
            return ExtReal(_FIN, c * self.value)
        if c == 0:
            return ZERO
        return self if c > 0 else -self

    def __str__(self) -> str:
        if self.kind == _PINF:
            return "inf"
        if self.kind == _MINF:
            return "-inf"
        return str(self.value)

    def __repr__(self) -> str:
        return f"ExtReal({self})"


def _coerce(x) -> "ExtReal":
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, (int, Fraction)):
        return ExtReal(_FIN, x if isinstance(x, Fraction) else Fraction(x))
    if isinstance(x, float):
        if x == float("inf"):
            return PLUS_INF
        if x == float("-inf"):
            return MINUS_INF
        if x != x:
            return NotImplemented
        return ExtReal(_FIN, x)
    return NotImplemented


PLUS_INF = ExtReal(_PINF, Fraction(0))
MINUS_INF = ExtReal(_MINF, Fraction(0))
ZERO = ExtReal(_FIN, Fraction(0))


def add_lower(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended addition with the lower convention: any -inf wins over +inf."""
    a, b = ExtReal.of(a), ExtReal.of(b)
    if a.kind == _MINF or b.kind == _MINF:
        return MINUS_INF
    if a.kind == _PINF or b.kind == _PINF:
        return PLUS_INF
    return ExtReal(_FIN, a.value + b.value)


def sub_lower(a: ExtReal, b: ExtReal) -> ExtReal:
    """a - b under the lower convention, i.e. add_lower(a, -b)."""
    return add_lower(ExtReal.of(a), -ExtReal.of(b))


@dataclass(frozen=True, slots=True)
class Interval:
    """An interval of R with explicit openness flags.

    Invariants: lo <= hi; infinite endpoints are open; a singleton is
    closed-closed.  Degenerate data normalizes to ``EMPTY`` via `make`.
    """

    lo: ExtReal
    lo_closed: bool
    hi: ExtReal
    hi_closed: bool
    empty: bool = False
    _fb: tuple | None = field(default=None, init=False, compare=False,
                              repr=False)

    @staticmethod
    def make(lo, lo_closed: bool, hi, hi_closed: bool) -> "Interval":
        lo, hi = ExtReal.of(lo), ExtReal.of(hi)
        if lo.is_pinf or hi.is_minf or lo > hi:
            return EMPTY
        if not lo.is_finite:
            lo_closed = False
        if not hi.is_finite:
            hi_closed = False
        if lo == hi:
            if not (lo.is_finite and lo_closed and hi_closed):
                return EMPTY
        return Interval(lo, lo_closed, hi, hi_closed)

    @staticmethod
    def closed(a, b) -> "Interval":
        return Interval.make(a, True, b, True)

    @staticmethod
    def open(a, b) -> "Interval":
        return Interval.make(a, False, b, False)

    @staticmethod
    def point(a) -> "Interval":
        return Interval.make(a, True, a, True)

    @staticmethod
    def at_least(a, closed: bool = True) -> "Interval":
        return Interval.make(a, closed, PLUS_INF, False)

    @staticmethod
    def at_most(a, closed: bool = True) -> "Interval":
        return Interval.make(MINUS_INF, False, a, closed)

    @staticmethod
    def all() -> "Interval":
        return Interval.make(MINUS_INF, False, PLUS_INF, False)

    @property
    def is_empty(self) -> bool:
        return self.empty

    @property
    def is_singleton(self) -> bool:
        return not self.empty and self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return self.empty or (self.lo.is_finite and self.hi.is_finite)

    def contains(self, x: Scalar) -> bool:
        if self.empty:
            return False
        if type(x) is float:
            # Strict float comparisons against rounded endpoints agree with
            # the exact answer (the nearest float is within half an ulp of
            # the true bound); ties fall through to the exact path.
            fb = self._fb
            if fb is None:
                fb = (float(self.lo), float(self.hi))
                object.__setattr__(self, "_fb", fb)
            if x < fb[0] or x > fb[1]:
                return False
            if fb[0] < x < fb[1]:
                return True
        x = as_scalar(x)
        if self.lo.is_finite:
            v = self.lo.value
            if x < v or (x == v and not self.lo_closed):
                return False
        if self.hi.is_finite:
            v = self.hi.value
            if x > v or (x == v and not self.hi_closed):
                return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        if other.empty:
            return True
        if self.empty:
            return False
        if self.lo > other.lo or (self.lo == other.lo and not self.lo_closed and other.lo_closed):
            return False
        if self.hi < other.hi or (self.hi == other.hi and not self.hi_closed and other.hi_closed):
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        if self.empty or other.empty:
            return EMPTY
        if self.lo > other.lo:
            lo, lo_c = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_c = other.lo, other.lo_closed
        else:
            lo, lo_c = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_c = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_c = other.hi, other.hi_closed
        else:
            hi, hi_c = self.hi, self.hi_closed and other.hi_closed
        return Interval.make(lo, lo_c, hi, hi_c)

    def minkowski(self, other: "Interval") -> "Interval":
        """Pointwise sum; openness propagates exactly (sum closed iff both closed)."""
        if self.empty or other.empty:
            return EMPTY
        lo = add_lower(self.lo, other.lo)
        hi = add_lower(self.hi, other.hi)
        lo_c = self.lo_closed and other.lo_closed and lo.is_finite
        hi_c = self.hi_closed and other.hi_closed and hi.is_finite
        return Interval.make(lo, lo_c, hi, hi_c)

    def negate(self) -> "Interval":
        if self.empty:
            return EMPTY
        return Interval.make(-self.hi, self.hi_closed, -self.lo, self.lo_closed)

    def shift(self, c: Scalar) -> "Interval":
        if self.empty:
            return EMPTY
        c = ExtReal.of(c)
        return Interval.make(add_lower(self.lo, c), self.lo_closed,
                             add_lower(self.hi, c), self.hi_closed)

    def closure(self) -> "Interval":
        if self.empty:
            return EMPTY
        return Interval.make(self.lo, self.lo.is_finite, self.hi, self.hi.is_finite)

    def interior_point(self) -> Fraction | float:
        """Some point strictly inside (or the unique point of a singleton)."""
        if self.empty:
            raise EmptyDomain("empty interval has no points")
        if self.is_singleton:
            return self.lo.value
        if self.lo.is_finite and self.hi.is_finite:
            return (self.lo.value + self.hi.value) / 2
        if self.lo.is_finite:
            return self.lo.value + 1
        if self.hi.is_finite:
            return self.hi.value - 1
        return Fraction(0)

    def sample(self, n: int) -> list[Fraction | float]:
        """Deterministic points of the interval, endpoints included when closed."""
        if self.empty:
            return []
        if self.is_singleton:
            return [self.lo.value]
        lo = self.lo.value if self.lo.is_finite else None
        hi = self.hi.value if self.hi.is_finite else None
        if lo is None:
            lo = (hi - 8) if hi is not None else Fraction(-8)
        if hi is None:
            hi = lo + 8
        lo, hi = Fraction(lo) if not isinstance(lo, float) else lo, hi
        pts: list[Fraction | float] = []
        if self.lo_closed and self.lo.is_finite:
            pts.append(self.lo.value)
        for k in range(1, n + 1):
            t = Fraction(k, n + 1)
            pts.append(lo + t * (hi - lo))
        if self.hi_closed and self.hi.is_finite:
            pts.append(self.hi.value)
        return [p for p in pts if self.contains(p)]

    def __str__(self) -> str:
        if self.empty:
            return "{}"
        lb = "[" if self.lo_closed else "]"
        rb = "]" if self.hi_closed else "["
        return f"{lb}{self.lo}, {self.hi}{rb}"


EMPTY = Interval(PLUS_INF, False, MINUS_INF, False, empty=True)


def strict_support(I: Interval, y: Scalar) -> tuple[ExtReal, bool]:
    """sup_{x in I} x*y with an exact attainment flag.

    For y > 0 the supremum is hi*y, attained iff hi is closed; symmetric for
    y < 0; for y = 0 it is 0 and always attained (any point witnesses it).
    """
    if I.is_empty:
        raise EmptyDomain("support of the empty set")
    y = as_scalar(y)
    if y == 0:
        return ZERO, True
    if y > 0:
        if not I.hi.is_finite:
            return PLUS_INF, False
        return ExtReal.of(I.hi.value * y), I.hi_closed
    if not I.lo.is_finite:
        return PLUS_INF, False
    return ExtReal.of(I.lo.value * y), I.lo_closed
