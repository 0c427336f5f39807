"""Run configuration: tolerances, grids, lambda sweeps, thread cap.

Every set-level verdict downstream is relative to the grids fixed here, and
reports echo the configuration so runs are reproducible byte for byte.  The
W grid uses golden-ratio fractional offsets so nodes never align with the
rational faces of the sets under test (alignment would turn measure-zero
boundary faces into spurious envelope mismatches).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

GOLDEN_FRAC = 0.6180339887498949


def _default_weights() -> tuple[Fraction, ...]:
    return tuple(Fraction(2**k, 16) for k in range(0, 11))


def _default_pair_weights() -> tuple[Fraction, ...]:
    return (Fraction(1, 4), Fraction(1), Fraction(4))


@dataclass(frozen=True, slots=True)
class EvalConfig:
    tol: float = 1e-6            # envelope / function-level comparisons
    value_tol: float = 1e-9      # pointwise conjugate values, infima
    x_window: tuple[float, float] = (-16.0, 16.0)
    grid_n: int = 2049           # 1-D function grids
    w_window: tuple[float, float] = (-8.0, 8.0)
    w_axis_n: int = 64           # per-axis W grid size (W = R^3)
    lambda_weights: tuple[Fraction, ...] = field(default_factory=_default_weights)
    lambda_pair_weights: tuple[Fraction, ...] = field(default_factory=_default_pair_weights)
    lambda_max_active: int = 2
    eps_grid_k: int = 40         # eps grid {0} u {2^k * value_tol}
    seed: int = 20260815

    def with_overrides(self, **kw) -> "EvalConfig":
        return replace(self, **kw)

    @property
    def threads(self) -> int:
        raw = os.environ.get("ECVX_THREADS", "")
        try:
            n = int(raw)
        except ValueError:
            return 1
        return max(1, n)

    def line_grid(self, lo: float | None = None, hi: float | None = None,
                  n: int | None = None) -> np.ndarray:
        """1-D grid over [lo, hi] (default: x_window) with golden offset."""
        a = self.x_window[0] if lo is None else float(lo)
        b = self.x_window[1] if hi is None else float(hi)
        m = self.grid_n if n is None else int(n)
        h = (b - a) / m
        return a + (np.arange(m) + GOLDEN_FRAC) * h

    def w_axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Axes (x*, y*, alpha) of the W oracle grid."""
        a, b = self.w_window
        h = (b - a) / self.w_axis_n
        base = a + (np.arange(self.w_axis_n) + GOLDEN_FRAC) * h
        return base.copy(), base.copy(), base.copy()

    def eps_grid(self) -> list[float]:
        return [0.0] + [self.value_tol * 2**k for k in range(self.eps_grid_k + 1)]

    def describe(self) -> dict:
        return {
            "tol": self.tol,
            "value_tol": self.value_tol,
            "x_window": list(self.x_window),
            "grid_n": self.grid_n,
            "w_window": list(self.w_window),
            "w_axis_n": self.w_axis_n,
            "lambda_weights": [str(w) for w in self.lambda_weights],
            "lambda_pair_weights": [str(w) for w in self.lambda_pair_weights],
            "lambda_max_active": self.lambda_max_active,
            "seed": self.seed,
            "threads": self.threads,
        }


DEFAULT = EvalConfig()
