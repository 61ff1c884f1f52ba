"""Uniform-grid functions and Simpson quadrature."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError


def simpson(values, h):
    """Composite Simpson rule on an even number of panels of width ``h``."""
    f = np.asarray(values, dtype=float)
    n = f.size - 1
    if n < 2 or n % 2:
        raise ResolutionError(f"Simpson needs an even number of panels, got {n}")
    return h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())


def cumulative_simpson(values, h):
    """Running integral ``int_{x_0}^{x_i} f`` at every node.

    Each panel is integrated with the three-point quadratic through its
    neighbours, alternating forward and backward stencils so that the running
    sum at every even node coincides with composite Simpson.
    """
    f = np.asarray(values, dtype=float)
    n = f.size - 1
    if n < 2:
        raise ResolutionError("cumulative Simpson needs at least three nodes")
    panel = np.empty(n)
    # panels 0, 2, 4, ...: forward stencil (i, i+1, i+2)
    ev = np.arange(0, n - 1, 2)
    panel[ev] = h / 12.0 * (5.0 * f[ev] + 8.0 * f[ev + 1] - f[ev + 2])
    # odd panels, and a trailing even one: backward stencil (i-1, i, i+1)
    od = np.arange(1, n, 2)
    if n % 2:
        od = np.append(od, n - 1)
    panel[od] = h / 12.0 * (-f[od - 1] + 8.0 * f[od] + 5.0 * f[od + 1])
    out = np.empty(n + 1)
    out[0] = 0.0
    np.cumsum(panel, out=out[1:])
    return out


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function and its first derivative on a uniform grid.

    Between nodes the function is reconstructed by cubic Hermite
    interpolation, so values *and* slopes are fourth/third-order accurate.
    """

    lo: float
    hi: float
    values: np.ndarray
    deriv: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        d = np.asarray(self.deriv, dtype=float)
        if v.ndim != 1 or v.shape != d.shape:
            raise ValueError("values and deriv must be 1-D arrays of equal length")
        if v.size < 3:
            raise ResolutionError("a GridFunction needs at least three nodes")
        if not self.hi > self.lo:
            raise ValueError("need hi > lo")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "deriv", d)

    @property
    def n_intervals(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / self.n_intervals

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.values.size)

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        tol = 1e-12 * (self.hi - self.lo)
        if np.any(x < self.lo - tol) or np.any(x > self.hi + tol):
            raise DomainError(f"evaluation outside [{self.lo}, {self.hi}]")
        s = (np.clip(x, self.lo, self.hi) - self.lo) / self.h
        i = np.minimum(np.floor(s).astype(int), self.n_intervals - 1)
        return x, i, s - i

    def __call__(self, x):
        x, i, t = self._locate(x)
        h = self.h
        t2, t3 = t * t, t * t * t
        out = ((2 * t3 - 3 * t2 + 1) * self.values[i] + (t3 - 2 * t2 + t) * h * self.deriv[i]
               + (-2 * t3 + 3 * t2) * self.values[i + 1] + (t3 - t2) * h * self.deriv[i + 1])
        return out[()] if out.ndim == 0 else out

    def slope(self, x):
        """Derivative of the Hermite interpolant."""
        x, i, t = self._locate(x)
        h = self.h
        t2 = t * t
        out = ((6 * t2 - 6 * t) / h * (self.values[i] - self.values[i + 1])
               + (3 * t2 - 4 * t + 1) * self.deriv[i] + (3 * t2 - 2 * t) * self.deriv[i + 1])
        return out[()] if out.ndim == 0 else out

    @classmethod
    def from_callable(cls, f, df, lo, hi, n_intervals):
        x = np.linspace(lo, hi, n_intervals + 1)
        return cls(lo, hi, np.asarray(f(x), dtype=float), np.asarray(df(x), dtype=float))
