"""Growth rates of surface modes and the instability threshold ``mu_*``.

A perturbation ``cos(n x1) cos(m x2)`` of the flat surface grows at rate
``h = mu sigma_bar k1(j) - k2(j)`` with ``j = n^2 + m^2``.  ``k1`` increases from
a negative value at ``j = 0`` to ``1 - tanh(rho0)/rho0`` as ``j -> inf``; it has
a single real root ``j0``.  A mode with ``j > j0`` turns unstable once ``mu``
exceeds ``mu_j = k2(j) / (sigma_bar k1(j))``; ``mu_*`` is the smallest
``mu_j`` over integers ``j > j0`` that are sums of two squares.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .hyperbolics import tanh_over_rho

TIE_RTOL = 1e-12


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Fourier mode ``(n, m)``; spectral quantities depend on ``j = n^2 + m^2`` only."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or int(self.n) != self.n or int(self.m) != self.m:
            raise DomainError(f"mode indices must be nonnegative integers, got ({self.n}, {self.m})")

    @property
    def j(self) -> int:
        return self.n * self.n + self.m * self.m

    @classmethod
    def for_j(cls, j):
        """A mode realising ``j``, with the larger index first (``5 -> (2, 1)``)."""
        w = sum_of_two_squares(j)
        if w is None:
            raise DomainError(f"{j} is not a sum of two squares")
        return cls(w[1], w[0])

    def __str__(self):
        return f"({self.n},{self.m})"


def _check(j, rho0):
    if rho0 <= 0:
        raise DomainError("rho0 must be positive")
    if np.any(np.asarray(j) < 0):
        raise DomainError("j must be nonnegative")


def k1(j, rho0):
    """Destabilising factor ``1 - tanh(r)/r - tanh(r) [a tanh(a r) - b tanh(b r)]``.

    ``a = sqrt(1+j)``, ``b = sqrt(j)``.  The bracket is rewritten as
    ``(a - b) tanh(a r) + b sinh((a - b) r) / (cosh(a r) cosh(b r))`` with
    ``a - b = 1/(a + b)`` so large ``j`` does not cancel.
    """
    _check(j, rho0)
    j = np.asarray(j, dtype=float)
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    d = 1.0 / (a + b)
    tr = np.tanh(rho0)
    # sech(x) = 2 e^{-x} / (1 + e^{-2x}), overflow-free
    sech_a = 2.0 * np.exp(-a * rho0) / (1.0 + np.exp(-2.0 * a * rho0))
    sech_b = 2.0 * np.exp(-b * rho0) / (1.0 + np.exp(-2.0 * b * rho0))
    bracket = d * np.tanh(a * rho0) + b * np.sinh(d * rho0) * sech_a * sech_b
    out = 1.0 - float(tanh_over_rho(rho0)) - tr * bracket
    return out[()] if out.ndim == 0 else out


def k1_sup(rho0):
    """``lim_{j->inf} k1(j) = 1 - tanh(rho0)/rho0``, a strict upper bound of ``k1``."""
    return 1.0 - float(tanh_over_rho(rho0))


def k2(j, rho0):
    """Surface-tension damping ``j^{3/2} tanh(sqrt(j) rho0) / 2``."""
    _check(j, rho0)
    j = np.asarray(j, dtype=float)
    out = 0.5 * j ** 1.5 * np.tanh(np.sqrt(j) * rho0)
    return out[()] if out.ndim == 0 else out


def growth_rate_j(j, mu, rho0, sigma_bar):
    """Growth rate as a function of ``j`` (vectorised)."""
    return mu * sigma_bar * k1(j, rho0) - k2(j, rho0)


def growth_rate_h(mode: ModeIndex, mu, rho0, sigma_bar):
    return float(growth_rate_j(mode.j, mu, rho0, sigma_bar))


def find_j0(rho0):
    """The unique real root of ``k1(., rho0)``."""
    _check(0, rho0)
    lo, hi = 0.0, 1.0
    while k1(hi, rho0) <= 0:
        lo, hi = hi, 2.0 * hi
    return brentq(lambda j: float(k1(j, rho0)), lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def mu_threshold(j, rho0, sigma_bar, j0=None):
    """``mu_j``; ``+inf`` when ``j <= j0`` (the mode is stable for every ``mu``)."""
    if j0 is None:
        j0 = find_j0(rho0)
    if j <= j0:
        return np.inf
    return float(k2(j, rho0) / (sigma_bar * k1(j, rho0)))


def sum_of_two_squares(j):
    """Lexicographically smallest ``(n, m)`` with ``n^2 + m^2 == j``, or ``None``."""
    if j < 0 or int(j) != j:
        raise DomainError("j must be a nonnegative integer")
    j = int(j)
    for n in range(isqrt(j // 2) + 1):
        r = j - n * n
        m = isqrt(r)
        if m * m == r:
            return (n, m)
    return None


def is_admissible(j):
    """True iff ``j`` is a sum of two integer squares."""
    return sum_of_two_squares(j) is not None


def admissible_mask(j_max):
    """Boolean array ``mask[j]`` for ``0 <= j <= j_max``."""
    r = isqrt(j_max)
    n = np.arange(r + 1)
    s = (n[:, None] ** 2 + n[None, :] ** 2).ravel()
    mask = np.zeros(j_max + 1, dtype=bool)
    mask[s[s <= j_max]] = True
    return mask


@dataclass
class SpectrumEntry:
    j: int
    admissible: bool
    k1: float
    k2: float
    mu_j: float


@dataclass
class SpectrumTable:
    rho0: float
    sigma_bar: float
    j0: float
    entries: list
    mu_star: float
    argmin_mode: ModeIndex
    j_scan_limit: int
    ties: list = field(default_factory=list)

    @property
    def argmin_j(self) -> int:
        return self.argmin_mode.j


def mu_star(rho0, sigma_bar=1.0, j_limit=None) -> SpectrumTable:
    """Scan admissible ``j > j0`` for the smallest threshold.

    Because ``k1 < k1_sup``, ``mu_j > k2(j) / (sigma_bar k1_sup)``; that bound
    grows like ``j^{3/2}``, and the scan stops at the first ``j`` where it
    exceeds the running minimum.  ``j_limit`` forces a longer scan.
    """
    j0 = find_j0(rho0)
    sup = k1_sup(rho0)
    entries = []
    best, best_j = np.inf, None
    ties = []
    j = 0
    while True:
        bound = float(k2(j, rho0)) / (sigma_bar * sup)
        if best_j is not None and bound > best and (j_limit is None or j > j_limit):
            break
        adm = is_admissible(j)
        kj1, kj2 = float(k1(j, rho0)), float(k2(j, rho0))
        mj = mu_threshold(j, rho0, sigma_bar, j0)
        entries.append(SpectrumEntry(j, adm, kj1, kj2, mj))
        if adm and np.isfinite(mj):
            if best_j is not None and abs(mj - best) <= TIE_RTOL * best:
                ties.append(j)
            elif mj < best:
                best, best_j, ties = mj, j, []
        j += 1
    return SpectrumTable(rho0, sigma_bar, j0, entries, best, ModeIndex.for_j(best_j), j, ties)


def crossover_rho_bar(sigma_bar=1.0, lo=1.0, hi=2.0, tol=1e-10):
    """Smallest ``rho0`` past which ``mu_*`` is attained at ``j = 1``.

    Bisection on the predicate ``argmin j == 1`` over ``[lo, hi]``.
    """
    def at_one(r):
        return mu_star(r, sigma_bar).argmin_j == 1

    if at_one(lo) or not at_one(hi):
        raise DomainError(f"[{lo}, {hi}] does not bracket the crossover")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if at_one(mid):
            hi = mid
        else:
            lo = mid
    return hi


def figure_rows(rho0, sigma_bar=1.0, j_max=None):
    """``(j, n, m, k1, k2, mu_j)`` at admissible ``j <= j_max`` (plotting data)."""
    if j_max is None:
        j_max = mu_star(rho0, sigma_bar).j_scan_limit
    j0 = find_j0(rho0)
    rows = []
    for j in range(j_max + 1):
        w = sum_of_two_squares(j)
        if w is None:
            continue
        rows.append((j, w[1], w[0], float(k1(j, rho0)), float(k2(j, rho0)),
                     mu_threshold(j, rho0, sigma_bar, j0)))
    return rows
