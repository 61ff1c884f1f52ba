"""First-order-in-delay corrections to the stationary solution.

Writing ``rho_* = rho0 + tau * rho1 + O(tau^2)``, the correction is

    rho1 = mu sigma_bar f(rho0) / (2 k(rho0) rho0 cosh(rho0)^2),
    f(r) = -r^2 - r sinh r cosh r + 2 sinh(r)^2,
    k(r) = 1 - tanh(r)/r - tanh(r)^2.

Both ``f`` and ``k`` are negative for ``r > 0``; ``f`` vanishes to sixth order
and ``k`` to second order at the origin, so small thicknesses use series.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np

from .errors import DomainError
from .grid import simpson
from .hyperbolics import cosh_ratio, sech2, sinh_ratio, tanh_over_rho

# Both series below have terms of one sign, so they are free of cancellation;
# past the cutoffs the closed forms lose at most a digit.
F_SERIES_CUTOFF = 2.0
G_SERIES_CUTOFF = 1.0

# f(r) = sum_{n>=3} (2 - n) / (2 (2n)!) (2r)^{2n}
_F_COEFFS = [(2 - n) * 4.0 ** n / (2.0 * factorial(2 * n)) for n in range(3, 40)]
# g(r) = sinh(2r)/2 - r = sum_{n>=1} (2r)^{2n+1} / (2 (2n+1)!)
_G_COEFFS = [2.0 ** (2 * n) / factorial(2 * n + 1) for n in range(1, 30)]


def _f_over_cosh2(r):
    """``f(r) / cosh(r)^2`` without overflow or cancellation."""
    if r < F_SERIES_CUTOFF:
        r2 = r * r
        f = sum(c * r2 ** (n + 3) for n, c in enumerate(_F_COEFFS))
        return f * float(sech2(r))
    t = np.tanh(r)
    return -r * r * float(sech2(r)) - r * t + 2.0 * t * t


def boundary_decay(r):
    """``k(r) = 1 - tanh(r)/r - tanh(r)^2``, negative for every ``r > 0``.

    Evaluated as ``-(sinh(2r)/2 - r) sech(r)^2 / r``.
    """
    if r <= 0:
        raise DomainError("rho0 must be positive")
    if r < G_SERIES_CUTOFF:
        r2 = r * r
        g_over_r = sum(c * r2 ** (n + 1) for n, c in enumerate(_G_COEFFS))
        return -g_over_r * float(sech2(r))
    t = np.tanh(r)
    return float(1.0 - t / r - t * t)


def rho_star_1(rho0, mu, sigma_bar):
    """First-order delay correction to the stationary thickness (positive)."""
    if rho0 <= 0:
        raise DomainError("rho0 must be positive")
    return mu * sigma_bar * _f_over_cosh2(rho0) / (2.0 * boundary_decay(rho0) * rho0)


def sigma1_profile(rho0, mu, sigma_bar, y):
    """Nutrient correction ``-sigma_bar rho1 sinh(rho0) cosh(y) / cosh(rho0)^2`` on ``[0, rho0]``."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(y > rho0 * (1 + 1e-12)):
        raise DomainError(f"sigma1 is only defined on [0, {rho0}]")
    r1 = rho_star_1(rho0, mu, sigma_bar)
    out = -sigma_bar * r1 * np.tanh(rho0) * cosh_ratio(1.0, y, rho0)
    return out[()] if out.ndim == 0 else out


def p1_dd_at_boundary(rho0, mu, sigma_bar):
    """Second derivative of the pressure correction at ``y = rho0``."""
    return mu * sigma_bar * rho_star_1(rho0, mu, sigma_bar) * np.tanh(rho0)


def first_order_mass_residual(rho0, mu, sigma_bar, panels=10_000):
    """Residual of the first-order mass balance with the closed-form ``rho1``.

    Evaluates ``rho1 (sigma_bar - sigma_tilde) + int_0^rho0 (sigma0' p0' + sigma1) dy``
    by Simpson quadrature; it vanishes when the closed form is right.
    """
    r1 = rho_star_1(rho0, mu, sigma_bar)
    sigma_tilde = sigma_bar * float(tanh_over_rho(rho0))
    y = np.linspace(0.0, rho0, panels + 1)
    ds0 = sigma_bar * sinh_ratio(1.0, y, rho0)
    dp0 = mu * sigma_tilde * y - mu * sigma_bar * sinh_ratio(1.0, y, rho0)
    s1 = -sigma_bar * r1 * np.tanh(rho0) * cosh_ratio(1.0, y, rho0)
    return r1 * (sigma_bar - sigma_tilde) + simpson(ds0 * dp0 + s1, rho0 / panels)


@dataclass(frozen=True)
class FirstOrderStationary:
    rho0: float
    rho1: float
    sigma1_at: Callable
    p1_dd_at_rho0: float


def first_order_stationary(rho0, mu, sigma_bar) -> FirstOrderStationary:
    return FirstOrderStationary(
        rho0=rho0,
        rho1=rho_star_1(rho0, mu, sigma_bar),
        sigma1_at=lambda y: sigma1_profile(rho0, mu, sigma_bar, y),
        p1_dd_at_rho0=p1_dd_at_boundary(rho0, mu, sigma_bar),
    )
