"""Overflow-safe hyperbolic kernels.

All mode profiles in this package are built from quotients such as
``cosh(a*y) / cosh(a*rho)`` with ``a*rho`` that can reach several hundred.
Forming numerator and denominator separately overflows long before the
quotient itself becomes unrepresentable, so every kernel is evaluated in
exponential-difference form::

    cosh(a y) / cosh(a rho) = exp(a (y - rho)) * (1 + exp(-2 a y)) / (1 + exp(-2 a rho))

The same expression is used for every argument (no branch on magnitude), which
keeps the kernels continuous in their arguments.

The module also carries executable versions of the elementary antiderivative
identities used when integrating the mode equations; the test-suite checks
them against quadrature.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DomainError

_ONE_BELOW = np.nextafter(1.0, 0.0)


class KernelArgs(NamedTuple):
    """Arguments of a ratio kernel: frequency ``a``, height ``y``, thickness ``rho``."""

    a: float
    y: float
    rho: float


def _check(a, rho):
    if np.any(np.asarray(a) <= 0):
        raise DomainError(f"kernel frequency must be positive, got {a!r}")
    if np.any(np.asarray(rho) <= 0):
        raise DomainError(f"layer thickness must be positive, got {rho!r}")


def cosh_ratio(a, y, rho):
    """``cosh(a*y) / cosh(a*rho)`` without overflow.  Accepts numpy arrays."""
    _check(a, rho)
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.exp(a * (y - rho)) * (1.0 + np.exp(-2.0 * a * y)) / (1.0 + np.exp(-2.0 * a * rho))
    return out[()] if out.ndim == 0 else out


def sinh_ratio(a, y, rho):
    """``sinh(a*y) / cosh(a*rho)`` without overflow; exactly 0 at ``y = 0``."""
    _check(a, rho)
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.exp(a * (y - rho)) * -np.expm1(-2.0 * a * y) / (1.0 + np.exp(-2.0 * a * rho))
    return out[()] if out.ndim == 0 else out


def tanh_over_rho(rho):
    """The decreasing map ``rho -> tanh(rho)/rho`` on ``(0, inf)``.

    The result is clipped to the largest double below 1: for ``rho`` under
    roughly 1e-8 the correctly rounded value would be exactly 1.0, which is
    outside the open range the callers rely on.
    """
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0):
        raise DomainError(f"rho must be positive, got {rho!r}")
    out = np.minimum(np.tanh(r) / r, _ONE_BELOW)
    return out[()] if out.ndim == 0 else out


def d_tanh_over_rho(rho):
    """Derivative of :func:`tanh_over_rho`, ``(1 - tanh(r)/r - tanh(r)**2) / r``."""
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0):
        raise DomainError(f"rho must be positive, got {rho!r}")
    t = np.tanh(r)
    out = (1.0 - t / r - t * t) / r
    return out[()] if out.ndim == 0 else out


def sqrt_tanh(x, rho):
    """``sqrt(x) * tanh(sqrt(x) * rho)``, concave in ``x`` for ``x > 0``."""
    s = np.sqrt(np.asarray(x, dtype=float))
    out = s * np.tanh(s * rho)
    return out[()] if out.ndim == 0 else out


def sech2(x):
    """``1 / cosh(x)**2`` evaluated as ``4 e^{-2|x|} / (1 + e^{-2|x|})**2``."""
    e = np.exp(-2.0 * np.abs(np.asarray(x, dtype=float)))
    out = 4.0 * e / (1.0 + e) ** 2
    return out[()] if out.ndim == 0 else out


# Antiderivatives.  a = sqrt(1 + j), b = sqrt(j).

def antideriv_exp_cosh(j, x):
    """Antiderivative of ``exp(b x) cosh(a x)``."""
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    return a * np.exp(b * x) * np.sinh(a * x) - b * np.exp(b * x) * np.cosh(a * x)


def antideriv_expneg_cosh(j, x):
    """Antiderivative of ``exp(-b x) cosh(a x)``."""
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    return a * np.exp(-b * x) * np.sinh(a * x) + b * np.exp(-b * x) * np.cosh(a * x)


def antideriv_expneg_sinh(j, x):
    """Antiderivative of ``exp(-b x) sinh(a x)``."""
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    return a * np.exp(-b * x) * np.cosh(a * x) + b * np.exp(-b * x) * np.sinh(a * x)


def integral_sinh_squared(rho):
    """``int_0^rho sinh(y)**2 dy``."""
    return 0.5 * np.sinh(rho) * np.cosh(rho) - 0.5 * rho


def integral_y_sinh(rho):
    """``int_0^rho y sinh(y) dy``."""
    return rho * np.cosh(rho) - np.sinh(rho)
