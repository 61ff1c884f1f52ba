"""Mode profiles and the first-order-in-delay amplitude equation.

For a surface mode with ``j = n^2 + m^2`` write ``a = sqrt(1 + j)``,
``b = sqrt(j)`` and ``S = sigma_bar tanh(rho0)`` (the nutrient slope at the
surface).  Per unit amplitude ``rho0_amp`` the zeroth-order profiles are

    w0(y) = -S cosh(a y) / cosh(a rho0)
    q0(y) = mu S cosh(a y) / cosh(a rho0) + (j - 2 mu S) cosh(b y) / (2 cosh(b rho0))

At first order the pressure perturbation solves
``q1'' - j q1 = c2 sinh(y) sinh(a y) + c3 sinh(y) sinh(b y) + c4 y sinh(a y) + c5 cosh(a y)``
with ``q1(rho0) = c1`` and ``q1'(0) = 0``.  Everything here is evaluated with the
constants scaled by their ``cosh`` denominators, e.g. ``c2_hat = c2 cosh(rho0) cosh(a rho0)``,
so that only ``tanh`` of large arguments ever appears.

The amplitude ``rho1`` of the first-order surface correction then obeys
``d rho1/dt = h1 rho1 + k1 rho0``.  ``h1`` and ``k1`` are read off by evaluating
the right-hand side at unit amplitudes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularModeError
from .hyperbolics import cosh_ratio, sech2, sinh_ratio, tanh_over_rho
from .spectrum import ModeIndex, admissible_mask, growth_rate_j
from .tau_expansion import p1_dd_at_boundary, rho_star_1


def _check(rho0, mu, sigma_bar):
    if rho0 <= 0 or mu <= 0 or sigma_bar <= 0:
        raise DomainError("rho0, mu and sigma_bar must be positive")


def _ratio_or_one(kernel, b, y, rho0, at_zero):
    if b == 0:
        return np.full_like(np.asarray(y, dtype=float), at_zero)[()]
    return kernel(b, y, rho0)


@dataclass(frozen=True)
class ModeProfiles:
    """Closed-form ``w0`` and ``q0`` for one mode, per unit surface amplitude.

    ``C1`` and ``C2`` are the integration constants of the two-step
    solution ``q0 = mu S cosh(ay)/cosh(a rho0) - C1/(2b) e^{-by} + C2 e^{by}``;
    at ``j = 0`` only their combination survives and ``C1`` is reported as 0.
    """

    mode: ModeIndex
    rho0: float
    mu: float
    sigma_bar: float
    q0_d1_at_rho0: float
    q0_d2_at_rho0: float
    C1: float
    C2: float

    @property
    def _ab(self):
        j = self.mode.j
        return np.sqrt(1.0 + j), np.sqrt(float(j))

    @property
    def _slope(self):
        return self.sigma_bar * np.tanh(self.rho0)

    def w0_at(self, y):
        a, _ = self._ab
        return -self._slope * cosh_ratio(a, y, self.rho0)

    def w0_d1_at(self, y):
        a, _ = self._ab
        return -self._slope * a * sinh_ratio(a, y, self.rho0)

    def q0_at(self, y):
        a, b = self._ab
        j, s = self.mode.j, self._slope
        cb = _ratio_or_one(cosh_ratio, b, y, self.rho0, 1.0)
        return self.mu * s * cosh_ratio(a, y, self.rho0) + 0.5 * (j - 2 * self.mu * s) * cb

    def q0_d1_at(self, y):
        a, b = self._ab
        j, s = self.mode.j, self._slope
        sb = b * _ratio_or_one(sinh_ratio, b, y, self.rho0, 0.0)
        return self.mu * s * a * sinh_ratio(a, y, self.rho0) + 0.5 * (j - 2 * self.mu * s) * sb

    def q0_from_constants(self, y):
        """``q0`` rebuilt from ``C1`` and ``C2`` (small ``b rho0`` only)."""
        a, b = self._ab
        if b == 0:
            raise SingularModeError("the C1/(2 sqrt(j)) form is singular at j = 0")
        y = np.asarray(y, dtype=float)
        return (self.mu * self._slope * cosh_ratio(a, y, self.rho0)
                - self.C1 / (2 * b) * np.exp(-b * y) + self.C2 * np.exp(b * y))


def mode_profiles(mode: ModeIndex, rho0, mu, sigma_bar) -> ModeProfiles:
    _check(rho0, mu, sigma_bar)
    j = mode.j
    a, b = np.sqrt(1.0 + j), np.sqrt(float(j))
    s = sigma_bar * np.tanh(rho0)
    d1 = mu * s * a * np.tanh(a * rho0) + (0.5 * j - mu * s) * b * np.tanh(b * rho0)
    d2 = mu * s * (1.0 + j) + 0.5 * (j - 2 * mu * s) * j
    sech_b = np.sqrt(sech2(b * rho0))
    c2 = (0.5 * j - mu * s) / 2.0 * sech_b
    c1 = (2 * mu * s - j) * b / 2.0 * sech_b
    return ModeProfiles(mode, rho0, mu, sigma_bar, float(d1), float(d2), float(c1), float(c2))


def _scaled_c_coeffs(j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp):
    """``(c2, c3, c4, c5)`` times their ``cosh`` denominators; vectorised in ``j``."""
    j = np.asarray(j, dtype=float)
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    s = sigma_bar * np.tanh(rho0)
    st = sigma_bar * float(tanh_over_rho(rho0))
    h = growth_rate_j(j, mu, rho0, sigma_bar)
    dw0 = -s * a * np.tanh(a * rho0) * rho0_amp
    ds1 = -sigma_bar * rho1 * np.tanh(rho0) ** 2
    c2 = -2.0 * mu * mu * sigma_bar * a * s * rho0_amp
    c3 = -mu * sigma_bar * b * (j - 2.0 * mu * s) / 2.0 * rho0_amp
    c4 = mu * mu * st * a * s * rho0_amp
    c5 = -mu * (s * h * rho0_amp - dw0 * rho1 - s * rho1_amp
                - sigma_bar * rho1 * rho0_amp - ds1 * rho0_amp)
    return c2, c3, c4, c5


def assemble_c_coeffs(mode: ModeIndex, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp):
    """Coefficients ``c2..c5`` of the consolidated first-order source.

    ``d rho0/dt`` is replaced by ``h rho0_amp``.  For very large ``a rho0`` the
    unscaled values underflow to zero; the flux computation never uses them.
    """
    _check(rho0, mu, sigma_bar)
    j = mode.j
    a, b = np.sqrt(1.0 + j), np.sqrt(float(j))
    c2, c3, c4, c5 = _scaled_c_coeffs(j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp)
    sech_r, sech_a, sech_b = (np.sqrt(sech2(x)) for x in (rho0, a * rho0, b * rho0))
    return (float(c2 * sech_r * sech_a), float(c3 * sech_r * sech_b),
            float(c4 * sech_a), float(c5 * sech_a))


def _particular_at_boundary(j, rho0, c2, c3, c4, c5):
    """``Q1(rho0)`` and ``Q1'(rho0)`` from the scaled coefficients (``j >= 1``)."""
    if np.any(np.asarray(j) == 0):
        raise SingularModeError("the 1/(2j) particular solution is singular at j = 0")
    a, b = np.sqrt(1.0 + j), np.sqrt(j)
    tr, ta, tb = np.tanh(rho0), np.tanh(a * rho0), np.tanh(b * rho0)
    q = (c2 * (a - tr * ta) / (2.0 * j)
         + c3 * (2.0 * b - tr * tb) / (4.0 * j - 1.0)
         + c4 * (rho0 * ta - 2.0 * a)
         + c5)
    dq = (c2 * ta / 2.0
          + c3 * (b * tr + (2.0 * j - 1.0) * tb) / (4.0 * j - 1.0)
          + c4 * (a * rho0 - (1.0 + 2.0 * j) * ta)
          + c5 * a * ta)
    return q, dq


def _flux_j0(rho0, c2, c4, c5):
    """``q1'(rho0) = int_0^rho0 source`` when ``j = 0`` (then ``a = 1`` and ``c3 = 0``)."""
    tr, s2 = np.tanh(rho0), sech2(rho0)
    return c2 * (tr - rho0 * s2) / 2.0 + c4 * (rho0 - tr) + c5 * tr


def _flux(j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp):
    j = np.atleast_1d(np.asarray(j, dtype=float))
    c2, c3, c4, c5 = (np.broadcast_to(c, j.shape) for c in
                      _scaled_c_coeffs(j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp))
    out = np.empty_like(j)
    zero = j == 0
    if zero.any():
        out[zero] = _flux_j0(rho0, c2[zero], c4[zero], c5[zero])
    pos = ~zero
    if pos.any():
        jp = j[pos]
        b = np.sqrt(jp)
        a = np.sqrt(1.0 + jp)
        s = sigma_bar * np.tanh(rho0)
        dq0 = mu * s * a * np.tanh(a * rho0) + (0.5 * jp - mu * s) * b * np.tanh(b * rho0)
        c1 = -dq0 * rho0_amp * rho1 + 0.5 * jp * rho1_amp
        q, dq = _particular_at_boundary(jp, rho0, c2[pos], c3[pos], c4[pos], c5[pos])
        out[pos] = (c1 - q) * b * np.tanh(b * rho0) + dq
    return out


def q1_boundary_flux(mode: ModeIndex, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp):
    """``dq1/dy`` at the unperturbed surface; linear in the two amplitudes."""
    _check(rho0, mu, sigma_bar)
    return float(_flux(mode.j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp)[0])


def _drho1_dt(j, rho0, mu, sigma_bar, rho1, rho0_amp, rho1_amp):
    j = np.atleast_1d(np.asarray(j, dtype=float))
    s = sigma_bar * np.tanh(rho0)
    p0_dd = -mu * sigma_bar * (1.0 - float(tanh_over_rho(rho0)))
    p0_ddd = -mu * s
    p1_dd = p1_dd_at_boundary(rho0, mu, sigma_bar)
    q0_dd = mu * s * (1.0 + j) + 0.5 * (j - 2.0 * mu * s) * j
    return (-p0_dd * rho1_amp - p0_ddd * rho1 * rho0_amp - p1_dd * rho0_amp
            - q0_dd * rho0_amp * rho1
            - _flux(j, rho0, rho1, mu, sigma_bar, rho0_amp, rho1_amp))


@dataclass(frozen=True)
class FirstOrderCoefficients:
    mode: ModeIndex
    h: float
    h1: float
    k1_coeff: float


def first_order_rates(j, rho0, mu, sigma_bar):
    """Arrays ``(h, h1, k1)`` for an array of ``j``."""
    _check(rho0, mu, sigma_bar)
    r1 = rho_star_1(rho0, mu, sigma_bar)
    h1 = _drho1_dt(j, rho0, mu, sigma_bar, r1, 0.0, 1.0)
    k1 = _drho1_dt(j, rho0, mu, sigma_bar, r1, 1.0, 0.0)
    h = np.atleast_1d(growth_rate_j(np.asarray(j, dtype=float), mu, rho0, sigma_bar))
    return h, h1, k1


def first_order_coefficients(mode: ModeIndex, rho0, mu, sigma_bar) -> FirstOrderCoefficients:
    h, h1, k1 = first_order_rates(mode.j, rho0, mu, sigma_bar)
    return FirstOrderCoefficients(mode, float(h[0]), float(h1[0]), float(k1[0]))


def k1_growth_constant(rho0, mu, sigma_bar, j_max=10_000):
    """Empirical ``sup |k1| / (1 + j)^{5/2}`` over admissible ``j <= j_max``.

    Returns ``(C, j_at_sup)``.
    """
    js = np.flatnonzero(admissible_mask(j_max)).astype(float)
    _, _, k1 = first_order_rates(js, rho0, mu, sigma_bar)
    ratio = np.abs(k1) / (1.0 + js) ** 2.5
    i = int(np.argmax(ratio))
    return float(ratio[i]), int(js[i])
