"""Flat stationary solution, with and without replication delay.

Without delay everything is explicit: the thickness ``rho_S`` solves
``sigma_bar * tanh(rho)/rho = sigma_tilde`` and the nutrient/pressure profiles
are elementary.  With delay ``tau > 0`` the pressure solves a nonlocal problem:
the source at height ``y`` is the nutrient seen, a time ``tau`` earlier, by the
cell now at ``y``.  We work in the rescaled variables ``y_hat = y/rho``,
``p_hat = rho * p`` on the extended interval ``[0, 2]``:

* for a trial pressure ``p`` the characteristic ``xi(s; y)`` is integrated
  backward from ``xi(0; y) = y`` to ``s = -tau`` under ``d xi/ds = -p'(xi)/rho**3``;
* ``T p`` is the double integral of ``mu rho^3 [sigma(xi(-tau; z)) - sigma_tilde]``
  on ``[0, 1]`` with ``Tp(1) = 0``, ``Tp'(0) = 0``, continued linearly on ``(1, 2]``;
* the fixed point of ``T`` is found by plain iteration, and the thickness by
  a bracketed root-find on the mass balance ``F(rho, tau) = 0``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import romb
from scipy.optimize import brentq

from .errors import (
    BracketError,
    CharacteristicEscapeError,
    ConsistencyError,
    ContractionError,
    DomainError,
    NumericalError,
    ParameterError,
    ResolutionError,
)
from .grid import GridFunction, cumulative_simpson
from .hyperbolics import cosh_ratio, sinh_ratio, tanh_over_rho

logger = logging.getLogger(__name__)

RK4_STEPS = 16
MAX_FIXED_POINT_ITERATIONS = 200
MIN_GRID_N = 64


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the multi-layer model.

    Parameters
    ----------
    sigma_bar:
        External nutrient concentration.
    sigma_tilde:
        Maintenance threshold; must satisfy ``0 < sigma_tilde < sigma_bar``.
    mu:
        Tumour aggressiveness.
    tau:
        Replication delay, ``tau >= 0``.
    """

    sigma_bar: float
    sigma_tilde: float
    mu: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("sigma_bar", "sigma_tilde", "mu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {v!r}")
        if not (np.isfinite(self.tau) and self.tau >= 0):
            raise ParameterError(f"tau must be nonnegative, got {self.tau!r}")
        if not self.sigma_tilde < self.sigma_bar:
            raise ParameterError("need sigma_tilde < sigma_bar for a stationary thickness to exist")

    @classmethod
    def from_rho0(cls, rho0, sigma_bar=1.0, mu=1.0, tau=0.0):
        """Parameters whose undelayed stationary thickness is ``rho0``."""
        if rho0 <= 0:
            raise DomainError("rho0 must be positive")
        return cls(sigma_bar, sigma_bar * float(tanh_over_rho(rho0)), mu, tau)

    @property
    def rho_s(self) -> float:
        return solve_rho_s(self.sigma_bar, self.sigma_tilde)


def solve_rho_s(sigma_bar, sigma_tilde):
    """Undelayed thickness: the unique root of ``sigma_bar*tanh(rho)/rho - sigma_tilde``."""
    if sigma_bar <= 0 or sigma_tilde <= 0:
        raise ParameterError("sigma_bar and sigma_tilde must be positive")
    if sigma_tilde >= sigma_bar:
        raise ParameterError("no stationary thickness: sigma_tilde >= sigma_bar")
    ratio = sigma_tilde / sigma_bar
    g = lambda r: float(np.tanh(r) / r) - ratio  # noqa: E731
    # tanh(r)/r < 1/r, so g(1/ratio) < 0
    return brentq(g, 1e-300, 1.0 / ratio, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def sigma0_profile(rho0, sigma_bar, y, order=0, extend=False):
    """Undelayed nutrient ``sigma_bar cosh(y)/cosh(rho0)`` or its ``order``-th derivative.

    With ``extend=True`` heights above ``rho0`` return the constant
    continuation (``sigma_bar`` for the value, 0 for derivatives).
    """
    y = np.asarray(y, dtype=float)
    tol = 1e-12 * max(1.0, rho0)
    if np.any(y < -tol) or (not extend and np.any(y > rho0 + tol)):
        raise DomainError(f"y outside [0, {rho0}]")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    yc = np.minimum(y, rho0)
    kern = sinh_ratio if order == 1 else cosh_ratio
    out = sigma_bar * kern(1.0, yc, rho0)
    if extend:
        out = np.where(y > rho0, sigma_bar if order == 0 else 0.0, out)
    return out[()] if np.ndim(out) == 0 else out


def _check_consistency(rho0, sigma_bar, sigma_tilde):
    expected = sigma_bar * float(tanh_over_rho(rho0))
    if abs(sigma_tilde - expected) > 1e-10 * max(1.0, sigma_bar):
        raise ConsistencyError(
            f"sigma_tilde={sigma_tilde!r} inconsistent with rho0={rho0!r} "
            f"(expected {expected!r})")


def p0_profile(rho0, mu, sigma_bar, sigma_tilde, y, order=0):
    """Undelayed pressure and derivatives up to third order."""
    _check_consistency(rho0, sigma_bar, sigma_tilde)
    y = np.asarray(y, dtype=float)
    if order == 0:
        out = 0.5 * mu * sigma_tilde * (y * y - rho0 * rho0) + mu * sigma_bar * (1.0 - cosh_ratio(1.0, y, rho0))
    elif order == 1:
        out = mu * sigma_tilde * y - mu * sigma_bar * sinh_ratio(1.0, y, rho0)
    elif order == 2:
        out = mu * sigma_tilde - mu * sigma_bar * cosh_ratio(1.0, y, rho0)
    elif order == 3:
        out = -mu * sigma_bar * sinh_ratio(1.0, y, rho0)
    else:
        raise ValueError("order must be 0..3")
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Rescaled delayed problem on [0, 2]


@dataclass(frozen=True)
class Pressure:
    """Rescaled pressure on ``[0, 2]`` with analytic first and second derivatives.

    ``curv`` holds ``p''`` at the nodes; at ``y = 1`` it stores the left
    limit (the linear continuation has zero curvature).
    """

    grid: GridFunction
    curv: np.ndarray

    @property
    def half(self) -> int:
        return self.grid.n_intervals // 2

    def norm(self) -> float:
        """Discrete W^{2,inf}[0, 2] norm."""
        return float(max(np.abs(self.grid.values).max(), np.abs(self.grid.deriv).max(),
                         np.abs(self.curv).max()))

    def distance(self, other: "Pressure") -> float:
        return float(max(np.abs(self.grid.values - other.grid.values).max(),
                         np.abs(self.grid.deriv - other.grid.deriv).max(),
                         np.abs(self.curv - other.curv).max()))


def _check_grid_n(grid_n):
    if grid_n < MIN_GRID_N:
        raise ResolutionError(f"grid_n must be at least {MIN_GRID_N}, got {grid_n}")
    if grid_n % 4:
        # nodes at y = 1 and an even Simpson panel count on [0, 1]
        raise ResolutionError("grid_n must be a multiple of 4")


def zero_pressure(grid_n) -> Pressure:
    z = np.zeros(grid_n + 1)
    return Pressure(GridFunction(0.0, 2.0, z, z.copy()), z.copy())


def pressure_from_profile(rho, params, grid_n) -> Pressure:
    """Rescaled undelayed pressure at an arbitrary trial thickness ``rho``.

    Solves ``-p'' = mu rho^3 [sigma(y) - sigma_tilde]`` with ``p(1) = 0``,
    ``p'(0) = 0`` in closed form, plus the linear continuation.
    """
    _check_grid_n(grid_n)
    mu, sb, st = params.mu, params.sigma_bar, params.sigma_tilde
    y = np.linspace(0.0, 2.0, grid_n + 1)
    yi = np.minimum(y, 1.0)
    r2 = rho * rho
    # in the physical variable Y = rho*y:  P = 0.5 mu st (Y^2 - rho^2) + mu sb (1 - cosh Y / cosh rho)
    val = rho * (0.5 * mu * st * r2 * (yi * yi - 1.0) + mu * sb * (1.0 - cosh_ratio(rho, yi, 1.0)))
    der = r2 * (mu * st * rho * yi - mu * sb * sinh_ratio(rho, yi, 1.0))
    cur = rho ** 3 * (mu * st - mu * sb * cosh_ratio(rho, yi, 1.0))
    slope1 = der[grid_n // 2]
    ext = y > 1.0
    val = np.where(ext, slope1 * (y - 1.0), val)
    der = np.where(ext, slope1, der)
    cur = np.where(ext, 0.0, cur)
    return Pressure(GridFunction(0.0, 2.0, val, der), cur)


def _characteristics(vel, rho, tau, y, with_sensitivity=False):
    """Backward RK4 from ``s = 0`` to ``s = -tau``.

    Returns the path (``RK4_STEPS + 1`` rows) and, optionally, the endpoint
    sensitivity ``d xi(-tau; y)/dy`` from the variational equation.
    """
    y = np.asarray(y, dtype=float)
    xi = y.copy()
    path = [xi.copy()]
    if tau == 0:
        path = np.repeat(xi[None, :], RK4_STEPS + 1, axis=0)
        return (path, np.ones_like(xi)) if with_sensitivity else path
    h = tau / RK4_STEPS
    c = 1.0 / rho ** 3
    dvel = getattr(vel, "slope", None)
    w = np.ones_like(xi)

    def field(x):
        if np.any(x < 0.0) or np.any(x > 2.0) or not np.all(np.isfinite(x)):
            raise CharacteristicEscapeError("characteristic left [0, 2]; delay too large")
        return c * vel(x)

    for _ in range(RK4_STEPS):
        if with_sensitivity:
            x1 = xi
            k1 = field(x1); l1 = c * dvel(x1) * w
            x2 = xi + 0.5 * h * k1
            k2 = field(x2); l2 = c * dvel(x2) * (w + 0.5 * h * l1)
            x3 = xi + 0.5 * h * k2
            k3 = field(x3); l3 = c * dvel(x3) * (w + 0.5 * h * l2)
            x4 = xi + h * k3
            k4 = field(x4); l4 = c * dvel(x4) * (w + h * l3)
            w = w + h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)
        else:
            k1 = field(xi)
            k2 = field(xi + 0.5 * h * k1)
            k3 = field(xi + 0.5 * h * k2)
            k4 = field(xi + h * k3)
        xi = xi + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if np.any(xi < 0.0) or np.any(xi > 2.0):
            raise CharacteristicEscapeError("characteristic left [0, 2]; delay too large")
        path.append(xi.copy())
    path = np.asarray(path)
    return (path, w) if with_sensitivity else path


class _Velocity:
    """Callable ``p'`` with a ``slope`` (``p''``) for the variational equation."""

    def __init__(self, p: Pressure):
        k = p.half
        self._g = GridFunction(0.0, 1.0, p.grid.deriv[: k + 1], p.curv[: k + 1])
        self._edge = float(p.grid.deriv[k])

    def __call__(self, x):
        return np.where(x > 1.0, self._edge, self._g(np.minimum(x, 1.0)))

    def slope(self, x):
        return np.where(x > 1.0, 0.0, self._g.slope(np.minimum(x, 1.0)))


def solve_xi30(p, rho, tau, y):
    """Foot ``xi(-tau; y)`` of the backward characteristic through height ``y``.

    ``p`` is either a :class:`Pressure` or a callable velocity field ``p'``.
    """
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    vel = _Velocity(p) if isinstance(p, Pressure) else p
    scalar = np.ndim(y) == 0
    path = _characteristics(vel, rho, tau, np.atleast_1d(np.asarray(y, dtype=float)))
    end = path[-1]
    return float(end[0]) if scalar else end


def _nutrient_rescaled(x, rho, sigma_bar):
    """``sigma_bar cosh(rho x)/cosh(rho)`` on [0, 1], constant ``sigma_bar`` above."""
    return np.where(x > 1.0, sigma_bar, sigma_bar * cosh_ratio(rho, np.minimum(x, 1.0), 1.0))


@dataclass
class _TResult:
    pressure: Pressure
    xi_path: np.ndarray
    excess: np.ndarray  # sigma(xi) - sigma_tilde on [0, 1]


def _apply_T(p: Pressure, rho, params: ModelParams, grid_n) -> _TResult:
    _check_grid_n(grid_n)
    if p.grid.n_intervals != grid_n:
        raise ResolutionError("pressure grid does not match grid_n")
    half = grid_n // 2
    h = 2.0 / grid_n
    z = np.linspace(0.0, 1.0, half + 1)
    path = _characteristics(_Velocity(p), rho, params.tau, z)
    excess = _nutrient_rescaled(path[-1], rho, params.sigma_bar) - params.sigma_tilde
    f = params.mu * rho ** 3 * excess
    G = cumulative_simpson(f, h)          # int_0^z f
    Gi = cumulative_simpson(G, h)         # int_0^z G
    val = Gi[-1] - Gi                     # int_z^1 G
    der = -G
    cur = -f
    y = np.linspace(0.0, 2.0, grid_n + 1)
    slope1 = der[-1]
    values = np.concatenate([val, slope1 * (y[half + 1:] - 1.0)])
    deriv = np.concatenate([der, np.full(grid_n - half, slope1)])
    curv = np.concatenate([cur, np.zeros(grid_n - half)])
    return _TResult(Pressure(GridFunction(0.0, 2.0, values, deriv), curv), path, excess)


def apply_T(p, rho, params: ModelParams, grid_n=512) -> Pressure:
    """One application of the fixed-point map on the rescaled interval ``[0, 2]``."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    return _apply_T(p, rho, params, grid_n).pressure


@dataclass
class FixedPoint:
    pressure: Pressure
    xi_path: np.ndarray
    excess: np.ndarray
    iterations: int
    contraction: float          # largest measured successive-difference ratio
    ratios: list = field(default_factory=list)


def lipschitz_probe(p: Pressure, rho, params: ModelParams, grid_n, size=1e-3) -> float:
    """Measured ``|T(p + dp) - T(p)| / |dp|`` for a smooth perturbation ``dp``.

    ``dp = eps y^2 / 2`` has order-one value, slope and curvature (and a
    nonnegative slope, so characteristics stay above ``y = 0``); the ratio
    estimates the W^{2,inf} contraction constant directly.
    """
    y = p.grid.nodes
    eps = size * (1.0 + p.norm())
    dp = Pressure(GridFunction(0.0, 2.0, 0.5 * eps * y * y, eps * y), np.full_like(y, eps))
    shifted = Pressure(GridFunction(0.0, 2.0, p.grid.values + dp.grid.values,
                                    p.grid.deriv + dp.grid.deriv), p.curv + dp.curv)
    a = _apply_T(p, rho, params, grid_n).pressure
    b = _apply_T(shifted, rho, params, grid_n).pressure
    return b.distance(a) / dp.norm()


def fixed_point(rho, params: ModelParams, grid_n=512, tol=1e-10, start: Pressure | None = None) -> FixedPoint:
    """Iterate ``p <- T p`` until the W^{2,inf} update is below ``tol*(1+|p|)``."""
    p = start if start is not None else pressure_from_profile(rho, params, grid_n)
    prev_d = None
    ratios = []
    eps = np.finfo(float).eps
    for it in range(1, MAX_FIXED_POINT_ITERATIONS + 1):
        res = _apply_T(p, rho, params, grid_n)
        d = res.pressure.distance(p)
        scale = 1.0 + res.pressure.norm()
        # ratios are only meaningful above the rounding floor
        if prev_d is not None and prev_d > 1e3 * eps * scale:
            ratios.append(d / prev_d)
            if ratios[-1] >= 1.0:
                raise ContractionError(
                    f"fixed-point map did not contract at rho={rho!r}: factor {ratios[-1]:.3g}")
        p = res.pressure
        if d <= tol * scale:
            probe = lipschitz_probe(p, rho, params, grid_n)
            if probe >= 1.0:
                raise ContractionError(f"fixed-point map is not a contraction at rho={rho!r}: {probe:.3g}")
            return FixedPoint(p, res.xi_path, res.excess, it, max(ratios + [probe]), ratios)
        prev_d = d
    raise ContractionError(f"no convergence in {MAX_FIXED_POINT_ITERATIONS} iterations")


@dataclass
class StationaryState:
    """Converged delayed stationary solution (rescaled variables)."""

    params: ModelParams
    rho_s: float
    rho_star: float
    pressure: GridFunction
    pressure_curv: np.ndarray
    xi30: GridFunction          # y -> xi(-tau; y) on [0, 1], with d/dy
    xi30_path: np.ndarray       # (RK4_STEPS + 1, n) samples at s = -k tau / RK4_STEPS
    iterations: int             # fixed-point iterations at the accepted rho
    total_iterations: int
    residual: float             # |F(rho_star, tau)|
    contraction_factors: list   # measured factor at each outer iterate
    grid_n: int
    outer_evaluations: int

    @property
    def contraction_factor(self) -> float:
        return max(self.contraction_factors, default=0.0)

    def pressure_physical(self, y):
        """Pressure in the original height variable, ``p(y) = p_hat(y/rho)/rho``."""
        return self.pressure(np.asarray(y, dtype=float) / self.rho_star) / self.rho_star


def mass_balance(fp: FixedPoint, grid_n):
    """``F(rho, tau) = int_0^1 [sigma(xi(-tau; y)) - sigma_tilde] dy``.

    The ``grid_n/2 + 1`` samples on ``[0, 1]`` suit Romberg's rule exactly.
    """
    return romb(fp.excess, 2.0 / grid_n)


def solve_stationary(params: ModelParams, grid_n=512, tol=1e-10) -> StationaryState:
    """Delayed stationary thickness and pressure.

    The outer root-find runs on ``[rho_S/2, 3 rho_S/2]``; each trial
    thickness re-solves the fixed point warm-started from the previous one.
    A measured contraction factor of 1 or more aborts the solve.
    """
    _check_grid_n(grid_n)
    rho_s = params.rho_s
    cache: dict[float, FixedPoint] = {}
    factors = []
    last: list[Pressure | None] = [None]
    total = [0]

    def F(rho):
        if rho in cache:
            return mass_balance(cache[rho], grid_n)
        start = last[0]
        fp = fixed_point(rho, params, grid_n, tol, start=start)
        cache[rho] = fp
        last[0] = fp.pressure
        factors.append(fp.contraction)
        total[0] += fp.iterations
        return mass_balance(fp, grid_n)

    lo, hi = 0.5 * rho_s, 1.5 * rho_s
    f_lo, f_hi = F(lo), F(hi)
    if not (f_lo > 0 and f_hi < 0):
        raise BracketError(f"F does not change sign on [{lo}, {hi}]: F = ({f_lo}, {f_hi})")
    root = brentq(F, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    resid = abs(F(root))
    if resid > tol:
        raise NumericalError(f"mass balance residual {resid:.3g} above tol {tol:.3g}")
    fp = cache[root]
    half = grid_n // 2
    z = np.linspace(0.0, 1.0, half + 1)
    path, sens = _characteristics(_Velocity(fp.pressure), root, params.tau, z, with_sensitivity=True)
    logger.debug("stationary solve: rho*=%r after %d outer evaluations", root, len(cache))
    return StationaryState(
        params=params,
        rho_s=rho_s,
        rho_star=root,
        pressure=fp.pressure.grid,
        pressure_curv=fp.pressure.curv,
        xi30=GridFunction(0.0, 1.0, path[-1], sens),
        xi30_path=path,
        iterations=fp.iterations,
        total_iterations=total[0],
        residual=resid,
        contraction_factors=factors,
        grid_n=grid_n,
        outer_evaluations=len(cache),
    )
