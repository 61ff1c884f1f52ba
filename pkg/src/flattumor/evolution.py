"""Time evolution of linearised surface modes and surface synthesis.

To first order in the delay each mode amplitude splits as
``rho = rho0 + tau * rho1`` with

    d rho0/dt = h rho0,        d rho1/dt = h rho1 + k1 rho0,

so ``rho0(t) = rho0(0) e^{ht}`` and ``rho1(t) = e^{ht} (rho1(0) + k1 rho0(0) t)``.
Trajectories are reported from these closed forms; an RK4 integration of the
same system is kept as a self-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalError, PreconditionError, ResolutionError
from .first_order_mode import first_order_coefficients, first_order_rates
from .spectrum import ModeIndex, admissible_mask, growth_rate_j, k2, mu_star
from .stationary import ModelParams
from .tau_expansion import rho_star_1

PARITIES = ("cc", "cs", "sc", "ss")
SELF_CHECK_RTOL = 1e-8


def _classify(h, scale):
    if abs(h) <= 1e-12 * scale:
        return "neutral"
    return "unstable" if h > 0 else "stable"


@dataclass
class ModeTrajectory:
    mode: ModeIndex
    h: float
    k1_coeff: float
    rho0_0: float
    rho1_0: float
    times: np.ndarray
    rho0_t: np.ndarray
    rho1_t: np.ndarray
    classification: str

    def combined(self, tau):
        """``rho0 + tau rho1`` along the trajectory."""
        return self.rho0_t + tau * self.rho1_t


def _closed_form(h, k1, r0, r1, t):
    e = np.exp(h * t)
    return r0 * e, e * (r1 + k1 * r0 * t)


def _rk4_endpoint(h, k1, r0, r1, t_end):
    """Classical RK4 on the 2x2 linear system, stepped ``N`` times.

    For a linear system one RK4 step is multiplication by the degree-4 Taylor
    polynomial of ``A dt``, so the ``N`` steps are a matrix power.
    """
    if t_end == 0:
        return r0, r1
    rate = max(abs(h), abs(k1), 1e-300)
    steps = int(min(max(64, np.ceil(rate * t_end / 0.002)), 2 ** 40))
    dt = t_end / steps
    A = np.array([[h, 0.0], [k1, h]]) * dt
    A2 = A @ A
    step = np.eye(2) + A + A2 / 2 + A2 @ A / 6 + A2 @ A2 / 24
    y = np.linalg.matrix_power(step, steps) @ np.array([r0, r1])
    return y[0], y[1]


def evolve_mode(mode: ModeIndex, params: ModelParams, rho0_0, rho1_0, t_grid,
                self_check=True) -> ModeTrajectory:
    """Closed-form amplitudes of one mode on ``t_grid`` (ascending, starting at 0)."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or t[0] != 0 or np.any(np.diff(t) <= 0):
        raise DomainError("t_grid must be strictly ascending and start at 0")
    rho0 = params.rho_s
    fc = first_order_coefficients(mode, rho0, params.mu, params.sigma_bar)
    h, k1 = fc.h, fc.k1_coeff
    r0t, r1t = _closed_form(h, k1, rho0_0, rho1_0, t)
    if self_check:
        n0, n1 = _rk4_endpoint(h, k1, rho0_0, rho1_0, t[-1])
        env = np.exp(h * t[-1])
        s0 = max(abs(r0t[-1]), 1e-300)
        s1 = max(abs(r1t[-1]), env * (abs(rho1_0) + abs(k1 * rho0_0) * t[-1]), 1e-300)
        if abs(n0 - r0t[-1]) > SELF_CHECK_RTOL * s0 or abs(n1 - r1t[-1]) > SELF_CHECK_RTOL * s1:
            raise NumericalError(f"RK4 cross-check disagrees with the closed form for mode {mode}")
    scale = params.mu * params.sigma_bar + float(k2(mode.j, rho0)) + 1.0
    return ModeTrajectory(mode, h, k1, rho0_0, rho1_0, t, r0t, r1t, _classify(h, scale))


@dataclass
class DecayCertificate:
    """Uniform decay rate ``delta`` with ``h_j <= -delta (1 + j)^{3/2}``.

    ``envelope_constant`` is the sampled ``max |rho0 + tau rho1| e^{delta t / 2}``
    over unit initial data ``(rho0, rho1) = (1, 0)`` for every admissible mode;
    ``envelope_bound`` is its analytic upper bound.
    """

    delta: float
    witness: ModeIndex
    mu_star: float
    j_max: int
    envelope_constant: float
    envelope_bound: float
    horizon: float
    modes_checked: int

    @property
    def envelope_ok(self) -> bool:
        return self.envelope_constant <= self.envelope_bound * (1 + 1e-12)


def decay_certificate(params: ModelParams, j_max=10_000, n_samples=201) -> DecayCertificate:
    rho0 = params.rho_s
    table = mu_star(rho0, params.sigma_bar)
    if params.mu >= table.mu_star:
        raise PreconditionError(f"mu={params.mu!r} is not below mu_*={table.mu_star!r}")
    js = np.flatnonzero(admissible_mask(j_max)).astype(float)
    weight = (1.0 + js) ** 1.5
    h = growth_rate_j(js, params.mu, rho0, params.sigma_bar)
    rates = -h / weight
    i = int(np.argmin(rates))
    delta = float(rates[i])
    if not delta > 0:
        raise NumericalError("no positive uniform decay rate found")

    tau = params.tau
    if tau > 0:
        _, _, k1 = first_order_rates(js, rho0, params.mu, params.sigma_bar)
    else:
        k1 = np.zeros_like(js)
    horizon = 10.0 / delta
    t = np.linspace(0.0, horizon, n_samples)
    # |rho0 + tau rho1| e^{delta t/2} for unit rho0(0), one row per mode
    traj = np.exp(np.outer(h + 0.5 * delta, t)) * np.abs(1.0 + tau * np.outer(k1, t))
    fitted = float(traj.max())
    c = delta * (weight - 0.5)
    bound = float(np.max(1.0 + tau * np.abs(k1) / (np.e * c)))
    return DecayCertificate(delta, ModeIndex.for_j(int(js[i])), table.mu_star, j_max,
                            fitted, bound, horizon, int(js.size))


@dataclass(frozen=True)
class SurfaceMode:
    """Initial data of one Fourier component of the surface perturbation."""

    mode: ModeIndex
    parity: str = "cc"
    rho0_0: float = 1.0
    rho1_0: float = 0.0

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {PARITIES}, got {self.parity!r}")


def _basis(parity, n, m, x1, x2):
    f1 = np.cos(n * x1) if parity[0] == "c" else np.sin(n * x1)
    f2 = np.cos(m * x2) if parity[1] == "c" else np.sin(m * x2)
    return f1[:, None] * f2[None, :]


@dataclass
class SurfaceSnapshot:
    epsilon: float
    tau: float
    t: float
    rho_star: float
    modes: list = field(default_factory=list)
    x: np.ndarray = None
    y: np.ndarray = None


def surface_grid_size(modes: Sequence[SurfaceMode]):
    top = max([max(sm.mode.n, sm.mode.m) for sm in modes], default=0)
    n = 16
    while n < 4 * top:
        n *= 2
    return n


def synthesize_surface(modes: Sequence[SurfaceMode], params: ModelParams, epsilon, t,
                       grid_n=None) -> SurfaceSnapshot:
    """Surface height ``rho_* + eps sum_k (rho0_k + tau rho1_k)(t) basis_k`` on ``[0, 2 pi)^2``.

    The flat thickness is ``rho_S + tau rho1``, consistent with the first-order
    expansion used for the amplitudes.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    need = surface_grid_size(modes)
    if grid_n is None:
        grid_n = need
    elif grid_n < need or grid_n & (grid_n - 1):
        raise ResolutionError(f"grid_n must be a power of two >= {need}")
    rho0 = params.rho_s
    rstar = rho0 + params.tau * rho_star_1(rho0, params.mu, params.sigma_bar)
    x = 2 * np.pi * np.arange(grid_n) / grid_n
    y = np.full((grid_n, grid_n), rstar)
    listed = []
    for sm in modes:
        tr = evolve_mode(sm.mode, params, sm.rho0_0, sm.rho1_0, [0.0, t] if t > 0 else [0.0],
                         self_check=False)
        amp = float(tr.combined(params.tau)[-1])
        y += epsilon * amp * _basis(sm.parity, sm.mode.n, sm.mode.m, x, x)
        listed.append((sm.mode, sm.parity, amp))
    if np.any(y <= 0):
        raise DomainError("perturbation too large: surface height is not positive")
    return SurfaceSnapshot(epsilon, params.tau, float(t), rstar, listed, x, y)
