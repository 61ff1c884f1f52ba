"""Independent reference computations used by the tests.

Nothing here imports the package's numerical kernels: values are built from
mpmath at high precision, brute-force loops, or a compact finite-difference
solver for two-point boundary value problems.
"""
from __future__ import annotations

import mpmath as mp
import numpy as np
from scipy.linalg import solve_banded

mp.mp.dps = 60


def brute_sum_of_two_squares(j):
    """All ``(n, m)`` with ``n^2 + m^2 == j`` by exhaustive search."""
    r = int(np.sqrt(j)) + 2
    return [(n, m) for n in range(r) for m in range(r) if n * n + m * m == j]


def mp_k1(j, rho):
    j, r = mp.mpf(j), mp.mpf(rho)
    a, b = mp.sqrt(1 + j), mp.sqrt(j)
    return 1 - mp.tanh(r) / r - mp.tanh(r) * (a * mp.tanh(a * r) - b * mp.tanh(b * r))


def mp_k2(j, rho):
    j, r = mp.mpf(j), mp.mpf(rho)
    return j ** mp.mpf(1.5) * mp.tanh(mp.sqrt(j) * r) / 2


def mp_rho1(rho, mu, sigma_bar):
    r = mp.mpf(rho)
    num = -r ** 2 - r * mp.sinh(r) * mp.cosh(r) + 2 * mp.sinh(r) ** 2
    den = 2 * (1 - mp.tanh(r) / r - mp.tanh(r) ** 2) * r * mp.cosh(r) ** 2
    return mp.mpf(mu) * mp.mpf(sigma_bar) * num / den


def mp_c_coeffs(j, rho, mu, sigma_bar, a0, a1):
    """Literal transcription of the consolidated-source coefficients."""
    j, r, mu, sb = (mp.mpf(x) for x in (j, rho, mu, sigma_bar))
    a0, a1 = mp.mpf(a0), mp.mpf(a1)
    a, b = mp.sqrt(1 + j), mp.sqrt(j)
    r1 = mp_rho1(r, mu, sb)
    ds0 = sb * mp.tanh(r)
    st = sb * mp.tanh(r) / r
    h = mu * sb * mp_k1(j, r) - mp_k2(j, r)
    dw0 = -ds0 * a * mp.sinh(a * r) / mp.cosh(a * r) * a0
    dds0 = sb
    ds1 = -sb * r1 * mp.sinh(r) / mp.cosh(r) ** 2 * mp.sinh(r)
    c2 = -2 * mu ** 2 * sb * a / (mp.cosh(r) * mp.cosh(a * r)) * ds0 * a0
    c3 = -mu * sb * b / mp.cosh(r) * (j - 2 * mu * ds0) / (2 * mp.cosh(b * r)) * a0
    c4 = mu ** 2 * st * a / mp.cosh(a * r) * ds0 * a0
    c5 = -mu / mp.cosh(a * r) * (ds0 * h * a0 - dw0 * r1 - ds0 * a1 - dds0 * r1 * a0 - ds1 * a0)
    return c2, c3, c4, c5


def numerov_even_bvp(j, source, rho, boundary_value, n):
    """Solve ``u'' = j u + source(y)`` on ``[0, rho]`` with ``u'(0) = 0``, ``u(rho)`` given.

    Fourth-order Numerov scheme; the Neumann condition uses the mirror
    ``u(-h) = u(h)``, exact for even solutions.  Returns nodes, ``u`` and the
    boundary slope ``u'(rho) = int_0^rho (j u + source)`` by Simpson.
    """
    if n % 2:
        raise ValueError("n must be even")
    y = np.linspace(0.0, rho, n + 1)
    h = rho / n
    g = source(y)
    c = h * h / 12.0
    diag = -2.0 - 10.0 * c * j
    off = 1.0 - c * j
    m = n  # unknowns u_0 .. u_{n-1}
    ab = np.zeros((3, m))
    ab[1, :] = diag
    ab[0, 1:] = off
    ab[2, :-1] = off
    ab[0, 1] = 2.0 * off  # row 0 mirror: 2 off u_1 + diag u_0
    rhs = c * (g[2:] + 10.0 * g[1:-1] + g[:-2])
    rhs0 = c * (10.0 * g[0] + 2.0 * g[1])
    rhs = np.concatenate([[rhs0], rhs])
    rhs[-1] -= off * boundary_value
    u = np.empty(n + 1)
    u[:-1] = solve_banded((1, 1), ab, rhs)
    u[-1] = boundary_value
    f = j * u + g
    flux = h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
    return y, u, flux


def first_order_source(j, rho, mu, sigma_bar, a0, a1):
    """The first-order pressure source written term by term from its defining
    expression (not the consolidated form), and the Dirichlet value ``c1``."""
    a, b = np.sqrt(1.0 + j), np.sqrt(float(j))
    r1 = float(mp_rho1(rho, mu, sigma_bar))
    s = sigma_bar * np.tanh(rho)
    st = sigma_bar * np.tanh(rho) / rho
    h = float(mu * sigma_bar * mp_k1(j, rho) - mp_k2(j, rho))

    def ds0(y):
        return sigma_bar * np.sinh(y) / np.cosh(rho)

    def dp0(y):
        return mu * st * y - mu * sigma_bar * np.sinh(y) / np.cosh(rho)

    def dq0(y):
        return a0 * (mu * s * a * np.sinh(a * y) / np.cosh(a * rho)
                     + (j - 2 * mu * s) / (2 * np.cosh(b * rho)) * b * np.sinh(b * y))

    def dw0(y):
        return -s * a * np.sinh(a * y) / np.cosh(a * rho) * a0

    def dw0_dt(y):
        return -s * np.cosh(a * y) / np.cosh(a * rho) * h * a0

    ds1_rho = -sigma_bar * r1 * np.sinh(rho) ** 2 / np.cosh(rho) ** 2
    w1_bc = -dw0(rho) * r1 - s * a1 - sigma_bar * r1 * a0 - ds1_rho * a0

    def w1(y):
        return w1_bc * np.cosh(a * y) / np.cosh(a * rho)

    def source(y):
        return -mu * ds0(y) * dq0(y) - mu * dw0(y) * dp0(y) + mu * dw0_dt(y) - mu * w1(y)

    c1 = -dq0(rho) * r1 + 0.5 * j * a1
    return source, c1


def oracle_q1_flux(j, rho, mu, sigma_bar, a0, a1, n=4000):
    source, c1 = first_order_source(j, rho, mu, sigma_bar, a0, a1)
    return numerov_even_bvp(j, source, rho, c1, n)[2]


def oracle_drho1_dt(j, rho, mu, sigma_bar, a0, a1, n=4000):
    """Right side of the first-order amplitude equation with a BVP flux."""
    r1 = float(mp_rho1(rho, mu, sigma_bar))
    s = sigma_bar * np.tanh(rho)
    p0_dd = mu * sigma_bar * np.tanh(rho) / rho - mu * sigma_bar
    p0_ddd = -mu * sigma_bar * np.tanh(rho)
    sigma1_rho = -sigma_bar * r1 * np.tanh(rho)
    p1_dd = -mu * sigma1_rho
    q0_dd = a0 * (mu * s * (1 + j) + (j - 2 * mu * s) / 2 * j)
    flux = oracle_q1_flux(j, rho, mu, sigma_bar, a0, a1, n)
    return -p0_dd * a1 - p0_ddd * r1 * a0 - p1_dd * a0 - q0_dd * r1 - flux
