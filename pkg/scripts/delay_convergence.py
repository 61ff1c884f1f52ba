"""Delayed stationary thickness against its first-order prediction.

Halves tau repeatedly and reports the observed order of
``(rho_*(tau) - rho_S)/tau -> rho1``.
"""
import math

import click

from flattumor.stationary import ModelParams, solve_stationary
from flattumor.tau_expansion import rho_star_1


@click.command()
@click.option("--rho0", type=float, default=1.0, show_default=True)
@click.option("--mu", type=float, default=1.0, show_default=True)
@click.option("--tau", type=float, default=1e-2, show_default=True, help="Largest delay.")
@click.option("--levels", type=int, default=4, show_default=True)
@click.option("--grid-n", type=int, default=512, show_default=True)
def main(rho0, mu, tau, levels, grid_n):
    r1 = rho_star_1(rho0, mu, 1.0)
    click.echo(f"rho_S = {rho0}, rho1 = {r1:.12f}")
    prev = None
    for k in range(levels):
        t = tau / 2 ** k
        s = solve_stationary(ModelParams.from_rho0(rho0, 1.0, mu, t), grid_n=grid_n)
        err = abs((s.rho_star - s.rho_s) / t - r1)
        order = "" if prev is None else f"  order {math.log2(prev / err):.3f}"
        click.echo(f"tau={t:.3e}  rho_*={s.rho_star:.12f}  contraction={s.contraction_factor:.2e}"
                   f"  err={err:.3e}{order}")
        prev = err


if __name__ == "__main__":
    main()
