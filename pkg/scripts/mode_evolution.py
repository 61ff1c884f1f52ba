"""Mode amplitudes below and above the instability threshold.

Evolves the argmin mode at ``f * mu_*`` for a few factors ``f`` and prints a
decay certificate whenever ``f < 1``.
"""
import click
import numpy as np

from flattumor.errors import PreconditionError
from flattumor.evolution import decay_certificate, evolve_mode
from flattumor.spectrum import mu_star
from flattumor.stationary import ModelParams


@click.command()
@click.option("--rho0", type=float, default=1.0, show_default=True)
@click.option("--tau", type=float, default=0.01, show_default=True)
@click.option("--t-end", type=float, default=5.0, show_default=True)
def main(rho0, tau, t_end):
    table = mu_star(rho0)
    times = np.linspace(0.0, t_end, 6)
    click.echo(f"mu_* = {table.mu_star:.6f}, attained by {table.argmin_mode}")
    for f in (0.5, 0.9, 1.1, 2.0):
        p = ModelParams.from_rho0(rho0, 1.0, f * table.mu_star, tau)
        tr = evolve_mode(table.argmin_mode, p, 1.0, 0.0, times)
        amps = " ".join(f"{a:.3e}" for a in tr.combined(tau))
        click.echo(f"f={f}: h={tr.h:+.4f} k1={tr.k1_coeff:+.4f} [{tr.classification}] {amps}")
        try:
            c = decay_certificate(p, j_max=2000)
        except PreconditionError:
            continue
        click.echo(f"   delta={c.delta:.5f} witness {c.witness} envelope {c.envelope_constant:.4f}"
                   f" <= {c.envelope_bound:.4f}")


if __name__ == "__main__":
    main()
