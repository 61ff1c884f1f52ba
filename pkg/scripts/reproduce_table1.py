"""Print the threshold table: j0, argmin mode and mu_* for four thicknesses."""
import click

from flattumor.spectrum import crossover_rho_bar, mu_star


@click.command()
@click.option("--sigma-bar", type=float, default=1.0, show_default=True)
def main(sigma_bar):
    click.echo(f"{'rho0':>6} {'j0':>10} {'j':>4} {'mode':>7} {'mu_*':>14}")
    for rho0 in (0.25, 0.5, 1.0, 2.0):
        t = mu_star(rho0, sigma_bar)
        click.echo(f"{rho0:>6} {t.j0:>10.5f} {t.argmin_j:>4} {str(t.argmin_mode):>7} {t.mu_star:>14.6f}")
    click.echo(f"j=1 takes over beyond rho0 = {crossover_rho_bar(sigma_bar):.6f}")


if __name__ == "__main__":
    main()
