"""Command-line front end.

Every subcommand writes one JSON document (or CSV table) to ``--out``, or to
stdout when ``--out`` is omitted.  Files are written atomically.  Exit codes:
0 success, 1 reference check failed (``table1``), 2 invalid input,
3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile

import click
import numpy as np

from .errors import ModelError, NumericalError, ValidationError
from .evolution import SurfaceMode, evolve_mode, synthesize_surface
from .spectrum import ModeIndex, crossover_rho_bar, figure_rows, mu_star
from .stationary import ModelParams, solve_stationary
from .tau_expansion import rho_star_1

SCHEMA = 1

EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3, 4

# rho0 -> (j0 bracket, argmin j, mu_*, relative tolerance on mu_*)
REFERENCE_ROWS = {
    0.25: ((47, 48), 81, 62088.0, 2e-3),
    0.5: ((11, 12), 20, 2088.3, 1e-3),
    1.0: ((2, 3), 5, 84.054, 1e-3),
    2.0: ((0.6, 0.7), 1, 5.1560, 1e-3),
}

POSITIVE = click.FloatRange(min=0.0, min_open=True)
NONNEGATIVE = click.FloatRange(min=0.0)


def _plain(obj):
    """Convert to JSON-ready builtins; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps(doc) -> str:
    # json renders floats with repr: the shortest string that round-trips
    return json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_output(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-", suffix=os.path.basename(target))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fail(code, exc):
    sys.stderr.write(dumps({"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}))
    sys.exit(code)


def _run(fn):
    try:
        return fn()
    except ValidationError as exc:
        _fail(EXIT_VALIDATION, exc)
    except NumericalError as exc:
        _fail(EXIT_NUMERICAL, exc)
    except ModelError as exc:
        _fail(EXIT_NUMERICAL, exc)
    except OSError as exc:
        _fail(EXIT_IO, exc)


def _params(rho0, sigma_bar, sigma_tilde, mu, tau):
    if (rho0 is None) == (sigma_tilde is None):
        raise click.UsageError("give exactly one of --rho0 and --sigma-tilde")
    if rho0 is not None:
        return ModelParams.from_rho0(rho0, sigma_bar, mu, tau)
    return ModelParams(sigma_bar, sigma_tilde, mu, tau)


def _param_dict(p: ModelParams):
    return {"sigma_bar": p.sigma_bar, "sigma_tilde": p.sigma_tilde, "mu": p.mu, "tau": p.tau}


def parse_modes(text):
    """``"n,m,amp[,parity];..."`` -> list of :class:`SurfaceMode`."""
    modes = []
    for chunk in filter(None, (c.strip() for c in (text or "").split(";"))):
        parts = [s.strip() for s in chunk.split(",")]
        if len(parts) not in (3, 4):
            raise click.BadParameter(f"mode {chunk!r} is not 'n,m,amp[,parity]'", param_hint="--modes")
        try:
            n, m, amp = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--modes") from None
        modes.append(SurfaceMode(ModeIndex(n, m), parts[3] if len(parts) == 4 else "cc", amp, 0.0))
    return modes


def _common(f):
    opts = [
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout)."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json"),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _model(f):
    opts = [
        click.option("--rho0", type=POSITIVE, default=None, help="Undelayed thickness (sets sigma-tilde)."),
        click.option("--sigma-bar", type=POSITIVE, default=1.0, show_default=True),
        click.option("--sigma-tilde", type=POSITIVE, default=None),
        click.option("--mu", type=POSITIVE, default=1.0, show_default=True),
        click.option("--tau", type=NONNEGATIVE, default=0.0, show_default=True),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


@click.group()
def main():
    """Flat-surface tumour model: stationary states, spectra and mode evolution."""


@main.command()
@_model
@click.option("--grid-n", type=click.IntRange(min=64), default=512, show_default=True)
@click.option("--tol", type=POSITIVE, default=1e-10, show_default=True)
@_common
def stationary(rho0, sigma_bar, sigma_tilde, mu, tau, grid_n, tol, out, fmt):
    """Solve for the (delayed) stationary thickness."""
    p = _run(lambda: _params(rho0, sigma_bar, sigma_tilde, mu, tau))

    def go():
        st = solve_stationary(p, grid_n=grid_n, tol=tol)
        rs = st.rho_s
        result = {
            "rho_s": rs,
            "rho_star": st.rho_star,
            "rho1_first_order": rho_star_1(rs, mu, p.sigma_bar),
            "iterations": st.iterations,
            "total_iterations": st.total_iterations,
            "outer_evaluations": st.outer_evaluations,
            "residual": st.residual,
            "contraction_factor": st.contraction_factor,
        }
        if fmt == "csv":
            return csv_text(list(result), [list(result.values())])
        return dumps({"schema": SCHEMA, "command": "stationary",
                      "inputs": {**_param_dict(p), "grid_n": grid_n, "tol": tol}, "outputs": result})

    _run(lambda: write_output(go(), out))


@main.command()
@click.option("--rho0", type=POSITIVE, required=True)
@click.option("--sigma-bar", type=POSITIVE, default=1.0, show_default=True)
@click.option("--jmax", type=click.IntRange(min=0), default=None, help="Largest j emitted (default: scan bound).")
@_common
def spectrum(rho0, sigma_bar, jmax, out, fmt):
    """Per-mode thresholds mu_j at admissible j."""
    def go():
        rows = figure_rows(rho0, sigma_bar, jmax)
        header = ["j", "n", "m", "k1", "k2", "mu_j"]
        if fmt == "csv":
            return csv_text(header, rows)
        return dumps({"schema": SCHEMA, "command": "spectrum",
                      "inputs": {"rho0": rho0, "sigma_bar": sigma_bar, "jmax": jmax},
                      "columns": header, "rows": [list(r) for r in rows]})

    _run(lambda: write_output(go(), out))


def _table_doc(t):
    return {
        "rho0": t.rho0, "sigma_bar": t.sigma_bar, "j0": t.j0, "mu_star": t.mu_star,
        "argmin_j": t.argmin_j, "mode": [t.argmin_mode.n, t.argmin_mode.m],
        "j_scan_limit": t.j_scan_limit, "ties": t.ties,
    }


@main.command("mu-star")
@click.option("--rho0", type=POSITIVE, required=True)
@click.option("--sigma-bar", type=POSITIVE, default=1.0, show_default=True)
@_common
def mu_star_cmd(rho0, sigma_bar, out, fmt):
    """Instability threshold mu_* and the mode attaining it."""
    def go():
        doc = _table_doc(mu_star(rho0, sigma_bar))
        if fmt == "csv":
            doc["mode"] = f"({doc['mode'][0]},{doc['mode'][1]})"
            doc["ties"] = " ".join(map(str, doc["ties"]))
            return csv_text(list(doc), [list(doc.values())])
        return dumps({"schema": SCHEMA, "command": "mu-star", "outputs": doc})

    _run(lambda: write_output(go(), out))


def table1_rows():
    rows = []
    for rho0, (bracket, j_ref, mu_ref, rtol) in REFERENCE_ROWS.items():
        t = mu_star(rho0, 1.0)
        ok = (bracket[0] < t.j0 < bracket[1] and t.argmin_j == j_ref
              and abs(t.mu_star - mu_ref) <= rtol * mu_ref)
        rows.append({**_table_doc(t), "reference_mu_star": mu_ref, "rtol": rtol,
                     "j0_bracket": list(bracket), "reference_j": j_ref, "pass": bool(ok)})
    return rows


@main.command()
@_common
def table1(out, fmt):
    """Thresholds for four thicknesses, checked against reference values."""
    rows = _run(table1_rows)
    if fmt == "csv":
        header = ["rho0", "j0", "argmin_j", "n", "m", "mu_star", "reference_mu_star", "pass"]
        text = csv_text(header, [[r["rho0"], r["j0"], r["argmin_j"], r["mode"][0], r["mode"][1],
                                  r["mu_star"], r["reference_mu_star"], str(r["pass"]).lower()]
                                 for r in rows])
    else:
        text = dumps({"schema": SCHEMA, "command": "table1", "rows": rows,
                      "all_pass": all(r["pass"] for r in rows)})
    _run(lambda: write_output(text, out))
    sys.exit(EXIT_OK if all(r["pass"] for r in rows) else EXIT_CHECK_FAILED)


@main.command()
@_model
@click.option("--t-end", type=NONNEGATIVE, default=1.0, show_default=True)
@click.option("--modes", type=str, default="", help='Initial modes "n,m,amp[,parity];..."')
@click.option("--epsilon", type=POSITIVE, default=0.01, show_default=True)
@click.option("--samples", type=click.IntRange(min=2), default=11, show_default=True)
@click.option("--with-grid/--no-grid", default=False, help="Embed the sampled surface.")
@_common
def evolve(rho0, sigma_bar, sigma_tilde, mu, tau, t_end, modes, epsilon, samples, with_grid, out, fmt):
    """Evolve surface modes and synthesise the surface at t-end."""
    p = _run(lambda: _params(rho0, sigma_bar, sigma_tilde, mu, tau))
    mode_list = _run(lambda: parse_modes(modes))

    def go():
        times = np.linspace(0.0, t_end, samples) if t_end > 0 else np.array([0.0])
        trajs = [evolve_mode(sm.mode, p, sm.rho0_0, sm.rho1_0, times) for sm in mode_list]
        snap = synthesize_surface(mode_list, p, epsilon, t_end)
        if fmt == "csv":
            rows = [[tr.mode.n, tr.mode.m, t, a, b] for tr in trajs
                    for t, a, b in zip(tr.times, tr.rho0_t, tr.rho1_t)]
            return csv_text(["n", "m", "t", "rho0", "rho1"], rows)
        surface = {"grid_n": int(snap.y.shape[0]), "rho_star": snap.rho_star,
                   "min": float(snap.y.min()), "max": float(snap.y.max()),
                   "flat": bool(np.all(snap.y == snap.rho_star))}
        if with_grid:
            surface["y"] = snap.y
        return dumps({
            "schema": SCHEMA, "command": "evolve",
            "inputs": {**_param_dict(p), "t_end": t_end, "epsilon": epsilon,
                       "modes": [[sm.mode.n, sm.mode.m, sm.rho0_0, sm.parity] for sm in mode_list]},
            "trajectories": [{"mode": [tr.mode.n, tr.mode.m], "h": tr.h, "k1": tr.k1_coeff,
                              "classification": tr.classification, "times": tr.times,
                              "rho0": tr.rho0_t, "rho1": tr.rho1_t} for tr in trajs],
            "surface": surface,
        })

    _run(lambda: write_output(go(), out))


@main.command()
@click.option("--sigma-bar", type=POSITIVE, default=1.0, show_default=True)
@_common
def crossover(sigma_bar, out, fmt):
    """Thickness beyond which the threshold is attained by j = 1."""
    def go():
        r = crossover_rho_bar(sigma_bar)
        if fmt == "csv":
            return csv_text(["rho_bar", "rho_bar_4dp"], [[r, round(r, 4)]])
        return dumps({"schema": SCHEMA, "command": "crossover", "inputs": {"sigma_bar": sigma_bar},
                      "outputs": {"rho_bar": r, "rho_bar_4dp": round(r, 4)}})

    _run(lambda: write_output(go(), out))


if __name__ == "__main__":
    main()
