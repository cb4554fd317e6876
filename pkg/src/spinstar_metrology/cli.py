"""Command-line entry point.

Exit codes: 0 success, 1 configuration or argument error, 2 verification failure.
"""

from __future__ import annotations

import json
import logging
import math
import sys

import click

from . import observables, qfi, spinstar, verify as verify_mod
from .errors import ConfigError, SpinStarError
from .observables import ObservableSpec
from .spinstar import GaussianCouplingSpec, ModelPoint
from .sweep import columns, fig1b_curves, load_config, row_to_dict, run_sweep
from .sweep import output as out
from .sweep.presets import PRESETS, SWEEP_PRESETS, TAU_RATIOS

EXIT_CONFIG = 1
EXIT_VERIFY = 2


def _emit_rows(cfg, workers=None):
    rows = run_sweep(cfg, workers=workers)
    cols = columns(cfg.quantities)
    text = out.render([row_to_dict(r, cfg.quantities) for r in rows], cols, cfg.output_format)
    out.write(text, cfg.output_path)


def _config_error(exc):
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_CONFIG)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log fragment-size conversions and progress.")
def main(verbose):
    """Fragment QFI and measurement precision in the spin-star model."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--workers", type=int, default=None, help="Override [run] workers.")
def sweep(config_path, workers):
    """Run a sweep described by a TOML config file."""
    try:
        cfg = load_config(config_path)
        if workers is not None and workers < 1:
            raise ConfigError("workers must be >= 1")
    except ConfigError as exc:
        _config_error(exc)
    _emit_rows(cfg, workers)


@main.command()
@click.argument("name", type=click.Choice(PRESETS))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default="-", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def preset(name, seed, out_path, fmt, workers):
    """Regenerate the data behind one of the figures."""
    if name == "fig1b":
        rows = fig1b_curves(TAU_RATIOS)
        cols = ["tau_ratio", "t_over_tau_f", "qfi_thermo", "precision_thermo"]
        out.write(out.render(rows, cols, fmt), out_path)
        return
    try:
        cfg = SWEEP_PRESETS[name](seed=seed, output_path=out_path, output_format=fmt, workers=workers)
    except ConfigError as exc:
        _config_error(exc)
    _emit_rows(cfg)


@main.command()
@click.option("--scope", type=click.Choice(["fast", "full"]), default="fast", show_default=True)
def verify(scope):
    """Check every invariant against the exact oracle; prints a JSON report."""
    report = verify_mod.run(scope)
    click.echo(json.dumps(report.as_dict(), indent=1))
    if not report.passed:
        sys.exit(EXIT_VERIFY)


def _point_options(fn):
    opts = [
        click.option("--theta", type=float, required=True),
        click.option("--time", "time_", type=float, required=True),
        click.option("--n-env", type=int, required=True),
        click.option("--frag", type=int, required=True, help="Fragment size |F|."),
        click.option("--jmean", type=float, default=0.5, show_default=True),
        click.option("--jstd", type=float, default=0.5, show_default=True),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Master seed; couplings are realization 0 of this seed."),
        click.option("--thermo", is_flag=True, help="Evaluate the thermodynamic limit instead."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _point(theta, time_, n_env, frag, jmean, jstd, seed):
    ens = GaussianCouplingSpec(jmean, jstd)
    cs = spinstar.sample_couplings(ens, n_env, spinstar.derive_seed(seed, 0))
    return ens, ModelPoint(theta, time_, cs, frag)


def _number(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "nan")


@main.command("qfi")
@_point_options
def qfi_cmd(theta, time_, n_env, frag, jmean, jstd, seed, thermo):
    """Fragment QFI at one point."""
    try:
        ens, p = _point(theta, time_, n_env, frag, jmean, jstd, seed)
        res = (qfi.qfi_thermodynamic(p.time, p.f, ens.second_moment) if thermo
               else qfi.qfi_closed_form(p))
    except SpinStarError as exc:
        _config_error(exc)
    click.echo(json.dumps({"theta": p.theta, "time": p.time, "n_env": n_env, "frag_size": frag,
                           "method": res.method, "qfi": res.value}))


@main.command()
@_point_options
@click.option("--q", type=float, default=0.0, show_default=True, help="Weight of S_x in A_q.")
def precision(theta, time_, n_env, frag, jmean, jstd, seed, thermo, q):
    """Error-propagation precision of A_q = q S_x + (1-q) S_y at one point."""
    try:
        ens, p = _point(theta, time_, n_env, frag, jmean, jstd, seed)
        spec = ObservableSpec(q)
        if thermo:
            res = observables.precision_thermodynamic(p.theta, p.time, p.f, ens.mean, spec)
        else:
            res = observables.precision_finite(p, spec)
    except SpinStarError as exc:
        _config_error(exc)
    click.echo(json.dumps({
        "theta": p.theta, "time": p.time, "n_env": n_env, "frag_size": frag, "q": q,
        "method": "thermodynamic" if thermo else "finite",
        "variance_theta": _number(res.variance_theta), "precision": res.precision,
        "mean_a": _number(res.mean_a), "var_a": _number(res.var_a),
    }))


if __name__ == "__main__":  # pragma: no cover
    main()
