"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numeric abort.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click

from .config import ConfigError, load_config
from .experiments import EXPERIMENTS, run_experiment
from .figures import render_figure
from .finite import NumericError, simulate_finite
from .limit import NumericErrorAtStep, simulate_limit
from .stable import stable_target_of
from .streams import SeedTree

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Simulation of interacting particle systems with heavy-tailed
    collateral jumps and their common-noise limit."""


def _write_rows(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="Override the config root seed.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option(
    "--system",
    type=click.Choice(["finite", "limit"]),
    default="finite",
    show_default=True,
)
def simulate(config_path, seed, out_dir, system):
    """Run one simulation bundle and export its event log and snapshots."""
    overrides = {}
    if seed is not None:
        overrides["root_seed"] = seed
    if out_dir is not None:
        overrides["out_path"] = out_dir
    try:
        cfg = load_config(config_path, overrides)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    out = Path(cfg.out_path)
    seeds = SeedTree(cfg.root_seed).child("simulate")
    times = cfg.output_times
    try:
        if system == "finite":
            bundle = simulate_finite(
                cfg.model,
                cfg.N_grid[0],
                cfg.T,
                cfg.doa,
                seeds,
                h_drift=cfg.h_drift,
                record="snapshots",
                snapshot_times=times,
            )
            ev = bundle.events
            acc = ev.accepted
            _write_rows(
                out / "events.csv",
                ("time", "particle", "u", "main_jump"),
                zip(ev.time[acc], ev.particle[acc], ev.u[acc], ev.main_jump[acc]),
            )
            _write_rows(
                out / "states.csv",
                ("time", "particle", "x"),
                (
                    (t, i, bundle.states[k, i])
                    for k, t in enumerate(bundle.grid)
                    for i in range(bundle.N)
                ),
            )
        else:
            params = stable_target_of(cfg.doa)
            bundle = simulate_limit(
                cfg.model,
                cfg.M,
                cfg.T,
                cfg.h,
                params,
                seeds,
                record="snapshots",
                snapshot_times=times,
            )
            _write_rows(
                out / "states.csv",
                ("time", "particle", "x"),
                (
                    (t, i, bundle.states[k, i])
                    for k, t in enumerate(bundle.grid)
                    for i in range(bundle.M)
                ),
            )
            sp = bundle.stable_path
            _write_rows(
                out / "stable_path.csv",
                ("t", "S"),
                zip(sp.times, sp.values),
            )
    except (NumericError, NumericErrorAtStep) as exc:
        _fail(EXIT_NUMERIC, str(exc))
    click.echo(f"wrote simulation outputs to {out}")


@main.command()
@click.argument("name", type=click.Choice(sorted(EXPERIMENTS)))
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="Override the config root seed.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--dry-run", is_flag=True, help="Validate the config and exit.")
@click.option("--figures/--no-figures", default=True, show_default=True)
def experiment(name, config_path, seed, out_dir, threads, dry_run, figures):
    """Run a named experiment from a config file."""
    overrides = {}
    if seed is not None:
        overrides["root_seed"] = seed
    if out_dir is not None:
        overrides["out_path"] = out_dir
    try:
        cfg = load_config(config_path, overrides)
        if cfg.experiment != name:
            cfg = type(cfg)(**{**cfg.__dict__, "experiment": name})
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    if dry_run:
        click.echo(f"config OK: experiment={cfg.experiment} seed={cfg.root_seed}")
        return
    try:
        result = run_experiment(cfg, threads=threads)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except (NumericError, NumericErrorAtStep) as exc:
        _fail(EXIT_NUMERIC, str(exc))
    click.echo(f"wrote {result.csv_path}")
    for label, path in result.aux_files.items():
        click.echo(f"wrote {path} ({label})")
    if figures:
        fig_path = render_figure(result, cfg.out_path)
        click.echo(f"wrote {fig_path}")


if __name__ == "__main__":
    main()
