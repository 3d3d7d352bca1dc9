"""Experiment catalog: statistical runs that exercise the structural and
convergence properties of the particle system, with CSV outputs.

Every experiment is a pure function of (config, root seed): replicas are
fanned out over independent derived streams and results are assembled in
replica order, so output is bit-identical across reruns and across
parallelism levels.
"""

from __future__ import annotations

import csv
import datetime
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .finite import collateral_sums_fast, simulate_finite, transformed_event_times
from .limit import simulate_limit
from .measures import ks_statistic, wasserstein1_1d
from .model import ModelSpec
from .stable import DoaLaw, sample_stable_increments, stable_target_of
from .streams import SeedTree

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "EXPERIMENTS",
    "run_experiment",
    "run_stable_clt",
    "run_time_change_poisson",
    "run_chaos_sweep",
    "run_common_noise",
    "run_limit_selfcheck",
]

EXPERIMENT_NAMES = (
    "stable_clt",
    "time_change_poisson",
    "collateral_limit",
    "chaos_sweep",
    "common_noise",
    "limit_selfcheck",
)

# Bounded test function used to probe common noise; a repo convention,
# nothing in the dynamics singles it out.
COMMON_NOISE_G = np.arctan


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    model: ModelSpec
    doa: DoaLaw
    N_grid: tuple[int, ...] = (100,)
    M: int = 2000
    T: float = 1.0
    h: float = 1e-3
    replicas: int = 100
    output_times: tuple[float, ...] | None = None  # defaults to (T,)
    root_seed: int = 0
    out_path: str = "out"
    h_drift: float = 1e-2

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.N_grid:
            raise ConfigError("N_grid must be non-empty")
        if any(n < 1 for n in self.N_grid):
            raise ConfigError("N_grid entries must be positive")
        if self.experiment == "chaos_sweep" and list(self.N_grid) != sorted(
            set(self.N_grid)
        ):
            raise ConfigError("chaos_sweep needs a strictly increasing N_grid")
        if self.replicas < 1:
            raise ConfigError("replicas must be at least 1")
        if self.T <= 0.0:
            raise ConfigError("T must be positive")
        if self.output_times is None:
            object.__setattr__(self, "output_times", (self.T,))
        if any(t > self.T for t in self.output_times):
            raise ConfigError("output times must not exceed T")
        if self.model.alpha != self.doa.alpha:
            raise ConfigError("model alpha and collateral-law alpha must agree")


@dataclass
class ExperimentResult:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple]
    csv_path: Path | None = None
    extras: dict = field(default_factory=dict)
    aux_files: dict = field(default_factory=dict)


def _write_csv(path: Path, columns, rows, comments=()) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# generated {datetime.datetime.now().isoformat()}\n")
        for c in comments:
            fh.write(f"# {c}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def _pmap(fn, argss, threads: int):
    argss = list(argss)
    if threads <= 1 or len(argss) <= 1:
        return [fn(a) for a in argss]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, argss, chunksize=max(1, len(argss) // (4 * threads))))


# ---------------------------------------------------------------------------
# stable_clt: the collateral sum at fixed T against direct stable draws.


def run_stable_clt(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Two-sample KS of J^N_T against c**(1/alpha) * S_T per N."""
    if not (
        cfg.model.drift.is_zero
        and cfg.model.main_jump.is_zero
        and cfg.model.rate.is_constant
    ):
        raise ConfigError(
            "stable_clt requires the fast path: zero drift, zero main jumps, "
            "constant rate"
        )
    c = cfg.model.rate.f_upper
    target = stable_target_of(cfg.doa)
    seeds = SeedTree(cfg.root_seed).child("stable_clt")
    rows = []
    for N in cfg.N_grid:
        sums = collateral_sums_fast(
            N, cfg.T, c, cfg.doa, seeds.stream("finite", N), cfg.replicas
        )
        direct = c ** (1.0 / cfg.doa.alpha) * sample_stable_increments(
            target, cfg.T, cfg.replicas, seeds.stream("direct", N)
        )
        stat, _ = ks_statistic(sums, direct)
        rows.append((N, stat, cfg.replicas))
    path = _write_csv(
        Path(cfg.out_path) / "stable_clt.csv", ("N", "ks_stat", "n_samples"), rows
    )
    return ExperimentResult("stable_clt", ("N", "ks_stat", "n_samples"), rows, path)


# ---------------------------------------------------------------------------
# collateral_limit: closed-form limit marginal against direct stable draws.


def run_collateral_limit(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """KS of pooled X_T - X_0 over fresh stable paths vs c**(1/alpha) * S_T.

    Restricted to the closed-form model (zero drift, zero main jumps,
    constant rate), for which the limit scheme telescopes to
    c**(1/alpha) times the stable path; the per-step increments are
    summed directly here, which a unit test pins against simulate_limit
    on shared increments.
    """
    if not (
        cfg.model.drift.is_zero
        and cfg.model.main_jump.is_zero
        and cfg.model.rate.is_constant
    ):
        raise ConfigError(
            "collateral_limit requires zero drift, zero main jumps and a "
            "constant rate"
        )
    c = cfg.model.rate.f_upper
    params = stable_target_of(cfg.doa)
    seeds = SeedTree(cfg.root_seed).child("collateral_limit")
    n_steps = int(np.ceil(cfg.T / cfg.h))
    rng = seeds.stream("paths")
    sums = np.empty(cfg.replicas)
    chunk = max(1, 10_000_000 // max(n_steps, 1))
    for start in range(0, cfg.replicas, chunk):
        n = min(chunk, cfg.replicas - start)
        incs = sample_stable_increments(params, cfg.h, n * n_steps, rng)
        sums[start : start + n] = incs.reshape(n, n_steps).sum(axis=1)
    pooled = c ** (1.0 / cfg.doa.alpha) * sums
    direct = c ** (1.0 / cfg.doa.alpha) * sample_stable_increments(
        params, cfg.T, cfg.replicas, seeds.stream("direct")
    )
    stat, _ = ks_statistic(pooled, direct)
    rows = [(cfg.M, cfg.h, stat, cfg.replicas)]
    path = _write_csv(
        Path(cfg.out_path) / "collateral_limit.csv",
        ("M", "h", "ks_stat", "n_samples"),
        rows,
    )
    return ExperimentResult(
        "collateral_limit", ("M", "h", "ks_stat", "n_samples"), rows, path
    )


# ---------------------------------------------------------------------------
# time_change_poisson: Exp(1) spacings after the cumulated-intensity change.


def _tcp_replica(args):
    cfg, r = args
    seeds = SeedTree(cfg.root_seed).child("time_change_poisson").child("replica", r)
    bundle = simulate_finite(
        cfg.model,
        cfg.N_grid[0],
        cfg.T,
        cfg.doa,
        seeds,
        h_drift=cfg.h_drift,
    )
    s = transformed_event_times(bundle)
    if len(s) < 2:
        return (r, len(s), float("nan"))
    spacings = np.diff(np.concatenate([[0.0], s]))
    _, p = ks_statistic(spacings, lambda x: 1.0 - np.exp(-np.maximum(x, 0.0)))
    return (r, len(s), p)


def run_time_change_poisson(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Per-replica KS p-values of transformed event-time spacings vs Exp(1)."""
    rows = _pmap(_tcp_replica, [(cfg, r) for r in range(cfg.replicas)], threads)
    counted = [p for (_, n, p) in rows if n >= 2]
    frac = float(np.mean([p > 0.01 for p in counted])) if counted else float("nan")
    path = _write_csv(
        Path(cfg.out_path) / "time_change_poisson.csv",
        ("replica", "n_events", "ks_p"),
        rows,
        comments=[f"fraction_pass_p_gt_0.01: {frac:.6f}", f"excluded_replicas: {cfg.replicas - len(counted)}"],
    )
    return ExperimentResult(
        "time_change_poisson",
        ("replica", "n_events", "ks_p"),
        rows,
        path,
        extras={"fraction_pass": frac, "excluded": cfg.replicas - len(counted)},
    )


# ---------------------------------------------------------------------------
# chaos_sweep: pooled one-particle marginals of the finite system against
# the limit reference.


def _limit_marginal_replica(args):
    cfg, r = args
    seeds = SeedTree(cfg.root_seed).child("chaos_limit").child("replica", r)
    params = stable_target_of(cfg.doa)
    bundle = simulate_limit(
        cfg.model,
        cfg.M,
        cfg.T,
        cfg.h,
        params,
        seeds,
        record="snapshots",
        snapshot_times=cfg.output_times,
    )
    # one particle read per replica: pooling many particles from one path
    # would sample the conditional law given that path, not the
    # unconditional marginal
    return bundle.states[:, 0]


def _finite_marginal_replica(args):
    cfg, N, r = args
    seeds = SeedTree(cfg.root_seed).child("chaos_finite", N).child("replica", r)
    bundle = simulate_finite(
        cfg.model,
        N,
        cfg.T,
        cfg.doa,
        seeds,
        h_drift=cfg.h_drift,
        record="snapshots",
        snapshot_times=cfg.output_times,
    )
    return bundle.states[:, 0]


def run_chaos_sweep(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """W1 between pooled finite and limit one-particle marginals per (N, t)."""
    ref = np.array(
        _pmap(_limit_marginal_replica, [(cfg, r) for r in range(cfg.replicas)], threads)
    )  # (replicas, n_times)
    rows = []
    for N in cfg.N_grid:
        fin = np.array(
            _pmap(
                _finite_marginal_replica,
                [(cfg, N, r) for r in range(cfg.replicas)],
                threads,
            )
        )
        for j, t in enumerate(cfg.output_times):
            w1 = wasserstein1_1d(fin[:, j], ref[:, j])
            rows.append((N, t, w1, cfg.replicas))
    path = _write_csv(
        Path(cfg.out_path) / "chaos_sweep.csv", ("N", "t", "w1", "n_pooled"), rows
    )
    return ExperimentResult("chaos_sweep", ("N", "t", "w1", "n_pooled"), rows, path)


# ---------------------------------------------------------------------------
# common_noise: across-replica variance of a bounded empirical functional.


def _common_noise_finite_replica(args):
    cfg, N, r, scale = args
    seeds = SeedTree(cfg.root_seed).child("common_noise", N).child("replica", r)
    bundle = simulate_finite(
        cfg.model,
        N,
        cfg.T,
        cfg.doa,
        seeds,
        h_drift=cfg.h_drift,
        record="snapshots",
        snapshot_times=(cfg.T,),
        collateral_scale=scale,
    )
    return float(COMMON_NOISE_G(bundle.states[-1]).mean())


def _common_noise_limit_replica(args):
    cfg, r = args
    seeds = SeedTree(cfg.root_seed).child("common_noise_limit").child("replica", r)
    params = stable_target_of(cfg.doa)
    bundle = simulate_limit(
        cfg.model,
        cfg.M,
        cfg.T,
        cfg.h,
        params,
        seeds,
        record="snapshots",
        snapshot_times=(cfg.T,),
    )
    return float(COMMON_NOISE_G(bundle.states[-1]).mean())


def run_common_noise(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Variance of mu^N_T(arctan) per N against the limit-system variance,
    plus the zero-collateral control."""
    limit_vals = _pmap(
        _common_noise_limit_replica, [(cfg, r) for r in range(cfg.replicas)], threads
    )
    var_limit = float(np.var(limit_vals))
    rows = []
    control_rows = []
    for N in cfg.N_grid:
        vals = _pmap(
            _common_noise_finite_replica,
            [(cfg, N, r, None) for r in range(cfg.replicas)],
            threads,
        )
        rows.append((N, float(np.var(vals)), var_limit))
        ctrl = _pmap(
            _common_noise_finite_replica,
            [(cfg, N, r, 0.0) for r in range(cfg.replicas)],
            threads,
        )
        control_rows.append((N, float(np.var(ctrl))))
    comments = []
    if cfg.replicas < 10:
        comments.append("low-precision: variance estimated from fewer than 10 replicas")
    path = _write_csv(
        Path(cfg.out_path) / "common_noise.csv",
        ("N", "var_finite", "var_limit_ref"),
        rows,
        comments=comments,
    )
    ctrl_path = _write_csv(
        Path(cfg.out_path) / "common_noise_control.csv",
        ("N", "var_control"),
        control_rows,
    )
    return ExperimentResult(
        "common_noise",
        ("N", "var_finite", "var_limit_ref"),
        rows,
        path,
        extras={"control_rows": control_rows, "var_limit": var_limit},
        aux_files={"control": ctrl_path},
    )


# ---------------------------------------------------------------------------
# limit_selfcheck: h- and M-stability of the limit scheme.


def _selfcheck_replica(args):
    cfg, label, M, h, r = args
    seeds = SeedTree(cfg.root_seed).child("selfcheck_" + label).child("replica", r)
    params = stable_target_of(cfg.doa)
    bundle = simulate_limit(
        cfg.model, M, cfg.T, h, params, seeds, record="snapshots", snapshot_times=(cfg.T,)
    )
    return float(bundle.states[-1, 0])


def _bootstrap_w1_se(a, b, rng, n_boot=200):
    n = len(a)
    vals = np.empty(n_boot)
    for k in range(n_boot):
        vals[k] = wasserstein1_1d(a[rng.integers(n, size=n)], b[rng.integers(n, size=n)])
    return float(vals.std())


def run_limit_selfcheck(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Pooled-marginal W1 between paired runs at (h, h/2) and (M, 2M)."""
    seeds = SeedTree(cfg.root_seed).child("selfcheck")
    boot_rng = seeds.stream("bootstrap")

    def pooled(label, M, h):
        return np.array(
            _pmap(
                _selfcheck_replica,
                [(cfg, label, M, h, r) for r in range(cfg.replicas)],
                threads,
            )
        )

    rows = []
    a = pooled("h_a", cfg.M, cfg.h)
    b = pooled("h_b", cfg.M, cfg.h / 2.0)
    rows.append(("h", cfg.h, cfg.h / 2.0, wasserstein1_1d(a, b), _bootstrap_w1_se(a, b, boot_rng)))
    a = pooled("M_a", cfg.M, cfg.h)
    b = pooled("M_b", 2 * cfg.M, cfg.h)
    rows.append(("M", float(cfg.M), float(2 * cfg.M), wasserstein1_1d(a, b), _bootstrap_w1_se(a, b, boot_rng)))
    path = _write_csv(
        Path(cfg.out_path) / "limit_selfcheck.csv",
        ("knob", "value_a", "value_b", "w1", "mc_se"),
        rows,
    )
    return ExperimentResult(
        "limit_selfcheck", ("knob", "value_a", "value_b", "w1", "mc_se"), rows, path
    )


EXPERIMENTS = {
    "stable_clt": run_stable_clt,
    "collateral_limit": run_collateral_limit,
    "time_change_poisson": run_time_change_poisson,
    "chaos_sweep": run_chaos_sweep,
    "common_noise": run_common_noise,
    "limit_selfcheck": run_limit_selfcheck,
}


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    return EXPERIMENTS[cfg.experiment](cfg, threads=threads)
