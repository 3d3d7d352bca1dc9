"""Matplotlib figure rendering for experiment outputs.

Each experiment gets one PNG next to its CSV, summarizing the rows the
CSV already holds.  Rendering is file-only (Agg backend), no display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .experiments import ExperimentResult

__all__ = ["render_figure"]


def _fig_stable_clt(result, ax):
    rows = np.array([(n, s) for n, s, _ in result.rows], dtype=float)
    ax.loglog(rows[:, 0], rows[:, 1], "o-")
    ax.set_xlabel("N")
    ax.set_ylabel("two-sample KS statistic")
    ax.set_title("Collateral sum vs direct stable draws")


def _fig_collateral_limit(result, ax):
    _, h, stat, n = result.rows[0]
    ax.bar(["KS statistic"], [stat])
    ax.axhline(0.02, color="r", ls="--", lw=1, label="0.02 reference")
    ax.legend()
    ax.set_title(f"Closed-form limit marginal (h={h:g}, n={n})")


def _fig_time_change_poisson(result, ax):
    ps = [p for _, n, p in result.rows if n >= 2 and np.isfinite(p)]
    ax.hist(ps, bins=20, range=(0.0, 1.0))
    ax.set_xlabel("KS p-value vs Exp(1) spacings")
    ax.set_ylabel("replicas")
    frac = result.extras.get("fraction_pass", float("nan"))
    ax.set_title(f"Time-changed event spacings (p>0.01 fraction: {frac:.3f})")


def _fig_chaos_sweep(result, ax):
    rows = result.rows
    times = sorted({t for _, t, _, _ in rows})
    for t in times:
        ns = [n for n, tt, _, _ in rows if tt == t]
        ws = [w for n, tt, w, _ in rows if tt == t]
        ax.loglog(ns, ws, "o-", label=f"t={t:g}")
    ax.set_xlabel("N")
    ax.set_ylabel("pooled-marginal W1")
    ax.legend()
    ax.set_title("Finite-system marginal vs limit reference")


def _fig_common_noise(result, ax):
    rows = np.array(result.rows, dtype=float)
    ax.semilogx(rows[:, 0], rows[:, 1], "o-", label="finite system")
    ax.axhline(rows[0, 2], color="k", ls="--", label="limit reference")
    ctrl = result.extras.get("control_rows")
    if ctrl:
        ctrl = np.array(ctrl, dtype=float)
        ax.semilogx(ctrl[:, 0], ctrl[:, 1], "s--", label="zero-collateral control")
    ax.set_xlabel("N")
    ax.set_ylabel("var of empirical arctan mean")
    ax.legend()
    ax.set_title("Common-noise persistence")


def _fig_limit_selfcheck(result, ax):
    labels = [f"{k}: {a:g} vs {b:g}" for k, a, b, _, _ in result.rows]
    w1 = [w for _, _, _, w, _ in result.rows]
    se = [s for _, _, _, _, s in result.rows]
    ax.bar(labels, w1, yerr=se, capsize=4)
    ax.set_ylabel("pooled-marginal W1")
    ax.set_title("Limit-scheme self-consistency")


_RENDERERS = {
    "stable_clt": _fig_stable_clt,
    "collateral_limit": _fig_collateral_limit,
    "time_change_poisson": _fig_time_change_poisson,
    "chaos_sweep": _fig_chaos_sweep,
    "common_noise": _fig_common_noise,
    "limit_selfcheck": _fig_limit_selfcheck,
}


def render_figure(result: ExperimentResult, out_dir: str | Path) -> Path:
    """Render the experiment's summary figure as PNG; returns its path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    _RENDERERS[result.name](result, ax)
    fig.tight_layout()
    path = Path(out_dir) / f"{result.name}.png"
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
