"""Empirical-measure utilities and distances between atom samples.

Samples are plain 1-D arrays of equal-weight atoms.  The order-1
Wasserstein distance between equal-size samples is computed exactly via
order statistics (the monotone coupling is optimal for convex costs).
For the truncated-concave metric d_q the monotone coupling is only an
upper bound; an exact optimum is available for tiny samples by
exhaustive assignment search.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np
from scipy import stats

__all__ = [
    "wasserstein1_1d",
    "d_q",
    "wasserstein_dq",
    "ks_statistic",
    "empirical_apply",
]

_EXACT_LIMIT = 10


def _as_sample(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty sample")
    if not np.isfinite(arr).all():
        raise ValueError("sample contains non-finite values")
    return arr


def wasserstein1_1d(a, b) -> float:
    """Exact order-1 Wasserstein distance between equal-size samples."""
    xa, xb = _as_sample(a), _as_sample(b)
    if xa.size != xb.size:
        raise ValueError("samples must have equal atom counts; resample first")
    return float(np.mean(np.abs(np.sort(xa) - np.sort(xb))))


def d_q(x: float, y: float, q: float) -> float:
    """Truncated-concave metric min(|x-y|, |x-y|**q) for 0 < q < 1."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    r = abs(x - y)
    return min(r, r**q)


def wasserstein_dq(a, b, q: float) -> tuple[float, float | None]:
    """(upper bound, exact) Wasserstein distance under the d_q metric.

    The bound is the monotone-coupling cost; concave costs need not be
    minimized by it, so the exact optimum is computed by exhaustive
    permutation search, and only for samples of at most 10 atoms
    (None otherwise).
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    xa, xb = np.sort(_as_sample(a)), np.sort(_as_sample(b))
    if xa.size != xb.size:
        raise ValueError("samples must have equal atom counts; resample first")
    r = np.abs(xa - xb)
    bound = float(np.mean(np.minimum(r, r**q)))
    if xa.size > _EXACT_LIMIT:
        return bound, None
    best = bound
    for perm in permutations(range(xa.size)):
        r = np.abs(xa - xb[list(perm)])
        cost = float(np.mean(np.minimum(r, r**q)))
        if cost < best:
            best = cost
    return bound, best


def ks_statistic(a, b) -> tuple[float, float]:
    """Kolmogorov-Smirnov statistic and asymptotic p-value.

    b may be a second sample (two-sample test) or a callable CDF
    (one-sample test).
    """
    xa = _as_sample(a)
    if callable(b):
        res = stats.ks_1samp(xa, b)
    else:
        res = stats.ks_2samp(xa, _as_sample(b), method="asymp")
    return float(res.statistic), float(res.pvalue)


def empirical_apply(sample, g) -> float:
    """Mean of g over the atoms of the sample."""
    return float(np.mean(g(_as_sample(sample))))
