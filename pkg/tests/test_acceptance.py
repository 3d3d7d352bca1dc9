"""Acceptance suite: one criterion per test, each printing a single
PASS/FAIL line with the measured quantities before asserting.

These runs are larger than the unit tests (the full suite takes on the
order of 15 minutes); every tolerance is stated inline.
"""

from itertools import permutations

import numpy as np
from scipy import stats

from jumpfield import (
    DoaLaw,
    Drift,
    ExperimentConfig,
    InitialLaw,
    MainJump,
    ModelSpec,
    Rate,
    SeedTree,
    StableParams,
    cumulated_intensity,
    decompose_trajectory,
    run_experiment,
    sample_stable_increments,
    simulate_finite,
    wasserstein1_1d,
    wasserstein_dq,
)

THREADS = 8


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"{name}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def full_model(alpha: float) -> ModelSpec:
    """Reference model: tanh mean-field drift, rate f(x)=1.5+0.5*tanh(x),
    main jumps -0.3*tanh(x) (dropped for alpha > 1), uniform start."""
    return ModelSpec(
        alpha=alpha,
        drift=Drift(kind="mean_tanh", beta=0.5),
        main_jump=MainJump(kind="tanh", kappa=0.3) if alpha < 1 else MainJump(kind="zero"),
        rate=Rate(kind="tanh", c0=1.0, c1=1.0),
        initial_law=InitialLaw(kind="uniform", lo=-1.0, hi=1.0),
    )


def flat_model(alpha: float, c: float) -> ModelSpec:
    return ModelSpec(
        alpha=alpha,
        drift=Drift(kind="zero"),
        main_jump=MainJump(kind="zero"),
        rate=Rate(kind="constant", c=c),
        initial_law=InitialLaw(kind="point", loc=0.0),
    )


def test_ac1_decomposition_identity():
    # N=50, T=5, full alpha=0.5 model: |X - X0 - B - I - J + E| <= 1e-9 * T
    # for every particle at every grid point
    T = 5.0
    bundle = simulate_finite(
        full_model(0.5), 50, T, DoaLaw.symmetric_pareto(0.5), SeedTree(1)
    )
    worst = 0.0
    for i in range(50):
        d = decompose_trajectory(bundle, i)
        recon = bundle.states[0, i] + d.B_path + d.I_path + d.J_path - d.E_path
        worst = max(worst, float(np.max(np.abs(recon - bundle.states[:, i]))))
    ok = worst <= 1e-9 * T
    assert report("AC-1", ok, f"max decomposition residual {worst:.3e} (tol {1e-9 * T:.1e})")


def test_ac2_time_change_bounds():
    # f_lower*(t-s) <= A(t)-A(s) <= f_upper*(t-s) on every grid pair,
    # for three root seeds (tolerance: float rounding only)
    spec = full_model(0.5)
    lo, hi = spec.rate.f_lower, spec.rate.f_upper
    worst = 0.0
    for seed in (1, 2, 3):
        b = simulate_finite(spec, 20, 2.0, DoaLaw.symmetric_pareto(0.5), SeedTree(seed))
        tc = cumulated_intensity(b)
        dt = np.subtract.outer(b.grid, b.grid)
        dA = np.subtract.outer(tc.values, tc.values)
        up = np.triu_indices(len(b.grid), k=1)
        viol = max(
            float(np.max(lo * (-dt[up]) - (-dA[up]))),
            float(np.max((-dA[up]) - hi * (-dt[up]))),
        )
        worst = max(worst, viol)
    ok = worst <= 1e-12
    assert report("AC-2", ok, f"max bound violation {worst:.3e} over 3 seeds (tol 1e-12)")


def test_ac3_unit_rate_poisson_after_time_change():
    # N=100, T=10, f(x)=1.5+0.5*tanh(x): at least 95 of 100 replicas give
    # KS p > 0.01 for Exp(1) spacings of the transformed event times
    cfg = ExperimentConfig(
        experiment="time_change_poisson",
        model=full_model(0.5),
        doa=DoaLaw.symmetric_pareto(0.5),
        N_grid=(100,),
        T=10.0,
        replicas=100,
        root_seed=1,
        out_path="/tmp/jumpfield_acceptance/ac3",
    )
    res = run_experiment(cfg, threads=THREADS)
    n_pass = sum(1 for _, n, p in res.rows if n >= 2 and p > 0.01)
    ok = n_pass >= 95
    assert report("AC-3", ok, f"{n_pass}/100 replicas with KS p > 0.01 (need >= 95)")


def test_ac4_stable_clt_for_collateral_sums():
    # alpha=0.5 symmetric Pareto, f=1, no drift, no main jumps: two-sample
    # KS of J^N_1 vs direct stable draws (a+=a-=0.25) < 0.05 at N=4096 on
    # 5000 replicas, and non-increasing within +-0.01 over N={64,512,4096}
    cfg = ExperimentConfig(
        experiment="stable_clt",
        model=flat_model(0.5, 1.0),
        doa=DoaLaw.symmetric_pareto(0.5),
        N_grid=(64, 512, 4096),
        replicas=5000,
        root_seed=1,
        out_path="/tmp/jumpfield_acceptance/ac4",
    )
    res = run_experiment(cfg, threads=THREADS)
    ks = {n: s for n, s, _ in res.rows}
    ok = ks[4096] < 0.05 and ks[512] <= ks[64] + 0.01 and ks[4096] <= ks[512] + 0.01
    assert report(
        "AC-4",
        ok,
        f"KS stats N=64/512/4096: {ks[64]:.4f}/{ks[512]:.4f}/{ks[4096]:.4f} "
        "(final < 0.05, non-increasing within 0.01)",
    )


def test_ac5_closed_form_limit_marginal():
    # alpha=0.5, f=c=2: pooled X_1 - X_0 of the limit scheme must match
    # c**(1/alpha) = 4 times direct stable draws, KS < 0.02 on 1e5 samples
    cfg = ExperimentConfig(
        experiment="collateral_limit",
        model=flat_model(0.5, 2.0),
        doa=DoaLaw.symmetric_pareto(0.5),
        replicas=100_000,
        h=1e-3,
        root_seed=1,
        out_path="/tmp/jumpfield_acceptance/ac5",
    )
    res = run_experiment(cfg, threads=THREADS)
    stat = res.rows[0][2]
    ok = stat < 0.02
    assert report("AC-5", ok, f"two-sample KS {stat:.4f} on 1e5 samples (tol 0.02)")


def test_ac6_propagation_of_chaos_trend():
    # for alpha=0.5 (with main jumps) and alpha=1.5 (no main jumps): W1
    # between pooled one-particle marginals at t=1 strictly smaller at
    # N=1024 than at N=16, for root seeds 1, 2, 3 (limit reference
    # M=2000, h=1e-3, 200 replicas per N)
    details = []
    ok = True
    for alpha in (0.5, 1.5):
        for seed in (1, 2, 3):
            cfg = ExperimentConfig(
                experiment="chaos_sweep",
                model=full_model(alpha),
                doa=DoaLaw.symmetric_pareto(alpha),
                N_grid=(16, 1024),
                M=2000,
                T=1.0,
                h=1e-3,
                replicas=200,
                output_times=(1.0,),
                root_seed=seed,
                out_path=f"/tmp/jumpfield_acceptance/ac6/a{alpha}_s{seed}",
            )
            res = run_experiment(cfg, threads=THREADS)
            w = {r[0]: r[2] for r in res.rows}
            dec = w[1024] < w[16]
            ok = ok and dec
            details.append(
                f"alpha={alpha} seed={seed}: W1(16)={w[16]:.4g} W1(1024)={w[1024]:.4g}"
                f" {'ok' if dec else 'NOT smaller'}"
            )
    assert report("AC-6", ok, "; ".join(details))


def test_ac7_common_noise_persistence():
    # variance across 200 replicas of the empirical arctan mean at N=1024
    # exceeds 0.5x the limit-system estimate; the zero-collateral control
    # variance is strictly decreasing over N={16,64,256,1024}
    cfg = ExperimentConfig(
        experiment="common_noise",
        model=full_model(0.5),
        doa=DoaLaw.symmetric_pareto(0.5),
        N_grid=(16, 64, 256, 1024),
        M=2000,
        T=1.0,
        h=1e-3,
        replicas=200,
        root_seed=1,
        out_path="/tmp/jumpfield_acceptance/ac7",
    )
    res = run_experiment(cfg, threads=THREADS)
    var_finite = {n: v for n, v, _ in res.rows}
    var_limit = res.extras["var_limit"]
    ctrl = [v for _, v in res.extras["control_rows"]]
    persistent = var_finite[1024] >= 0.5 * var_limit
    decreasing = all(b < a for a, b in zip(ctrl, ctrl[1:]))
    ok = persistent and decreasing
    assert report(
        "AC-7",
        ok,
        f"var_finite(1024)={var_finite[1024]:.4g} vs 0.5*var_limit={0.5 * var_limit:.4g}; "
        f"control vars {['%.3g' % v for v in ctrl]} "
        f"({'strictly decreasing' if decreasing else 'not decreasing'})",
    )


def test_ac8_sampler_self_similarity_and_positivity():
    # KS between S_4 and 4**(1/alpha) * S_1 < 0.02 on 1e5 samples for
    # alpha in {0.5, 1.5}; one-sided alpha=0.5 law: all 1e5 draws >= 0
    stats_out = []
    ok = True
    for alpha in (0.5, 1.5):
        params = StableParams(alpha, 0.25, 0.25)
        tree = SeedTree(8)
        a = sample_stable_increments(params, 4.0, 100_000, tree.stream("a", int(10 * alpha)))
        b = 4.0 ** (1.0 / alpha) * sample_stable_increments(
            params, 1.0, 100_000, tree.stream("b", int(10 * alpha))
        )
        stat = stats.ks_2samp(a, b).statistic
        ok = ok and stat < 0.02
        stats_out.append(f"alpha={alpha}: KS {stat:.4f}")
    sub = sample_stable_increments(StableParams(0.5, 0.5, 0.0), 1.0, 100_000, SeedTree(9).stream("s"))
    n_neg = int(np.sum(sub < 0))
    ok = ok and n_neg == 0
    assert report(
        "AC-8",
        ok,
        "; ".join(stats_out) + f"; subordinator negative draws {n_neg}/100000 (tol 0.02 / 0)",
    )


def test_ac9_metric_oracles():
    # wasserstein1_1d equals exhaustive-coupling values on 100 random
    # 2-4 point instances; wasserstein_dq exact <= bound on 100 random
    # <=8 point instances; the truncated metric never exceeds W1
    rng = np.random.default_rng(9)
    w1_ok = 0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        a = rng.normal(0, 3, n)
        b = rng.normal(1, 2, n)
        brute = min(np.mean(np.abs(a - b[list(p)])) for p in permutations(range(n)))
        if abs(wasserstein1_1d(a, b) - brute) <= 1e-12:
            w1_ok += 1
    dq_ok = 0
    dom_ok = 0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        a = rng.normal(0, 5, n)
        b = rng.normal(0, 5, n)
        bound, exact = wasserstein_dq(a, b, 0.5)
        if exact is not None and exact <= bound + 1e-12:
            dq_ok += 1
        if bound <= wasserstein1_1d(a, b) + 1e-12:
            dom_ok += 1
    ok = w1_ok == 100 and dq_ok == 100 and dom_ok == 100
    assert report(
        "AC-9",
        ok,
        f"W1 exhaustive matches {w1_ok}/100; exact<=bound {dq_ok}/100; "
        f"truncated<=W1 {dom_ok}/100",
    )
