"""Acceptance suite: every criterion runs at its pinned tolerance and
prints one PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

Statistical criteria run on frozen seeds so the suite is deterministic.
"""

import math
import time

import numpy as np

from cascade_clock import (
    CascadeParams,
    Clock,
    EstimationInput,
    Graph,
    aggregate,
    distance,
    distance_bruteforce,
    expected_next,
    generate_er,
    sample_next_step,
    simulate_ic,
    stretch_distort,
)
from cascade_clock.estimators import _dp_mlp_full, _exhaustive_full, fastclock
from cascade_clock.experiments import ERGraphSpec, TrialConfig, run_trial, sweep


def _check(name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, f"{name}: {detail}"


def _random_clock(rng: np.random.Generator, n_obs: int) -> Clock:
    last = n_obs - 1
    interior = [j for j in range(last) if rng.random() < 0.4]
    return Clock(interior + [last])


def _random_sizes(rng: np.random.Generator, n_obs: int, max_total: int):
    while True:
        sizes = rng.integers(0, 5, size=n_obs)
        if 2 <= sizes.sum() <= max_total:
            return sizes.tolist()


def test_metric_oracle_equivalence():
    """distance == distance_bruteforce exactly on 200 random instances."""
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        n_obs = int(rng.integers(2, 51))
        sizes = _random_sizes(rng, n_obs, 200)
        c0, c1 = _random_clock(rng, n_obs), _random_clock(rng, n_obs)
        if distance(sizes, c0, c1) != distance_bruteforce(sizes, c0, c1):
            mismatches += 1
    elapsed = time.perf_counter() - start
    _check(
        "metric-oracle-equivalence",
        mismatches == 0 and elapsed < 1.0,
        f"200 instances, {mismatches} mismatches, {elapsed:.2f}s",
    )


def test_round_trip_identity():
    """aggregate(stretch_distort(seq, l, seed)) == seq for 100 cascades."""
    rng = np.random.default_rng(1002)
    start = time.perf_counter()
    failures = 0
    for i in range(100):
        n = int(rng.integers(15, 50))
        g = generate_er(n, float(rng.uniform(0.1, 0.3)), int(rng.integers(2**63)))
        params = CascadeParams(float(rng.uniform(0.1, 0.9)), float(rng.choice([0.0, 0.01])))
        seq = simulate_ic(g, params, {int(rng.integers(n))}, 6, int(rng.integers(2**63)))
        for l in (1, 2, 3, 5):
            obs, clock = stretch_distort(seq, l, int(rng.integers(2**63)))
            if aggregate(obs, clock) != seq:
                failures += 1
    elapsed = time.perf_counter() - start
    _check(
        "round-trip-identity",
        failures == 0 and elapsed < 1.0,
        f"100 cascades x 4 stretch factors, {failures} failures, {elapsed:.2f}s",
    )


def test_expected_next_monte_carlo_consistency():
    """expected_next within 3 SE of the mean next-step size, 1e4 continuations."""
    rng = np.random.default_rng(1008)
    start = time.perf_counter()
    reps = 10_000
    worst = 0.0
    failures = 0
    for i in range(20):
        n = int(rng.integers(60, 250))
        g = generate_er(n, float(rng.uniform(0.04, 0.25)), int(rng.integers(2**63)))
        params = CascadeParams(float(rng.uniform(0.05, 0.85)), float(rng.choice([0.0, 0.002, 0.02])))
        depth = int(rng.integers(1, 4))
        seq = simulate_ic(g, params, {int(rng.integers(n))}, depth, int(rng.integers(2**63)))
        mu = expected_next(g, params, seq)
        seed0 = int(rng.integers(2**31))
        sizes = np.fromiter(
            (len(sample_next_step(g, params, seq, seed0 + r)) for r in range(reps)),
            dtype=np.int64, count=reps,
        )
        se = sizes.std(ddof=1) / math.sqrt(reps)
        gap = abs(float(sizes.mean()) - mu)
        # the epsilon covers near-deterministic instances whose empirical
        # spread collapses to zero at this sample size
        ok = gap <= 3 * se + 1e-6
        if se > 0:
            worst = max(worst, gap / se)
        failures += not ok
    elapsed = time.perf_counter() - start
    _check(
        "mu-monte-carlo-consistency",
        failures == 0 and elapsed < 30.0,
        f"20 instances x {reps} continuations, worst gap {worst:.2f} SE, {elapsed:.1f}s",
    )


def test_dp_optimality_against_exhaustive():
    """dp_mlp's likelihood equals the exhaustive oracle's on 50 instances."""
    rng = np.random.default_rng(1004)
    start = time.perf_counter()
    mismatches = 0
    for i in range(50):
        n = int(rng.integers(12, 40))
        g = generate_er(n, float(rng.uniform(0.15, 0.4)), int(rng.integers(2**63)))
        params = CascadeParams(float(rng.uniform(0.2, 0.9)), float(rng.choice([0.0, 0.05])))
        l = int(rng.integers(1, 4))
        max_steps = max(1, 11 // l - 1)
        seq = simulate_ic(g, params, {int(rng.integers(n))}, max_steps, int(rng.integers(2**63)))
        obs, _ = stretch_distort(seq, l, int(rng.integers(2**63)))
        inp = EstimationInput(g, params, obs, len(seq[0]))
        dp = _dp_mlp_full(inp)
        ex = _exhaustive_full(inp)
        if dp.log_likelihood != ex.log_likelihood or dp.clock != ex.clock:
            mismatches += 1
    elapsed = time.perf_counter() - start
    _check(
        "dp-optimality",
        mismatches == 0 and elapsed < 60.0,
        f"50 instances (N <= 10), {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_deterministic_recovery_fixture():
    """Star, p_n=1, p_e=0, stretch 2: both estimators at distance 0."""
    start = time.perf_counter()
    star = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    params = CascadeParams(1.0, 0.0)
    seq = simulate_ic(star, params, {0}, 10, 1)
    worst = 0.0
    for seed in range(10):
        obs, truth = stretch_distort(seq, 2, seed)
        inp = EstimationInput(star, params, obs, 1)
        sizes = obs.sizes
        worst = max(worst, distance(sizes, truth, fastclock(inp)))
        worst = max(worst, distance(sizes, truth, _dp_mlp_full(inp).clock))
    elapsed = time.perf_counter() - start
    _check(
        "deterministic-recovery-fixture",
        worst == 0.0 and elapsed < 1.0,
        f"both estimators, 10 placements, max distance {worst}, {elapsed:.2f}s",
    )


def test_er_distance_trend():
    """Greedy estimator distance trend on the default ER grid, 50 trials/point."""
    start = time.perf_counter()
    base = TrialConfig(
        graph=ERGraphSpec(n=3000),
        params=CascadeParams(0.1, 1e-7),
        seed=2,
        stretch=2,
        estimators=("fastclock",),
        max_steps=3,
    )
    rows = sweep(base, "n", [1000, 3000, 4000], 50)
    means = {int(r.value): r.mean_distance for r in rows}
    elapsed = time.perf_counter() - start
    ok = means[4000] <= means[1000] and means[3000] <= 0.05 and elapsed < 600.0
    _check(
        "er-distance-trend",
        ok,
        f"mean d: n=1000 {means[1000]:.4f}, n=3000 {means[3000]:.4f}, "
        f"n=4000 {means[4000]:.4f}, {elapsed:.0f}s",
    )


def test_linear_time_scaling():
    """Doubling n at fixed p*n at most triples the greedy estimator time."""
    start = time.perf_counter()
    edge_rate = 2000.0 ** (2.0 / 3.0)  # p*n held fixed across both sizes
    times = {}
    for n in (2000, 4000):
        per_trial = []
        for t in range(20):
            cfg = TrialConfig(
                graph=ERGraphSpec(n=n, p=edge_rate / n),
                params=CascadeParams(0.1, 1e-7),
                seed=3000 + t,
                stretch=2,
                estimators=("fastclock",),
                max_steps=3,
            )
            result = run_trial(cfg)
            if not result.degenerate:
                per_trial.append(result.records["fastclock"].time_ns)
        times[n] = float(np.mean(per_trial))
    ratio = times[4000] / times[2000]
    elapsed = time.perf_counter() - start
    _check(
        "linear-time-scaling",
        ratio <= 3.0 and elapsed < 120.0,
        f"mean time n=2000 {times[2000]/1e6:.2f}ms, n=4000 {times[4000]/1e6:.2f}ms, "
        f"ratio {ratio:.2f}, {elapsed:.0f}s",
    )


def test_relative_speed_of_estimators():
    """Greedy estimator at least 10x faster than the DP baseline at n=3000."""
    start = time.perf_counter()
    fc_times, dp_times = [], []
    for t in range(10):
        cfg = TrialConfig(
            graph=ERGraphSpec(n=3000),
            params=CascadeParams(0.1, 1e-7),
            seed=4000 + t,
            stretch=2,
            estimators=("fastclock", "dp"),
            max_steps=3,
            dp_cap=60,
        )
        result = run_trial(cfg)
        if result.degenerate or result.records["dp"].skipped:
            continue
        fc_times.append(result.records["fastclock"].time_ns)
        dp_times.append(result.records["dp"].time_ns)
    speedup = float(np.mean(dp_times)) / float(np.mean(fc_times))
    elapsed = time.perf_counter() - start
    _check(
        "relative-speed",
        len(fc_times) >= 8 and speedup >= 10.0 and elapsed < 600.0,
        f"greedy {np.mean(fc_times)/1e6:.2f}ms vs DP {np.mean(dp_times)/1e6:.1f}ms, "
        f"{speedup:.0f}x over {len(fc_times)} trials, {elapsed:.0f}s",
    )


def test_metric_pseudometric_suite():
    """Symmetry exact, self-distance zero, triangle inequality on 100 triples."""
    rng = np.random.default_rng(1005)
    start = time.perf_counter()
    failures = 0
    for _ in range(100):
        n_obs = int(rng.integers(2, 30))
        sizes = _random_sizes(rng, n_obs, 120)
        a, b, c = (_random_clock(rng, n_obs) for _ in range(3))
        if distance(sizes, a, b) != distance(sizes, b, a):
            failures += 1
        if distance(sizes, a, a) != 0.0 or distance(sizes, b, b) != 0.0:
            failures += 1
        if distance(sizes, a, c) > distance(sizes, a, b) + distance(sizes, b, c) + 1e-12:
            failures += 1
    elapsed = time.perf_counter() - start
    _check(
        "metric-pseudometric-suite",
        failures == 0 and elapsed < 1.0,
        f"100 triples, {failures} violations, {elapsed:.2f}s",
    )
