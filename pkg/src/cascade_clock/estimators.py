"""Clock estimators: greedy expectation matching, exact-likelihood DP, and
an exhaustive small-instance oracle.

All three consume the same input: the graph, the cascade parameters, the
observed (distorted) sequence, and the known size of the initial set.
The first interval of every estimate is pinned to the shortest observed
prefix whose cumulative vertex count equals that initial size.

* ``fastclock`` grows each interval as far as possible while the
  interval's vertex count stays at or below mu * (1 + mu^(-1/3)), where
  mu is the expected size of the next process step given the estimate so
  far.  One pass over the observations; every vertex and edge is touched
  a bounded number of times.
* ``dp_mlp`` maximizes the exact log-likelihood of the aggregated
  sequence over all segmentations by dynamic programming on (previous
  boundary, current boundary) states; each step's likelihood depends on
  the previous interval (the transmitting set) and the prefix union.
* ``exhaustive_best`` enumerates every segmentation and is the oracle
  the DP is tested against.

Ties in the likelihood estimators break toward fewer intervals, then the
lexicographically smallest boundary list.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from sklearn.base import BaseEstimator

from .cascade import (
    NEG_INF,
    CascadeParams,
    InfectionSequence,
    _assemble_loglik,
    _frontier_logs,
    _mu_value,
)
from .clockwork import Clock, ObservedSequence, aggregate, distance
from .exceptions import InitialSetMismatchError
from .graph import Graph
from .validation import check_positive_int

__all__ = [
    "EstimationInput",
    "fastclock",
    "dp_mlp",
    "exhaustive_best",
    "DPResult",
    "FastClockEstimator",
    "LikelihoodDPEstimator",
    "ExhaustiveLikelihoodEstimator",
]

EXHAUSTIVE_MAX_TIMELINE = 20


@dataclass(frozen=True)
class EstimationInput:
    """Everything an estimator sees: graph, parameters, observations, |S_0|."""

    graph: Graph
    params: CascadeParams
    observed: ObservedSequence
    s0_size: int = 1

    def __post_init__(self):
        check_positive_int(self.s0_size, "s0_size")
        n = self.graph.n
        for j, step in enumerate(self.observed):
            for v in step:
                if not 0 <= v < n:
                    raise ValueError(
                        f"observed step {j} contains vertex {v}, "
                        f"out of range for graph with {n} vertices"
                    )


def _prepare(inp: EstimationInput):
    """Per-step vertex arrays, sizes, cumulative sizes, and the pinned
    first boundary (minimal prefix whose cumulative count is s0_size)."""
    arrays = [
        np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in inp.observed
    ]
    sizes = np.array([a.size for a in arrays], dtype=np.int64)
    cum = np.cumsum(sizes)
    matches = np.flatnonzero(cum == inp.s0_size)
    if matches.size == 0:
        raise InitialSetMismatchError(
            f"no observed prefix accumulates exactly {inp.s0_size} vertices "
            f"(cumulative counts start {cum[:5].tolist()})"
        )
    return arrays, sizes, cum, int(matches[0])


def fastclock(inp: EstimationInput) -> Clock:
    """Greedy expectation-matching clock estimate.

    After pinning the first boundary, repeatedly computes the expected
    next-step size mu for the estimate so far and appends the longest
    block of observations whose total count stays within
    mu * (1 + mu^(-1/3)).  At least one observation is always consumed,
    so the estimate always covers the timeline.
    """
    g, params = inp.graph, inp.params
    arrays, sizes, cum, b0 = _prepare(inp)
    last = len(arrays) - 1

    infected = np.zeros(g.n, dtype=bool)
    active = np.concatenate(arrays[: b0 + 1])
    infected[active] = True
    infected_count = int(cum[b0])

    boundaries = [b0]
    t_obs = b0
    while t_obs != last:
        mu = _mu_value(g, params, active, infected, infected_count)
        threshold = mu + mu ** (2.0 / 3.0)
        end = t_obs + 1
        total = int(sizes[end])
        while end + 1 <= last and total + int(sizes[end + 1]) <= threshold:
            end += 1
            total += int(sizes[end])
        parts = [a for a in arrays[t_obs + 1 : end + 1] if a.size]
        active = np.concatenate(parts) if parts else np.empty(0, np.int64)
        infected[active] = True
        infected_count += total
        boundaries.append(end)
        t_obs = end
    return Clock(boundaries)


class _SegmentScorer:
    """Shared per-transition log-likelihood with per-interval caching.

    ``transition(a, b, c)`` scores the step in which the vertices
    observed in (a..b] transmit and the vertices observed in (b..c]
    are the new arrivals, given that everything through b is infected.
    ``a = -1`` denotes the pinned first interval [0..b].  Values agree
    bit-for-bit with ``log_likelihood_step`` on the same sets.
    """

    def __init__(self, g: Graph, params: CascadeParams, arrays, sizes, cum):
        self.g = g
        self.params = params
        self.arrays = arrays
        self.cum = np.concatenate([[0], cum])  # cum[j] = vertices through step j-1
        masks = []
        mask = np.zeros(g.n, dtype=bool)
        for a in arrays:
            mask = mask.copy()
            mask[a] = True
            masks.append(mask)
        self.masks = masks  # masks[b]: infected through observation b
        self._interval_cache: dict[tuple[int, int], tuple] = {}

    def _interval(self, a: int, b: int):
        key = (a, b)
        hit = self._interval_cache.get(key)
        if hit is not None:
            return hit
        parts = [arr for arr in self.arrays[a + 1 : b + 1] if arr.size]
        active = np.concatenate(parts) if parts else np.empty(0, np.int64)
        infected = self.masks[b]
        front, log_q, log_1mq = _frontier_logs(self.g, self.params, active, infected)
        n_uninf = self.g.n - int(self.cum[b + 1])
        val = (front, log_q, log_1mq, n_uninf)
        self._interval_cache[key] = val
        return val

    def transition(self, a: int, b: int, c: int) -> float:
        front, log_q, log_1mq, n_uninf = self._interval(a, b)
        parts = [arr for arr in self.arrays[b + 1 : c + 1] if arr.size]
        newly = np.concatenate(parts) if parts else np.empty(0, np.int64)
        in_newly = np.isin(front, newly) if front.size else np.empty(0, dtype=bool)
        n_newly_front = int(in_newly.sum())
        n_newly_nonfront = int(newly.size) - n_newly_front
        n_survivor_nonfront = n_uninf - front.size - n_newly_nonfront
        return _assemble_loglik(
            log_q, log_1mq, in_newly, n_newly_nonfront, n_survivor_nonfront,
            self.params.p_e,
        )


@dataclass(frozen=True)
class DPResult:
    """A likelihood estimator's output with its score and a degeneracy flag."""

    clock: Clock
    log_likelihood: float
    degenerate: bool = False


def _better(score_a, entry_a, score_b, entry_b) -> bool:
    """True if (score_a, entry_a) beats (score_b, entry_b) under the
    score-desc, interval-count-asc, lexicographic-asc ordering."""
    if score_a != score_b:
        return score_a > score_b
    if len(entry_a) != len(entry_b):
        return len(entry_a) < len(entry_b)
    return entry_a < entry_b


def _dp_mlp_full(inp: EstimationInput) -> DPResult:
    g, params = inp.graph, inp.params
    arrays, sizes, cum, b0 = _prepare(inp)
    last = len(arrays) - 1
    if b0 == last:
        return DPResult(Clock([last]), 0.0)
    scorer = _SegmentScorer(g, params, arrays, sizes, cum)

    # states[b][a] = (score, boundary tuple) of the best segmentation of
    # observations 0..b whose final interval is (a..b]
    states: dict[int, dict[int, tuple[float, tuple[int, ...]]]] = {b0: {-1: (0.0, (b0,))}}
    for b in range(b0, last):
        here = states.get(b)
        if not here:
            continue
        for a, (score, bounds) in here.items():
            for c in range(b + 1, last + 1):
                t = scorer.transition(a, b, c)
                if t == NEG_INF:
                    continue
                cand_score = score + t
                cand_bounds = bounds + (c,)
                bucket = states.setdefault(c, {})
                prev = bucket.get(b)
                if prev is None or _better(cand_score, cand_bounds, prev[0], prev[1]):
                    bucket[b] = (cand_score, cand_bounds)

    terminal = states.get(last, {})
    best: tuple[float, tuple[int, ...]] | None = None
    for score, bounds in terminal.values():
        if best is None or _better(score, bounds, best[0], best[1]):
            best = (score, bounds)
    if best is None:
        warnings.warn(
            "every segmentation has zero likelihood under the given model; "
            "returning the identity clock",
            RuntimeWarning,
            stacklevel=3,
        )
        return DPResult(Clock.identity(last + 1), NEG_INF, degenerate=True)
    return DPResult(Clock(best[1]), best[0])


def dp_mlp(inp: EstimationInput) -> Clock:
    """Likelihood-maximizing segmentation via dynamic programming.

    Returns the clock whose aggregated sequence has the highest exact
    log-likelihood among all segmentations with the pinned first
    interval.  Falls back to the identity clock (with a warning) when
    every segmentation is impossible under the model.
    """
    return _dp_mlp_full(inp).clock


def _exhaustive_full(inp: EstimationInput) -> DPResult:
    arrays, sizes, cum, b0 = _prepare(inp)
    last = len(arrays) - 1
    if last > EXHAUSTIVE_MAX_TIMELINE:
        raise ValueError(
            f"exhaustive search is limited to timelines of at most "
            f"{EXHAUSTIVE_MAX_TIMELINE + 1} observations, got {last + 1}"
        )
    if b0 == last:
        return DPResult(Clock([last]), 0.0)
    scorer = _SegmentScorer(inp.graph, inp.params, arrays, sizes, cum)
    interior = range(b0 + 1, last)
    best: tuple[float, tuple[int, ...]] | None = None
    for k in range(len(interior) + 1):
        for combo in combinations(interior, k):
            bounds = (b0,) + combo + (last,)
            score = 0.0
            prev_prev = -1
            feasible = True
            for i in range(len(bounds) - 1):
                t = scorer.transition(prev_prev, bounds[i], bounds[i + 1])
                if t == NEG_INF:
                    feasible = False
                    break
                score += t
                prev_prev = bounds[i]
            if not feasible:
                continue
            if best is None or _better(score, bounds, best[0], best[1]):
                best = (score, bounds)
    if best is None:
        warnings.warn(
            "every segmentation has zero likelihood under the given model; "
            "returning the identity clock",
            RuntimeWarning,
            stacklevel=3,
        )
        return DPResult(Clock.identity(last + 1), NEG_INF, degenerate=True)
    return DPResult(Clock(best[1]), best[0])


def exhaustive_best(inp: EstimationInput) -> Clock:
    """Brute-force likelihood maximizer over all segmentations (oracle).

    Refuses timelines longer than 21 observations; the search space is
    exponential.
    """
    return _exhaustive_full(inp).clock


class _ClockEstimatorBase(BaseEstimator):
    """Scikit-learn style front end shared by the clock estimators.

    The graph, cascade parameters, and known initial-set size are
    hyperparameters; ``fit`` consumes an :class:`ObservedSequence` and
    stores the estimated clock as ``clock_``.
    """

    def __init__(self, graph=None, params=None, s0_size=1):
        self.graph = graph
        self.params = params
        self.s0_size = s0_size

    def _input(self, observed: ObservedSequence) -> EstimationInput:
        if self.graph is None or self.params is None:
            raise ValueError("graph and params must be set before estimating")
        return EstimationInput(self.graph, self.params, observed, self.s0_size)

    def _estimate(self, inp: EstimationInput) -> DPResult:
        raise NotImplementedError

    def fit(self, observed: ObservedSequence, y=None):
        """Estimate the clock of ``observed``; stores ``clock_`` and timing."""
        inp = self._input(observed)
        start = time.perf_counter_ns()
        result = self._estimate(inp)
        self.elapsed_ns_ = max(1, time.perf_counter_ns() - start)
        self.clock_ = result.clock
        self.log_likelihood_ = result.log_likelihood
        self.degenerate_ = result.degenerate
        return self

    def predict(self, observed: ObservedSequence) -> Clock:
        """Estimate the clock of a (possibly new) observed sequence."""
        return self._estimate(self._input(observed)).clock

    def transform(self, observed: ObservedSequence) -> InfectionSequence:
        """De-distort: aggregate ``observed`` under its estimated clock."""
        return aggregate(observed, self.predict(observed))

    def score(self, observed: ObservedSequence, true_clock: Clock) -> float:
        """Negative clock distortion against a reference clock (higher is better)."""
        est = self.predict(observed)
        return -distance([len(s) for s in observed], true_clock, est)


class FastClockEstimator(_ClockEstimatorBase):
    """Greedy expectation-matching estimator with linear-time behavior."""

    def _estimate(self, inp: EstimationInput) -> DPResult:
        return DPResult(fastclock(inp), float("nan"))


class LikelihoodDPEstimator(_ClockEstimatorBase):
    """Exact-likelihood segmentation baseline (cubic in the timeline)."""

    def _estimate(self, inp: EstimationInput) -> DPResult:
        return _dp_mlp_full(inp)


class ExhaustiveLikelihoodEstimator(_ClockEstimatorBase):
    """Exponential-time oracle; only for small timelines."""

    def _estimate(self, inp: EstimationInput) -> DPResult:
        return _exhaustive_full(inp)
