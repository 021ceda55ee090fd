"""Discrete-time spreading processes and their per-step statistics.

Two simulators are provided:

* independent cascade: every active-to-uninfected edge transmits with
  probability ``p_n``, then every still-uninfected vertex is infected
  externally with probability ``p_e``; both arrivals land in the same
  step.
* linear threshold: a vertex joins at the first step where the infected
  fraction of its neighbors strictly exceeds its threshold.

The module also evaluates the conditional expectation of the next step's
infection count (the quantity the greedy clock estimator thresholds
against) and the exact log-probability of one observed transition (the
quantity the segmentation baseline maximizes).
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .validation import (
    check_disjoint_steps,
    check_positive_int,
    check_probability,
    check_vertex_set,
)

__all__ = [
    "CascadeParams",
    "InfectionSequence",
    "simulate_ic",
    "simulate_lt",
    "sample_next_step",
    "frontier",
    "expected_next",
    "log_likelihood_step",
    "save_sequence",
    "load_sequence",
]

NEG_INF = float("-inf")


@dataclass(frozen=True)
class CascadeParams:
    """Independent-cascade parameters.

    p_n: probability that an infection crosses an edge in one step.
    p_e: probability that an uninfected vertex is infected externally
         in one step.
    """

    p_n: float
    p_e: float = 0.0

    def __post_init__(self):
        check_probability(self.p_n, "p_n")
        check_probability(self.p_e, "p_e")


class InfectionSequence:
    """Ordered pairwise-disjoint vertex sets, one per process timestep.

    The first step must be nonempty; later steps may be empty (an
    externally driven process can have quiet steps).
    """

    __slots__ = ("steps",)

    def __init__(self, steps: Iterable[Iterable[int]]):
        tsteps = tuple(frozenset(int(v) for v in s) for s in steps)
        if not tsteps:
            raise ValueError("an infection sequence needs at least one step")
        if not tsteps[0]:
            raise ValueError("the initial infection set must be nonempty")
        check_disjoint_steps(tsteps, "infection sequence")
        object.__setattr__(self, "steps", tsteps)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("InfectionSequence is immutable")

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i) -> frozenset[int]:
        return self.steps[i]

    def __iter__(self):
        return iter(self.steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (InfectionSequence,)):
            return NotImplemented
        return self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self) -> str:
        return f"InfectionSequence({[sorted(s) for s in self.steps]!r})"

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.steps)

    @property
    def total(self) -> int:
        return sum(len(s) for s in self.steps)

    def infected_through(self, t: int) -> frozenset[int]:
        """Union of steps 0..t (the running infected set)."""
        out: set[int] = set()
        for s in self.steps[: t + 1]:
            out |= s
        return frozenset(out)


def _step_arrays(steps: Sequence[frozenset[int]]) -> list[np.ndarray]:
    return [np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in steps]


def _ic_step(
    g: Graph,
    params: CascadeParams,
    infected: np.ndarray,
    active: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One independent-cascade transition; returns the new set, sorted."""
    p_n, p_e = params.p_n, params.p_e
    nbrs = g.neighbors_of_set(active)
    if nbrs.size:
        uniq, cnt = np.unique(nbrs, return_counts=True)
        keep = ~infected[uniq]
        front, deg = uniq[keep], cnt[keep]
    else:
        front = deg = np.empty(0, dtype=np.int64)
    if p_e == 0.0:
        if front.size == 0:
            return np.empty(0, dtype=np.int64)
        p_inf = 1.0 - (1.0 - p_n) ** deg
        return front[rng.random(front.size) < p_inf]
    # external channel reaches every uninfected vertex
    uninf = np.flatnonzero(~infected)
    survival = np.full(uninf.size, 1.0 - p_e)
    if front.size:
        pos = np.searchsorted(uninf, front)
        survival[pos] *= (1.0 - p_n) ** deg
    return uninf[rng.random(uninf.size) < 1.0 - survival]


def simulate_ic(
    g: Graph,
    params: CascadeParams,
    s0: Iterable[int],
    max_steps: int,
    seed: int,
) -> InfectionSequence:
    """Run the independent cascade from the seed set s0.

    Performs at most max_steps transitions after step 0.  Stops early
    when every vertex is infected, or when a step infects nobody and
    there is no external channel (p_e = 0); in the latter case the empty
    step is not recorded.  Deterministic given the seed.
    """
    s0set = check_vertex_set(s0, g.n, "s0")
    if not s0set:
        raise ValueError("s0 must be nonempty")
    max_steps = check_positive_int(max_steps, "max_steps")
    rng = np.random.default_rng(seed)
    infected = np.zeros(g.n, dtype=bool)
    active = np.fromiter(sorted(s0set), dtype=np.int64, count=len(s0set))
    infected[active] = True
    steps: list[frozenset[int]] = [s0set]
    for _ in range(max_steps):
        if infected.all():
            break
        new = _ic_step(g, params, infected, active, rng)
        if new.size == 0 and params.p_e == 0.0:
            break
        steps.append(frozenset(int(v) for v in new))
        infected[new] = True
        active = new
    return InfectionSequence(steps)


def sample_next_step(
    g: Graph,
    params: CascadeParams,
    seq: InfectionSequence,
    seed: int,
) -> frozenset[int]:
    """Draw one continuation step of the IC process after the given prefix."""
    rng = np.random.default_rng(seed)
    infected = np.zeros(g.n, dtype=bool)
    for s in seq:
        check_vertex_set(s, g.n, "sequence step")
        infected[list(s)] = True
    active = np.fromiter(sorted(seq[-1]), dtype=np.int64, count=len(seq[-1]))
    new = _ic_step(g, params, infected, active, rng)
    return frozenset(int(v) for v in new)


def simulate_lt(
    g: Graph,
    thresholds: Sequence[float] | None,
    s0: Iterable[int],
    max_steps: int,
    seed: int | None = None,
) -> InfectionSequence:
    """Run the linear-threshold process.

    A vertex joins at the first step where the infected fraction of its
    neighbors strictly exceeds its threshold, so a threshold of 1 never
    fires.  Pass explicit per-vertex thresholds, or None plus a seed to
    draw them uniformly from [0, 1).  Deterministic given thresholds.
    """
    s0set = check_vertex_set(s0, g.n, "s0")
    if not s0set:
        raise ValueError("s0 must be nonempty")
    max_steps = check_positive_int(max_steps, "max_steps")
    if thresholds is None:
        if seed is None:
            raise ValueError("a seed is required when thresholds are sampled")
        theta = np.random.default_rng(seed).random(g.n)
    else:
        theta = np.asarray(list(thresholds), dtype=float)
        if theta.shape != (g.n,):
            raise ValueError(f"need one threshold per vertex, got {theta.size} for n={g.n}")
        if np.any((theta < 0.0) | (theta > 1.0)):
            raise ValueError("thresholds must lie in [0, 1]")
    infected = np.zeros(g.n, dtype=bool)
    s0arr = np.fromiter(sorted(s0set), dtype=np.int64, count=len(s0set))
    infected[s0arr] = True
    deg = g.degrees()
    infected_nbrs = np.zeros(g.n, dtype=np.int64)
    touched = g.neighbors_of_set(s0arr)
    np.add.at(infected_nbrs, touched, 1)
    steps: list[frozenset[int]] = [s0set]
    for _ in range(max_steps):
        if infected.all():
            break
        with np.errstate(invalid="ignore"):
            frac = np.where(deg > 0, infected_nbrs / np.maximum(deg, 1), 0.0)
        new = np.flatnonzero(~infected & (frac > theta))
        if new.size == 0:
            break
        steps.append(frozenset(int(v) for v in new))
        infected[new] = True
        np.add.at(infected_nbrs, g.neighbors_of_set(new), 1)
    return InfectionSequence(steps)


def frontier(g: Graph, seq: InfectionSequence, t: int) -> frozenset[int]:
    """Uninfected neighbors of step t: N(S_t) minus the union of S_0..S_t."""
    if not 0 <= t < len(seq):
        raise ValueError(f"step index {t} out of range for sequence of length {len(seq)}")
    infected = seq.infected_through(t)
    nbrs = g.neighbors_of_set(np.fromiter(sorted(seq[t]), dtype=np.int64, count=len(seq[t])))
    if nbrs.size == 0:
        return frozenset()
    return frozenset(int(v) for v in np.unique(nbrs)) - infected


def _frontier_degrees(
    g: Graph,
    active: np.ndarray,
    infected: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Frontier vertex ids (ascending) and their edge counts from the active set."""
    nbrs = g.neighbors_of_set(active)
    if nbrs.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    uniq, cnt = np.unique(nbrs, return_counts=True)
    keep = ~infected[uniq]
    return uniq[keep], cnt[keep]


def _mu_value(
    g: Graph,
    params: CascadeParams,
    active: np.ndarray,
    infected: np.ndarray,
    infected_count: int,
) -> float:
    """Expected size of the next step given current state.

    p_e * (#uninfected non-frontier) plus, per frontier vertex v,
    p_e + (1 - p_e) * (1 - (1 - p_n)^{deg_active(v)}).
    """
    p_n, p_e = params.p_n, params.p_e
    front, deg = _frontier_degrees(g, active, infected)
    outside = g.n - front.size - infected_count
    total = p_e * outside
    if front.size:
        total += float(np.sum(p_e + (1.0 - p_e) * (1.0 - (1.0 - p_n) ** deg)))
    return float(total)


def expected_next(g: Graph, params: CascadeParams, seq: InfectionSequence) -> float:
    """Conditional expectation of |S_{t+1}| given the prefix seq = S_0..S_t."""
    infected = np.zeros(g.n, dtype=bool)
    count = 0
    for s in seq:
        check_vertex_set(s, g.n, "sequence step")
        infected[list(s)] = True
        count += len(s)
    active = np.fromiter(sorted(seq[-1]), dtype=np.int64, count=len(seq[-1]))
    return _mu_value(g, params, active, infected, count)


def _assemble_loglik(
    log_q: np.ndarray,
    log_1mq: np.ndarray,
    in_newly: np.ndarray,
    n_newly_nonfrontier: int,
    n_survivor_nonfrontier: int,
    p_e: float,
) -> float:
    """Combine per-frontier terms with the closed-form non-frontier mass."""
    total = 0.0
    if log_q.size:
        total += float(np.sum(np.where(in_newly, log_1mq, log_q)))
    if n_newly_nonfrontier:
        if p_e == 0.0:
            return NEG_INF
        total += n_newly_nonfrontier * math.log(p_e)
    if n_survivor_nonfrontier:
        if p_e == 1.0:
            return NEG_INF
        total += n_survivor_nonfrontier * math.log1p(-p_e)
    return total


def _frontier_logs(
    g: Graph,
    params: CascadeParams,
    active: np.ndarray,
    infected: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frontier ids with the log survival / log infection probability per vertex."""
    front, deg = _frontier_degrees(g, active, infected)
    q = (1.0 - params.p_e) * (1.0 - params.p_n) ** deg
    with np.errstate(divide="ignore"):
        log_q = np.log(q)
        log_1mq = np.log1p(-q)
    return front, log_q, log_1mq


def log_likelihood_step(
    g: Graph,
    params: CascadeParams,
    infected_before: Iterable[int],
    active: Iterable[int],
    newly_infected: Iterable[int],
) -> float:
    """Log-probability that one IC step infects exactly ``newly_infected``.

    ``active`` is the set transmitting this step and must be contained in
    ``infected_before``; ``newly_infected`` must be disjoint from it.
    Every uninfected vertex survives the step with probability
    q_v = (1 - p_e) * (1 - p_n)^{deg_active(v)}.  Returns -inf for
    impossible transitions.
    """
    before = check_vertex_set(infected_before, g.n, "infected_before")
    act = check_vertex_set(active, g.n, "active")
    newly = check_vertex_set(newly_infected, g.n, "newly_infected")
    if not act <= before:
        raise ValueError("active must be a subset of infected_before")
    if newly & before:
        raise ValueError("newly_infected must be disjoint from infected_before")
    infected = np.zeros(g.n, dtype=bool)
    infected[list(before)] = True
    act_arr = np.fromiter(sorted(act), dtype=np.int64, count=len(act))
    front, log_q, log_1mq = _frontier_logs(g, params, act_arr, infected)
    newly_arr = np.fromiter(sorted(newly), dtype=np.int64, count=len(newly))
    in_newly = np.isin(front, newly_arr) if front.size else np.empty(0, dtype=bool)
    n_uninf = g.n - len(before)
    n_newly_front = int(in_newly.sum())
    n_newly_nonfront = len(newly) - n_newly_front
    n_survivor_nonfront = n_uninf - front.size - n_newly_nonfront
    return _assemble_loglik(
        log_q, log_1mq, in_newly, n_newly_nonfront, n_survivor_nonfront, params.p_e
    )


def save_sequence(seq, path) -> None:
    """Write a step sequence as a JSON array of sorted vertex arrays."""
    with open(path, "w", encoding="ascii") as fh:
        json.dump([sorted(s) for s in seq], fh)
        fh.write("\n")


def load_sequence(path) -> InfectionSequence:
    """Read an infection sequence from its JSON file format."""
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(s, list) for s in data):
        raise ValueError(f"{path}: expected a JSON array of vertex arrays")
    return InfectionSequence(data)
