"""Clocks, timeline distortion, and the clock distortion metric.

A clock partitions the observation timeline 0..N' into consecutive
nonempty intervals, one per process timestep (the oversampling regime:
every timestep receives at least one observation).  Clocks are stored as
their strictly increasing interval endpoints; the width form (one count
per interval) is a lossless conversion.

The metric between two clocks counts the fraction of vertex pairs that
one clock separates into different timesteps and the other does not.
Only per-observation vertex counts matter, so the closed form works on
interval masses; ``distance_bruteforce`` enumerates the pairs directly
and serves as the definitional oracle.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from math import comb

import numpy as np

from .cascade import InfectionSequence
from .validation import check_disjoint_steps, check_positive_int

__all__ = [
    "Clock",
    "ObservedSequence",
    "stretch_distort",
    "aggregate",
    "is_consistent",
    "distance",
    "distance_bruteforce",
    "save_clock",
    "load_clock",
    "save_observed",
    "load_observed",
]


class Clock:
    """Partition of the observation timeline 0..N' into consecutive intervals.

    ``boundaries`` holds the last observation index of every interval, so
    boundaries (2, 3, 5) mean intervals [0..2], [3..3], [4..5].
    """

    __slots__ = ("boundaries",)

    def __init__(self, boundaries: Iterable[int]):
        bounds = tuple(int(b) for b in boundaries)
        if not bounds:
            raise ValueError("a clock needs at least one interval")
        if bounds[0] < 0:
            raise ValueError("boundaries must be non-negative")
        if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
            raise ValueError(f"boundaries must be strictly increasing, got {bounds}")
        object.__setattr__(self, "boundaries", bounds)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Clock is immutable")

    @classmethod
    def identity(cls, n_obs: int) -> "Clock":
        """One interval per observation index."""
        check_positive_int(n_obs, "n_obs")
        return cls(range(n_obs))

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "Clock":
        """Build from interval widths; every width must be positive."""
        if any(int(c) < 1 for c in counts):
            raise ValueError("oversampling clock intervals must be nonempty")
        return cls(np.cumsum([int(c) for c in counts]) - 1)

    def counts(self) -> tuple[int, ...]:
        """Interval widths (number of observations per timestep)."""
        prev = -1
        out = []
        for b in self.boundaries:
            out.append(b - prev)
            prev = b
        return tuple(out)

    def intervals(self) -> tuple[tuple[int, int], ...]:
        """(first, last) observation index of every interval."""
        prev = -1
        out = []
        for b in self.boundaries:
            out.append((prev + 1, b))
            prev = b
        return tuple(out)

    @property
    def num_intervals(self) -> int:
        return len(self.boundaries)

    @property
    def num_observations(self) -> int:
        return self.boundaries[-1] + 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clock):
            return NotImplemented
        return self.boundaries == other.boundaries

    def __hash__(self):
        return hash(self.boundaries)

    def __len__(self) -> int:
        return len(self.boundaries)

    def __repr__(self) -> str:
        return f"Clock(boundaries={self.boundaries!r})"


class ObservedSequence:
    """Disjoint per-observation vertex sets; empty observations permitted."""

    __slots__ = ("steps",)

    def __init__(self, steps: Iterable[Iterable[int]]):
        tsteps = tuple(frozenset(int(v) for v in s) for s in steps)
        if not tsteps:
            raise ValueError("an observed sequence needs at least one step")
        check_disjoint_steps(tsteps, "observed sequence")
        object.__setattr__(self, "steps", tsteps)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("ObservedSequence is immutable")

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i) -> frozenset[int]:
        return self.steps[i]

    def __iter__(self):
        return iter(self.steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ObservedSequence):
            return NotImplemented
        return self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self) -> str:
        return f"ObservedSequence({[sorted(s) for s in self.steps]!r})"

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.steps)

    @property
    def total(self) -> int:
        return sum(len(s) for s in self.steps)


def stretch_distort(
    seq: InfectionSequence,
    l: int,
    seed: int,
) -> tuple[ObservedSequence, Clock]:
    """Stretch every timestep into l observations.

    Each vertex of step j is placed uniformly at random into one of the
    l observation slots for that step.  The returned clock has every
    interval of width exactly l, and aggregating the observation with it
    recovers the input sequence.
    """
    l = check_positive_int(l, "stretch factor l")
    rng = np.random.default_rng(seed)
    slots: list[set[int]] = [set() for _ in range(l * len(seq))]
    for j, step in enumerate(seq):
        verts = sorted(step)
        if verts:
            picks = rng.integers(0, l, size=len(verts))
            for v, k in zip(verts, picks):
                slots[j * l + int(k)].add(v)
    clock = Clock([(j + 1) * l - 1 for j in range(len(seq))])
    return ObservedSequence(slots), clock


def _aggregate_sets(obs: ObservedSequence, c: Clock) -> list[frozenset[int]]:
    if c.num_observations != len(obs):
        raise ValueError(
            f"clock covers observations 0..{c.num_observations - 1} "
            f"but the sequence has {len(obs)} observations"
        )
    out = []
    for first, last in c.intervals():
        merged: set[int] = set()
        for j in range(first, last + 1):
            merged |= obs[j]
        out.append(frozenset(merged))
    return out


def aggregate(obs: ObservedSequence, c: Clock) -> InfectionSequence:
    """Merge observations interval by interval into a process sequence."""
    return InfectionSequence(_aggregate_sets(obs, c))


def is_consistent(seq: InfectionSequence, obs: ObservedSequence, c: Clock) -> bool:
    """True iff aggregating obs with c reproduces seq exactly."""
    if c.num_observations != len(obs) or c.num_intervals != len(seq):
        return False
    merged = _aggregate_sets(obs, c)
    return all(a == b for a, b in zip(merged, seq))


def _interval_masses(sizes: np.ndarray, boundaries: Sequence[int]) -> np.ndarray:
    cum = np.concatenate([[0], np.cumsum(sizes)])
    ends = np.asarray(boundaries, dtype=np.int64)
    starts = np.concatenate([[-1], ends[:-1]])
    return cum[ends + 1] - cum[starts + 1]


def _unordered_pairs(masses: np.ndarray) -> int:
    return int(np.sum(masses * (masses - 1) // 2))


def _check_metric_inputs(obs_sizes, c0: Clock, c1: Clock) -> tuple[np.ndarray, int]:
    sizes = np.asarray(list(obs_sizes), dtype=np.int64)
    if np.any(sizes < 0):
        raise ValueError("observation sizes must be non-negative")
    if c0.num_observations != sizes.size or c1.num_observations != sizes.size:
        raise ValueError(
            f"clocks must partition the same timeline as the sizes: "
            f"got {sizes.size} observations, clocks end at "
            f"{c0.boundaries[-1]} and {c1.boundaries[-1]}"
        )
    n = int(sizes.sum())
    if n < 2:
        raise ValueError("the metric needs at least two observed vertices")
    return sizes, n


def distance(obs_sizes: Iterable[int], c0: Clock, c1: Clock) -> float:
    """Fraction of vertex pairs that exactly one of the clocks separates.

    Computed in closed form on interval masses: with a_b the number of
    pairs left together by clock b and a_01 the same count on the merged
    (common refinement) boundaries, the count of disagreeing pairs is
    a_0 + a_1 - 2 * a_01.  Integer arithmetic throughout; the division
    by C(n, 2) happens last.
    """
    sizes, n = _check_metric_inputs(obs_sizes, c0, c1)
    a0 = _unordered_pairs(_interval_masses(sizes, c0.boundaries))
    a1 = _unordered_pairs(_interval_masses(sizes, c1.boundaries))
    merged = sorted(set(c0.boundaries) | set(c1.boundaries))
    a01 = _unordered_pairs(_interval_masses(sizes, merged))
    return (a0 + a1 - 2 * a01) / comb(n, 2)


def distance_bruteforce(obs_sizes: Iterable[int], c0: Clock, c1: Clock) -> float:
    """Same metric by direct enumeration of all vertex pairs (test oracle)."""
    sizes, n = _check_metric_inputs(obs_sizes, c0, c1)
    obs_index = np.repeat(np.arange(sizes.size), sizes)

    def interval_of(clock: Clock) -> np.ndarray:
        ends = np.asarray(clock.boundaries, dtype=np.int64)
        return np.searchsorted(ends, obs_index)

    i0 = interval_of(c0)
    i1 = interval_of(c1)
    sep0 = i0[:, None] != i0[None, :]
    sep1 = i1[:, None] != i1[None, :]
    disagree = int(np.triu(sep0 ^ sep1, k=1).sum())
    return disagree / comb(n, 2)


def save_clock(c: Clock, path) -> None:
    """Write the JSON boundary array, e.g. [2, 3, 5]."""
    with open(path, "w", encoding="ascii") as fh:
        json.dump(list(c.boundaries), fh)
        fh.write("\n")


def load_clock(path) -> Clock:
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(b, int) for b in data):
        raise ValueError(f"{path}: expected a JSON array of boundary integers")
    return Clock(data)


def save_observed(obs: ObservedSequence, path) -> None:
    """Write an observed sequence as a JSON array of sorted vertex arrays."""
    with open(path, "w", encoding="ascii") as fh:
        json.dump([sorted(s) for s in obs], fh)
        fh.write("\n")


def load_observed(path) -> ObservedSequence:
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(s, list) for s in data):
        raise ValueError(f"{path}: expected a JSON array of vertex arrays")
    return ObservedSequence(data)
