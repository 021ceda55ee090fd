"""Input validation helpers.

Small check_* functions raising ValueError with a named argument, in the
style of estimator libraries, so every public entry point validates the
same way.
"""

from __future__ import annotations

from collections.abc import Iterable


def check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {value!r}")
    return value


def check_positive_int(value: int, name: str) -> int:
    if value != int(value) or int(value) < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_vertex(v: int, n: int, name: str = "vertex") -> int:
    v = int(v)
    if not 0 <= v < n:
        raise ValueError(f"{name} {v} out of range for graph with {n} vertices")
    return v


def check_vertex_set(vs: Iterable[int], n: int, name: str = "vertex set") -> frozenset[int]:
    out = frozenset(int(v) for v in vs)
    for v in out:
        if not 0 <= v < n:
            raise ValueError(f"{name} contains vertex {v}, out of range for n={n}")
    return out


def check_disjoint_steps(steps, what: str) -> None:
    seen: set[int] = set()
    for i, s in enumerate(steps):
        overlap = seen & s
        if overlap:
            raise ValueError(
                f"{what} steps must be pairwise disjoint; "
                f"step {i} repeats vertex {min(overlap)}"
            )
        seen |= s
