"""Undirected simple graphs used as cascade substrates.

Vertices are the integers 0..n-1.  Graphs are immutable after
construction and store adjacency in CSR form (sorted neighbor arrays),
which keeps neighbor iteration cheap for the simulators and estimators.

Random generators (Erdos-Renyi and a planted-block model) are seeded and
deterministic given their arguments.  Edge sampling uses geometric gap
skipping over linearized pair indices, so the cost is proportional to
the number of edges produced rather than the number of vertex pairs.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

import numpy as np

from .exceptions import GraphFileError
from .validation import check_probability, check_positive_int, check_vertex, check_vertex_set

__all__ = [
    "Graph",
    "generate_er",
    "generate_sbm",
    "degree_into",
    "neighborhood",
    "save_graph",
    "load_graph",
]


class Graph:
    """Immutable undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "_edges", "_indptr", "_indices")

    def __init__(self, n: int, edges: np.ndarray):
        """Build from a validated (m, 2) int64 array with u < v per row.

        Use :meth:`from_edges` for arbitrary (and checked) edge input.
        """
        self.n = int(n)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            # single combined-key sort is much cheaper than lexsort here
            order = np.argsort(edges[:, 0] * self.n + edges[:, 1])
            self._edges = edges[order]
            # CSR adjacency: both directions of every edge, neighbors sorted
            src = np.concatenate([self._edges[:, 0], self._edges[:, 1]])
            dst = np.concatenate([self._edges[:, 1], self._edges[:, 0]])
            counts = np.bincount(src, minlength=self.n)
            self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
            self._indices = dst[np.argsort(src * self.n + dst)]
        else:
            self._edges = edges.reshape(0, 2)
            self._indptr = np.zeros(self.n + 1, dtype=np.int64)
            self._indices = np.empty(0, dtype=np.int64)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Construct from an iterable of unordered pairs, validating them.

        Rejects self-loops, duplicate edges (in either orientation), and
        out-of-range endpoints.
        """
        n = check_positive_int(n, "n")
        seen: set[tuple[int, int]] = set()
        rows = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            rows.append(key)
        arr = np.array(rows, dtype=np.int64) if rows else np.empty((0, 2), np.int64)
        return cls(n, arr)

    @property
    def num_edges(self) -> int:
        return int(self._edges.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor array of v (read-only view)."""
        v = check_vertex(v, self.n)
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def degree(self, v: int) -> int:
        v = check_vertex(v, self.n)
        return int(self._indptr[v + 1] - self._indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def neighbors_of_set(self, vs) -> np.ndarray:
        """Concatenated neighbor arrays of all vertices in vs (with repeats)."""
        if isinstance(vs, np.ndarray):
            varr = vs.astype(np.int64, copy=False)
        elif isinstance(vs, (set, frozenset)):
            varr = np.fromiter(vs, dtype=np.int64, count=len(vs))
        else:
            varr = np.asarray(list(vs), dtype=np.int64)
        if varr.size == 0:
            return np.empty(0, dtype=np.int64)
        starts = self._indptr[varr]
        counts = self._indptr[varr + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        # gather all slices in one shot: per-element offset within its slice
        # is a global arange minus the cumulative count before the slice
        ends = np.cumsum(counts)
        pos = np.arange(total, dtype=np.int64) - np.repeat(ends - counts, counts)
        return self._indices[np.repeat(starts, counts) + pos]

    def edge_array(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, sorted lexicographically."""
        return self._edges

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self._edges}

    def has_edge(self, u: int, v: int) -> bool:
        u = check_vertex(u, self.n)
        v = check_vertex(v, self.n)
        nbrs = self._indices[self._indptr[u]:self._indptr[u + 1]]
        i = np.searchsorted(nbrs, v)
        return bool(i < nbrs.size and nbrs[i] == v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges.shape == other._edges.shape \
            and bool(np.array_equal(self._edges, other._edges))

    def __hash__(self):  # pragma: no cover - identity hashing for immutables
        return id(self)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def _bernoulli_indices(num_items: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of an i.i.d. Bernoulli(p) subset of range(num_items).

    Uses geometric gap skipping so work is O(expected hits).
    """
    if num_items <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(num_items, dtype=np.int64)
    chunks = []
    pos = -1
    while pos < num_items - 1:
        expected = (num_items - 1 - pos) * p
        batch = int(expected + 6.0 * math.sqrt(expected + 1.0)) + 16
        gaps = rng.geometric(p, size=batch).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        inside = idx[idx < num_items]
        chunks.append(inside)
        if inside.size < idx.size:
            break  # crossed the end of the range
        pos = int(idx[-1])
    return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)


def _decode_upper_pairs(idx: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices over {(u,v): u<v} in lex order to (m, 2) pairs."""
    if idx.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    b = 2 * n - 1
    u = ((b - np.sqrt(b * b - 8.0 * idx)) / 2.0).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    # fix float rounding at block boundaries; converges in <= 2 passes
    while True:
        too_big = (u * (b - u)) // 2 > idx
        if not too_big.any():
            break
        u[too_big] -= 1
    while True:
        too_small = ((u + 1) * (b - u - 1)) // 2 <= idx
        if not too_small.any():
            break
        u[too_small] += 1
    v = idx - (u * (b - u)) // 2 + u + 1
    return np.stack([u, v], axis=1)


def generate_er(n: int, p: float, seed: int) -> Graph:
    """Sample a G(n, p) graph: each unordered pair kept with probability p.

    Deterministic given (n, p, seed).
    """
    n = check_positive_int(n, "n")
    p = check_probability(p, "p")
    rng = np.random.default_rng(seed)
    num_pairs = n * (n - 1) // 2
    idx = _bernoulli_indices(num_pairs, p, rng)
    return Graph(n, _decode_upper_pairs(idx, n))


def generate_sbm(
    block_sizes: Sequence[int],
    p_intra: float,
    p_inter: float,
    seed: int,
) -> Graph:
    """Sample a planted-block graph.

    Vertices are grouped into consecutive blocks of the given sizes;
    pairs inside a block are edges with probability p_intra, pairs in
    different blocks with probability p_inter.
    """
    if not block_sizes:
        raise ValueError("block_sizes must contain at least one block")
    sizes = [check_positive_int(s, "block size") for s in block_sizes]
    p_intra = check_probability(p_intra, "p_intra")
    p_inter = check_probability(p_inter, "p_inter")
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    n = int(offsets[-1])
    rng = np.random.default_rng(seed)
    parts = []
    for i, si in enumerate(sizes):
        # intra-block: ER within the block
        idx = _bernoulli_indices(si * (si - 1) // 2, p_intra, rng)
        local = _decode_upper_pairs(idx, si)
        parts.append(local + offsets[i])
        # inter-block: bipartite grid against each later block
        for j in range(i + 1, len(sizes)):
            sj = sizes[j]
            idx = _bernoulli_indices(si * sj, p_inter, rng)
            if idx.size:
                a, c = np.divmod(idx, sj)
                parts.append(np.stack([a + offsets[i], c + offsets[j]], axis=1))
    edges = np.concatenate(parts) if parts else np.empty((0, 2), np.int64)
    return Graph(n, edges)


def degree_into(g: Graph, v: int, w: Iterable[int]) -> int:
    """Number of edges from v into the vertex set w, |adj(v) & w|."""
    v = check_vertex(v, g.n)
    wset = check_vertex_set(w, g.n, "w")
    if not wset:
        return 0
    return int(np.isin(g.neighbors(v), np.fromiter(wset, dtype=np.int64)).sum())


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Union of neighbor sets over s.  May intersect s."""
    sset = check_vertex_set(s, g.n, "s")
    if not sset:
        return frozenset()
    nbrs = g.neighbors_of_set(sset)
    return frozenset(int(v) for v in np.unique(nbrs))


def save_graph(g: Graph, path) -> None:
    """Write the plain-text edge list: `n <count>` header then `u v` lines."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"n {g.n}\n")
        for u, v in g.edge_array():
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Graph:
    """Parse a graph file, reporting the line number of any malformed line."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise GraphFileError("empty file, expected `n <vertex_count>` header", 1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise GraphFileError("expected header `n <vertex_count>`", 1)
    try:
        n = int(head[1])
    except ValueError:
        raise GraphFileError(f"vertex count {head[1]!r} is not an integer", 1) from None
    if n < 1:
        raise GraphFileError("vertex count must be positive", 1)
    seen: set[tuple[int, int]] = set()
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphFileError("expected two vertex ids `u v`", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphFileError(f"non-integer vertex id in {line!r}", lineno) from None
        if u == v:
            raise GraphFileError(f"self-loop at vertex {u}", lineno)
        if not u < v:
            raise GraphFileError(f"edge must satisfy u < v, got {u} {v}", lineno)
        if v >= n:
            raise GraphFileError(f"vertex {v} out of range for n={n}", lineno)
        if (u, v) in seen:
            raise GraphFileError(f"duplicate edge ({u}, {v})", lineno)
        seen.add((u, v))
        rows.append((u, v))
    arr = np.array(rows, dtype=np.int64) if rows else np.empty((0, 2), np.int64)
    return Graph(n, arr)
