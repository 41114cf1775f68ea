"""Directed scale-free network generation and structural queries.

The generator follows the static weight-based construction: vertex ranks get
power-law sampling weights ``rank**(-mu)`` with ``mu = 1/(gamma - 1)``, the
in- and out-weight rankings are shuffled independently of each other, and
(source, target) pairs are drawn in proportion to the weights, rejecting
self-loops and duplicates until the requested edge count is reached. The
resulting in- and out-degree tails follow power laws with the requested
exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

# Sampling attempts allowed per requested edge before generation fails.
ATTEMPT_BUDGET_FACTOR = 100
_BATCH = 1 << 17


class GenerationFailure(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


@dataclass(frozen=True)
class GraphSpec:
    """Parameters of one generated network."""

    n: int
    m: int
    gamma_in: float = 2.5
    gamma_out: float = 2.5
    seed: object = 0  # int or numpy SeedSequence

    def validate(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 vertices, got n={self.n}")
        if self.m < 0:
            raise ValueError(f"edge count must be non-negative, got m={self.m}")
        if self.m > self.n * (self.n - 1):
            raise ValueError(
                f"m={self.m} exceeds the maximum of n*(n-1)={self.n * (self.n - 1)} "
                f"simple directed edges on n={self.n} vertices"
            )
        if self.gamma_in <= 2 or self.gamma_out <= 2:
            raise ValueError("power-law exponents must be > 2")


class DirectedGraph:
    """Static simple digraph; edge (u, v) means content flows from u to v.

    Stores the edge list in acceptance order plus a CSR view of the
    out-adjacency. Instances are immutable by convention and safe to share
    read-only across concurrent simulation runs.
    """

    __slots__ = ("n", "src", "tgt", "out_indptr", "out_indices", "in_degree",
                 "_in_indptr", "_in_indices")

    def __init__(self, n, src, tgt, validate=False):
        self.n = int(n)
        self.src = np.asarray(src, np.int32)
        self.tgt = np.asarray(tgt, np.int32)
        if validate:
            self._validate_edges()
        order = np.argsort(self.src, kind="stable")
        counts = np.bincount(self.src, minlength=self.n)
        self.out_indptr = np.zeros(self.n + 1, np.int64)
        np.cumsum(counts, out=self.out_indptr[1:])
        self.out_indices = self.tgt[order]
        self.in_degree = np.bincount(self.tgt, minlength=self.n).astype(np.int64)
        self._in_indptr = None
        self._in_indices = None

    def _validate_edges(self):
        if self.src.size != self.tgt.size:
            raise ValueError("source/target arrays differ in length")
        if self.src.size:
            if self.src.min() < 0 or self.src.max() >= self.n:
                raise ValueError("source vertex id out of range")
            if self.tgt.min() < 0 or self.tgt.max() >= self.n:
                raise ValueError("target vertex id out of range")
            if np.any(self.src == self.tgt):
                raise ValueError("self-loops are not allowed")
            keys = self.src.astype(np.int64) * self.n + self.tgt
            if np.unique(keys).size != keys.size:
                raise ValueError("duplicate edges are not allowed")

    @classmethod
    def from_edges(cls, n, edges):
        """Build (and validate) a graph from an iterable of (source, target)."""
        arr = np.asarray(list(edges), np.int64).reshape(-1, 2)
        return cls(n, arr[:, 0], arr[:, 1], validate=True)

    @property
    def m(self):
        return int(self.src.size)

    @property
    def edges(self):
        return list(zip(self.src.tolist(), self.tgt.tolist()))

    def out_neighbors(self, v):
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def _build_in_csr(self):
        order = np.argsort(self.tgt, kind="stable")
        counts = np.bincount(self.tgt, minlength=self.n)
        self._in_indptr = np.zeros(self.n + 1, np.int64)
        np.cumsum(counts, out=self._in_indptr[1:])
        self._in_indices = self.src[order]

    def in_neighbors_of(self, v):
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")
        if self._in_indptr is None:
            self._build_in_csr()
        return self._in_indices[self._in_indptr[v]:self._in_indptr[v + 1]]


def generate_scale_free(spec, backend=None):
    """Generate a simple digraph with power-law in/out-degree tails.

    Deterministic for a given spec (seed included). Raises ValueError for an
    infeasible spec and GenerationFailure if rejection sampling exceeds
    ``ATTEMPT_BUDGET_FACTOR * m`` candidate draws.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    ranks = np.arange(1, spec.n + 1, dtype=np.float64)
    w_out = (ranks ** (-1.0 / (spec.gamma_out - 1.0)))[rng.permutation(spec.n)]
    w_in = (ranks ** (-1.0 / (spec.gamma_in - 1.0)))[rng.permutation(spec.n)]
    cum_out = np.cumsum(w_out)
    cum_out /= cum_out[-1]
    cum_in = np.cumsum(w_in)
    cum_in /= cum_in[-1]

    sink = kernels.make_edge_sink(spec.n, backend)
    budget = ATTEMPT_BUDGET_FACTOR * spec.m
    attempts = 0
    accepted = 0
    while accepted < spec.m:
        if attempts >= budget:
            raise GenerationFailure(
                f"gave up after {attempts} sampling attempts with "
                f"{accepted}/{spec.m} edges accepted (budget {budget})"
            )
        b = min(_BATCH, budget - attempts)
        src = np.searchsorted(cum_out, rng.random(b), side="right")
        tgt = np.searchsorted(cum_in, rng.random(b), side="right")
        got, used = sink.offer(src, tgt, spec.m - accepted, budget - attempts)
        accepted += got
        attempts += used
    src, tgt = sink.edges()
    return DirectedGraph(spec.n, src, tgt)


def in_neighbors(g, v):
    """Set of vertices with an edge into v."""
    return set(g.in_neighbors_of(v).tolist())


def nearest_rank_percentile(values, q):
    """Nearest-rank percentile: value at rank ceil(q * len) of the sorted list."""
    arr = np.sort(np.asarray(values))
    if arr.size == 0:
        raise ValueError("percentile of empty collection")
    rank = math.ceil(q * arr.size)
    return arr[max(rank, 1) - 1]


def elite_set(g):
    """Vertices with in-degree strictly above the 90th percentile.

    Nearest-rank convention; ties at the threshold are excluded, so a graph
    with all-equal in-degrees has no elites.
    """
    if g.n == 0:
        raise ValueError("elite_set of empty graph")
    q90 = nearest_rank_percentile(g.in_degree, 0.9)
    return set(np.flatnonzero(g.in_degree > q90).tolist())


def degree_tail_slope(degrees, nbins=16):
    """Least-squares slope of log(count) vs log(degree) over the top decade.

    Degrees in [max/10, max] are histogrammed into ``nbins`` equal-width
    bins; empty bins are dropped and log(count) is regressed on log(bin
    center). For a power-law tail with exponent gamma the expected slope
    is about -gamma (the empty-bin truncation flattens it slightly).
    """
    degs = np.asarray(degrees)
    degs = degs[degs > 0]
    if degs.size == 0:
        raise ValueError("no positive degrees")
    dmax = float(degs.max())
    lo = dmax / 10.0
    sel = degs[degs >= lo].astype(float)
    edges = np.linspace(lo, dmax + 1e-9, nbins + 1)
    counts, _ = np.histogram(sel, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    keep = counts > 0
    if keep.sum() < 3:
        raise ValueError("not enough occupied bins in the top decade to fit")
    slope = np.polyfit(np.log(centers[keep]), np.log(counts[keep].astype(float)), 1)[0]
    return float(slope)


def save_edge_list(g, path):
    """Write the graph as text: header ``n m``, then one ``source target`` per line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for s, t in zip(g.src.tolist(), g.tgt.tolist()):
            fh.write(f"{s} {t}\n")


def load_edge_list(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        src = np.empty(m, np.int64)
        tgt = np.empty(m, np.int64)
        for i in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError(f"{path}: malformed edge line {i + 2}")
            src[i], tgt[i] = int(parts[0]), int(parts[1])
        if fh.readline().strip():
            raise ValueError(f"{path}: trailing content after {m} edges")
    return DirectedGraph(n, src, tgt, validate=True)
