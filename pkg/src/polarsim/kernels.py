"""Hot inner-loop kernels with a numba JIT path and a pure-numpy fallback.

The two backends are interchangeable and bit-identical: all randomness is
drawn by the caller from a single ``numpy.random.Generator`` and handed to
the kernels as plain float arrays, so the numbers consumed (and therefore
every downstream result) do not depend on which backend executes them.

Backend selection: the ``POLARSIM_BACKEND`` environment variable may be set
to ``numba`` or ``numpy``. Default is ``numba`` when importable, else the
numpy fallback. ``benchmarks/bench_backends.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit, types
    from numba.typed import Dict as NumbaDict

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on numba-less installs
    HAS_NUMBA = False

_ENV_VAR = "POLARSIM_BACKEND"

# Items with an id below the prune threshold can never be delivered again,
# so their reshare bookkeeping is dropped. Sentinel prunes everything.
PRUNE_ALL = np.int64(2**62)


def available_backends():
    names = ["numpy"]
    if HAS_NUMBA:
        names.insert(0, "numba")
    return names


def default_backend():
    """Resolve the backend name from the environment."""
    name = os.environ.get(_ENV_VAR, "").strip().lower()
    if name:
        if name not in ("numba", "numpy"):
            raise ValueError(f"unknown {_ENV_VAR} value {name!r} (use 'numba' or 'numpy')")
        if name == "numba" and not HAS_NUMBA:
            raise ValueError(f"{_ENV_VAR}={name} but numba is not importable")
        return name
    return "numba" if HAS_NUMBA else "numpy"


def _resolve(name):
    if name is None:
        return default_backend()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    return name


# ---------------------------------------------------------------------------
# pure-numpy backend
# ---------------------------------------------------------------------------


def _fanout_np(vertices, items, slants, indptr, indices, u, p_re):
    counts = indptr[vertices + 1] - indptr[vertices]
    total = int(counts.sum())
    starts = np.repeat(indptr[vertices], counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    neighbors = indices[starts + offsets]
    keep = u < p_re
    return (
        np.repeat(items, counts)[keep],
        np.repeat(slants, counts)[keep],
        neighbors[keep],
    )


class NumpyEngine:
    """Cascade bookkeeping backed by per-item boolean reshare masks."""

    name = "numpy"

    def __init__(self, n):
        self.n = int(n)
        self._seen = {}  # item id -> bool[n], True where the agent already reshared

    def delivery_reshares(self, q_item, q_target, matched, u, p_r):
        """Indices (ascending) of queued deliveries that trigger a reshare.

        A delivery is a candidate when the target's party matches the item
        slant and its reshare coin succeeds; among candidates the first
        occurrence per (item, target) wins and agents that reshared the item
        in an earlier step are skipped. Winners are marked as reshared.
        """
        cand = np.flatnonzero(matched & (u < p_r))
        if cand.size == 0:
            return cand
        keys = q_item[cand] * self.n + q_target[cand]
        _, first = np.unique(keys, return_index=True)
        cand = cand[np.sort(first)]
        items = q_item[cand]
        targets = q_target[cand]
        keep = np.ones(cand.size, bool)
        for it in np.unique(items):
            sel = items == it
            mask = self._seen.get(int(it))
            if mask is None:
                mask = np.zeros(self.n, bool)
                self._seen[int(it)] = mask
            tg = targets[sel]
            fresh = ~mask[tg]
            keep[sel] = fresh
            mask[tg[fresh]] = True
        return cand[keep]

    def mark_reshared(self, items, agents):
        for it, ag in zip(items.tolist(), agents.tolist()):
            mask = self._seen.get(it)
            if mask is None:
                mask = np.zeros(self.n, bool)
                self._seen[it] = mask
            mask[ag] = True

    def prune(self, min_alive_item):
        self._seen = {it: m for it, m in self._seen.items() if it >= min_alive_item}

    def seen_pairs(self):
        """Set of (item, agent) reshare records; used by tests."""
        out = set()
        for it, mask in self._seen.items():
            for ag in np.flatnonzero(mask):
                out.add((int(it), int(ag)))
        return out

    @staticmethod
    def fanout(vertices, items, slants, indptr, indices, u, p_re):
        return _fanout_np(vertices, items, slants, indptr, indices, u, p_re)


class NumpyEdgeSink:
    """Accumulates accepted (source, target) pairs during edge sampling."""

    name = "numpy"

    def __init__(self, n):
        self.n = int(n)
        self._keys = np.empty(0, np.int64)
        self._src = []
        self._tgt = []

    def offer(self, src, tgt, need, attempts_left):
        """Consume candidates in order; returns (accepted, attempts used)."""
        if need <= 0 or attempts_left <= 0:
            return 0, 0
        take = min(src.shape[0], attempts_left)
        src = src[:take]
        tgt = tgt[:take]
        keys = src * self.n + tgt
        ok = src != tgt
        if self._keys.size:
            pos = np.searchsorted(self._keys, keys)
            pos_c = np.minimum(pos, self._keys.size - 1)
            ok &= ~((pos < self._keys.size) & (self._keys[pos_c] == keys))
        first = np.zeros(take, bool)
        _, first_idx = np.unique(keys, return_index=True)
        first[first_idx] = True
        accept = ok & first
        cum = np.cumsum(accept)
        if cum.size and cum[-1] >= need:
            cut = int(np.searchsorted(cum, need))
            consumed = cut + 1
            accept[consumed:] = False
        else:
            consumed = take
        idx = np.flatnonzero(accept)
        if idx.size:
            self._src.append(src[idx])
            self._tgt.append(tgt[idx])
            self._keys = np.sort(np.concatenate([self._keys, keys[idx]]))
        return int(idx.size), consumed

    def edges(self):
        if not self._src:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        return np.concatenate(self._src), np.concatenate(self._tgt)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _delivery_reshares_jit(q_item, q_target, matched, u, p_r, seen, n):
        out = np.empty(q_item.shape[0], np.int64)
        k = 0
        for i in range(q_item.shape[0]):
            if matched[i] and u[i] < p_r:
                key = q_item[i] * n + q_target[i]
                if key not in seen:
                    seen[key] = np.uint8(1)
                    out[k] = i
                    k += 1
        return out[:k]

    @njit(cache=True)
    def _mark_reshared_jit(items, agents, seen, n):
        for i in range(items.shape[0]):
            seen[items[i] * n + agents[i]] = np.uint8(1)

    @njit(cache=True)
    def _prune_jit(seen, n, min_alive_item):
        kept = NumbaDict.empty(types.int64, types.uint8)
        for key in seen:
            if key // n >= min_alive_item:
                kept[key] = np.uint8(1)
        return kept

    @njit(cache=True)
    def _fanout_jit(vertices, items, slants, indptr, indices, u, p_re):
        out_item = np.empty(u.shape[0], np.int64)
        out_slant = np.empty(u.shape[0], np.int8)
        out_target = np.empty(u.shape[0], np.int32)
        k = 0
        c = 0
        for j in range(vertices.shape[0]):
            v = vertices[j]
            for e in range(indptr[v], indptr[v + 1]):
                if u[c] < p_re:
                    out_item[k] = items[j]
                    out_slant[k] = slants[j]
                    out_target[k] = indices[e]
                    k += 1
                c += 1
        return out_item[:k], out_slant[:k], out_target[:k]

    @njit(cache=True)
    def _accept_edges_jit(src, tgt, n, seen, need, attempts_left):
        take = min(src.shape[0], attempts_left)
        out_s = np.empty(take, np.int64)
        out_t = np.empty(take, np.int64)
        k = 0
        consumed = 0
        for i in range(take):
            consumed += 1
            s = src[i]
            t = tgt[i]
            if s == t:
                continue
            key = s * n + t
            if key in seen:
                continue
            seen[key] = np.uint8(1)
            out_s[k] = s
            out_t[k] = t
            k += 1
            if k == need:
                break
        return out_s[:k], out_t[:k], consumed

    class NumbaEngine:
        name = "numba"

        def __init__(self, n):
            self.n = int(n)
            self._seen = NumbaDict.empty(types.int64, types.uint8)

        def delivery_reshares(self, q_item, q_target, matched, u, p_r):
            return _delivery_reshares_jit(
                q_item, q_target.astype(np.int64), matched, u, p_r, self._seen, self.n
            )

        def mark_reshared(self, items, agents):
            _mark_reshared_jit(items, agents.astype(np.int64), self._seen, self.n)

        def prune(self, min_alive_item):
            self._seen = _prune_jit(self._seen, self.n, min_alive_item)

        def seen_pairs(self):
            return {(int(k) // self.n, int(k) % self.n) for k in self._seen}

        @staticmethod
        def fanout(vertices, items, slants, indptr, indices, u, p_re):
            return _fanout_jit(
                vertices.astype(np.int64), items, slants, indptr, indices, u, p_re
            )

    class NumbaEdgeSink:
        name = "numba"

        def __init__(self, n):
            self.n = int(n)
            self._seen = NumbaDict.empty(types.int64, types.uint8)
            self._src = []
            self._tgt = []

        def offer(self, src, tgt, need, attempts_left):
            if need <= 0 or attempts_left <= 0:
                return 0, 0
            s, t, consumed = _accept_edges_jit(src, tgt, self.n, self._seen, need, attempts_left)
            if s.size:
                self._src.append(s)
                self._tgt.append(t)
            return int(s.size), int(consumed)

        def edges(self):
            if not self._src:
                return np.empty(0, np.int64), np.empty(0, np.int64)
            return np.concatenate(self._src), np.concatenate(self._tgt)


def make_engine(n, backend=None):
    """Per-run cascade engine (owns the reshare bookkeeping)."""
    name = _resolve(backend)
    if name == "numba":
        return NumbaEngine(n)
    return NumpyEngine(n)


def make_edge_sink(n, backend=None):
    name = _resolve(backend)
    if name == "numba":
        return NumbaEdgeSink(n)
    return NumpyEdgeSink(n)
