"""Partisan labels, initial affect states, and neighborhood similarity."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class Party(IntEnum):
    """The two party labels; the numeric codes feed the affect response."""

    LEFT = 1
    RIGHT = 2


LEFT = int(Party.LEFT)
RIGHT = int(Party.RIGHT)

IPA_BOUNDS = (50.0, 100.0)
OPA_BOUNDS = (0.0, 50.0)


@dataclass(frozen=True)
class PopulationSpec:
    """Stratified partisan composition: p_b governs non-elites, p_eb elites.

    Each is the fraction of Right-leaning agents within its stratum.
    """

    p_b: float
    p_eb: float
    seed: object = 0

    def validate(self):
        if not 0.0 <= self.p_b <= 1.0:
            raise ValueError(f"p_b must be in [0, 1], got {self.p_b}")
        if not 0.0 <= self.p_eb <= 1.0:
            raise ValueError(f"p_eb must be in [0, 1], got {self.p_eb}")


@dataclass(frozen=True)
class AgentState:
    party: int
    ipa: float
    opa: float


@dataclass
class PopulationState:
    """Array-of-fields view of all agents for one run."""

    parties: np.ndarray  # int8, values in {1, 2}
    ipa: np.ndarray  # float64, within [50, 100]
    opa: np.ndarray  # float64, within [0, 50]

    @property
    def n(self):
        return self.parties.shape[0]

    def agent(self, i):
        return AgentState(int(self.parties[i]), float(self.ipa[i]), float(self.opa[i]))

    def copy(self):
        return PopulationState(self.parties.copy(), self.ipa.copy(), self.opa.copy())


def assign_parties(g, elites, spec):
    """Assign fixed party labels honoring the stratum fractions exactly.

    Exactly round(p_eb * |elites|) elites and round(p_b * |non-elites|)
    non-elites are Right-leaning; which individuals get which label is a
    seeded uniform shuffle within each stratum.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    elite_arr = np.sort(np.fromiter(elites, np.int64, len(elites)))
    if elite_arr.size and (elite_arr[0] < 0 or elite_arr[-1] >= g.n):
        raise ValueError("elite vertex id out of range")
    mask = np.zeros(g.n, bool)
    mask[elite_arr] = True
    non_elite = np.flatnonzero(~mask)

    parties = np.empty(g.n, np.int8)
    for stratum, frac in ((elite_arr, spec.p_eb), (non_elite, spec.p_b)):
        n_right = round(frac * stratum.size)
        perm = rng.permutation(stratum)
        parties[perm[:n_right]] = RIGHT
        parties[perm[n_right:]] = LEFT
    return parties


def init_affect(parties, seed):
    """Draw initial agent states: ipa uniform on [50, 100), opa on (0, 50)."""
    rng = np.random.default_rng(seed)
    n = parties.shape[0]
    ipa = 50.0 + 50.0 * rng.random(n)
    # rng.random() can hit 0.0 exactly; nudge to keep the interval open.
    opa = np.maximum(50.0 * rng.random(n), 1e-12)
    return PopulationState(parties=np.asarray(parties, np.int8), ipa=ipa, opa=opa)


def _same_party_counts(g, parties):
    p = np.asarray(parties)
    same = p[g.src] == p[g.tgt]
    return np.bincount(g.tgt[same], minlength=g.n)


def similarity(g, parties, v):
    """Fraction of v's in-neighbors sharing v's party; None if v has none."""
    deg = int(g.in_degree[v])
    if deg == 0:
        return None
    nbrs = g.in_neighbors_of(v)
    p = np.asarray(parties)
    return float(np.count_nonzero(p[nbrs] == p[v]) / deg)


def similarity_all(g, parties):
    """Per-vertex similarity as an array, NaN where in-degree is zero."""
    same = _same_party_counts(g, parties).astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = same / g.in_degree
    out[g.in_degree == 0] = np.nan
    return out


def mean_similarity(g, parties, subset="all", elites=None):
    """Mean neighborhood similarity over a subset of vertices.

    ``subset`` is "all", "elites", "non-elites", or an explicit iterable of
    vertex ids. Vertices with no in-neighbors are excluded; an empty subset
    after exclusion is an error.
    """
    sims = similarity_all(g, parties)
    if isinstance(subset, str):
        if subset == "all":
            chosen = sims
        else:
            if elites is None:
                raise ValueError("subset by stratum requires the elite set")
            mask = np.zeros(g.n, bool)
            mask[np.fromiter(elites, np.int64, len(elites))] = True
            if subset == "elites":
                chosen = sims[mask]
            elif subset == "non-elites":
                chosen = sims[~mask]
            else:
                raise ValueError(f"unknown subset {subset!r}")
    else:
        idx = np.asarray(list(subset), np.int64)
        chosen = sims[idx]
    chosen = chosen[~np.isnan(chosen)]
    if chosen.size == 0:
        raise ValueError("no vertices with in-neighbors in the requested subset")
    return float(chosen.mean())
