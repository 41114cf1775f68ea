"""Discrete-time news exposure, reshare cascades, and affect updates.

Each time unit runs two phases. Deliveries queued by the previous step are
consumed first: every delivery updates the target's affect, and targets whose
party matches the item slant may reshare it (once per item per agent), which
enqueues next-step deliveries along their out-edges. Then fresh source
exposures hit each agent independently and can seed new cascades the same
way. Matched content only raises in-party affect and mismatched content only
lowers out-party affect, both saturating at the thermometer ends, so the
processing order of a step's exposures cannot change the resulting state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .metrics import RunTimeSeries
from .population import IPA_BOUNDS, OPA_BOUNDS, LEFT, RIGHT, AgentState, PopulationState

_PRUNE_EVERY = 32


@dataclass(frozen=True)
class NewsItem:
    """A cascade token: unique id plus binary slant (1 left, 2 right)."""

    id: int
    slant: int


@dataclass(frozen=True)
class PendingDelivery:
    """A delivery created at step t and consumed at step t+1."""

    item: NewsItem
    target: int


@dataclass(frozen=True)
class DynamicsParams:
    p_e: float = 0.01  # per-agent per-step source-exposure probability
    p_r: float = 1.0  # reshare probability given slant match
    p_re: float = 0.5  # per-edge retweet-exposure probability
    alpha: float = 1.0  # affective asymmetry gain, >= 1
    ipa_bounds: tuple = IPA_BOUNDS
    opa_bounds: tuple = OPA_BOUNDS
    update_rule: str = "selective"  # "joint" applies the raw response to both affects

    def __post_init__(self):
        for name in ("p_e", "p_r", "p_re"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.alpha < 1.0:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.update_rule not in ("selective", "joint"):
            raise ValueError(f"unknown update_rule {self.update_rule!r}")


def affect_delta(party, slant, alpha):
    """Signed thermometer increment: +alpha on slant match, -2*alpha on mismatch."""
    return -3.0 * alpha * abs(party - slant) + alpha


def apply_exposure(agent, item, params):
    """One news exposure applied to one agent, returning the updated state.

    Pro-attitudinal content raises ipa only; counter-attitudinal lowers opa
    only (selective rule). Under the "joint" toggle the same signed response
    is added to both affects. Both saturate at the thermometer bounds.
    """
    delta = affect_delta(agent.party, item.slant, params.alpha)
    if params.update_rule == "joint":
        return replace(
            agent,
            ipa=min(max(agent.ipa + delta, params.ipa_bounds[0]), params.ipa_bounds[1]),
            opa=min(max(agent.opa + delta, params.opa_bounds[0]), params.opa_bounds[1]),
        )
    if delta > 0:
        return replace(agent, ipa=min(agent.ipa + delta, params.ipa_bounds[1]))
    return replace(agent, opa=max(agent.opa + delta, params.opa_bounds[0]))


@dataclass
class SimState:
    """Mutable per-run state; the engine owns the reshare bookkeeping."""

    t: int
    pop: PopulationState
    queue: tuple  # (item int64[], slant int8[], target int32[]) due this step
    next_item_id: int
    rng: np.random.Generator
    engine: object
    flip_slants: bool = False


def _empty_queue():
    return (np.empty(0, np.int64), np.empty(0, np.int8), np.empty(0, np.int32))


def make_state(g, pop, seed, backend=None, initial_deliveries=None, flip_slants=False):
    """Fresh SimState; ``initial_deliveries`` seeds the first step's queue."""
    state = SimState(
        t=0,
        pop=pop.copy(),
        queue=_empty_queue(),
        next_item_id=0,
        rng=np.random.default_rng(seed),
        engine=kernels.make_engine(g.n, backend),
        flip_slants=flip_slants,
    )
    if initial_deliveries:
        items = np.array([d.item.id for d in initial_deliveries], np.int64)
        slants = np.array([d.item.slant for d in initial_deliveries], np.int8)
        targets = np.array([d.target for d in initial_deliveries], np.int32)
        state.queue = (items, slants, targets)
        state.next_item_id = int(items.max()) + 1
    return state


def _apply_batch(pop, pro_counts, con_counts, params):
    # Saturating one-direction updates; x + k*alpha clamped once equals the
    # k-fold sequential update, and is identical across backends.
    alpha = params.alpha
    if params.update_rule == "joint":
        net = (pro_counts - 2.0 * con_counts) * alpha
        np.clip(pop.ipa + net, params.ipa_bounds[0], params.ipa_bounds[1], out=pop.ipa)
        np.clip(pop.opa + net, params.opa_bounds[0], params.opa_bounds[1], out=pop.opa)
        return
    np.minimum(pop.ipa + pro_counts * alpha, params.ipa_bounds[1], out=pop.ipa)
    np.maximum(pop.opa + con_counts * (-2.0 * alpha), params.opa_bounds[0], out=pop.opa)


def _fanout(engine, g, rng, vertices, items, slants, p_re):
    total = int((g.out_indptr[vertices + 1] - g.out_indptr[vertices]).sum())
    u = rng.random(total)
    return engine.fanout(vertices, items, slants, g.out_indptr, g.out_indices, u, p_re)


def step(state, g, params):
    """Advance one time unit. Mutates and returns ``state``.

    Random-draw order is fixed (delivery reshares, delivery fanout, source
    exposures, slants, source reshares, source fanout) so trajectories are
    reproducible and backend-independent.
    """
    rng = state.rng
    pop = state.pop
    n = g.n
    q_item, q_slant, q_target = state.queue

    # deliveries queued by the previous step
    u_reshare = rng.random(q_item.shape[0])
    matched = q_slant == pop.parties[q_target]
    _apply_batch(
        pop,
        np.bincount(q_target[matched], minlength=n),
        np.bincount(q_target[~matched], minlength=n),
        params,
    )
    r_idx = state.engine.delivery_reshares(q_item, q_target, matched, u_reshare, params.p_r)
    d_items, d_slants, d_targets = _fanout(
        state.engine, g, rng, q_target[r_idx], q_item[r_idx], q_slant[r_idx], params.p_re
    )

    # fresh source exposures, one independent coin per agent
    exposed = np.flatnonzero(rng.random(n) < params.p_e).astype(np.int32)
    k = exposed.shape[0]
    u_slant = rng.random(k)
    if state.flip_slants:
        slants = np.where(u_slant < 0.5, RIGHT, LEFT).astype(np.int8)
    else:
        slants = np.where(u_slant < 0.5, LEFT, RIGHT).astype(np.int8)
    item_ids = np.arange(state.next_item_id, state.next_item_id + k, dtype=np.int64)
    state.next_item_id += k
    src_matched = slants == pop.parties[exposed]
    _apply_batch(
        pop,
        np.bincount(exposed[src_matched], minlength=n),
        np.bincount(exposed[~src_matched], minlength=n),
        params,
    )
    sel = np.flatnonzero(src_matched & (rng.random(k) < params.p_r))
    state.engine.mark_reshared(item_ids[sel], exposed[sel])
    s_items, s_slants, s_targets = _fanout(
        state.engine, g, rng, exposed[sel], item_ids[sel], slants[sel], params.p_re
    )

    state.queue = (
        np.concatenate([d_items, s_items]),
        np.concatenate([d_slants, s_slants]),
        np.concatenate([d_targets, s_targets]),
    )
    state.t += 1
    if state.t % _PRUNE_EVERY == 0:
        alive = state.queue[0]
        state.engine.prune(np.int64(alive.min()) if alive.size else kernels.PRUNE_ALL)

    # cheap invariant guard; violations would mean a kernel bug
    if pop.ipa.min() < params.ipa_bounds[0] or pop.ipa.max() > params.ipa_bounds[1]:
        raise RuntimeError(f"ipa out of bounds at t={state.t}")
    if pop.opa.min() < params.opa_bounds[0] or pop.opa.max() > params.opa_bounds[1]:
        raise RuntimeError(f"opa out of bounds at t={state.t}")
    return state


def run(g, pop, params, t_f, seed, backend=None, flip_slants=False, initial_deliveries=None):
    """Simulate t_f steps and record population metrics at every t in 0..t_f."""
    if pop.n != g.n:
        raise ValueError(f"population size {pop.n} does not match graph size {g.n}")
    if t_f < 1:
        raise ValueError(f"t_f must be >= 1, got {t_f}")
    state = make_state(g, pop, seed, backend, initial_deliveries, flip_slants)
    ap = np.empty(t_f + 1)
    ipa_mean = np.empty(t_f + 1)
    opa_mean = np.empty(t_f + 1)

    def record(t):
        ipa_mean[t] = state.pop.ipa.mean()
        opa_mean[t] = state.pop.opa.mean()
        ap[t] = np.mean(state.pop.ipa - state.pop.opa)

    record(0)
    for t in range(1, t_f + 1):
        step(state, g, params)
        record(t)
    return RunTimeSeries(ap=ap, ipa_mean=ipa_mean, opa_mean=opa_mean)
