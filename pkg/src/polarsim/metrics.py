"""Per-step population metrics and cross-run Monte Carlo aggregates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AP_MAX = 100.0


@dataclass
class RunTimeSeries:
    """Population metrics of one run, indexed by step 0..t_f."""

    ap: np.ndarray
    ipa_mean: np.ndarray
    opa_mean: np.ndarray

    def __len__(self):
        return self.ap.shape[0]

    def validate(self):
        for name in ("ap", "ipa_mean", "opa_mean"):
            if getattr(self, name).shape != self.ap.shape:
                raise ValueError("series length mismatch")
        if np.any(self.ap < 0) or np.any(self.ap > 100):
            raise ValueError("ap out of [0, 100]")
        if np.any(self.ipa_mean < 50) or np.any(self.ipa_mean > 100):
            raise ValueError("ipa_mean out of [50, 100]")
        if np.any(self.opa_mean < 0) or np.any(self.opa_mean > 50):
            raise ValueError("opa_mean out of [0, 50]")


def affective_distance(agent):
    """Gap between warm in-party and cold out-party feelings, in [0, 100]."""
    return agent.ipa - agent.opa


def group_ap(pop):
    """Mean affective distance across the population."""
    if pop.n == 0:
        raise ValueError("group_ap of empty population")
    return float(np.mean(pop.ipa - pop.opa))


@dataclass
class AggregateSeries:
    """Pointwise mean and sample sd across M runs."""

    ap_mean: np.ndarray
    ap_sd: np.ndarray
    ipa_mean: np.ndarray
    ipa_sd: np.ndarray
    opa_mean: np.ndarray
    opa_sd: np.ndarray
    n_runs: int


def _mean_sd(stack):
    # sort along the run axis first so the reduction order, and hence the
    # result, is exactly independent of run ordering
    stack = np.sort(stack, axis=0)
    mean = stack.mean(axis=0)
    if stack.shape[0] < 2:
        return mean, np.zeros_like(mean)
    return mean, stack.std(axis=0, ddof=1)


def aggregate_runs(runs):
    """Pointwise mean and sample sd (ddof=1; sd=0 when M=1) across runs."""
    if not runs:
        raise ValueError("no runs to aggregate")
    length = len(runs[0])
    if any(len(r) != length for r in runs):
        raise ValueError("runs have mismatched lengths")
    ap_m, ap_s = _mean_sd(np.stack([r.ap for r in runs]))
    ipa_m, ipa_s = _mean_sd(np.stack([r.ipa_mean for r in runs]))
    opa_m, opa_s = _mean_sd(np.stack([r.opa_mean for r in runs]))
    return AggregateSeries(ap_m, ap_s, ipa_m, ipa_s, opa_m, opa_s, len(runs))


def time_to_max(series, ap_max=AP_MAX, fraction=0.9):
    """First step where ap reaches fraction*ap_max; None when never reached."""
    hits = np.flatnonzero(series.ap >= fraction * ap_max)
    return int(hits[0]) if hits.size else None


@dataclass
class TimeToMaxSummary:
    mean: float | None  # None when no run reached the threshold
    sd: float | None
    n_reached: int
    n_runs: int


def mean_time_to_max(runs, ap_max=AP_MAX, fraction=0.9):
    """Mean/sd of time_to_max over the runs that reached the threshold."""
    times = [time_to_max(r, ap_max, fraction) for r in runs]
    reached = np.array([t for t in times if t is not None], np.float64)
    if reached.size == 0:
        return TimeToMaxSummary(None, None, 0, len(runs))
    sd = float(reached.std(ddof=1)) if reached.size > 1 else 0.0
    return TimeToMaxSummary(float(reached.mean()), sd, int(reached.size), len(runs))
