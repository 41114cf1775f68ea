"""Sweep harness: bias grid x affective asymmetry x Monte Carlo runs.

Every run draws its own random stream from (master_seed, p_b, p_eb, alpha,
run index) via ``numpy.random.SeedSequence`` spawn keys, so cells are
independent of each other and of execution order: removing a cell from the
grid, reordering cells, or spreading runs over a worker pool cannot change
any output byte.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import yaml

from .dynamics import DynamicsParams, run
from .graph import GraphSpec, elite_set, generate_scale_free
from .metrics import RunTimeSeries, aggregate_runs, mean_time_to_max
from .population import PopulationSpec, assign_parties, init_affect

NOT_REACHED = "NOT_REACHED"

TIMESERIES_COLUMNS = ["config_id", "p_b", "p_eb", "alpha", "run", "t", "ap", "ipa_mean", "opa_mean"]
AGGREGATE_COLUMNS = ["config_id", "p_b", "p_eb", "alpha", "t",
                     "ap_mean", "ap_sd", "ipa_mean", "ipa_sd", "opa_mean", "opa_sd"]
TMAX_COLUMNS = ["config_id", "p_b", "p_eb", "alpha", "t_max_mean", "t_max_sd", "n_reached", "M"]


@dataclass(frozen=True)
class SimConfig:
    """Full parameterization of a single simulation run family."""

    graph: GraphSpec
    population: PopulationSpec
    dynamics: DynamicsParams
    t_f: int
    master_seed: int

    def validate(self):
        self.graph.validate()
        self.population.validate()
        if self.t_f < 1:
            raise ValueError(f"t_f must be >= 1, got {self.t_f}")


@dataclass(frozen=True)
class SweepConfig:
    """The bias grid, asymmetry values, and Monte Carlo replication count."""

    base: SimConfig
    p_b_values: tuple = (0.25, 0.5, 0.75)
    p_eb_values: tuple = (0.25, 0.5, 0.75)
    alpha_values: tuple = (1.0, 5.0, 10.0)
    runs: int = 10
    fixed_graph: bool = False

    def validate(self):
        self.base.validate()
        if not (self.p_b_values and self.p_eb_values and self.alpha_values):
            raise ValueError("sweep value lists must be nonempty")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


def full_config(master_seed=42):
    """Full-scale defaults: 10k agents, 1M edges, 600 steps, 10 runs per cell."""
    return SweepConfig(
        base=SimConfig(
            graph=GraphSpec(n=10_000, m=1_000_000),
            population=PopulationSpec(p_b=0.5, p_eb=0.5),
            dynamics=DynamicsParams(),
            t_f=600,
            master_seed=master_seed,
        ),
        runs=10,
    )


# At the desk-scale density (mean degree 20) the full-scale retweet-exposure
# rate of 0.5 makes every cascade saturate its matched population within a
# few hops and affect pins to the thermometer ends almost immediately, which
# erases all composition and asymmetry contrasts. The desk preset lowers the
# per-edge exposure rate to just above the percolation threshold of a
# balanced population (mean out-degree 20 * p_re * 0.5 match rate > 1), the
# regime where polarization develops gradually over the run and the
# composition contrasts the sweep exists to compare are visible.
DESK_P_RE = 0.12
DESK_MASTER_SEED = 7


def desk_config(master_seed=DESK_MASTER_SEED):
    """Workstation-scale preset: 2k agents, 40k edges, 300 steps, 5 runs."""
    return SweepConfig(
        base=SimConfig(
            graph=GraphSpec(n=2000, m=40_000),
            population=PopulationSpec(p_b=0.5, p_eb=0.5),
            dynamics=DynamicsParams(p_re=DESK_P_RE),
            t_f=300,
            master_seed=master_seed,
        ),
        runs=5,
    )


PRESETS = {"full": full_config, "desk": desk_config}


def configuration_id(p_b, p_eb, p_b_values=(0.25, 0.5, 0.75), p_eb_values=(0.25, 0.5, 0.75)):
    """Row-major cell number: elite-bias rows, population-bias columns, from 1."""
    row = list(p_eb_values).index(p_eb)
    col = list(p_b_values).index(p_b)
    return row * len(p_b_values) + col + 1


def _float_key(x):
    bits = int(np.float64(x).view(np.uint64))
    return bits >> 32, bits & 0xFFFFFFFF


def run_seed_sequence(master_seed, p_b, p_eb, alpha, run_index):
    """Independent, collision-free stream per (cell, run).

    The cell parameters enter the SeedSequence spawn key by their float64
    bit patterns, so the derivation depends only on the cell itself, never
    on grid layout or execution order.
    """
    key = (*_float_key(p_b), *_float_key(p_eb), *_float_key(alpha), int(run_index))
    return np.random.SeedSequence(master_seed, spawn_key=key)


_FIXED_GRAPH_TAG = 0xF17ED
_graph_cache = {}


def _fixed_graph(base, backend):
    seed = int(
        np.random.SeedSequence(base.master_seed, spawn_key=(_FIXED_GRAPH_TAG,))
        .generate_state(1, np.uint64)[0]
    )
    spec = replace(base.graph, seed=seed)
    key = (spec.n, spec.m, spec.gamma_in, spec.gamma_out, seed)
    if key not in _graph_cache:
        _graph_cache.clear()
        _graph_cache[key] = generate_scale_free(spec, backend)
    return _graph_cache[key]


def execute_run(base, p_b, p_eb, alpha, run_index, fixed_graph=False, backend=None):
    """One Monte Carlo run of one cell, fully determined by its seeds."""
    ss = run_seed_sequence(base.master_seed, p_b, p_eb, alpha, run_index)
    graph_ss, party_ss, affect_ss, dyn_ss = ss.spawn(4)
    if fixed_graph:
        g = _fixed_graph(base, backend)
    else:
        g = generate_scale_free(replace(base.graph, seed=graph_ss), backend)
    elites = elite_set(g)
    parties = assign_parties(g, elites, PopulationSpec(p_b=p_b, p_eb=p_eb, seed=party_ss))
    pop = init_affect(parties, affect_ss)
    params = replace(base.dynamics, alpha=float(alpha))
    return run(g, pop, params, base.t_f, dyn_ss, backend=backend)


def run_cell(base, p_b, p_eb, alpha, runs, fixed_graph=False, backend=None):
    """All runs of one cell plus their aggregate."""
    try:
        series = [
            execute_run(base, p_b, p_eb, alpha, r, fixed_graph, backend)
            for r in range(runs)
        ]
    except Exception as exc:
        raise RuntimeError(
            f"cell (p_b={p_b}, p_eb={p_eb}, alpha={alpha}) failed: {exc}"
        ) from exc
    return series, aggregate_runs(series)


def _run_task(args):
    base, p_b, p_eb, alpha, r, fixed_graph, backend = args
    try:
        s = execute_run(base, p_b, p_eb, alpha, r, fixed_graph, backend)
    except Exception as exc:
        raise RuntimeError(
            f"cell (p_b={p_b}, p_eb={p_eb}, alpha={alpha}) run {r} failed: {exc}"
        ) from exc
    return s.ap, s.ipa_mean, s.opa_mean


@dataclass(frozen=True)
class SweepResult:
    out_dir: str
    timeseries_path: str
    aggregate_path: str
    tmax_path: str


def _fmt(x):
    return repr(float(x))


def run_sweep(sweep, out_dir, workers=1, backend=None):
    """Execute the full grid and write the three CSV artifacts.

    The CSVs are a pure function of the SweepConfig: worker-pool width and
    scheduling cannot affect their bytes.
    """
    sweep.validate()
    os.makedirs(out_dir, exist_ok=True)
    cells = [
        (p_eb, p_b, alpha)
        for p_eb in sweep.p_eb_values
        for p_b in sweep.p_b_values
        for alpha in sweep.alpha_values
    ]
    tasks = [
        (sweep.base, p_b, p_eb, alpha, r, sweep.fixed_graph, backend)
        for (p_eb, p_b, alpha) in cells
        for r in range(sweep.runs)
    ]
    if workers <= 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))

    ts_path = os.path.join(out_dir, "timeseries.csv")
    agg_path = os.path.join(out_dir, "aggregate.csv")
    tmax_path = os.path.join(out_dir, "tmax.csv")
    with open(ts_path, "w", newline="") as ts_fh, \
            open(agg_path, "w", newline="") as agg_fh, \
            open(tmax_path, "w", newline="") as tmax_fh:
        ts = csv.writer(ts_fh, lineterminator="\n")
        agg = csv.writer(agg_fh, lineterminator="\n")
        tmax = csv.writer(tmax_fh, lineterminator="\n")
        ts.writerow(TIMESERIES_COLUMNS)
        agg.writerow(AGGREGATE_COLUMNS)
        tmax.writerow(TMAX_COLUMNS)
        idx = 0
        for (p_eb, p_b, alpha) in cells:
            cid = configuration_id(p_b, p_eb, sweep.p_b_values, sweep.p_eb_values)
            runs = []
            for r in range(sweep.runs):
                ap, ipa, opa = results[idx]
                idx += 1
                runs.append(RunTimeSeries(ap=ap, ipa_mean=ipa, opa_mean=opa))
                for t in range(ap.shape[0]):
                    ts.writerow([cid, _fmt(p_b), _fmt(p_eb), _fmt(alpha), r, t,
                                 _fmt(ap[t]), _fmt(ipa[t]), _fmt(opa[t])])
            ag = aggregate_runs(runs)
            for t in range(len(ag.ap_mean)):
                agg.writerow([cid, _fmt(p_b), _fmt(p_eb), _fmt(alpha), t,
                              _fmt(ag.ap_mean[t]), _fmt(ag.ap_sd[t]),
                              _fmt(ag.ipa_mean[t]), _fmt(ag.ipa_sd[t]),
                              _fmt(ag.opa_mean[t]), _fmt(ag.opa_sd[t])])
            tm = mean_time_to_max(runs)
            tmax.writerow([
                cid, _fmt(p_b), _fmt(p_eb), _fmt(alpha),
                NOT_REACHED if tm.mean is None else _fmt(tm.mean),
                NOT_REACHED if tm.sd is None else _fmt(tm.sd),
                tm.n_reached, tm.n_runs,
            ])
    return SweepResult(out_dir, ts_path, agg_path, tmax_path)


def write_cell_timeseries(path, config_id, p_b, p_eb, alpha, series_list):
    """Timeseries CSV (sweep schema) for the runs of a single cell."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TIMESERIES_COLUMNS)
        for r, s in enumerate(series_list):
            for t in range(len(s)):
                writer.writerow([config_id, _fmt(p_b), _fmt(p_eb), _fmt(alpha), r, t,
                                 _fmt(s.ap[t]), _fmt(s.ipa_mean[t]), _fmt(s.opa_mean[t])])


# ---------------------------------------------------------------------------
# config file round trip
# ---------------------------------------------------------------------------


def _check_keys(mapping, allowed, context):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ValueError(f"unknown key(s) {sorted(unknown)} in {context}")


def save_config(sweep, path):
    doc = {
        "graph": {
            "n": sweep.base.graph.n,
            "m": sweep.base.graph.m,
            "gamma_in": sweep.base.graph.gamma_in,
            "gamma_out": sweep.base.graph.gamma_out,
        },
        "dynamics": {
            "p_e": sweep.base.dynamics.p_e,
            "p_r": sweep.base.dynamics.p_r,
            "p_re": sweep.base.dynamics.p_re,
            "update_rule": sweep.base.dynamics.update_rule,
        },
        "t_f": sweep.base.t_f,
        "master_seed": sweep.base.master_seed,
        "sweep": {
            "p_b_values": list(sweep.p_b_values),
            "p_eb_values": list(sweep.p_eb_values),
            "alpha_values": list(sweep.alpha_values),
            "runs": sweep.runs,
            "fixed_graph": sweep.fixed_graph,
        },
    }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def load_config(path):
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config must be a mapping")
    _check_keys(doc, ("graph", "dynamics", "t_f", "master_seed", "sweep"), path)
    for section in ("graph", "t_f", "master_seed"):
        if section not in doc:
            raise ValueError(f"{path}: missing required key {section!r}")
    gdoc = doc["graph"]
    _check_keys(gdoc, ("n", "m", "gamma_in", "gamma_out"), "graph")
    if "n" not in gdoc or "m" not in gdoc:
        raise ValueError(f"{path}: graph section needs n and m")
    graph = GraphSpec(
        n=int(gdoc["n"]),
        m=int(gdoc["m"]),
        gamma_in=float(gdoc.get("gamma_in", 2.5)),
        gamma_out=float(gdoc.get("gamma_out", 2.5)),
    )
    ddoc = doc.get("dynamics", {}) or {}
    _check_keys(ddoc, ("p_e", "p_r", "p_re", "update_rule"), "dynamics")
    dynamics = DynamicsParams(
        p_e=float(ddoc.get("p_e", 0.01)),
        p_r=float(ddoc.get("p_r", 1.0)),
        p_re=float(ddoc.get("p_re", 0.5)),
        update_rule=str(ddoc.get("update_rule", "selective")),
    )
    sdoc = doc.get("sweep", {}) or {}
    _check_keys(sdoc, ("p_b_values", "p_eb_values", "alpha_values", "runs", "fixed_graph"), "sweep")
    base = SimConfig(
        graph=graph,
        population=PopulationSpec(p_b=0.5, p_eb=0.5),
        dynamics=dynamics,
        t_f=int(doc["t_f"]),
        master_seed=int(doc["master_seed"]),
    )
    sweep = SweepConfig(
        base=base,
        p_b_values=tuple(float(x) for x in sdoc.get("p_b_values", (0.25, 0.5, 0.75))),
        p_eb_values=tuple(float(x) for x in sdoc.get("p_eb_values", (0.25, 0.5, 0.75))),
        alpha_values=tuple(float(x) for x in sdoc.get("alpha_values", (1.0, 5.0, 10.0))),
        runs=int(sdoc.get("runs", 10)),
        fixed_graph=bool(sdoc.get("fixed_graph", False)),
    )
    sweep.validate()
    return sweep
