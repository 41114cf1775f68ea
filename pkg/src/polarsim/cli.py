"""Command-line interface: graph generation, single-cell runs, sweeps, survey stats.

Flag defaults mirror the full-scale model parameterization (10k agents, 1M
edges, 600 steps, 10 runs, p_e=0.01, p_r=1, p_re=0.5). All subcommands are
thin adapters over the library; exit status is 0 on success and nonzero with
a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys

from . import experiment, graph, survey
from .dynamics import DynamicsParams
from .graph import GraphSpec
from .population import PopulationSpec


def _backend_flag(p):
    p.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend (default: POLARSIM_BACKEND or numba if available)")


def _build_parser():
    parser = argparse.ArgumentParser(prog="polarsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-graph", help="generate a scale-free digraph edge list")
    p.add_argument("--n", type=int, default=10_000, help="vertex count (default 10000)")
    p.add_argument("--m", type=int, default=1_000_000, help="edge count (default 1000000)")
    p.add_argument("--gamma-in", type=float, default=2.5, help="in-degree exponent (default 2.5)")
    p.add_argument("--gamma-out", type=float, default=2.5, help="out-degree exponent (default 2.5)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output edge-list path")
    _backend_flag(p)
    p.set_defaults(func=cmd_generate_graph)

    p = sub.add_parser("simulate", help="run the Monte Carlo runs of one grid cell")
    p.add_argument("--p-b", type=float, default=0.5, help="Right-leaning share of non-elites")
    p.add_argument("--p-eb", type=float, default=0.5, help="Right-leaning share of elites")
    p.add_argument("--alpha", type=float, default=1.0, help="affective asymmetry, >= 1 (default 1)")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--m", type=int, default=1_000_000)
    p.add_argument("--gamma-in", type=float, default=2.5)
    p.add_argument("--gamma-out", type=float, default=2.5)
    p.add_argument("--t-f", type=int, default=600, help="simulation steps (default 600)")
    p.add_argument("--runs", type=int, default=10, help="Monte Carlo runs (default 10)")
    p.add_argument("--p-e", type=float, default=0.01, help="source-exposure rate (default 0.01)")
    p.add_argument("--p-r", type=float, default=1.0, help="reshare probability (default 1)")
    p.add_argument("--p-re", type=float, default=0.5, help="retweet-exposure rate (default 0.5)")
    p.add_argument("--update-rule", choices=("selective", "joint"), default="selective")
    p.add_argument("--seed", type=int, default=42, help="master seed")
    p.add_argument("--fixed-graph", action="store_true",
                   help="share one graph across runs instead of regenerating per run")
    p.add_argument("--out", required=True, help="output timeseries CSV path")
    _backend_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a full bias-grid sweep and write the three CSVs")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="sweep config file (YAML)")
    src.add_argument("--preset", choices=sorted(experiment.PRESETS),
                     help="built-in configuration instead of a config file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threads", type=int, default=1, help="worker-pool width (default 1)")
    p.add_argument("--seed", type=int, default=None,
                   help="override the master seed of the preset/config")
    _backend_flag(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("survey-stats", help="aggregate a respondent-level survey CSV by outlet")
    p.add_argument("--input", required=True, help="respondent CSV path")
    p.add_argument("--out", required=True, help="output aggregate CSV path")
    p.set_defaults(func=cmd_survey_stats)

    return parser


def cmd_generate_graph(args):
    spec = GraphSpec(n=args.n, m=args.m, gamma_in=args.gamma_in,
                     gamma_out=args.gamma_out, seed=args.seed)
    g = graph.generate_scale_free(spec, backend=args.backend)
    graph.save_edge_list(g, args.out)
    print(f"wrote {g.m} edges on {g.n} vertices to {args.out}")
    return 0


def cmd_simulate(args):
    base = experiment.SimConfig(
        graph=GraphSpec(n=args.n, m=args.m, gamma_in=args.gamma_in, gamma_out=args.gamma_out),
        population=PopulationSpec(p_b=args.p_b, p_eb=args.p_eb),
        dynamics=DynamicsParams(p_e=args.p_e, p_r=args.p_r, p_re=args.p_re,
                                alpha=args.alpha, update_rule=args.update_rule),
        t_f=args.t_f,
        master_seed=args.seed,
    )
    base.validate()
    series, _ = experiment.run_cell(base, args.p_b, args.p_eb, args.alpha, args.runs,
                                    fixed_graph=args.fixed_graph, backend=args.backend)
    try:
        cid = experiment.configuration_id(args.p_b, args.p_eb)
    except ValueError:
        cid = 0  # off the canonical 3x3 grid
    experiment.write_cell_timeseries(args.out, cid, args.p_b, args.p_eb, args.alpha, series)
    print(f"wrote {len(series)} runs x {len(series[0])} steps to {args.out}")
    return 0


def cmd_sweep(args):
    if args.config:
        sweep = experiment.load_config(args.config)
    else:
        sweep = experiment.PRESETS[args.preset]()
    if args.seed is not None:
        sweep = experiment.SweepConfig(
            base=experiment.SimConfig(
                graph=sweep.base.graph, population=sweep.base.population,
                dynamics=sweep.base.dynamics, t_f=sweep.base.t_f, master_seed=args.seed),
            p_b_values=sweep.p_b_values, p_eb_values=sweep.p_eb_values,
            alpha_values=sweep.alpha_values, runs=sweep.runs, fixed_graph=sweep.fixed_graph)
    result = experiment.run_sweep(sweep, args.out_dir, workers=args.threads,
                                  backend=args.backend)
    print(f"wrote {result.timeseries_path}, {result.aggregate_path}, {result.tmax_path}")
    return 0


def cmd_survey_stats(args):
    survey.aggregate_survey_file(args.input, args.out)
    print(f"wrote outlet aggregates to {args.out}")
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
