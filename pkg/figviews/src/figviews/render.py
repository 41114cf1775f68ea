"""Render sweep CSVs into publication-style panels.

Consumes the simulator's ``aggregate.csv`` (columns config_id, p_b, p_eb,
alpha, t, ap_mean, ap_sd, ipa_mean, ipa_sd, opa_mean, opa_sd) and
``tmax.csv`` (config_id, p_b, p_eb, alpha, t_max_mean, t_max_sd, n_reached,
M). Rendering is strictly read-only over the CSVs; no simulation math is
recomputed here.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import style

NOT_REACHED = "NOT_REACHED"

AGGREGATE_COLUMNS = ("config_id", "p_b", "p_eb", "alpha", "t",
                     "ap_mean", "ap_sd", "ipa_mean", "ipa_sd", "opa_mean", "opa_sd")
TMAX_COLUMNS = ("config_id", "p_b", "p_eb", "alpha",
                "t_max_mean", "t_max_sd", "n_reached", "M")

METRICS = ("ap", "ipa", "opa", "tmax")


class SchemaError(ValueError):
    """The input CSV does not match the expected sweep schema."""


@dataclass(frozen=True)
class FigureRequest:
    metric: str  # ap | ipa | opa | tmax
    input_path: str
    output_path: str
    image_format: str = "png"

    def validate(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}, expected one of {METRICS}")


def _check_header(fieldnames, required, path):
    if fieldnames is None:
        raise SchemaError(f"{path}: empty file, expected a header row")
    missing = [c for c in required if c not in fieldnames]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {missing}")


def load_aggregate(path):
    """-> {(p_eb, p_b, alpha): list of (t, ap/ipa/opa mean and sd)} rows."""
    cells = defaultdict(list)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, AGGREGATE_COLUMNS, path)
        for row in reader:
            cells[(float(row["p_eb"]), float(row["p_b"]), float(row["alpha"]))].append(
                (int(row["t"]),
                 float(row["ap_mean"]), float(row["ap_sd"]),
                 float(row["ipa_mean"]), float(row["ipa_sd"]),
                 float(row["opa_mean"]), float(row["opa_sd"])))
    if not cells:
        raise SchemaError(f"{path}: no data rows")
    for rows in cells.values():
        rows.sort()
    return dict(cells)


def load_tmax(path):
    """-> list of (config_id, p_eb, p_b, alpha, mean or None, sd, n_reached)."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, TMAX_COLUMNS, path)
        for row in reader:
            reached = int(row["n_reached"])
            if row["t_max_mean"] == NOT_REACHED or reached == 0:
                mean, sd = None, None
            else:
                mean, sd = float(row["t_max_mean"]), float(row["t_max_sd"])
            out.append((int(row["config_id"]), float(row["p_eb"]), float(row["p_b"]),
                        float(row["alpha"]), mean, sd, reached))
    if not out:
        raise SchemaError(f"{path}: no data rows")
    return out


_SERIES_COLUMNS = {"ap": (1, 2), "ipa": (3, 4), "opa": (5, 6)}


def build_grid_figure(metric, cells):
    """Panel grid: elite-bias rows x population-bias columns, one line per
    asymmetry level with a +-sd band."""
    import matplotlib.pyplot as plt

    style.apply()
    mean_col, sd_col = _SERIES_COLUMNS[metric]
    p_eb_values = sorted({k[0] for k in cells})
    p_b_values = sorted({k[1] for k in cells})
    alphas = sorted({k[2] for k in cells})
    nrows, ncols = len(p_eb_values), len(p_b_values)
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows),
                             sharex=True, sharey=True, squeeze=False)
    for i, p_eb in enumerate(p_eb_values):
        for j, p_b in enumerate(p_b_values):
            ax = axes[i][j]
            for k, alpha in enumerate(alphas):
                rows = cells.get((p_eb, p_b, alpha))
                if not rows:
                    continue
                t = np.array([r[0] for r in rows])
                mean = np.array([r[mean_col] for r in rows])
                sd = np.array([r[sd_col] for r in rows])
                color = style.PALETTE[k % len(style.PALETTE)]
                ax.plot(t, mean, color=color, lw=1.2, label=f"asymmetry {alpha:g}")
                ax.fill_between(t, mean - sd, mean + sd, color=color,
                                alpha=style.BAND_ALPHA, lw=0)
            if i == 0:
                ax.set_title(f"Population: {style.bias_label(p_b)}")
            if j == 0:
                ax.set_ylabel(f"Elites: {style.bias_label(p_eb)}")
            if i == nrows - 1:
                ax.set_xlabel("time step")
            ax.set_ylim(*style.Y_LIMITS[metric])
    handles, labels = axes[0][0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="lower center", ncol=max(len(alphas), 1),
               frameon=False)
    fig.suptitle(style.METHOD_LABELS[metric])
    fig.tight_layout(rect=(0, 0.05, 1, 0.97))
    return fig


def build_tmax_figure(rows):
    """Grouped points with sd error bars; cells that never reached the
    threshold are left out."""
    import matplotlib.pyplot as plt

    style.apply()
    alphas = sorted({r[3] for r in rows})
    configs = sorted({r[0] for r in rows})
    offsets = np.linspace(-0.22, 0.22, len(alphas)) if len(alphas) > 1 else [0.0]
    fig, ax = plt.subplots(figsize=(1.0 + 0.85 * len(configs), 3.4))
    for k, alpha in enumerate(alphas):
        xs, ys, es = [], [], []
        for cid, _, _, a, mean, sd, reached in rows:
            if a != alpha or mean is None:
                continue
            xs.append(configs.index(cid) + offsets[k])
            ys.append(mean)
            es.append(sd)
        color = style.PALETTE[k % len(style.PALETTE)]
        ax.errorbar(xs, ys, yerr=es, fmt=style.MARKERS[k % len(style.MARKERS)],
                    color=color, capsize=3, ms=4.5, lw=0, elinewidth=1.1,
                    label=f"asymmetry {alpha:g}")
    ax.set_xticks(range(len(configs)))
    ax.set_xticklabels([f"config {c}" for c in configs], rotation=45, ha="right")
    ax.set_ylabel("steps to 90% of max affect")
    ax.set_title(style.METHOD_LABELS["tmax"])
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def build_figure(request):
    request.validate()
    if request.metric == "tmax":
        return build_tmax_figure(load_tmax(request.input_path))
    return build_grid_figure(request.metric, load_aggregate(request.input_path))


def render(request):
    """Build and write the requested figure; returns the output path."""
    import matplotlib.pyplot as plt

    fig = build_figure(request)
    fig.savefig(request.output_path, format=request.image_format)
    plt.close(fig)
    return request.output_path
