import csv
from collections import Counter

import pytest

from figviews import FigureRequest, SchemaError, build_figure, render
from figviews.cli import main


def test_cli_renders_every_metric(sweep_dir, tmp_path):
    for metric, src in (("ap", "aggregate.csv"), ("ipa", "aggregate.csv"),
                        ("opa", "aggregate.csv"), ("tmax", "tmax.csv")):
        out = tmp_path / f"{metric}.png"
        rc = main(["--metric", metric, "--input", str(sweep_dir / src),
                   "--out", str(out)])
        assert rc == 0
        assert out.stat().st_size > 0


def test_grid_has_one_panel_per_configuration(sweep_dir):
    fig = build_figure(FigureRequest("ap", str(sweep_dir / "aggregate.csv"), "unused.png"))
    assert len(fig.axes) == 9


def test_grid_panels_carry_three_lines(sweep_dir):
    fig = build_figure(FigureRequest("opa", str(sweep_dir / "aggregate.csv"), "unused.png"))
    for ax in fig.axes:
        assert len(ax.lines) == 3  # one mean line per asymmetry level


def test_tmax_omits_not_reached_cells(sweep_dir):
    reached = Counter()
    with open(sweep_dir / "tmax.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert any(r["t_max_mean"] == "NOT_REACHED" for r in rows)
    assert any(r["t_max_mean"] != "NOT_REACHED" for r in rows)
    for r in rows:
        if r["t_max_mean"] != "NOT_REACHED" and int(r["n_reached"]) > 0:
            reached[float(r["alpha"])] += 1

    fig = build_figure(FigureRequest("tmax", str(sweep_dir / "tmax.csv"), "unused.png"))
    ax = fig.axes[0]
    alphas = sorted({float(r["alpha"]) for r in rows})
    plotted = {}
    for container, alpha in zip(ax.containers, alphas):
        plotted[alpha] = len(container.lines[0].get_xdata())
    assert plotted == {a: reached.get(a, 0) for a in alphas}


def test_render_is_deterministic(sweep_dir, tmp_path):
    req1 = FigureRequest("ap", str(sweep_dir / "aggregate.csv"), str(tmp_path / "a.png"))
    req2 = FigureRequest("ap", str(sweep_dir / "aggregate.csv"), str(tmp_path / "b.png"))
    render(req1)
    render(req2)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_missing_column_is_named(tmp_path, capsys):
    bad = tmp_path / "agg.csv"
    bad.write_text("config_id,p_b,p_eb,alpha,t,ap_mean\n1,0.5,0.5,1.0,0,50.0\n")
    with pytest.raises(SchemaError, match="ap_sd"):
        build_figure(FigureRequest("ap", str(bad), "unused.png"))
    rc = main(["--metric", "ap", "--input", str(bad), "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "ap_sd" in capsys.readouterr().err


def test_empty_csv_rejected(tmp_path, capsys):
    empty = tmp_path / "agg.csv"
    empty.write_text("config_id,p_b,p_eb,alpha,t,ap_mean,ap_sd,ipa_mean,ipa_sd,"
                     "opa_mean,opa_sd\n")
    rc = main(["--metric", "ap", "--input", str(empty), "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "no data rows" in capsys.readouterr().err


def test_unknown_metric_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["--metric", "banana", "--input", "x.csv", "--out", "y.png"])


def test_missing_input_file(tmp_path, capsys):
    rc = main(["--metric", "ap", "--input", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "x.png")])
    assert rc != 0
