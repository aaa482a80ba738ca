"""Figure rendering smoke tests: both report flavors produce a PNG."""

import numpy as np

from jacobifw.figures import render_traces
from jacobifw.solvers import TraceRecord


def make_trace(n, with_subopt, with_nerr):
    records = []
    for k in range(n):
        records.append(TraceRecord(
            k=k, f_value=1.0 / (k + 1),
            duality_gap=2.0 / (k + 1),
            subopt=1.0 / (k + 1) ** 2 if with_subopt else None,
            normalized_error=1.0 - 0.001 * k if with_nerr else None,
            wall_ms=float(k), feasibility_slack=0.0))
    return records


def test_subopt_figure(tmp_path):
    traces = {"fw": make_trace(50, True, False),
              "jfw": make_trace(50, True, False)}
    out = render_traces(traces, tmp_path / "fig.png", title="synthetic")
    assert out.stat().st_size > 0


def test_normalized_error_figure(tmp_path):
    traces = {"fw": make_trace(30, False, True)}
    out = render_traces(traces, tmp_path / "fig.png", title="completion")
    assert out.stat().st_size > 0


def test_handles_missing_series(tmp_path):
    # no subopt, no normalized error: only the gap panel has data
    traces = {"fw": make_trace(20, False, False)}
    out = render_traces(traces, tmp_path / "fig.png", title="bare")
    assert out.stat().st_size > 0
