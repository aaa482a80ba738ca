"""Figure rendering for experiment reports.

Renders the per-method convergence curves to a PNG next to the trace CSVs:
suboptimality on log-log axes when a reference optimum was available,
normalized test error on a semilog-x axis for completion tasks, and the
duality-gap certificate alongside.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_METHOD_STYLE = {
    "fw": dict(color="tab:blue", label="FW"),
    "jfw": dict(color="tab:red", label="JFW"),
}


def _series(records, field):
    ks, vals = [], []
    for rec in records:
        value = getattr(rec, field)
        if value is not None:
            ks.append(rec.k)
            vals.append(value)
    return ks, vals


def render_traces(traces: dict, out_path, title: str):
    """Render convergence curves for {method: [TraceRecord, ...]} to out_path."""
    has_subopt = any(rec.subopt is not None
                     for recs in traces.values() for rec in recs)
    has_nerr = any(rec.normalized_error is not None
                   for recs in traces.values() for rec in recs)

    fig, (ax_main, ax_gap) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for method, records in traces.items():
        style = _METHOD_STYLE.get(method, dict(label=method))
        if has_subopt:
            ks, vals = _series(records, "subopt")
            pts = [(k, v) for k, v in zip(ks, vals) if k >= 1 and v > 0]
            if pts:
                ax_main.loglog(*zip(*pts), **style)
        elif has_nerr:
            ks, vals = _series(records, "normalized_error")
            if ks:
                ax_main.semilogx([max(k, 1) for k in ks], vals, **style)
        ks, gaps = _series(records, "duality_gap")
        pts = [(k, v) for k, v in zip(ks, gaps) if k >= 1 and v > 0]
        if pts:
            ax_gap.loglog(*zip(*pts), **style)

    ax_main.set_xlabel("iteration $k$")
    ax_main.set_ylabel("$f(x_k) - f^\\star$" if has_subopt
                       else "normalized test error" if has_nerr
                       else "objective")
    if ax_main.get_legend_handles_labels()[0]:
        ax_main.legend(loc="best", fontsize=9)
    ax_main.grid(True, which="both", alpha=0.3)
    ax_gap.set_xlabel("iteration $k$")
    ax_gap.set_ylabel("duality gap")
    ax_gap.grid(True, which="both", alpha=0.3)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
