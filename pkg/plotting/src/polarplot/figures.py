"""Figure assembly from result CSVs.

Curves are drawn exactly as stored: no smoothing, no re-aggregation, error
bars straight from the std_error column. The returned RenderResult exposes the
series as matplotlib ended up drawing them, so callers can audit the figure
against the CSV.
"""

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .errors import PlotConfigError
from .reading import read_rows

RATE_LABEL = "mean achievable rate (bits/s/Hz)"

AXES = {
    "snr_db": ("SNR (dB)", "db"),
    "iteration": ("iteration", "linear"),
    "n_antennas": ("antennas per side", "linear"),
    "chi": ("inverse discrimination ratio chi", "linear"),
    "mu": ("inverse isolation mu", "linear"),
    "nu_magnitude": ("correlation magnitude |nu|", "linear"),
}

KNOWN_FIGURES = {
    "fig4_convergence": "iteration",
    "fig5_dpa": "snr_db",
    "fig6_single_sided": "snr_db",
    "fig7_rate_vs_snr": "snr_db",
    "fig8_antennas": "n_antennas",
    "fig9_xpd": "chi",
    "fig10_xpi": "mu",
    "fig11_correlation": "nu_magnitude",
}

SCHEME_STYLES = {
    "pf": dict(label="polarforming", color="#1f77b4", marker="o", linestyle="-"),
    "dpa": dict(label="dual-polarized", color="#d62728", marker="v", linestyle="--"),
    "spra": dict(label="switched circular", color="#2ca02c", marker="s", linestyle="-."),
    "paa": dict(label="rotated linear", color="#9467bd", marker="^", linestyle=":"),
    "cpa": dict(label="fixed circular", color="#ff7f0e", marker="D", linestyle="--"),
    "lpa": dict(label="fixed linear", color="#8c564b", marker="x", linestyle=":"),
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: which experiment, which x axis, which series styles."""

    figure_id: str
    x_column: str
    x_label: str
    x_scale: str = "linear"
    series: dict = field(default_factory=lambda: dict(SCHEME_STYLES))
    output: str | None = None


@dataclass(frozen=True)
class PlottedSeries:
    x: np.ndarray
    y: np.ndarray
    err: np.ndarray


@dataclass(frozen=True)
class RenderResult:
    output: str
    series: dict  # (experiment, scheme) -> PlottedSeries


def default_spec(figure_id, sweep_axis=None, output=None):
    """Spec for a catalog figure; pass sweep_axis explicitly for custom panels."""
    axis = KNOWN_FIGURES.get(figure_id, sweep_axis)
    if axis is None:
        raise PlotConfigError(
            f"{figure_id!r} is not a catalog figure; specify its sweep axis"
        )
    label, scale = AXES.get(axis, (axis, "linear"))
    return FigureSpec(figure_id=figure_id, x_column=axis, x_label=label, x_scale=scale, output=output)


def _grouped(rows, spec):
    """Panels in file order, each holding scheme -> rows (file order kept)."""
    panels = []
    by_panel = {}
    for row in rows:
        if row.experiment != spec.figure_id and not row.experiment.startswith(spec.figure_id + "/"):
            raise PlotConfigError(
                f"row for {row.experiment!r} does not belong to figure {spec.figure_id!r}"
            )
        if row.sweep_axis != spec.x_column:
            raise PlotConfigError(
                f"CSV sweeps {row.sweep_axis!r} but the figure spec plots {spec.x_column!r}"
            )
        if row.experiment not in by_panel:
            by_panel[row.experiment] = {}
            panels.append(row.experiment)
        by_panel[row.experiment].setdefault(row.scheme, []).append(row)
    return panels, by_panel


def _draw_series(ax, rows, style):
    x = np.array([r.sweep_value for r in rows])
    y = np.array([r.mean_rate_bits for r in rows])
    err = np.array([r.std_error for r in rows])
    container = ax.errorbar(x, y, yerr=err, capsize=2.5, markersize=4, **style)
    line = container[0]
    cap_lo, cap_hi = container[1]
    return PlottedSeries(
        x=np.asarray(line.get_xdata(), dtype=float),
        y=np.asarray(line.get_ydata(), dtype=float),
        err=0.5 * (np.asarray(cap_hi.get_ydata(), float) - np.asarray(cap_lo.get_ydata(), float)),
    )


def render(csv_path, spec: FigureSpec) -> RenderResult:
    """Render one figure from a results CSV and return the drawn series.

    One subplot per panel in the file, one error-bar line per known scheme.
    Schemes missing from the figure spec style table are skipped with a warning.
    """
    rows = read_rows(csv_path)
    panels, by_panel = _grouped(rows, spec)

    n = max(len(panels), 1)
    ncols = 2 if n > 1 else 1
    nrows = math.ceil(n / ncols)
    fig = Figure(figsize=(5.2 * ncols, 3.9 * nrows))
    FigureCanvasAgg(fig)
    axes = fig.subplots(nrows, ncols, squeeze=False).ravel()
    for ax in axes[n:]:
        ax.set_visible(False)

    drawn = {}
    for ax, panel in zip(axes, panels):
        for scheme, panel_rows in by_panel[panel].items():
            if scheme not in spec.series:
                warnings.warn(f"unknown scheme {scheme!r} in {panel!r}; series skipped")
                continue
            drawn[(panel, scheme)] = _draw_series(ax, panel_rows, spec.series[scheme])
        title = panel[len(spec.figure_id) + 1 :] if panel != spec.figure_id else ""
        if title:
            ax.set_title(title, fontsize=10)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=8)
    for ax in axes[:n]:
        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(RATE_LABEL)
        ax.grid(True, alpha=0.3)

    out = spec.output or str(Path(csv_path).with_suffix(".png"))
    fig.savefig(out, dpi=150)
    return RenderResult(output=str(out), series=drawn)
