"""Render sweep results as PNG figures next to their CSV files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

AXIS_LABELS = {
    "delta_T": r"$\Delta T / T$",
    "delta_z": r"$\Delta_z / k_B T$",
    "delta_x": r"$\Delta_x / k_B T$",
    "eps1": r"$\epsilon_1 / k_B T$",
    "gamma_L": r"$\Gamma_L$",
    "n1": r"$N_1$",
    "n2": r"$N_2$",
}
SERIES_LABELS = {
    "delta_z": r"$\Delta_z$",
    "delta_x": r"$\Delta_x$",
    "gamma_L": r"$\Gamma_L$",
    "n1": r"$N_1$",
    "n2": r"$N_2$",
    "delta_T": r"$\Delta T$",
    "eps1": r"$\epsilon_1$",
}

STYLE = {
    "figure.figsize": (5.0, 3.4),
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
}


def _legend_text(series: dict) -> str:
    return ", ".join(f"{SERIES_LABELS.get(k, k)}$={v:g}$" for k, v in series.items())


def plot_sweep(result, path, title: str | None = None) -> Path:
    """Draw ``J_C`` against the swept parameter, one line per series.

    Failed rows are left out of the curves.  Returns the PNG path.
    """
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for series, x, J in result.curves():
            ax.plot(x, J, marker="." if len(x) < 30 else None, label=_legend_text(series) or None)
        ax.axhline(0.0, color="0.6", lw=0.6, zorder=0)
        ax.set_xlabel(AXIS_LABELS.get(result.axis, result.axis))
        ax.set_ylabel(r"$J_C$")
        if title:
            ax.set_title(title)
        if result.series_names:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
