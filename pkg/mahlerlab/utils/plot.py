"""Plotting utilities"""

from pathlib import Path
from typing import Any, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import scienceplots  # noqa: F401  (registers the "science" style)

from mahlerlab import __version__

plt.style.use(["science", "no-latex"])

# custom color map
mpl.rcParams["axes.prop_cycle"] = mpl.cycler(
    color=[
        "#d6604d",
        "#4393c3",
        "#b2182b",
        "#2166ac",
        "#f4a582",
        "#053061",
    ]
)


# book the axes for a parameter scan
# ----------------------------------
def scan_plot(
    scan: pd.DataFrame,
    family: str,
    title: Optional[str] = f"mahlerlab v{__version__}",
    breakpoints: Sequence[float] = (),
    annotation: Optional[str] = None,
) -> tuple[Any, plt.Axes]:
    """
    Plot m(F_k) against k from a scan table with columns ``k``, ``m`` and ``error``

    Parameters
    ----------
    scan: pd.DataFrame
        Output of the scan command

    family: str
        Family identifier used in the axis label

    title: str | None
        Title placed on the right of the axes

    breakpoints: Sequence[float]
        Parameter values marked with vertical lines (e.g. degenerate k)

    annotation: str | None
        If not None, annotate the plot with the given string (default: None)

    Returns
    -------
    tuple[Any, plt.Axes]
        fig, ax
    """
    fig, ax = plt.subplots()
    ax.set_title(title, loc="right", color="tab:grey")
    ax.plot(scan["k"], scan["m"], lw=1.0, label=rf"$m(\mathrm{{{family}}}_k)$")
    if "error" in scan and np.any(scan["error"] > 0):
        ax.fill_between(scan["k"], scan["m"] - scan["error"], scan["m"] + scan["error"], alpha=0.3)

    lo, hi = scan["k"].min(), scan["k"].max()
    for k in breakpoints:
        if lo <= k <= hi:
            ax.axvline(k, color="tab:grey", lw=0.5, ls="--")

    if annotation is not None:
        ax.text(0.03, 0.93, annotation, ha="left", va="top", transform=ax.transAxes, color="tab:grey")

    ax.set_xlabel(r"$k$")
    ax.set_ylabel("Mahler measure")
    ax.legend(loc="best")
    return fig, ax


# save plots in multiple formats
def save_to(
    outdir: str,
    name: str,
) -> None:
    """Save the current figure to a path in pdf and png formats, creating the directory if needed."""
    Path(outdir).mkdir(parents=True, exist_ok=True)
    for ext in ["pdf", "png"]:
        plt.savefig(f"{outdir}/{name}.{ext}")
    plt.close()
