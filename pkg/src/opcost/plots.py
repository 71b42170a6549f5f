"""Figures for sweeps, robustness grids, validation studies and reports.

Rendering uses the non-interactive Agg backend so it works headless.  Each
function writes one PNG and returns its path.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from opcost.reporting import ReportNode, rank  # noqa: E402
from opcost.validation.sensitivity import GridResult, SweepResult  # noqa: E402

_DPI = 120


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_sweep(result: SweepResult, path: str | Path) -> Path:
    """Efficiency score of both artifacts against the swept weight."""
    w = [p[0] for p in result.points]
    a, b = result.ids
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(w, [p[1] for p in result.points], label=a)
    ax.plot(w, [p[2] for p in result.points], label=b, linestyle="--")
    for c in result.crossovers:
        ax.axvline(c.w, color="grey", linewidth=0.8)
        ax.annotate(f"w = {c.w:.3f}", (c.w, ax.get_ylim()[0]), textcoords="offset points", xytext=(4, 6))
    ax.set_xlabel(f"weight on {result.metric.value}")
    ax.set_ylabel("efficiency score")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_grid(result: GridResult, path: str | Path, which: str = "usd") -> Path:
    """Leader map over (price scale, EU scale); ``which`` is ``usd`` or ``composite``."""
    leaders = result.usd_leader if which == "usd" else result.composite_leader
    ids = sorted({aid for row in leaders for aid in row})
    index = {aid: i for i, aid in enumerate(ids)}
    grid = np.array([[index[aid] for aid in row] for row in leaders])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    cmap = plt.get_cmap("tab10", max(len(ids), 1))
    ax.imshow(grid, origin="lower", aspect="auto", cmap=cmap, vmin=-0.5, vmax=len(ids) - 0.5)
    ax.set_xticks(range(len(result.price_scales)), [f"{p:g}" for p in result.price_scales])
    ax.set_yticks(range(len(result.eu_scales)), [f"{e:g}" for e in result.eu_scales])
    ax.set_xlabel("price scale")
    ax.set_ylabel("EU scale")
    ax.set_title("cheapest by USD" if which == "usd" else "best composite score")
    handles = [plt.Rectangle((0, 0), 1, 1, color=cmap(index[aid])) for aid in ids]
    ax.legend(handles, ids, loc="upper left", bbox_to_anchor=(1.02, 1.0), fontsize="small")
    return _save(fig, path)


def plot_study(study: Mapping[str, Any], path: str | Path) -> Path:
    """Measured time and energy against MODEL predictions, coloured by workload class."""
    arts = study["artifacts"]
    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.0))
    panels = (("cu_total", "time_s", "CU total", "simulated time (s)"),
              ("eu_total", "energy_j", "EU total (J)", "simulated energy (J)"))
    for ax, (px, my, xl, yl) in zip(axes, panels):
        for wc in sorted({a["workload"] for a in arts}):
            sel = [a for a in arts if a["workload"] == wc]
            ax.scatter([a[px] for a in sel], [a[my] for a in sel], label=wc, s=18)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(xl)
        ax.set_ylabel(yl)
        ax.grid(alpha=0.3, which="both")
    axes[0].legend(fontsize="small")
    fig.suptitle(f"validation study, seed {study['seed']}")
    return _save(fig, path)


def plot_scores(root: ReportNode, path: str | Path, limit: int = 30) -> Path:
    """Horizontal bars of the best-ranked scored artifacts in a report tree."""
    results = rank(n.result for n in root.walk() if n.result is not None)[:limit]
    fig, ax = plt.subplots(figsize=(6.4, 0.3 * max(len(results), 3) + 1.2))
    labels = [r.artifact_id for r in reversed(results)]
    ax.barh(labels, [r.efficiency_score for r in reversed(results)])
    ax.set_xlim(0, 100)
    ax.set_xlabel("efficiency score")
    ax.tick_params(axis="y", labelsize="small")
    return _save(fig, path)
