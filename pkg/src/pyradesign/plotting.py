"""Figures written next to CLI reports.

Only the Agg backend is used, so nothing here needs a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .analysis import center_blocks  # noqa: E402
from .blockset import Design, bits_of  # noqa: E402

RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "figure.dpi": 120,
    "savefig.bbox": "tight",
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_incidence(design: Design, path: str | Path, title: str | None = None) -> Path:
    """Point-by-block incidence matrix; center blocks get a darker shade."""
    centers = set(center_blocks(design)) if len(design.blocks) == design.n_points else set()
    pts = design.point_list
    grid = [[0] * len(design.blocks) for _ in pts]
    row = {p: i for i, p in enumerate(pts)}
    for j, b in enumerate(design.blocks):
        for p in bits_of(b):
            grid[row[p]][j] = 2 if j in centers else 1
    cmap = ListedColormap(["#ffffff", "#7fa7d9", "#1f3f7a"])
    with plt.rc_context(RC):
        side = max(3.0, 0.18 * max(len(pts), len(design.blocks)))
        fig, ax = plt.subplots(figsize=(side, side))
        ax.imshow(grid, cmap=cmap, vmin=0, vmax=2, interpolation="nearest")
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("block index")
        ax.set_ylabel("point")
        ax.set_yticks(range(len(pts)))
        ax.set_yticklabels(pts)
        ax.set_title(title or f"incidence, v={design.v}, {len(centers)} center block(s)")
        return _save(fig, path)


def plot_orbit_table(cert, path: str | Path) -> Path:
    """Index of the group element sending each moved point to each other one."""
    moved = list(bits_of(cert.moved))
    table = [[cert.orbit_witness.get((a, b), -1) for b in moved] for a in moved]
    with plt.rc_context(RC):
        side = max(3.0, 0.3 * len(moved) + 1)
        fig, ax = plt.subplots(figsize=(side + 0.8, side))
        im = ax.imshow(table, cmap="tab20" if len(cert.elements) <= 20 else "viridis", interpolation="nearest")
        ax.set_xticks(range(len(moved)))
        ax.set_xticklabels(moved)
        ax.set_yticks(range(len(moved)))
        ax.set_yticklabels(moved)
        ax.set_xlabel("image")
        ax.set_ylabel("source")
        ax.set_title(f"orbit table, |G|={len(cert.elements)}")
        fig.colorbar(im, ax=ax, label="element index")
        return _save(fig, path)


def plot_check_timings(report, path: str | Path, limits: dict[str, float] | None = None) -> Path:
    """Horizontal bars of per-phase wall time (ms), with optional limits marked."""
    phases = list(report.timing)
    ms = [report.timing[p] for p in phases]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 0.35 * len(phases) + 1.2))
        ax.barh(range(len(phases)), ms, color="#4c72b0")
        for i, p in enumerate(phases):
            lim = (limits or {}).get(p)
            if lim is not None:
                ax.plot([lim, lim], [i - 0.4, i + 0.4], color="#c44e52", lw=2)
        ax.set_yticks(range(len(phases)))
        ax.set_yticklabels(phases)
        ax.invert_yaxis()
        ax.set_xscale("symlog", linthresh=10)
        ax.set_xlim(0, 2 * max(ms + list((limits or {}).values()) + [10]))
        ax.set_xlabel("wall time (ms)")
        ax.set_title(report.command)
        return _save(fig, path)


def plot_split(counts: dict[str, int], path: str | Path, title: str) -> Path:
    """Bar chart of category counts, e.g. PG vs non-PG outcomes of a delta search."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4, 3))
        names = list(counts)
        ax.bar(names, [counts[n] for n in names], color=["#55a868", "#c44e52", "#8172b2"][: len(names)])
        for i, n in enumerate(names):
            ax.annotate(str(counts[n]), (i, counts[n]), ha="center", va="bottom")
        ax.set_ylabel("count")
        ax.set_title(title)
        return _save(fig, path)
