"""Stability-region map: which branches exist at each (detuning, power) point.

Input: ``diagram.csv`` (columns ``omega_reduced``, ``p_over_pc``, ``region``)
and optionally ``diagram_thresholds.csv`` (columns ``omega_reduced``,
``p_minus_over_pc``, ``p_plus_over_pc``) whose two curves bound the bistable
wedge.  Each grid cell is painted by its region code and the three codes are
labeled in place.
"""

from __future__ import annotations

import math
import sys

import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap
from matplotlib.lines import Line2D

from . import style
from .common import InputError, pivot, read_table, run
from .style import REGION_COLORS

REGION_ORDER = ["L", "H", "B"]
REGION_NAMES = {
    "L": "L: low branch only",
    "H": "H: high branch only",
    "B": "B: bistable",
}


def render(args) -> None:
    if not 1 <= len(args.inputs) <= 2:
        raise InputError(
            "expected --in DIAGRAM_CSV [THRESHOLDS_CSV], got "
            f"{len(args.inputs)} file(s)"
        )
    table = read_table(args.inputs[0])
    xs, ys, grid = pivot(table, "omega_reduced", "p_over_pc", "region")

    codes = np.empty((len(ys), len(xs)), dtype=float)
    for i, row in enumerate(grid):
        for j, cell in enumerate(row):
            if cell not in REGION_ORDER:
                raise InputError(
                    f"{table.path}: unknown region code {cell!r} "
                    f"(expected one of {REGION_ORDER})"
                )
            codes[i, j] = REGION_ORDER.index(cell)

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    cmap = ListedColormap([REGION_COLORS[r] for r in REGION_ORDER])
    norm = BoundaryNorm(np.arange(-0.5, len(REGION_ORDER)), cmap.N)
    ax.pcolormesh(xs, ys, codes, cmap=cmap, norm=norm, shading="nearest")
    ax.set_yscale("log")

    # Name each region at the geometric center of its cells so the map is
    # readable without a color key.
    for k, code in enumerate(REGION_ORDER):
        mask = codes == k
        if not mask.any():
            continue
        ii, jj = np.nonzero(mask)
        x_mid = float(np.mean([xs[j] for j in jj]))
        y_mid = float(10 ** np.mean([math.log10(ys[i]) for i in ii]))
        ax.text(x_mid, y_mid, code, ha="center", va="center",
                fontsize=14, fontweight="bold")

    handles = [
        Line2D([], [], marker="s", linestyle="", markersize=9,
               markerfacecolor=REGION_COLORS[r], markeredgecolor="none",
               label=REGION_NAMES[r])
        for r in REGION_ORDER
    ]

    if len(args.inputs) == 2:
        thr = read_table(args.inputs[1])
        om = thr.floats("omega_reduced")
        lo = thr.floats("p_minus_over_pc")
        hi = thr.floats("p_plus_over_pc")
        order = np.argsort(om)
        om_s = [om[k] for k in order]
        for name, vals, dash in (("p_minus_over_pc", lo, "--"),
                                 ("p_plus_over_pc", hi, "-")):
            v = [vals[k] for k in order]
            pts = [(o, y) for o, y in zip(om_s, v) if math.isfinite(y)]
            if pts:
                line, = ax.plot([p[0] for p in pts], [p[1] for p in pts],
                                dash, color="black", linewidth=1.2, label=name)
                handles.append(line)

    ax.legend(handles=handles, loc="upper left", framealpha=0.9)
    ax.set_xlabel("omega_reduced")
    ax.set_ylabel("p_over_pc")
    ax.set_title(args.title or "Steady-state stability regions")
    ax.grid(False)
    style.save(fig, args.out)


def main(argv: list[str] | None = None) -> int:
    return run(
        render, argv,
        description="Render the stability-region map from diagram CSV output",
        n_inputs="diagram.csv and optionally diagram_thresholds.csv",
    )


if __name__ == "__main__":
    sys.exit(main())
