"""Emission-spectrum map: spectral weight over (power, emission offset).

Input: ``spectrum.csv`` (columns ``p_over_pplus``, ``delta_omega_hz``,
``s_value``) and optionally ``heating.csv``, whose ``delta_tilde_hz`` column
is overlaid (as a magnitude, since the emission grid tabulates offsets as
positive frequencies) to show the dressed-mode detuning tracking the peak.
"""

from __future__ import annotations

import math
import sys

import numpy as np
from matplotlib.colors import LogNorm

from . import style
from .common import InputError, pivot, read_table, run


def render(args) -> None:
    if not 1 <= len(args.inputs) <= 2:
        raise InputError(
            "expected --in SPECTRUM_CSV [HEATING_CSV], got "
            f"{len(args.inputs)} file(s)"
        )
    table = read_table(args.inputs[0])
    xs, ys, grid = pivot(table, "p_over_pplus", "delta_omega_hz", "s_value")
    z = np.array(grid, dtype=float)
    if not np.all(np.isfinite(z)):
        raise InputError(f"{table.path}: s_value contains non-finite cells")

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    positive = z[z > 0]
    if positive.size:
        norm = LogNorm(vmin=positive.min(), vmax=positive.max())
        mesh = ax.pcolormesh(xs, ys, np.ma.masked_less_equal(z, 0.0),
                             norm=norm, cmap="magma", shading="nearest")
    else:
        mesh = ax.pcolormesh(xs, ys, z, cmap="magma", shading="nearest")
    fig.colorbar(mesh, ax=ax, label="s_value")

    if len(args.inputs) == 2:
        heat = read_table(args.inputs[1])
        hx = heat.floats("p_over_pplus")
        hy = heat.floats("delta_tilde_hz")
        pts = sorted(
            (xi, abs(yi)) for xi, yi in zip(hx, hy)
            if math.isfinite(xi) and math.isfinite(yi)
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "w--", marker="o",
                markersize=4, linewidth=1.2, label="|delta_tilde_hz|")
        ax.legend(loc="upper right")

    ax.set_xlabel("p_over_pplus")
    ax.set_ylabel("delta_omega_hz")
    ax.set_title(args.title or "Emission spectrum across the power sweep")
    ax.grid(False)
    style.save(fig, args.out)


def main(argv: list[str] | None = None) -> int:
    return run(
        render, argv,
        description="Render the emission-spectrum map from spectrum CSV output",
        n_inputs="spectrum.csv and optionally heating.csv for the overlay",
    )


if __name__ == "__main__":
    sys.exit(main())
