"""Dressed-mode frequency ramp: fluctuation detuning versus drive power.

Input: ``heating.csv`` (columns ``p_over_pplus`` or ``p_watts``,
``delta_tilde_hz``, ``branch``).  One line per branch present in the file,
with a zero reference line, showing how far the dressed fluctuation mode is
pulled as the drive is ramped.
"""

from __future__ import annotations

import math
import sys

from . import style
from .common import InputError, read_table, run


def power_axis(table):
    """Pick the relative power column when finite, else absolute watts."""
    if "p_over_pplus" in table.columns:
        rel = table.floats("p_over_pplus")
        if all(math.isfinite(v) for v in rel):
            return "p_over_pplus", rel
    return "p_watts", table.floats("p_watts")


def render(args) -> None:
    if len(args.inputs) != 1:
        raise InputError(f"expected --in HEATING_CSV, got {len(args.inputs)} files")
    table = read_table(args.inputs[0])
    x_name, x = power_axis(table)
    y = table.floats("delta_tilde_hz")
    branches = table.strings("branch") if "branch" in table.columns else ["?"] * len(x)

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    ax.axhline(0.0, color="gray", linewidth=0.8)
    for branch in sorted(set(branches)):
        pts = sorted(
            (xi, yi) for xi, yi, b in zip(x, y, branches) if b == branch
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                markersize=3.5, label=f"branch {branch}")
    ax.legend()
    ax.set_xlabel(x_name)
    ax.set_ylabel("delta_tilde_hz")
    ax.set_title(args.title or "Dressed-mode detuning along the power ramp")
    style.save(fig, args.out)


def main(argv: list[str] | None = None) -> int:
    return run(
        render, argv,
        description="Render the dressed-mode frequency ramp from heating CSV output",
        n_inputs="heating.csv",
    )


if __name__ == "__main__":
    sys.exit(main())
