"""Heating curve: fluctuation occupation versus power, with a temperature axis.

Input: ``heating.csv`` (columns ``p_over_pplus`` or ``p_watts``, ``n_tilde``,
``t_eff_kelvin``).  The occupation is drawn against the left axis and the
tabulated effective temperature against a right-hand axis, both read verbatim
from the file.
"""

from __future__ import annotations

import sys

from . import style
from .common import InputError, read_table, run
from .ramp import power_axis


def render(args) -> None:
    if len(args.inputs) != 1:
        raise InputError(f"expected --in HEATING_CSV, got {len(args.inputs)} files")
    table = read_table(args.inputs[0])
    x_name, x = power_axis(table)
    n_tilde = table.floats("n_tilde")
    t_eff = table.floats("t_eff_kelvin")

    order = sorted(range(len(x)), key=lambda k: x[k])
    xs = [x[k] for k in order]
    ns = [n_tilde[k] for k in order]
    ts = [t_eff[k] for k in order]

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    occ_line, = ax.plot(xs, ns, marker="o", markersize=3.5, color="#30507a",
                        label="n_tilde")
    ax.set_xlabel(x_name)
    ax.set_ylabel("n_tilde")

    ax_t = ax.twinx()
    t_line, = ax_t.plot(xs, ts, marker="s", markersize=3.5, color="#b0413e",
                        linestyle="--", label="t_eff_kelvin")
    ax_t.set_ylabel("t_eff_kelvin")
    ax_t.grid(False)

    ax.legend(handles=[occ_line, t_line], loc="upper right")
    convention = table.meta.get("t_eff_convention")
    title = args.title or "Fluctuation occupation and effective temperature"
    if args.title is None and convention:
        title += f" ({convention} convention)"
    ax.set_title(title)
    style.save(fig, args.out)


def main(argv: list[str] | None = None) -> int:
    return run(
        render, argv,
        description="Render the heating curve with a temperature axis from heating CSV output",
        n_inputs="heating.csv",
    )


if __name__ == "__main__":
    sys.exit(main())
