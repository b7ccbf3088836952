"""Sideband-spectroscopy waterfall: one offset trace per drive power.

Input: ``sideband.csv`` (columns ``p_watts``, ``p_over_pplus``,
``omega_q_hz``, ``p_e``) and optionally ``sideband_fits.json``, whose fitted
peak centers are marked on each trace so the two satellites can be followed
as they move relative to the central line across powers.
"""

from __future__ import annotations

import math
import sys

from . import style
from .common import InputError, read_json, read_table, run


def group_traces(table):
    """Split rows into per-power traces, ordered by increasing power."""
    p_watts = table.floats("p_watts")
    rel = table.floats("p_over_pplus")
    x = table.floats("omega_q_hz")
    y = table.floats("p_e")
    traces: dict[float, dict] = {}
    for p, r, xi, yi in zip(p_watts, rel, x, y):
        t = traces.setdefault(p, {"rel": r, "x": [], "y": []})
        t["x"].append(xi)
        t["y"].append(yi)
    return [(p, traces[p]) for p in sorted(traces)]


def render(args) -> None:
    if not 1 <= len(args.inputs) <= 2:
        raise InputError(
            "expected --in SIDEBAND_CSV [FITS_JSON], got "
            f"{len(args.inputs)} file(s)"
        )
    table = read_table(args.inputs[0])
    traces = group_traces(table)
    if not traces:
        raise InputError(f"{table.path}: no data rows")

    centers_by_power: dict[float, list[float]] = {}
    if len(args.inputs) == 2:
        fits = read_json(args.inputs[1])
        for point in fits.get("points", []):
            try:
                centers_by_power[float(point["p_watts"])] = [
                    float(peak["center_hz"]) for peak in point["peaks"]
                ]
            except (KeyError, TypeError) as exc:
                raise InputError(
                    f"{args.inputs[1]}: fit point is missing {exc}"
                ) from exc

    span = max(max(t["y"]) - min(t["y"]) for _, t in traces)
    step = 1.2 * span if span > 0 else 1.0

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 0.8 + 1.1 * len(traces)))
    for k, (p, t) in enumerate(traces):
        base = k * step
        shifted = [yi + base for yi in t["y"]]
        ax.plot(t["x"], shifted, linewidth=1.0, color="#30507a")
        label = (
            f"p_over_pplus = {t['rel']:.3g}"
            if math.isfinite(t["rel"]) else f"p_watts = {p:.3g}"
        )
        ax.annotate(label, (t["x"][-1], shifted[-1]), xytext=(4, 0),
                    textcoords="offset points", va="center", fontsize=8)
        for center in centers_by_power.get(p, []):
            ax.plot([center], [base], marker="^", color="#b0413e",
                    markersize=5, linestyle="")
    ax.set_xlabel("omega_q_hz")
    ax.set_ylabel("p_e (offset per trace)")
    ax.set_title(args.title or "Qubit sideband spectra across the power sweep")
    ax.margins(x=0.15)
    style.save(fig, args.out)


def main(argv: list[str] | None = None) -> int:
    return run(
        render, argv,
        description="Render the sideband-spectroscopy waterfall from sideband CSV output",
        n_inputs="sideband.csv and optionally sideband_fits.json for peak markers",
    )


if __name__ == "__main__":
    sys.exit(main())
