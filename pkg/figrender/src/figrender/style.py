"""Deterministic matplotlib setup shared by all figure scripts.

SVG is the default output format so figures diff cleanly in review and can be
golden-tested byte-for-byte.  Determinism needs three things: a headless
backend, a fixed ``svg.hashsalt`` (element ids are derived from it), and no
creation date in the file metadata.  Text is written as ``<text>`` elements
rather than glyph paths so region labels and axis titles stay searchable.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

REGION_COLORS = {
    "L": "#4878cf",  # low-amplitude branch only
    "H": "#d65f5f",  # high-amplitude branch only
    "B": "#edcf72",  # bistable: both branches coexist
}

matplotlib.rcParams.update(
    {
        "svg.hashsalt": "figrender",
        "svg.fonttype": "none",
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 110,
        "savefig.bbox": "tight",
        "axes.grid": True,
        "grid.alpha": 0.25,
        "font.size": 10,
    }
)


def save(fig, out_path: str) -> None:
    """Write the figure with reproducible bytes, then release it."""
    directory = os.path.dirname(os.path.abspath(out_path))
    os.makedirs(directory, exist_ok=True)
    if out_path.lower().endswith(".svg"):
        # Drop the creation timestamp so identical data gives identical bytes.
        fig.savefig(out_path, metadata={"Date": None})
    else:
        fig.savefig(out_path)
    plt.close(fig)
