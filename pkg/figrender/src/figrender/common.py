"""Shared plumbing for the figure scripts.

All five scripts accept the same flags (``--in``, ``--out``, ``--title``) and
read the same table format: UTF-8 text, ``#``-prefixed ``key=value`` metadata
lines, one comma-separated header row, then comma-separated data rows.  Cells
hold numbers, ``true``/``false``, ``nan``, or bare strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field


class InputError(Exception):
    """An input file is missing, malformed, or lacks a required column."""


@dataclass
class Table:
    """One parsed CSV: metadata plus named columns of parsed cells."""

    path: str
    meta: dict[str, str] = field(default_factory=dict)
    columns: dict[str, list] = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        if not self.columns:
            return 0
        return len(next(iter(self.columns.values())))

    def require(self, *names: str) -> None:
        missing = [name for name in names if name not in self.columns]
        if missing:
            have = ", ".join(sorted(self.columns))
            raise InputError(
                f"{self.path}: missing required column(s) {', '.join(missing)}"
                f" (file has: {have})"
            )

    def floats(self, name: str) -> list[float]:
        self.require(name)
        out = []
        for cell in self.columns[name]:
            if isinstance(cell, bool):
                raise InputError(f"{self.path}: column {name!r} is not numeric")
            if isinstance(cell, (int, float)):
                out.append(float(cell))
            else:
                raise InputError(
                    f"{self.path}: column {name!r} has non-numeric cell {cell!r}"
                )
        return out

    def strings(self, name: str) -> list[str]:
        self.require(name)
        return [str(cell) for cell in self.columns[name]]


def _parse_cell(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)  # also handles "nan", "inf"
    except ValueError:
        return text


def read_table(path: str) -> Table:
    """Parse one kerrheat CSV file into metadata and columns."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc

    table = Table(path=path)
    body: list[str] = []
    for line in lines:
        if line.startswith("#"):
            stripped = line[1:].strip()
            if "=" in stripped:
                key, _, value = stripped.partition("=")
                table.meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)

    if not body:
        raise InputError(f"{path}: no header row found")

    header = [cell.strip() for cell in body[0].split(",")]
    if len(set(header)) != len(header):
        raise InputError(f"{path}: duplicate column names in header")
    rows = []
    for i, line in enumerate(body[1:], start=2):
        cells = [cell.strip() for cell in line.split(",")]
        if len(cells) != len(header):
            raise InputError(
                f"{path}: row {i} has {len(cells)} cells, header has {len(header)}"
            )
        rows.append([_parse_cell(cell) for cell in cells])

    table.columns = {name: [row[j] for row in rows] for j, name in enumerate(header)}
    return table


def read_json(path: str) -> dict:
    """Parse one strict-JSON sidecar file."""

    def reject_constant(name: str):
        raise InputError(f"{path}: non-finite constant {name!r} is not allowed")

    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh, parse_constant=reject_constant)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def pivot(table: Table, x_col: str, y_col: str, z_col: str):
    """Reshape long-format (x, y, z) rows into a complete rectangular grid.

    Returns ``(xs, ys, grid)`` where ``grid[i][j]`` is the z cell at
    ``(ys[i], xs[j])``.  Raises :class:`InputError` on duplicate or missing
    grid points, so a truncated file fails loudly instead of rendering a
    misleading map.
    """
    xs_raw = table.floats(x_col)
    ys_raw = table.floats(y_col)
    table.require(z_col)
    zs = table.columns[z_col]

    xs = sorted(set(xs_raw))
    ys = sorted(set(ys_raw))
    x_index = {x: j for j, x in enumerate(xs)}
    y_index = {y: i for i, y in enumerate(ys)}
    grid = [[None] * len(xs) for _ in ys]
    for x, y, z in zip(xs_raw, ys_raw, zs):
        i, j = y_index[y], x_index[x]
        if grid[i][j] is not None:
            raise InputError(
                f"{table.path}: duplicate grid point ({x_col}={x}, {y_col}={y})"
            )
        grid[i][j] = z
    holes = sum(1 for row in grid for cell in row if cell is None)
    if holes:
        raise InputError(
            f"{table.path}: grid is incomplete ({holes} missing "
            f"({x_col}, {y_col}) combinations)"
        )
    return xs, ys, grid


def build_parser(description: str, n_inputs: str = "one or more") -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument(
        "--in",
        dest="inputs",
        nargs="+",
        required=True,
        metavar="FILE",
        help=f"input file(s) written by the kerrheat command line ({n_inputs})",
    )
    parser.add_argument(
        "--out",
        dest="out",
        required=True,
        metavar="FILE",
        help="output figure path; extension picks the format (.svg default style)",
    )
    parser.add_argument(
        "--title",
        dest="title",
        default=None,
        help="optional figure title",
    )
    return parser


def run(render, argv: list[str] | None, description: str, n_inputs: str) -> int:
    """Parse common flags, call ``render(args)``, map errors to exit codes."""
    parser = build_parser(description, n_inputs)
    args = parser.parse_args(argv)
    try:
        render(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report render failures, don't traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0
