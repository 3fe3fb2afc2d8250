"""Whitespace-separated .dat tables with lossless float round-trip.

One header row of column names, then rectangular rows of decimals printed
at 17 significant digits so every IEEE double reparses bit-exactly.
"""

from __future__ import annotations

import os

import numpy as np

FIGURE_COLUMNS = ("x", "y", "y_pred", "y_pred_upper", "y_pred_lower")
GAP_COLUMNS = ("I", "gap_mean", "gap_p25", "gap_p75", "bound_value")


def format_value(v: float) -> str:
    return "%.17g" % float(v)


def format_table(header, rows) -> str:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    header = [str(h) for h in header]
    if rows.shape[1] != len(header):
        raise ValueError(f"{len(header)} columns in header, {rows.shape[1]} in data")
    lines = [" ".join(header)]
    for row in rows:
        lines.append(" ".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> tuple[list[str], np.ndarray]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table")
    header = lines[0].split()
    width = len(header)
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != width:
            raise ValueError(f"ragged row: expected {width} columns, got {len(parts)}")
        rows.append([float(p) for p in parts])
    return header, np.asarray(rows, dtype=float).reshape(len(rows), width)


def write_dat(path: str, header, rows) -> None:
    text = format_table(header, rows)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_dat(path: str) -> tuple[list[str], np.ndarray]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_table(fh.read())
