"""Text-table round trips at full double precision."""

import numpy as np
import pytest

from sobolev_pqc.datatable import (
    FIGURE_COLUMNS,
    GAP_COLUMNS,
    format_table,
    format_value,
    parse_table,
    read_dat,
    write_dat,
)


def test_column_constants():
    assert FIGURE_COLUMNS == ("x", "y", "y_pred", "y_pred_upper", "y_pred_lower")
    assert GAP_COLUMNS == ("I", "gap_mean", "gap_p25", "gap_p75", "bound_value")


def test_format_value_round_trips_hard_doubles():
    cases = [
        0.0,
        1.0,
        -1.0,
        np.pi,
        1.0 / 3.0,
        1e-300,
        -1e300,
        5e-324,  # smallest subnormal
        0.1 + 0.2,
        np.nextafter(1.0, 2.0),
    ]
    for v in cases:
        assert float(format_value(v)) == v


def test_table_round_trip_random():
    rng = np.random.default_rng(70)
    rows = rng.normal(size=(20, 4)) * 10.0 ** rng.integers(-10, 10, size=(20, 4))
    text = format_table(["a", "b", "c", "d"], rows)
    header, parsed = parse_table(text)
    assert header == ["a", "b", "c", "d"]
    assert np.array_equal(parsed, rows)


def test_format_table_rejects_width_mismatch():
    with pytest.raises(ValueError):
        format_table(["a", "b"], np.zeros((2, 3)))


def test_parse_table_rejects_ragged_and_empty():
    with pytest.raises(ValueError):
        parse_table("a b\n1.0 2.0\n3.0\n")
    with pytest.raises(ValueError):
        parse_table("\n  \n")


def test_single_row_tables():
    text = format_table(["x"], [[2.5]])
    header, rows = parse_table(text)
    assert header == ["x"] and rows.shape == (1, 1) and rows[0, 0] == 2.5


def test_write_read_dat(tmp_path):
    path = str(tmp_path / "nested" / "table.dat")
    rows = np.array([[1.0, np.e], [np.pi, 2.0**-40]])
    write_dat(path, ["u", "v"], rows)
    raw = open(path, "rb").read()
    assert b"\r" not in raw  # unix newlines regardless of platform
    header, parsed = read_dat(path)
    assert header == ["u", "v"]
    assert np.array_equal(parsed, rows)
