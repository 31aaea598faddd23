"""Unit tests for the CSV helpers."""

import io

from nctorus.utils import read_csv_rows, write_csv


def test_write_and_read_stream():
    """Test header, rows and float text on an in-memory stream."""
    buffer = io.StringIO()
    write_csv(buffer, ("eigenvalue", "multiplicity"), [(0.1, 2), (-6.283185307179586, 4)])
    assert buffer.getvalue().splitlines() == [
        "eigenvalue,multiplicity",
        "0.1,2",
        "-6.283185307179586,4",
    ]
    rows = read_csv_rows(io.StringIO(buffer.getvalue()))
    assert rows[1] == {"eigenvalue": "-6.283185307179586", "multiplicity": "4"}


def test_write_creates_parent_directories(tmp_path):
    """Test writing to a path in a missing directory."""
    target = tmp_path / "out" / "table.csv"
    write_csv(target, ("a",), [(1,), (2,)])
    assert read_csv_rows(target) == [{"a": "1"}, {"a": "2"}]
