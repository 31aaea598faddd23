"""CSV interchange for tabular data: spectra, singular value streams and grid functions."""

import csv
from pathlib import Path
from typing import IO, Any, Iterable, Sequence, Union

PathOrStream = Union[str, Path, IO[str]]


def write_csv(target: PathOrStream, fields: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a header line and the rows; floats are written in round-trip form."""
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            write_csv(f, fields, rows)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(fields)
    writer.writerows(rows)


def read_csv_rows(source: PathOrStream) -> list[dict[str, str]]:
    """Rows of a CSV file keyed by the header line."""
    if isinstance(source, (str, Path)):
        with Path(source).open("r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))
    return list(csv.DictReader(source))
