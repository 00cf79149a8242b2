"""Delimited output, run metadata and CSV reading for the plot path."""

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".16e")


def write_columns(path, header, columns):
    """Write equal-length columns under ``header``."""
    columns = [np.asarray(c) for c in columns]
    if len(header) != len(columns):
        raise ValueError("header and column count differ")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([fmt(x) for x in row])


class CSVFormatError(ValueError):
    pass


def read_table(path):
    """Read a numeric CSV with one header row.

    Returns the header and a float array of shape ``(rows, columns)``.
    Rows are counted from 1 with the header as row 1, so errors point at
    the line a text editor would show.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = list(csv.reader(fh))
    if not lines or not any(cell.strip() for cell in lines[0]):
        raise CSVFormatError(f"{path}: row 1: missing header")
    header = [h.strip() for h in lines[0]]
    body = [(i, row) for i, row in enumerate(lines[1:], start=2) if any(c.strip() for c in row)]
    if not body:
        raise CSVFormatError(f"{path}: row 2: no data rows after the header")
    data = np.empty((len(body), len(header)))
    for k, (rowno, row) in enumerate(body):
        if len(row) != len(header):
            raise CSVFormatError(
                f"{path}: row {rowno}: expected {len(header)} columns, found {len(row)}"
            )
        for col, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise CSVFormatError(
                    f"{path}: row {rowno}, column {col} ({header[col - 1]}): "
                    f"not a number: {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise CSVFormatError(f"{path}: row {rowno}, column {col}: non-finite value")
            data[k, col - 1] = value
    return header, data


@dataclass
class RunMetadata:
    command: str
    config: dict
    chi_variant: str
    runs: list = field(default_factory=list)
    files: list = field(default_factory=list)
    version: str = __version__
    wall_time: float = 0.0

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")
