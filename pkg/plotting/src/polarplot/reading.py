"""Reader for the simulator's result CSVs.

The schema is fixed by the producing tool:
experiment,scheme,sweep_axis,sweep_value,mean_rate_bits,std_error,realizations,master_seed
"""

import csv
from dataclasses import dataclass

from .errors import PlotDataError

CSV_COLUMNS = (
    "experiment",
    "scheme",
    "sweep_axis",
    "sweep_value",
    "mean_rate_bits",
    "std_error",
    "realizations",
    "master_seed",
)


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    scheme: str
    sweep_axis: str
    sweep_value: float
    mean_rate_bits: float
    std_error: float
    realizations: int
    master_seed: int


def _convert(raw, line, path):
    try:
        return ResultRow(
            experiment=raw[0],
            scheme=raw[1],
            sweep_axis=raw[2],
            sweep_value=float(raw[3]),
            mean_rate_bits=float(raw[4]),
            std_error=float(raw[5]),
            realizations=int(raw[6]),
            master_seed=int(raw[7]),
        )
    except ValueError as exc:
        raise PlotDataError(f"{path}:{line}: {exc}") from None


def read_rows(path):
    """Parse a results CSV into ResultRows, preserving file order.

    A header-only file yields an empty list. Any structural problem raises
    PlotDataError naming the offending row.
    """
    rows = []
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError:
        raise
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise PlotDataError(f"{path}:1: header {header} does not match the results schema")
        for line, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) != len(CSV_COLUMNS):
                raise PlotDataError(f"{path}:{line}: expected {len(CSV_COLUMNS)} fields, got {len(raw)}")
            rows.append(_convert(raw, line, path))
    return rows
