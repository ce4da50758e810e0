"""Figure rendering for the polarsim result CSVs.

This package deliberately talks to the simulator only through its public
surface: the CSV files (and, in the tests, the `polarsim` command line). It
never imports the simulation code.
"""

from .errors import PlotConfigError, PlotDataError, PlotError
from .figures import FigureSpec, RenderResult, default_spec, render
from .reading import CSV_COLUMNS, ResultRow, read_rows

__all__ = [
    "CSV_COLUMNS",
    "FigureSpec",
    "PlotConfigError",
    "PlotDataError",
    "PlotError",
    "RenderResult",
    "ResultRow",
    "default_spec",
    "read_rows",
    "render",
]
