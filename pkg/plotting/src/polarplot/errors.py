"""Error types; all derive from ValueError so callers can catch broadly."""


class PlotError(ValueError):
    """Base class for everything this package raises on bad input."""


class PlotDataError(PlotError):
    """A CSV does not conform to the results schema."""


class PlotConfigError(PlotError):
    """A figure spec is inconsistent with the data it is asked to plot."""
