"""Publication-style figures from decoder sweep CSVs and per-round
syndrome-weight files.

This package talks to the simulator only through its two output file
formats; it never imports the simulator itself.
"""

from .figures import (
    FigureResult,
    FigureSpec,
    NoDataError,
    SchemaError,
    SWEEP_FIELDS,
    WEIGHT_FIELDS,
    plot_components,
    plot_decay,
    plot_threshold,
)

__all__ = [
    "FigureResult",
    "FigureSpec",
    "NoDataError",
    "SchemaError",
    "SWEEP_FIELDS",
    "WEIGHT_FIELDS",
    "plot_components",
    "plot_decay",
    "plot_threshold",
]
