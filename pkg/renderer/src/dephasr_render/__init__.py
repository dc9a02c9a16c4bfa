"""Plots dephasr trajectory CSV files; no physics happens here."""

from .render import PlotSpec, SchemaError, ValidationError, load_rows, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "ValidationError", "load_rows", "render",
           "__version__"]
