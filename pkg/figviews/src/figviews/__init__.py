"""Figure rendering for polarization sweep CSV outputs."""

from .render import FigureRequest, SchemaError, build_figure, load_aggregate, load_tmax, render

__version__ = "0.1.0"
