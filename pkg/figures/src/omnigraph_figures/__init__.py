"""Static figures from omnigraph CSV result tables."""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, FigureSpec, SchemaError, build_figure, render

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "build_figure", "render"]
