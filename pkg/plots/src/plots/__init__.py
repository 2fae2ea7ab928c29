"""Chart generation for burstqec experiment CSV outputs."""

from .figures import FIGURES, PlotError, PlotSpec, render

__all__ = ["FIGURES", "PlotError", "PlotSpec", "render"]
