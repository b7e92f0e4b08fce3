"""Figure regeneration for micromaser CSV output."""

__version__ = "0.1.0"

from .figures import RECIPES, DataError, FigureRecipe, load_curves, render

__all__ = ["RECIPES", "DataError", "FigureRecipe", "load_curves", "render",
           "__version__"]
