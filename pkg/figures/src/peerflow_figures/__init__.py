"""peerflow-figures: publication-style rendering of peerflow CSV outputs."""

from .recipes import RECIPES, FigureRecipe, PanelSpec
from .render import RenderError, render
from .tables import TableError, render_tables

__version__ = "0.1.0"
