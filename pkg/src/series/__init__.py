# src/series/__init__.py
from src.series.core import FracSeries, compare
from src.series.rings import CoefRing, GaussRational, Root5Elem

__all__ = ["FracSeries", "compare", "CoefRing", "GaussRational", "Root5Elem"]
