# src/products/__init__.py
from src.products.expand import ProductExpander, expand, pochhammer
from src.products.grammar import parse

__all__ = ["ProductExpander", "expand", "parse", "pochhammer"]
