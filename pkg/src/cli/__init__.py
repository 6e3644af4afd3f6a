# src/cli/__init__.py
from src.cli.app import main

__all__ = ["main"]
