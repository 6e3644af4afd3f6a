# src/suites/__init__.py
from src.suites.builtins import BuiltinRegistry
from src.suites.loader import load_suite, parse_suite
from src.suites.registry import SuiteRegistry
from src.suites.runner import SuiteRunner, config_hash, run_suite

__all__ = [
    "BuiltinRegistry",
    "SuiteRegistry",
    "SuiteRunner",
    "config_hash",
    "load_suite",
    "parse_suite",
    "run_suite",
]
