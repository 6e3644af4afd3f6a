# src/products/escapes.py
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional
import importlib
import threading

import structlog

from src.errors import ParameterError
from src.series.core import FracSeries

logger = structlog.get_logger(__name__)

Provider = Callable[[str, Fraction], FracSeries]

PROVIDER_MODULES = [
    "src.nahm.lattice",
    "src.theta.characters",
    "src.modular.eisenstein",
]


@dataclass
class SeriesProvider:
    """A named series provider usable as ``name(raw args)`` in expressions"""
    name: str
    provider: Provider
    description: str = ""


class EscapeRegistry:
    """Registry for pluggable series providers"""

    _instance = None
    # re-entrant: provider modules register through EscapeRegistry() while it initializes
    _lock = threading.RLock()
    _escapes: Dict[str, SeriesProvider] = {}

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(EscapeRegistry, cls).__new__(cls)
                cls._instance._initialize_default_escapes()
        return cls._instance

    def _initialize_default_escapes(self):
        for module_path in PROVIDER_MODULES:
            self.load_from_module(module_path)

    def register(self, escape: SeriesProvider):
        self._escapes[escape.name] = escape

    def get(self, name: str) -> Optional[SeriesProvider]:
        return self._escapes.get(name)

    def list(self) -> List[str]:
        return sorted(self._escapes)

    def resolve(self, name: str, raw: str, depth) -> FracSeries:
        escape = self.get(name)
        if escape is None:
            raise ParameterError(f"unknown series escape {name!r}")
        return escape.provider(raw, Fraction(depth))

    def load_from_module(self, module_path: str):
        """Load providers from a module exposing register_escapes(registry)"""
        try:
            module = importlib.import_module(module_path)
        except ImportError as e:
            logger.error("escape_module_unavailable", module=module_path, error=str(e))
            raise
        if hasattr(module, 'register_escapes'):
            module.register_escapes(self)


def register_escape(name: str, provider: Provider, description: str = ""):
    EscapeRegistry().register(SeriesProvider(name, provider, description))


def split_args(raw: str, sep: str = ",") -> List[str]:
    return [part.strip() for part in raw.split(sep) if part.strip()]


def rational_args(raw: str, count: Optional[int] = None) -> List[Fraction]:
    try:
        values = [Fraction(x) for x in split_args(raw)]
    except ValueError as exc:
        raise ParameterError(f"expected rational arguments, got {raw!r}") from exc
    if count is not None and len(values) != count:
        raise ParameterError(f"expected {count} arguments, got {len(values)} in {raw!r}")
    return values


def int_args(raw: str, count: Optional[int] = None) -> List[int]:
    values = rational_args(raw, count)
    if any(v.denominator != 1 for v in values):
        raise ParameterError(f"expected integer arguments, got {raw!r}")
    return [int(v) for v in values]
