# src/suites/registry.py
import threading
from pathlib import Path
from typing import Dict, List, Optional

import structlog

from src.config.settings import settings
from src.errors import UnknownSuiteError
from src.schemas.reports import SuiteDefinition
from src.suites.loader import load_suite

logger = structlog.get_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"


class SuiteRegistry:
    """Registry for the shipped and user supplied verification suites"""

    _instance = None
    _lock = threading.RLock()
    _suites: Dict[str, SuiteDefinition] = {}
    _aliases: Dict[str, str] = {}

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(SuiteRegistry, cls).__new__(cls)
                cls._instance._initialize_default_suites()
        return cls._instance

    def _initialize_default_suites(self):
        self.load_from_directory(DATA_DIR)
        if settings.suites:
            # user suites override shipped ones with the same id
            self.load_from_directory(Path(settings.suites))

    def register(self, suite: SuiteDefinition):
        if suite.suite_id in self._suites:
            logger.debug("suite_replaced", suite_id=suite.suite_id)
        self._suites[suite.suite_id] = suite
        self._aliases.pop(suite.suite_id, None)
        for alias in suite.aliases:
            if alias in self._suites:
                logger.warning("suite_alias_shadowed", alias=alias, suite_id=suite.suite_id)
                continue
            self._aliases[alias] = suite.suite_id

    def canonical(self, suite_id: str) -> str:
        return self._aliases.get(suite_id, suite_id)

    def get(self, suite_id: str) -> SuiteDefinition:
        suite = self._suites.get(self.canonical(suite_id))
        if suite is None:
            raise UnknownSuiteError(f"unknown suite {suite_id!r}; known: {', '.join(self.list()) or 'none'}")
        return suite

    def find(self, suite_id: str) -> Optional[SuiteDefinition]:
        return self._suites.get(self.canonical(suite_id))

    def list(self, include_deep: bool = True) -> List[str]:
        return sorted(s for s, d in self._suites.items() if include_deep or not d.deep_only)

    def aliases(self) -> Dict[str, str]:
        return dict(sorted(self._aliases.items()))

    def load_from_directory(self, directory: Path):
        directory = Path(directory)
        if not directory.is_dir():
            logger.warning("suite_directory_missing", path=str(directory))
            return
        for path in sorted(directory.glob("*.suite")):
            self.register(load_suite(path))
