# src/suites/runner.py
import asyncio
import hashlib
import json
import time
from fractions import Fraction
from typing import Dict, List, Optional

import structlog

from src import __version__
from src.config.settings import Settings, settings
from src.errors import ParameterError
from src.monitoring.logging_config import VerificationLogger
from src.monitoring.metrics import metrics
from src.products.expand import ProductExpander
from src.schemas.reports import CheckKind, CheckResult, CheckSpec, CheckStatus, SuiteDefinition, VerificationReport
from src.series.core import compare
from src.series.rings import CoefRing
from src.suites.builtins import BuiltinRegistry
from src.suites.registry import SuiteRegistry

logger = structlog.get_logger(__name__)

# settings that only steer output never enter the hash
_UNHASHED = {"log_level", "log_file", "metrics_file", "jobs"}


def config_hash(config: Settings, overrides: Optional[Dict] = None) -> str:
    payload = {k: v for k, v in config.model_dump().items() if k not in _UNHASHED}
    payload["overrides"] = {k: v for k, v in (overrides or {}).items() if k not in _UNHASHED}
    blob = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class SuiteRunner:
    """Runs every check of a suite concurrently and assembles an order-stable report"""

    def __init__(self, config: Optional[Settings] = None, suites: Optional[SuiteRegistry] = None,
                 builtins: Optional[BuiltinRegistry] = None):
        self.config = config or settings
        self.suites = suites or SuiteRegistry()
        self.builtins = builtins or BuiltinRegistry()
        self.log = VerificationLogger()

    def resolve(self, suite_id: str) -> SuiteDefinition:
        suite = self.suites.get(suite_id)
        if suite.deep_only and not self.config.deep:
            raise ParameterError(f"suite {suite_id!r} runs only with --deep")
        return suite

    def depth_for(self, suite: SuiteDefinition, spec: CheckSpec, overrides: Dict) -> int:
        if spec.depth is not None:
            return spec.depth
        if "depth" in spec.params:
            return int(spec.params["depth"])
        return int(overrides.get("depth") or suite.depth)

    def ring_for(self, suite: SuiteDefinition, overrides: Dict) -> CoefRing:
        return CoefRing(overrides.get("ring") or suite.ring)

    async def run(self, suite_id: str, overrides: Optional[Dict] = None) -> VerificationReport:
        overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        suite = self.resolve(suite_id)
        digest = config_hash(self.config, overrides)
        self.log.suite_started(suite.suite_id, len(suite.checks), suite.depth, digest)

        semaphore = asyncio.Semaphore(self.config.jobs)

        async def bounded(spec: CheckSpec) -> CheckResult:
            async with semaphore:
                return await asyncio.to_thread(self.run_check, suite, spec, overrides)

        results: List[CheckResult] = await asyncio.gather(*(bounded(spec) for spec in suite.checks))
        results.sort(key=lambda r: r.check_id)

        passed = sum(1 for r in results if r.status == CheckStatus.PASS)
        metrics.update_pass_ratio(suite.suite_id, passed, len(results))
        return VerificationReport(
            suite_id=suite.suite_id,
            tool_version=__version__,
            config_hash=digest,
            checks=results,
        )

    def run_check(self, suite: SuiteDefinition, spec: CheckSpec, overrides: Dict) -> CheckResult:
        depth = self.depth_for(suite, spec, overrides)
        self.log.check_started(suite.suite_id, spec.check_id, depth)
        start = time.perf_counter()
        try:
            if spec.kind == CheckKind.IDENTITY:
                result = self._identity(suite, spec, depth, overrides)
            else:
                result = self.builtins.run(spec.builtin, spec.check_id, spec.params, depth, self.config)
        except Exception as e:
            self.log.check_failed(suite.suite_id, spec.check_id, e)
            result = CheckResult(check_id=spec.check_id, status=CheckStatus.ERROR, depth=str(depth),
                                 detail=f"{type(e).__name__}: {e}")
        elapsed = time.perf_counter() - start
        result = result.model_copy(update={"elapsed_ms": elapsed * 1000})

        if result.mismatch is not None and result.status == CheckStatus.FAIL:
            m = result.mismatch
            self.log.identity_mismatch(suite.suite_id, spec.check_id, m.exponent, m.lhs, m.rhs)
        self.log.check_completed(suite.suite_id, spec.check_id, result.status.value, elapsed * 1000)
        metrics.record_check(suite.suite_id, result.status.value, elapsed)
        return result

    def _identity(self, suite: SuiteDefinition, spec: CheckSpec, depth: int, overrides: Dict) -> CheckResult:
        expander = ProductExpander()
        lhs = expander.expand(spec.lhs, depth)
        rhs = expander.expand(spec.rhs, depth)
        ring = self.ring_for(suite, overrides)
        if ring != CoefRing.RATIONAL:
            prec = self.config.precision_bits
            lhs, rhs = lhs.with_ring(ring, prec), rhs.with_ring(ring, prec)
        report = compare(lhs, rhs, Fraction(depth))
        status = CheckStatus.PASS if report.equal else CheckStatus.FAIL
        return CheckResult(check_id=spec.check_id, status=status, depth=report.depth, mismatch=report.mismatch)


def run_suite(suite_id: str, config: Optional[Settings] = None, **overrides) -> VerificationReport:
    """Synchronous entry point; overrides are Settings fields plus ``depth`` and ``ring``"""
    config = config or settings
    fields = {k: v for k, v in overrides.items() if k in Settings.model_fields and v is not None}
    if fields:
        config = config.model_copy(update=fields)
    return asyncio.run(SuiteRunner(config).run(suite_id, overrides))
