# src/monitoring/logging_config.py
import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

from pythonjsonlogger import jsonlogger
import structlog


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None):
    """Configure structured logging with structlog.

    Log records go to stderr so that text and JSON reports on stdout stay
    machine readable.
    """
    logging.getLogger().handlers.clear()

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer()
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    level = getattr(logging, log_level.upper(), logging.INFO)
    formatter = jsonlogger.JsonFormatter(
        fmt='%(asctime)s %(levelname)s %(name)s %(message)s'
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logging.getLogger().addHandler(console_handler)

    if log_file:
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10_485_760,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logging.getLogger().addHandler(file_handler)

    logging.getLogger().setLevel(level)
    return structlog.get_logger()


class VerificationLogger:
    """Logger with verification-run context"""

    def __init__(self, base_logger=None):
        base_logger = base_logger or structlog.get_logger()
        self.logger = base_logger.bind(system="nahmlab")

    def suite_started(self, suite_id: str, checks: int, depth: int, config_hash: str):
        self.logger.info(
            "suite_started",
            suite_id=suite_id,
            checks=checks,
            depth=depth,
            config_hash=config_hash,
        )

    def check_started(self, suite_id: str, check_id: str, depth):
        self.logger.debug("check_started", suite_id=suite_id, check_id=check_id, depth=str(depth))

    def check_completed(self, suite_id: str, check_id: str, status: str, elapsed_ms: float):
        self.logger.info(
            "check_completed",
            suite_id=suite_id,
            check_id=check_id,
            status=status,
            elapsed_ms=round(elapsed_ms, 3),
        )

    def identity_mismatch(self, suite_id: str, check_id: str, exponent: str, lhs: str, rhs: str):
        """Log the first differing coefficient of a failed identity"""
        self.logger.warning(
            "identity_mismatch",
            suite_id=suite_id,
            check_id=check_id,
            exponent=exponent,
            lhs=lhs,
            rhs=rhs,
        )

    def depth_increased(self, what: str, requested, obtained, next_depth):
        self.logger.debug(
            "depth_increased",
            what=what,
            requested=str(requested),
            obtained=str(obtained),
            next_depth=str(next_depth),
        )

    def tba_sweep(self, sweep: int, residual):
        self.logger.debug("tba_sweep", sweep=sweep, residual=str(residual))

    def check_failed(self, suite_id: str, check_id: str, error: Exception):
        self.logger.error(
            "check_failed",
            suite_id=suite_id,
            check_id=check_id,
            error_type=type(error).__name__,
            error_message=str(error),
        )
