# src/series/deepen.py
from fractions import Fraction
from typing import Callable

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.config.settings import settings
from src.errors import InsufficientDepthError
from src.monitoring.logging_config import VerificationLogger
from src.series.core import FracSeries

log = VerificationLogger()


def deepen(build: Callable[[Fraction], FracSeries], depth, what: str = "series",
           attempts: int = None) -> FracSeries:
    """Call ``build`` with growing working depth until it is known to ``depth``.

    Truncation shrinks under products with negative valuation and under
    inversion; each retry adds the observed deficit to the working depth.
    """
    depth = Fraction(depth)
    working = depth
    result = None
    for attempt in Retrying(
        stop=stop_after_attempt(attempts or settings.deepen_attempts),
        retry=retry_if_exception_type(InsufficientDepthError),
        reraise=True,
    ):
        with attempt:
            result = build(working)
            if result.trunc < depth:
                err = InsufficientDepthError(depth, result.trunc)
                nxt = working + err.deficit + 1
                log.depth_increased(what, depth, result.trunc, nxt)
                working = nxt
                raise err
    return result.truncate(depth)
