# src/transform/evaluate.py
"""Numeric evaluation of truncated series on the upper half-plane."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import structlog

from src.errors import EvaluationError
from src.series.core import FracSeries
from src.series.rings import complex_context, to_mp

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Evaluation:
    value: object
    tail_bound: object


def parse_tau(text: str, prec: int):
    """'re,im' with rational parts, e.g. '1/3,1' for 1/3 + i"""
    ctx = complex_context(prec)
    try:
        re_text, im_text = (part.strip() for part in text.split(","))
        re, im = Fraction(re_text), Fraction(im_text)
    except ValueError as exc:
        raise EvaluationError(f"tau must be given as 're,im', got {text!r}") from exc
    return ctx.mpc(ctx.mpf(re.numerator) / re.denominator, ctx.mpf(im.numerator) / im.denominator)


def as_tau(tau: Union[str, complex, object], prec: int):
    ctx = complex_context(prec)
    if isinstance(tau, str):
        return parse_tau(tau, prec)
    return ctx.mpc(tau)


def evaluate(s: FracSeries, tau, prec: int, tolerance: Optional[object] = None) -> Evaluation:
    """Sum of c * exp(2 pi i e tau) over the stored terms with a tail estimate.

    Coefficients are dominated by an envelope A exp(kappa sqrt(e)) fitted to
    the stored terms, the growth of modular and Nahm-sum coefficients. On a
    (1/D)Z lattice the tail from q^N on is then at most
    A exp(kappa sqrt(N)) |q|^N / (1 - rho) with rho the envelope's term ratio.
    The envelope is extrapolated, so the bound is an estimate. With
    ``tolerance`` set, a larger estimate raises EvaluationError.
    """
    ctx = complex_context(prec)
    tau = as_tau(tau, prec)
    if tau.imag <= 0:
        raise EvaluationError(f"tau = {ctx.nstr(tau, 10)} is not in the upper half-plane")

    two_pi_i_tau = ctx.mpc(0, 2) * ctx.pi * tau
    total = ctx.mpc(0)
    moduli = []
    for e, c in s.items():
        coeff = to_mp(c, ctx)
        moduli.append((e, ctx.fabs(coeff)))
        total += coeff * ctx.exp(two_pi_i_tau * (ctx.mpf(e.numerator) / e.denominator))

    if s.is_exact:
        tail = ctx.mpf(0)
    else:
        tail = _tail_estimate(ctx, moduli, s.trunc, s.reduced_denom(), ctx.exp(-2 * ctx.pi * tau.imag))
    if tolerance is not None and tail > tolerance:
        raise EvaluationError(
            f"tail bound {ctx.nstr(tail, 5)} exceeds tolerance {ctx.nstr(ctx.mpf(tolerance), 5)}; "
            f"expand beyond q^({s.trunc})"
        )
    return Evaluation(value=total, tail_bound=tail)


def growth_envelope(ctx, moduli) -> Tuple[object, object]:
    """(A, kappa) with |c_e| <= A exp(kappa sqrt(e)) for every stored term"""
    amplitude = max([ctx.mpf(1)] + [m for e, m in moduli if e <= 1])
    kappa = ctx.mpf(0)
    for e, m in moduli:
        if e > 1 and m > amplitude:
            kappa = max(kappa, ctx.log(m / amplitude) / ctx.sqrt(ctx.mpf(e.numerator) / e.denominator))
    return amplitude, kappa


def _tail_estimate(ctx, moduli, trunc: Fraction, denom: int, modulus):
    amplitude, kappa = growth_envelope(ctx, moduli)
    step = ctx.mpf(1) / denom
    n = ctx.mpf(trunc.numerator) / trunc.denominator
    # sqrt(n + step) - sqrt(n) <= min(sqrt(step), step / (2 sqrt(n)))
    rise = ctx.sqrt(step) if n <= 0 else min(ctx.sqrt(step), step / (2 * ctx.sqrt(n)))
    ratio = ctx.power(modulus, step) * ctx.exp(kappa * rise)
    if ratio >= 1:
        return ctx.inf
    lead = amplitude * ctx.exp(kappa * ctx.sqrt(max(n, 0))) * ctx.power(modulus, n)
    return lead / (1 - ratio)


def value(s: FracSeries, tau, prec: int, tolerance: Optional[object] = None):
    return evaluate(s, tau, prec, tolerance).value
