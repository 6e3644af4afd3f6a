# src/modular/eisenstein.py
from fractions import Fraction
from functools import lru_cache
from math import ceil

from sympy import divisor_sigma

from src.errors import ParameterError
from src.products.escapes import int_args
from src.series.core import FracSeries

# weight -> (coefficient of the divisor sum, power in sigma)
EISENSTEIN = {
    2: (-24, 1),
    4: (240, 3),
    6: (-504, 5),
}


@lru_cache(maxsize=64)
def eisenstein(weight: int, depth) -> FracSeries:
    """E_2, E_4 or E_6 with constant term 1, known below q^depth"""
    if weight not in EISENSTEIN:
        raise ParameterError(f"Eisenstein weight must be 2, 4 or 6, got {weight}")
    depth = Fraction(depth)
    scale, power = EISENSTEIN[weight]
    terms = {0: 1} if depth > 0 else {}
    for n in range(1, ceil(depth)):
        terms[n] = scale * int(divisor_sigma(n, power))
    return FracSeries.from_terms(terms, trunc=depth)


def _e_escape(raw: str, depth: Fraction) -> FracSeries:
    (weight,) = int_args(raw, 1)
    return eisenstein(weight, depth)


def register_escapes(registry):
    from src.products.escapes import SeriesProvider

    registry.register(SeriesProvider("E", _e_escape, "Eisenstein series E_k, k = 2, 4, 6"))
