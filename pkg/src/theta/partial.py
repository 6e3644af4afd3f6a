# src/theta/partial.py
"""Weight 3/2 partial theta series and related unary theta sums.

All sums run over n in Z with a quadratic exponent; enumeration walks
outward from the vertex and stops once the exponent reaches the depth,
so no square roots are taken.
"""
from fractions import Fraction
from math import floor
from typing import Callable, Dict

from src.errors import ParameterError
from src.series.core import FracSeries


def quadratic_sum(coefficient: Callable[[int], object], exponent: Callable[[int], Fraction],
                  vertex: Fraction, depth) -> FracSeries:
    """Sum of coefficient(n) q^exponent(n) over n in Z for an upward parabola"""
    depth = Fraction(depth)
    terms: Dict[Fraction, object] = {}

    def walk(start: int, step: int):
        n = start
        while True:
            e = exponent(n)
            if e >= depth:
                return
            c = coefficient(n)
            if c:
                terms[e] = terms.get(e, 0) + c
            n += step

    left = floor(vertex)
    walk(left, -1)
    walk(left + 1, 1)
    return FracSeries.from_terms(terms, trunc=depth)


def partial_theta(j, k, signed: bool, depth) -> FracSeries:
    """(dTheta)_{j,k} = sum (2kn+j) q^((2kn+j)^2/(4k)); (dG)_{j,k} adds (-1)^n"""
    j, k = Fraction(j), Fraction(k)
    if k <= 0:
        raise ParameterError(f"partial theta needs k > 0, got {k}")

    def coefficient(n):
        c = 2 * k * n + j
        if signed and n % 2:
            c = -c
        return c

    return quadratic_sum(coefficient, lambda n: (2 * k * n + j) ** 2 / (4 * k), -j / (2 * k), depth)


def theta_residue_class(a: int, m: int, depth) -> FracSeries:
    """sum over n = a mod m of n q^(n^2)"""
    if m < 1 or not 0 <= a < m:
        raise ParameterError(f"residue class needs 0 <= a < m, got ({a}, {m})")
    return quadratic_sum(lambda t: a + m * t, lambda t: Fraction((a + m * t) ** 2),
                         Fraction(-a, m), depth)


def linear_theta(a, b, c, d, depth) -> FracSeries:
    """sum over n in Z of (a n + b) q^(c n^2 + d n)"""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    if c <= 0:
        raise ParameterError(f"linear theta needs c > 0, got {c}")
    return quadratic_sum(lambda n: a * n + b, lambda n: c * n * n + d * n, -d / (2 * c), depth)
