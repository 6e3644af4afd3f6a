# src/series/bivariate.py
"""Laurent polynomials in z with truncated q-series coefficients.

Only the z-degrees inside ``[zmin, zmax]`` are kept; products drop every
degree that leaves the window. ``constant_term`` is correct as long as
dropped degrees could not reach z^0 below the q-truncation, which callers
confirm by widening the window and comparing.
"""
from fractions import Fraction
from math import ceil, inf, isqrt
from typing import Dict, Mapping

import structlog

from src.errors import WindowError
from src.series.core import FracSeries, as_depth

logger = structlog.get_logger(__name__)


def default_window(depth, modulus, margin: int = 8) -> int:
    """Half-width M = ceil(sqrt(2*N*modulus)) + margin"""
    value = Fraction(2) * Fraction(depth) * Fraction(modulus)
    root = isqrt(ceil(value))
    if root * root < value:
        root += 1
    return root + margin


class BivariateSeries:
    __slots__ = ("zmin", "zmax", "trunc", "_components")

    def __init__(self, components: Mapping[int, FracSeries], zmin: int, zmax: int, trunc=None):
        if zmin > zmax:
            raise WindowError(f"empty z-window [{zmin}, {zmax}]")
        self.zmin = zmin
        self.zmax = zmax
        kept = {d: s for d, s in components.items() if zmin <= d <= zmax}
        if trunc is None:
            trunc = min((s.trunc for s in kept.values()), default=inf)
        self.trunc = as_depth(trunc)
        self._components: Dict[int, FracSeries] = {
            d: (s if s.trunc == self.trunc else s.truncate(self.trunc))
            for d, s in kept.items()
            if not s.is_zero
        }

    @classmethod
    def from_series(cls, series: FracSeries, window: int, degree: int = 0) -> "BivariateSeries":
        return cls({degree: series}, -window, window, series.trunc)

    def component(self, degree: int) -> FracSeries:
        s = self._components.get(degree)
        if s is None:
            return FracSeries.zero(self.trunc)
        return s

    @property
    def degrees(self):
        return sorted(self._components)

    def with_window(self, zmin: int, zmax: int) -> "BivariateSeries":
        return BivariateSeries(self._components, zmin, zmax, self.trunc)

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        out = dict(self._components)
        for d, s in other._components.items():
            out[d] = out[d] + s if d in out else s
        return BivariateSeries(out, min(self.zmin, other.zmin), max(self.zmax, other.zmax),
                               min(self.trunc, other.trunc))

    def __mul__(self, other) -> "BivariateSeries":
        if isinstance(other, FracSeries):
            comps = {d: s * other for d, s in self._components.items()}
            return BivariateSeries(comps, self.zmin, self.zmax)
        if not isinstance(other, BivariateSeries):
            return BivariateSeries({d: s.scale(other) for d, s in self._components.items()},
                                   self.zmin, self.zmax, self.trunc)
        zmin, zmax = min(self.zmin, other.zmin), max(self.zmax, other.zmax)
        acc: Dict[int, FracSeries] = {}
        for d1, a in self._components.items():
            for d2, b in other._components.items():
                d = d1 + d2
                if zmin <= d <= zmax:
                    term = a * b
                    acc[d] = acc[d] + term if d in acc else term
        trunc = min((s.trunc for s in acc.values()), default=min(self.trunc, other.trunc))
        return BivariateSeries(acc, zmin, zmax, trunc)

    __rmul__ = __mul__

    def scale_z(self, exponent) -> "BivariateSeries":
        """Substitute z -> q^exponent * z"""
        a = Fraction(exponent)
        comps = {d: s.shift(a * d) for d, s in self._components.items()}
        return BivariateSeries(comps, self.zmin, self.zmax)

    def invert_z(self) -> "BivariateSeries":
        """Substitute z -> 1/z"""
        comps = {-d: s for d, s in self._components.items()}
        return BivariateSeries(comps, -self.zmax, -self.zmin, self.trunc)

    def __repr__(self):
        return f"BivariateSeries(window=[{self.zmin}, {self.zmax}], trunc={self.trunc}, degrees={len(self._components)})"


def constant_term(b: BivariateSeries) -> FracSeries:
    if not b.zmin <= 0 <= b.zmax:
        raise WindowError(f"window [{b.zmin}, {b.zmax}] excludes z^0")
    return b.component(0)


def bivariate_pochhammer(sign: int, zpow: int, r, base, depth, window: int,
                         inverse: bool = False) -> BivariateSeries:
    """(x; q^base)_inf, or its reciprocal, for x = sign * q^r * z^zpow.

    Expanded through Euler's two sums, one z-degree per summation index,
    keeping the indices whose degree stays inside [-window, window].
    """
    if sign not in (1, -1) or zpow not in (1, -1):
        raise ValueError("sign and z-power must be +1 or -1")
    r, base, depth = Fraction(r), Fraction(base), Fraction(depth)
    if base <= 0:
        raise ValueError("base must be positive")

    def exponent(n):
        quad = 0 if inverse else base * n * (n - 1) / 2
        return quad + r * n

    lowest = min(exponent(n) for n in range(window + 1))
    reach = depth - lowest
    # running 1/(q^b;q^b)_n, known below q^reach
    poch = FracSeries.constant(1, trunc=reach)
    components: Dict[int, FracSeries] = {}
    for n in range(window + 1):
        if n:
            poch = poch / FracSeries.from_terms({0: 1, base * n: -1})
        e = exponent(n)
        if e >= depth:
            continue
        coef = sign ** n if inverse else (-sign) ** n
        components[zpow * n] = poch.scale(coef).shift(e).truncate(depth)
    logger.debug("bivariate_pochhammer", terms=len(components), window=window, inverse=inverse)
    return BivariateSeries(components, -window, window, depth)
