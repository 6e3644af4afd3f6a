# src/series/rings.py
"""Coefficient rings for truncated series.

Rational coefficients are plain ``int``/``Fraction`` values. The two exact
quadratic rings are small value types; the complex ring uses mpmath values
bound to a per-precision ``MPContext`` so precision never leaks through a
global context.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
import math
import re

import mpmath

from src.errors import RingMismatchError


class CoefRing(str, Enum):
    RATIONAL = "rational"
    ROOT5 = "root5"
    GAUSS = "gauss"
    COMPLEX = "complex"


@lru_cache(maxsize=None)
def complex_context(prec: int) -> "mpmath.MPContext":
    """Return a private mpmath context working at ``prec`` bits"""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def _mpf(ctx, value: Fraction):
    return ctx.mpf(value.numerator) / value.denominator


@dataclass(frozen=True, slots=True)
class Root5Elem:
    """Element a + b*sqrt(5) of Q(sqrt 5)"""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))

    @classmethod
    def sqrt5(cls) -> "Root5Elem":
        return cls(0, 1)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Root5Elem):
            return other
        if isinstance(other, (int, Fraction)):
            return Root5Elem(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Root5Elem(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Root5Elem(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Root5Elem(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Root5Elem(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "Root5Elem":
        return Root5Elem(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> "Root5Elem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(sqrt 5)")
        return Root5Elem(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = Root5Elem(1, 0)
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(5)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_mp(self, ctx):
        return _mpf(ctx, self.a) + _mpf(ctx, self.b) * ctx.sqrt(5)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}*sqrt5"

    @classmethod
    def parse(cls, text: str) -> "Root5Elem":
        text = text.replace(" ", "")
        if "sqrt5" not in text:
            return cls(Fraction(text), 0)
        head, _, _ = text.partition("*sqrt5")
        # split at the last sign that separates the two parts
        idx = max(head.rfind("+"), head.rfind("-", 1))
        if idx <= 0:
            return cls(0, Fraction(head))
        return cls(Fraction(head[:idx]), Fraction(head[idx:]))


@dataclass(frozen=True, slots=True)
class GaussRational:
    """Gaussian rational re + im*i"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def i(cls) -> "GaussRational":
        return cls(0, 1)

    @classmethod
    def unit_root(cls, quarter_turns: int) -> "GaussRational":
        """Return i**quarter_turns"""
        return [cls(1, 0), cls(0, 1), cls(-1, 0), cls(0, -1)][quarter_turns % 4]

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(i)")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def to_mp(self, ctx):
        return ctx.mpc(_mpf(ctx, self.re), _mpf(ctx, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}*i"

    @classmethod
    def parse(cls, text: str) -> "GaussRational":
        text = text.replace(" ", "")
        if "*i" not in text:
            return cls(Fraction(text), 0)
        head, _, _ = text.partition("*i")
        idx = max(head.rfind("+"), head.rfind("-", 1))
        if idx <= 0:
            return cls(0, Fraction(head))
        return cls(Fraction(head[:idx]), Fraction(head[idx:]))


def ring_of(value) -> CoefRing:
    if isinstance(value, (int, Fraction)):
        return CoefRing.RATIONAL
    if isinstance(value, Root5Elem):
        return CoefRing.ROOT5
    if isinstance(value, GaussRational):
        return CoefRing.GAUSS
    return CoefRing.COMPLEX


def join_rings(left: CoefRing, right: CoefRing) -> CoefRing:
    """Smallest ring both operands embed into canonically"""
    if left == right:
        return left
    if left == CoefRing.RATIONAL:
        return right
    if right == CoefRing.RATIONAL:
        return left
    if CoefRing.COMPLEX in (left, right):
        return CoefRing.COMPLEX
    raise RingMismatchError(f"no canonical embedding between {left.value} and {right.value}")


def embed(value, ring: CoefRing, prec: int = 53):
    """Map a coefficient into ``ring``"""
    source = ring_of(value)
    if source == ring:
        return value
    if ring == CoefRing.ROOT5 and source == CoefRing.RATIONAL:
        return Root5Elem(value, 0)
    if ring == CoefRing.GAUSS and source == CoefRing.RATIONAL:
        return GaussRational(value, 0)
    if ring == CoefRing.COMPLEX:
        return to_mp(value, complex_context(prec))
    raise RingMismatchError(f"cannot embed {source.value} coefficient into {ring.value}")


def to_mp(value, ctx):
    if isinstance(value, int):
        return ctx.mpc(value)
    if isinstance(value, Fraction):
        return ctx.mpc(_mpf(ctx, value))
    if isinstance(value, (Root5Elem, GaussRational)):
        return ctx.mpc(value.to_mp(ctx))
    return ctx.mpc(value)


def normalize_rational(value):
    """Collapse integral Fractions to int so integer series stay on the fast path"""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def coefficient_text(value, digits: int = 30) -> str:
    if isinstance(value, (int, Fraction, Root5Elem, GaussRational)):
        return str(value)
    return mpmath.nstr(value, digits)


def parse_coefficient(text: str, ring: CoefRing, prec: int = 53):
    if ring == CoefRing.RATIONAL:
        return normalize_rational(Fraction(text))
    if ring == CoefRing.ROOT5:
        return Root5Elem.parse(text)
    if ring == CoefRing.GAUSS:
        return GaussRational.parse(text)
    ctx = complex_context(prec)
    match = _COMPLEX_TEXT.fullmatch(text.replace(" ", "").strip("()"))
    if match is None:
        raise ValueError(f"unreadable complex coefficient {text!r}")
    real, imag = match.group("re"), match.group("im")
    return ctx.mpc(ctx.mpf(real or "0"), ctx.mpf(imag or "0"))


_COMPLEX_TEXT = re.compile(
    r"(?P<re>[-+]?[0-9.]+(?:e[-+]?\d+)?)?(?:(?P<im>[-+][0-9.]+(?:e[-+]?\d+)?)j)?"
)
