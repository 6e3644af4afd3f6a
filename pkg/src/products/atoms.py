# src/products/atoms.py
"""Expression tree for q-product notation.

Atoms that are products of ``(1 +- q^e)`` factors lower to a ``FactorBag``
so that a whole quotient such as ``J(4)^5*J(40)/(J(1)*J(2)^2)`` expands in
one dense pass.
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, lcm
from typing import Iterator, Optional, Tuple

import numpy as np

from src.errors import NonUnitError, ParameterError
from src.series import dense
from src.series.core import FracSeries


def bernoulli_p2(t: Fraction) -> Fraction:
    """P2(t) = {t}^2 - {t} + 1/6"""
    frac = t - (t.numerator // t.denominator)
    return frac * frac - frac + Fraction(1, 6)


@dataclass
class FactorBag:
    """scale * q^shift * prod (1 + sign*q^e)^power over finite and periodic factors"""

    shift: Fraction = Fraction(0)
    scale: Fraction = Fraction(1)
    finite: Counter = field(default_factory=Counter)
    families: Counter = field(default_factory=Counter)

    def add_factor(self, e: Fraction, sign: int, power: int):
        """Absorb (1 + sign*q^e)^power, rewriting e <= 0 onto a positive exponent"""
        if power == 0:
            return
        if e == 0:
            base = 1 + sign
            if base == 0:
                if power < 0:
                    raise NonUnitError("division by a product with a vanishing factor")
                self.scale = Fraction(0)
                return
            self.scale *= Fraction(base) ** power
            return
        if e < 0:
            # 1 + s*q^e = s*q^e*(1 + s*q^-e) for s = +-1
            self.shift += e * power
            self.scale *= Fraction(sign) ** power
            e = -e
        self.finite[(e, sign)] += power

    def add_family(self, start: Fraction, step: Fraction, sign: int, power: int):
        if power:
            self.families[(start, step, sign)] += power

    def absorb(self, other: "FactorBag", power: int = 1):
        self.shift += other.shift * power
        if power < 0 and other.scale == 0:
            raise NonUnitError("division by zero")
        self.scale *= other.scale ** power
        for key, p in other.finite.items():
            self.finite[key] += p * power
        for key, p in other.families.items():
            self.families[key] += p * power

    def factor_powers(self, reach: Fraction) -> Counter:
        """Net power of every (e, sign) with 0 < e < reach"""
        out = Counter()
        for (e, sign), p in self.finite.items():
            if e < reach:
                out[(e, sign)] += p
        for (start, step, sign), p in self.families.items():
            e = start
            while e < reach:
                out[(e, sign)] += p
                e += step
        return out

    def expand(self, depth) -> FracSeries:
        depth = Fraction(depth)
        reach = depth - self.shift
        if self.scale == 0 or reach <= 0:
            return FracSeries.zero(depth)
        powers = {key: p for key, p in self.factor_powers(reach).items() if p}
        denom = lcm(reach.denominator, *(e.denominator for e, _ in powers))
        length = ceil(reach * denom)
        arr = np.zeros(length, dtype=object)
        arr[0] = 1
        for (e, sign), p in sorted(powers.items()):
            dense.multiply_binomial(arr, int(e * denom), sign, p)
        scale = self.scale if self.scale.denominator != 1 else self.scale.numerator
        coeffs = {i: scale * c for i, c in enumerate(arr) if c}
        return FracSeries(coeffs, denom, reach).shift(self.shift)


class Node:
    """Base of all expression nodes"""

    def children(self) -> Tuple["Node", ...]:
        return ()

    def atoms(self) -> Iterator["Atom"]:
        for child in self.children():
            yield from child.atoms()

    def bag(self) -> Optional[FactorBag]:
        return None


class Atom(Node):
    def atoms(self):
        yield self


@dataclass(frozen=True)
class Const(Atom):
    value: Fraction

    def bag(self):
        return FactorBag(scale=Fraction(self.value))

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class QPow(Atom):
    r: Fraction

    def bag(self):
        return FactorBag(shift=Fraction(self.r))

    def __str__(self):
        return f"qpow({self.r})"


@dataclass(frozen=True)
class Pochhammer(Atom):
    """(a; q^base)_length with a = sign*q^r; length None means infinite"""

    sign: int
    r: Fraction
    base: Fraction
    length: Optional[int] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ParameterError("Pochhammer sign must be + or -")
        if self.base <= 0:
            raise ParameterError(f"Pochhammer base power must be positive, got {self.base}")
        if self.length is None and self.r <= 0:
            raise ParameterError(f"infinite Pochhammer needs r > 0, got {self.r}")
        if self.length is not None and self.length < 0:
            raise ParameterError("Pochhammer length must be nonnegative")

    def bag(self):
        b = FactorBag()
        if self.length is None:
            b.add_family(self.r, self.base, -self.sign, 1)
        else:
            for k in range(self.length):
                b.add_factor(self.r + k * self.base, -self.sign, 1)
        return b

    def __str__(self):
        n = "inf" if self.length is None else self.length
        return f"P({'+' if self.sign > 0 else '-'}{self.r};{self.base};{n})"


@dataclass(frozen=True)
class J(Atom):
    m: int

    def __post_init__(self):
        if self.m <= 0:
            raise ParameterError(f"J(m) needs m > 0, got {self.m}")

    def bag(self):
        b = FactorBag()
        b.add_family(Fraction(self.m), Fraction(self.m), -1, 1)
        return b

    def __str__(self):
        return f"J({self.m})"


@dataclass(frozen=True)
class Jam(Atom):
    a: int
    m: int

    def __post_init__(self):
        if not 0 < self.a < self.m:
            raise ParameterError(f"Jam(a,m) needs 0 < a < m, got ({self.a},{self.m})")

    def bag(self):
        b = FactorBag()
        m = Fraction(self.m)
        b.add_family(Fraction(self.a), m, -1, 1)
        b.add_family(m - self.a, m, -1, 1)
        b.add_family(m, m, -1, 1)
        return b

    def __str__(self):
        return f"Jam({self.a},{self.m})"


@dataclass(frozen=True)
class GenEta(Atom):
    """Generalized eta q^(delta*P2(g/delta)/2) prod_{m = +-g mod delta} (1 - q^m)"""

    delta: int
    g: int

    def __post_init__(self):
        if not 0 < self.g < self.delta:
            raise ParameterError(f"geta(delta;g) needs 0 < g < delta, got ({self.delta};{self.g})")

    def bag(self):
        delta = Fraction(self.delta)
        b = FactorBag(shift=delta * bernoulli_p2(Fraction(self.g, self.delta)) / 2)
        b.add_family(Fraction(self.g), delta, -1, 1)
        if 2 * self.g != self.delta:
            b.add_family(delta - self.g, delta, -1, 1)
        return b

    def __str__(self):
        return f"geta({self.delta};{self.g})"


@dataclass(frozen=True)
class Eta(Atom):
    def bag(self):
        b = FactorBag(shift=Fraction(1, 24))
        b.add_family(Fraction(1), Fraction(1), -1, 1)
        return b

    def __str__(self):
        return "eta"


WEBER_KINDS = ("f", "f1", "f2")


@dataclass(frozen=True)
class Weber(Atom):
    which: str

    def __post_init__(self):
        if self.which not in WEBER_KINDS:
            raise ParameterError(f"unknown Weber function {self.which!r}")

    def bag(self):
        one, half = Fraction(1), Fraction(1, 2)
        if self.which == "f":
            b = FactorBag(shift=Fraction(-1, 48))
            b.add_family(half, one, 1, 1)
        elif self.which == "f1":
            b = FactorBag(shift=Fraction(-1, 48))
            b.add_family(half, one, -1, 1)
        else:
            b = FactorBag(shift=Fraction(1, 24))
            b.add_family(one, one, 1, 1)
        return b

    def __str__(self):
        return f"weber({self.which})"


@dataclass(frozen=True)
class Theta2(Atom):
    def __str__(self):
        return "theta2"


@dataclass(frozen=True)
class Theta3(Atom):
    def __str__(self):
        return "theta3"


@dataclass(frozen=True)
class PartialTheta(Atom):
    j: Fraction
    k: Fraction
    signed: bool = False

    def __post_init__(self):
        if self.k <= 0:
            raise ParameterError(f"partial theta needs k > 0, got {self.k}")

    def __str__(self):
        return f"{'dg' if self.signed else 'dtheta'}({self.j},{self.k})"


@dataclass(frozen=True)
class Escape(Atom):
    """Series supplied by a registered provider, e.g. chi0(3; 0,0,1/2)"""

    name: str
    raw: str

    def __str__(self):
        return f"{self.name}({self.raw})"


@dataclass(frozen=True)
class Sum(Node):
    terms: Tuple[Tuple[int, Node], ...]

    def children(self):
        return tuple(t for _, t in self.terms)

    def __str__(self):
        out = []
        for i, (sign, t) in enumerate(self.terms):
            if i == 0:
                out.append(str(t) if sign > 0 else f"-{t}")
            else:
                out.append(f" {'+' if sign > 0 else '-'} {t}")
        return "(" + "".join(out) + ")"


@dataclass(frozen=True)
class Product(Node):
    factors: Tuple[Tuple[Node, int], ...]

    def children(self):
        return tuple(f for f, _ in self.factors)

    def bag(self):
        out = FactorBag()
        for child, power in self.factors:
            b = child.bag()
            if b is None:
                return None
            out.absorb(b, power)
        return out

    def __str__(self):
        parts = []
        for child, power in self.factors:
            parts.append(str(child) if power == 1 else f"{child}^{power}")
        return "*".join(parts)


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: int

    def children(self):
        return (self.base,)

    def bag(self):
        b = self.base.bag()
        if b is None:
            return None
        out = FactorBag()
        out.absorb(b, self.exponent)
        return out

    def __str__(self):
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class TShift(Node):
    body: Node

    def children(self):
        return (self.body,)

    def __str__(self):
        return f"tshift({self.body})"


@dataclass(frozen=True)
class SubQ(Node):
    body: Node
    m: Fraction

    def __post_init__(self):
        if self.m <= 0:
            raise ParameterError(f"subq needs a positive power, got {self.m}")

    def children(self):
        return (self.body,)

    def __str__(self):
        return f"subq({self.body}; {self.m})"
