# src/series/core.py
"""Truncated Laurent series in q with exponents on a (1/D)Z lattice.

A ``FracSeries`` stores the coefficient of ``q^(k/D)`` under the integer key
``k`` and knows every coefficient with exponent below ``trunc``. Exact
values (finite Laurent polynomials) carry ``trunc = math.inf``.
"""
from fractions import Fraction
from math import ceil, gcd, inf, isinf, lcm
from types import MappingProxyType
from typing import Callable, Dict, Iterator, Mapping, Optional, Tuple, Union

import mpmath

from src.errors import (
    DepthError,
    FractionalExponentError,
    NonUnitError,
    RingMismatchError,
    TruncationUnderflowError,
    ZeroSeriesError,
)
from src.series import dense
from src.series.rings import (
    CoefRing,
    GaussRational,
    coefficient_text,
    complex_context,
    embed,
    join_rings,
    normalize_rational,
    parse_coefficient,
    ring_of,
)

Depth = Union[Fraction, float]


def as_depth(value) -> Depth:
    if value is None:
        return inf
    if isinstance(value, float) and isinf(value):
        return inf
    if isinstance(value, str) and value.strip() in ("inf", "oo"):
        return inf
    return Fraction(value)


def _key_limit(trunc: Depth, denom: int) -> Optional[int]:
    """Smallest key excluded by ``trunc`` (None for exact values)"""
    if isinf(trunc):
        return None
    return ceil(trunc * denom)


class FracSeries:
    """Immutable truncated series; see module docstring for the encoding"""

    __slots__ = ("denom", "trunc", "ring", "prec", "_coeffs")

    def __init__(
        self,
        coeffs: Optional[Mapping[int, object]] = None,
        denom: int = 1,
        trunc=inf,
        ring: CoefRing = CoefRing.RATIONAL,
        prec: int = 53,
    ):
        if denom < 1:
            raise ValueError("denominator must be positive")
        self.denom = int(denom)
        self.trunc = as_depth(trunc)
        self.ring = CoefRing(ring)
        self.prec = prec
        limit = _key_limit(self.trunc, self.denom)
        clean: Dict[int, object] = {}
        for k, c in (coeffs or {}).items():
            if not c or (limit is not None and k >= limit):
                continue
            clean[k] = normalize_rational(c) if self.ring == CoefRing.RATIONAL else c
        self._coeffs = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping, trunc=inf, ring: Optional[CoefRing] = None,
                   prec: int = 53) -> "FracSeries":
        """Build from a map of rational exponents to coefficients"""
        exps = {Fraction(e): c for e, c in terms.items() if c}
        denom = 1
        for e in exps:
            denom = lcm(denom, e.denominator)
        trunc = as_depth(trunc)
        if not isinf(trunc):
            denom = lcm(denom, trunc.denominator)
        if ring is None:
            ring = CoefRing.RATIONAL
            for c in exps.values():
                ring = join_rings(ring, ring_of(c))
        coeffs: Dict[int, object] = {}
        for e, c in exps.items():
            k = int(e * denom)
            coeffs[k] = coeffs.get(k, 0) + embed(c, ring, prec)
        return cls(coeffs, denom, trunc, ring, prec)

    @classmethod
    def monomial(cls, exponent=0, coeff=1, trunc=inf) -> "FracSeries":
        return cls.from_terms({Fraction(exponent): coeff}, trunc, ring_of(coeff))

    @classmethod
    def constant(cls, value, trunc=inf) -> "FracSeries":
        return cls.monomial(0, value, trunc)

    @classmethod
    def zero(cls, trunc=inf) -> "FracSeries":
        trunc = as_depth(trunc)
        denom = 1 if isinf(trunc) else trunc.denominator
        return cls({}, denom, trunc)

    # -- views ------------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[int, object]:
        return MappingProxyType(self._coeffs)

    @property
    def is_exact(self) -> bool:
        return isinf(self.trunc)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def items(self) -> Iterator[Tuple[Fraction, object]]:
        """(exponent, coefficient) pairs in increasing exponent order"""
        for k in sorted(self._coeffs):
            yield Fraction(k, self.denom), self._coeffs[k]

    def exponents(self):
        return [Fraction(k, self.denom) for k in sorted(self._coeffs)]

    def coefficient(self, exponent) -> object:
        e = Fraction(exponent)
        if e >= self.trunc:
            raise DepthError(f"coefficient of q^({e}) is beyond truncation {self.trunc}")
        k = e * self.denom
        if k.denominator != 1:
            return 0
        return self._coeffs.get(int(k), 0)

    @property
    def valuation(self) -> Depth:
        """Lowest exponent with nonzero coefficient; trunc for a zero series"""
        if not self._coeffs:
            return self.trunc
        return Fraction(min(self._coeffs), self.denom)

    def leading_term(self) -> Tuple[Fraction, object]:
        if not self._coeffs:
            raise ZeroSeriesError(f"series is identically zero up to q^({self.trunc})")
        k = min(self._coeffs)
        return Fraction(k, self.denom), self._coeffs[k]

    def vanishing_order(self) -> Fraction:
        return self.leading_term()[0]

    def reduced_denom(self) -> int:
        """Smallest D' such that all stored exponents and trunc lie in (1/D')Z"""
        g = self.denom
        for k in self._coeffs:
            g = gcd(g, k)
            if g == 1:
                break
        d = self.denom // g
        if not self.is_exact:
            d = lcm(d, self.trunc.denominator)
        return d

    # -- re-encoding helpers ------------------------------------------------

    def _rescaled(self, denom: int) -> Dict[int, object]:
        factor = denom // self.denom
        if factor == 1:
            return self._coeffs
        return {k * factor: c for k, c in self._coeffs.items()}

    def _coeffs_in(self, ring: CoefRing, prec: int) -> Dict[int, object]:
        if ring == self.ring:
            return self._coeffs
        return {k: embed(c, ring, prec) for k, c in self._coeffs.items()}

    def _spawn(self, coeffs, denom=None, trunc=None, ring=None, prec=None) -> "FracSeries":
        return FracSeries(
            coeffs,
            self.denom if denom is None else denom,
            self.trunc if trunc is None else trunc,
            self.ring if ring is None else ring,
            self.prec if prec is None else prec,
        )

    def compact(self) -> "FracSeries":
        """Re-encode on the coarsest lattice holding the same terms"""
        d = self.reduced_denom()
        if d == self.denom:
            return self
        # d need not divide denom when trunc sits on a finer lattice than the keys
        return self._spawn({k * d // self.denom: c for k, c in self._coeffs.items()}, denom=d)

    def with_ring(self, ring: CoefRing, prec: Optional[int] = None) -> "FracSeries":
        prec = self.prec if prec is None else prec
        if ring == self.ring and prec == self.prec:
            return self
        if self.ring == CoefRing.COMPLEX and ring != CoefRing.COMPLEX:
            raise RingMismatchError("complex coefficients do not embed into an exact ring")
        return self._spawn(self._coeffs_in(ring, prec), ring=ring, prec=prec)

    def _coerce(self, other) -> "FracSeries":
        if isinstance(other, FracSeries):
            return other
        return FracSeries.constant(other)

    def _common(self, other: "FracSeries"):
        denom = lcm(self.denom, other.denom)
        ring = join_rings(self.ring, other.ring)
        prec = max(self.prec, other.prec)
        return denom, ring, prec

    def map_coefficients(self, fn: Callable[[object], object], ring: Optional[CoefRing] = None) -> "FracSeries":
        return self._spawn({k: fn(c) for k, c in self._coeffs.items()}, ring=ring)

    def map_terms(self, fn: Callable[[Fraction, object], object]) -> "FracSeries":
        """Replace each coefficient c of q^e with fn(e, c)"""
        return self._spawn({k: fn(Fraction(k, self.denom), c) for k, c in self._coeffs.items()})

    def select(self, predicate: Callable[[Fraction], bool]) -> "FracSeries":
        return self._spawn({k: c for k, c in self._coeffs.items() if predicate(Fraction(k, self.denom))})

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "FracSeries":
        return self._spawn({k: -c for k, c in self._coeffs.items()})

    def __pos__(self):
        return self

    def __add__(self, other) -> "FracSeries":
        other = self._coerce(other)
        denom, ring, prec = self._common(other)
        trunc = min(self.trunc, other.trunc)
        out = dict(self._rescaled_in(denom, ring, prec))
        for k, c in other._rescaled_in(denom, ring, prec).items():
            out[k] = out.get(k, 0) + c
        return FracSeries(out, denom, trunc, ring, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "FracSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FracSeries":
        return self._coerce(other) - self

    def _rescaled_in(self, denom, ring, prec):
        factor = denom // self.denom
        coeffs = self._coeffs_in(ring, prec)
        if factor == 1:
            return coeffs
        return {k * factor: c for k, c in coeffs.items()}

    def scale(self, factor) -> "FracSeries":
        if not factor:
            return self._spawn({})
        ring = join_rings(self.ring, ring_of(factor))
        f = embed(factor, ring, self.prec)
        return self._spawn({k: c * f for k, c in self._coeffs_in(ring, self.prec).items()}, ring=ring)

    def __mul__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            return self.scale(other)
        denom, ring, prec = self._common(other)
        va, vb = self.valuation, other.valuation
        trunc = min(self.trunc + vb, other.trunc + va)
        if self._coeffs and other._coeffs and trunc <= va + vb:
            raise TruncationUnderflowError(f"product known only below q^({trunc})")
        if not isinf(trunc):
            denom = lcm(denom, trunc.denominator)
        limit = _key_limit(trunc, denom)
        coeffs = dense.convolve(
            self._rescaled_in(denom, ring, prec),
            other._rescaled_in(denom, ring, prec),
            limit,
        )
        return FracSeries(coeffs, denom, trunc, ring, prec)

    def __rmul__(self, other) -> "FracSeries":
        return self.scale(other)

    def invert(self, depth=None) -> "FracSeries":
        """Multiplicative inverse.

        A truncated input yields truncation ``trunc - 2*valuation``. An exact
        input that is not a monomial needs an explicit ``depth``.
        """
        if not self._coeffs:
            raise ZeroSeriesError(f"cannot invert a series that is zero up to q^({self.trunc})")
        kv = min(self._coeffs)
        lead = self._coeffs[kv]
        v = Fraction(kv, self.denom)
        if self.is_exact and len(self._coeffs) == 1:
            return self._spawn({-kv: self._unit_inverse(lead)})
        if self.is_exact:
            if depth is None:
                raise DepthError("inverting an exact polynomial needs an explicit depth")
            trunc = Fraction(depth)
        else:
            trunc = self.trunc - 2 * v
            if depth is not None:
                trunc = min(trunc, Fraction(depth))
        inv0 = self._unit_inverse(lead)
        denom = lcm(self.denom, trunc.denominator)
        rel = {(k - kv) * (denom // self.denom): c * inv0 for k, c in self._coeffs.items() if k != kv}
        # relative keys of the result run below (trunc + v) * denom
        span = ceil((trunc + v) * denom)
        if span <= 0:
            return FracSeries({}, denom, trunc, self.ring, self.prec)
        step = gcd(*rel) if rel else span
        n_terms = -(-span // step)
        w = sorted((k // step, c) for k, c in rel.items() if k < span)
        b = [0] * n_terms
        b[0] = 1
        for n in range(1, n_terms):
            acc = 0
            for j, c in w:
                if j > n:
                    break
                if b[n - j]:
                    acc += c * b[n - j]
            b[n] = -acc
        shift = -kv * (denom // self.denom)
        coeffs = {shift + n * step: bn * inv0 for n, bn in enumerate(b) if bn}
        return FracSeries(coeffs, denom, trunc, self.ring, self.prec)

    def _unit_inverse(self, lead):
        try:
            if isinstance(lead, int):
                return normalize_rational(Fraction(1, lead))
            if isinstance(lead, Fraction):
                return normalize_rational(1 / lead)
            return 1 / lead
        except ZeroDivisionError as exc:
            raise NonUnitError(f"leading coefficient {lead} is not a unit") from exc

    def __truediv__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            if not other:
                raise ZeroDivisionError("division of a series by zero")
            return self.scale(self._unit_inverse(other))
        depth = None
        if other.is_exact and not self.is_exact:
            # enough inverse terms to keep the numerator's own truncation
            depth = self.trunc - self.valuation - other.valuation
        return self * other.invert(depth)

    def __rtruediv__(self, other) -> "FracSeries":
        return FracSeries.constant(other) / self

    def __pow__(self, exponent: int) -> "FracSeries":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.invert()
        result = FracSeries.constant(1)
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- exponent maps ------------------------------------------------------

    def substitute_power(self, m) -> "FracSeries":
        """q -> q^m for positive rational m"""
        m = Fraction(m)
        if m <= 0:
            raise ValueError("substitution power must be positive")
        denom = self.denom * m.denominator
        coeffs = {k * m.numerator: c for k, c in self._coeffs.items()}
        return self._spawn(coeffs, denom=denom, trunc=self.trunc * m).compact()

    def shift(self, r) -> "FracSeries":
        """Multiply by q^r"""
        r = Fraction(r)
        denom = lcm(self.denom, r.denominator)
        offset = int(r * denom)
        coeffs = {k + offset: c for k, c in self._rescaled(denom).items()}
        return self._spawn(coeffs, denom=denom, trunc=self.trunc + r)

    def dissect(self, m: int, r: int) -> "FracSeries":
        """Terms with exponent congruent to r mod m, exponents mapped e -> (e - r)/m"""
        if m < 1:
            raise ValueError("dissection modulus must be positive")
        compact = self.compact()
        if not compact._all_integral():
            raise FractionalExponentError("dissection needs integral exponents")
        r %= m
        factor = compact.denom
        coeffs = {}
        for k, c in compact._coeffs.items():
            e = k // factor
            if (e - r) % m == 0:
                coeffs[(e - r) // m] = c
        trunc = inf if self.is_exact else Fraction(self.trunc - r) / m
        return FracSeries(coeffs, 1, trunc, self.ring, self.prec).compact()

    def _all_integral(self) -> bool:
        return all(k % self.denom == 0 for k in self._coeffs)

    def tau_shift(self) -> "FracSeries":
        """Multiply the coefficient of q^e by exp(2 pi i e)"""
        compact = self.compact()
        d = compact.denom
        if d == 1:
            return self
        keys_denom = 1
        for k in compact._coeffs:
            keys_denom = lcm(keys_denom, d // gcd(d, k))
        if keys_denom <= 2:
            return compact._spawn({k: (c if (k * 2 // d) % 2 == 0 else -c) for k, c in compact._coeffs.items()})
        if keys_denom <= 4 and compact.ring in (CoefRing.GAUSS, CoefRing.RATIONAL):
            if compact.ring == CoefRing.RATIONAL:
                raise RingMismatchError("tau shift with quarter phases needs the Gaussian ring")
            return compact._spawn({
                k: c * GaussRational.unit_root(k * 4 // d) for k, c in compact._coeffs.items()
            })
        if compact.ring == CoefRing.RATIONAL:
            raise RingMismatchError(f"tau shift of exponents in (1/{keys_denom})Z needs a complex ring")
        work = compact.with_ring(CoefRing.COMPLEX)
        ctx = complex_context(work.prec)
        return work._spawn({
            k: c * ctx.expjpi(ctx.mpf(2 * k) / d) for k, c in work._coeffs.items()
        })

    def truncate(self, depth) -> "FracSeries":
        depth = as_depth(depth)
        if depth > self.trunc:
            raise DepthError(f"cannot truncate at q^({depth}): known only below q^({self.trunc})")
        if depth == self.trunc:
            return self
        if not isinf(depth):
            denom = lcm(self.denom, depth.denominator)
            return FracSeries(self._rescaled(denom), denom, depth, self.ring, self.prec)
        return self

    # -- comparison and rendering ------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracSeries):
            return NotImplemented
        if self.trunc != other.trunc:
            return False
        denom = lcm(self.denom, other.denom)
        return self._rescaled(denom) == other._rescaled(denom)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FracSeries({self.to_text()})"

    def to_text(self, digits: int = 30) -> str:
        if not self._coeffs:
            body = "0"
        else:
            v = self.valuation
            parts = []
            for e, c in self.items():
                rel = e - v
                text = coefficient_text(c, digits)
                if " " in text and rel != 0:
                    text = f"({text})"
                parts.append(text if rel == 0 else f"{text}*q^({rel})")
            inner = " + ".join(parts).replace("+ -", "- ")
            body = f"{{{inner}}}" if v == 0 else f"q^({v})*{{{inner}}}"
        if self.is_exact:
            return body
        return f"{body} + O(q^({self.trunc}))"

    def __str__(self) -> str:
        return self.to_text()

    def to_json(self) -> dict:
        return {
            "denom": self.denom,
            "trunc": None if self.is_exact else [self.trunc.numerator, self.trunc.denominator],
            "ring": self.ring.value,
            "prec": self.prec,
            "terms": [[k, coefficient_text(self._coeffs[k], max(15, self.prec // 3))] for k in sorted(self._coeffs)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FracSeries":
        ring = CoefRing(data.get("ring", CoefRing.RATIONAL.value))
        prec = int(data.get("prec", 53))
        trunc = inf if data.get("trunc") is None else Fraction(*data["trunc"])
        coeffs = {int(k): parse_coefficient(str(c), ring, prec) for k, c in data["terms"]}
        return cls(coeffs, int(data["denom"]), trunc, ring, prec)


def compare(a: FracSeries, b: FracSeries, depth, tolerance=None):
    """Coefficientwise comparison below ``depth``.

    Complex series are compared with ``tolerance`` (default scaled to the
    working precision); exact rings compare exactly.
    """
    from src.schemas.series import MatchReport, Mismatch

    depth = Fraction(depth)
    known = min(a.trunc, b.trunc)
    if depth > known:
        raise DepthError(f"comparison depth {depth} exceeds known depth {known}")
    denom, ring, prec = a._common(b)
    left = a._rescaled_in(denom, ring, prec)
    right = b._rescaled_in(denom, ring, prec)
    limit = _key_limit(depth, lcm(denom, depth.denominator))
    scale = lcm(denom, depth.denominator) // denom
    numeric = ring == CoefRing.COMPLEX
    if numeric and tolerance is None:
        tolerance = mpmath.mpf(2) ** (8 - prec)
    for k in sorted(set(left) | set(right)):
        if k * scale >= limit:
            break
        x, y = left.get(k, 0), right.get(k, 0)
        if numeric:
            ctx = complex_context(prec)
            differs = ctx.fabs(ctx.mpc(x) - ctx.mpc(y)) > tolerance * max(1, ctx.fabs(ctx.mpc(x)))
        else:
            differs = x != y
        if differs:
            return MatchReport(
                equal=False,
                depth=str(depth),
                mismatch=Mismatch(
                    exponent=str(Fraction(k, denom)),
                    lhs=coefficient_text(x),
                    rhs=coefficient_text(y),
                ),
            )
    return MatchReport(equal=True, depth=str(depth))
