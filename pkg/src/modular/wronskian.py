# src/modular/wronskian.py
"""Ramanujan derivative, Serre derivative and Wronskian determinants.

Determinants are expanded along the last row with minors memoized by
column set, so an l x l determinant costs about l * 2^(l-1) products.
"""
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence

from src.errors import ParameterError
from src.modular.eisenstein import eisenstein
from src.series.core import FracSeries
from src.series.rings import CoefRing, complex_context


def D(s: FracSeries) -> FracSeries:
    """q d/dq, termwise e * c on q^e"""
    if s.ring == CoefRing.COMPLEX:
        ctx = complex_context(s.prec)
        return s.map_terms(lambda e, c: c * (ctx.mpf(e.numerator) / e.denominator))
    return s.map_terms(lambda e, c: c * e)


def serre(s: FracSeries, k) -> FracSeries:
    """D - (k/12) E_2"""
    k = Fraction(k)
    if k == 0 or s.is_zero:
        return D(s)
    if s.is_exact:
        raise ParameterError("the Serre derivative of an exact series needs a truncation")
    e2 = eisenstein(2, s.trunc - s.valuation)
    return D(s) - (e2 * s).scale(k / 12)


def determinant(rows: Sequence[Sequence[FracSeries]]) -> FracSeries:
    size = len(rows)
    if size == 0 or any(len(row) != size for row in rows):
        raise ParameterError("determinant needs a nonempty square matrix")
    memo: Dict[FrozenSet[int], FracSeries] = {}

    def minor(columns: FrozenSet[int]) -> FracSeries:
        # rows 0..len(columns)-1 restricted to ``columns``
        hit = memo.get(columns)
        if hit is not None:
            return hit
        m = len(columns)
        ordered = sorted(columns)
        if m == 1:
            value = rows[0][ordered[0]]
        else:
            value = None
            for pos, c in enumerate(ordered):
                term = rows[m - 1][c] * minor(columns - {c})
                if (m - 1 + pos) % 2:
                    term = -term
                value = term if value is None else value + term
        memo[columns] = value
        return value

    return minor(frozenset(range(size)))


def wronskian(components: Sequence[FracSeries]) -> FracSeries:
    """det(D^i f_j) for i, j < l"""
    rows: List[List[FracSeries]] = [list(components)]
    for _ in range(1, len(components)):
        rows.append([D(s) for s in rows[-1]])
    return determinant(rows)


def serre_wronskian(components: Sequence[FracSeries], k) -> FracSeries:
    """det of iterated Serre derivatives, the n-th being d_{k+2n-2} o ... o d_k"""
    k = Fraction(k)
    rows: List[List[FracSeries]] = [list(components)]
    for n in range(1, len(components)):
        rows.append([serre(s, k + 2 * n - 2) for s in rows[-1]])
    return determinant(rows)


def normalized(s: FracSeries) -> FracSeries:
    """Scale so that the leading coefficient is 1"""
    _, lead = s.leading_term()
    return s / lead


def normalized_wronskian(components: Sequence[FracSeries]) -> FracSeries:
    return normalized(wronskian(components))
