# src/modular/checks.py
"""Wronskian identities of the six F-tilde series and the tadpole conjecture.

The six F-tilde series span a space closed under the modular group, so
their normalized Wronskian is a cusp form of weight 30. The conjecture
relates q^a chi0 of the rank n tadpole to a Weber power times the
normalized Wronskian of unary theta series over a power of eta.
"""
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Tuple

import structlog
from sympy import primefactors

from src.errors import ParameterError
from src.modular.wronskian import normalized_wronskian, wronskian
from src.nahm.lattice import chi0, f_tilde
from src.products.expand import ProductExpander
from src.schemas.analysis import RelationResult
from src.series.core import FracSeries, compare
from src.series.deepen import deepen
from src.theta.partial import partial_theta, quadratic_sum

logger = structlog.get_logger(__name__)

WRONSKIAN_EISENSTEIN = "eta^36*(70027513*E(4)^3 - 64135033*E(6)^2)/5892480"

# g_i as signed sums of F-tilde_j
G_COMBINATIONS: Dict[int, Tuple[Tuple[int, int], ...]] = {
    1: ((1, 1), (5, 1)),
    2: ((1, 1), (5, -1)),
    3: ((4, 1), (6, 1)),
    4: ((4, 1), (6, -1)),
    5: ((2, 1),),
    6: ((3, 1),),
}


def _relation(relation_id: str, params: Dict[str, str], lhs: FracSeries, rhs: FracSeries,
              depth) -> RelationResult:
    report = compare(lhs, rhs, depth)
    return RelationResult(
        relation_id=relation_id,
        params=params,
        depth=str(depth),
        status="pass" if report.equal else "fail",
        mismatch=report.mismatch,
    )


def f_tilde_wronskian(depth) -> FracSeries:
    """W_D(F~_1, ..., F~_6) known below q^depth"""
    return deepen(lambda d: wronskian([f_tilde(i, d) for i in range(1, 7)]), depth, what="wronskian")


def wronskian_order(depth=10) -> Fraction:
    return f_tilde_wronskian(depth).vanishing_order()


def eisenstein_wronskian_check(depth, expander: Optional[ProductExpander] = None) -> RelationResult:
    """Normalized W_D(F~_1..F~_6) against its eta/Eisenstein closed form"""
    depth = Fraction(depth)
    expander = expander or ProductExpander()
    w = f_tilde_wronskian(depth)
    lhs = w / w.leading_term()[1]
    rhs = expander.expand(WRONSKIAN_EISENSTEIN, depth)
    result = _relation("wronskian-eisenstein", {"order": str(w.vanishing_order())}, lhs, rhs, depth)
    logger.debug("wronskian_checked", depth=str(depth), status=result.status)
    return result


def conjecture_exponent(n: int) -> Fraction:
    if n < 2:
        raise ParameterError(f"conjecture needs n >= 2, got {n}")
    if n % 2 == 0:
        k = n // 2
        return Fraction(-k * (1 + 4 * k), 48 * (1 + k))
    k = (n + 1) // 2
    return Fraction(-1 + 6 * k - 8 * k * k, 96 * k + 48)


def alternating_theta(k: int, i: int, depth) -> FracSeries:
    """sum over Z of (-1)^n q^((k+1)(n - (2i-1)/(4(k+1)))^2)"""
    c = Fraction(2 * i - 1, 4 * (k + 1))
    return quadratic_sum(lambda n: -1 if n % 2 else 1, lambda n: (k + 1) * (n - c) ** 2, c, depth)


def conjecture_components(n: int, depth) -> Tuple[List[FracSeries], int]:
    """Wronskian entries and the eta power of the conjectured right side"""
    conjecture_exponent(n)
    if n % 2 == 0:
        k = n // 2
        return [alternating_theta(k, i, depth) for i in range(1, k + 1)], k * (2 * k - 1)
    k = (n + 1) // 2
    index = Fraction(2 * k + 1, 2)
    return [partial_theta(j, index, False, depth) for j in range(1, k)], (k - 1) * (2 * k - 1)


def conjecture_check(n: int, depth, expander: Optional[ProductExpander] = None) -> RelationResult:
    """q^a chi0(1,...,1) of rank n against weber(f)^n W~ / eta^e; a failure is a finding"""
    depth = Fraction(depth)
    expander = expander or ProductExpander()
    a = conjecture_exponent(n)
    lhs = chi0(n, [0] * n, depth - a).shift(a)

    def build(working: Fraction) -> FracSeries:
        components, eta_power = conjecture_components(n, working)
        prefix = expander.expand(f"weber(f)^{n}/eta^{eta_power}" if eta_power else f"weber(f)^{n}", working)
        return prefix * normalized_wronskian(components)

    rhs = deepen(build, depth, what=f"conjecture-{n}")
    return _relation("tadpole-conjecture", {"n": str(n), "a": str(a)}, lhs, rhs, depth)


def sturm_bound(weight: int, level: int) -> int:
    """1 + floor((k/12) * index / 2) with index N^2 prod(1 - 1/p^2) over p | N"""
    if weight <= 0 or level <= 0:
        raise ParameterError("weight and level must be positive")
    index = Fraction(level * level)
    for p in primefactors(level):
        index *= 1 - Fraction(1, p * p)
    return 1 + floor(Fraction(weight, 12) * index / 2)


def g_basis(depth) -> Dict[int, FracSeries]:
    depth = Fraction(depth)
    tildes = {i: f_tilde(i, depth) for i in range(1, 7)}
    out = {}
    for g, combo in G_COMBINATIONS.items():
        acc = None
        for i, sign in combo:
            term = tildes[i] if sign > 0 else -tildes[i]
            acc = term if acc is None else acc + term
        out[g] = acc
    return out


def g_leading_data(depth=4, count: int = 3) -> Dict[int, Tuple[Fraction, List[object]]]:
    """Leading exponent and the first ``count`` coefficients at integer steps from it"""
    out = {}
    for g, series in g_basis(depth).items():
        e, _ = series.leading_term()
        out[g] = (e, [series.coefficient(e + m) for m in range(count)])
    return out
