# src/theta/relations.py
"""Relation batteries for the weight 3/2 theta series.

Every check returns ``RelationResult`` records; a failing relation is a
result, never an exception.
"""
from fractions import Fraction
from typing import Dict, List, Optional

import mpmath
import structlog

from src.config.settings import settings
from src.products.expand import ProductExpander
from src.schemas.analysis import RelationResult
from src.series.core import FracSeries, compare
from src.series.rings import CoefRing, GaussRational, complex_context
from src.theta.partial import linear_theta, partial_theta, theta_residue_class

logger = structlog.get_logger(__name__)

# T_i = sum over Z of (an+b) q^(cn^2+dn)
T_SERIES = {
    1: (5, 1, 5, 2),
    2: (5, 2, 5, 4),
    3: (10, 1, 5, 1),
    4: (10, 3, 5, 3),
}

T_PRODUCTS = {
    1: "J(1)^2*J(4)^8*J(40)/(J(2)^5*J(8)^2*Jam(8,40))"
       " + 2*qpow(1)*J(1)^2*J(4)*J(8)^2*Jam(6,20)*Jam(8,40)/(J(2)^3*J(40))",
    2: "2*J(1)^2*J(4)*J(8)^2*Jam(2,20)*Jam(16,40)/(J(2)^3*J(40))"
       " + qpow(1)*J(1)^2*J(4)^7*Jam(8,20)*Jam(4,40)/(J(2)^5*J(8)^2*J(40))",
    3: "J(2)*J(4)^3*Jam(2,20)*Jam(16,40)/(J(8)^2*J(40))"
       " + 2*qpow(2)*J(2)^3*J(8)^2*Jam(8,20)*Jam(4,40)/(J(4)^3*J(40))",
    4: "2*J(2)^3*J(8)^2*J(40)/(J(4)^2*Jam(8,40))"
       " + J(2)*J(4)^3*Jam(6,20)*Jam(8,40)/(J(8)^2*J(40))",
}

J1_SQUARED = "J(2)*J(8)^5/(J(4)^2*J(16)^2) - 2*qpow(1)*J(2)*J(16)^2/J(8)"

# T_1 with J_1^2 replaced by the two-term form above, multiplied out
T1_FOUR_TERM = (
    "J(4)^6*J(8)^3*J(40)/(J(2)^4*J(16)^2*Jam(8,40))"
    " + 2*qpow(1)*J(8)^7*Jam(6,20)*Jam(8,40)/(J(2)^2*J(4)*J(16)^2*J(40))"
    " - 2*qpow(1)*J(4)^8*J(16)^2*J(40)/(J(2)^4*J(8)^3*Jam(8,40))"
    " - 4*qpow(2)*J(4)*J(8)*J(16)^2*Jam(6,20)*Jam(8,40)/(J(2)^2*J(40))"
)

# even and odd parts of T_1 as products
L_PRODUCTS = {
    0: "J(2)^6*J(4)^3*J(20)/(J(1)^4*J(8)^2*Jam(4,20))"
       " - 4*qpow(1)*J(2)*J(4)*J(8)^2*Jam(3,10)*Jam(4,20)/(J(1)^2*J(20))",
    1: "2*J(4)^7*Jam(3,10)*Jam(4,20)/(J(1)^2*J(2)*J(8)^2*J(20))"
       " - 2*J(2)^8*J(8)^2*J(20)/(J(1)^4*J(4)^3*Jam(4,20))",
}

# theta3(5 tau) * sum (5n+1) q^((5n+1)^2) = theta3(5 tau)^4 (f1 + f2)
STURM_RHS = (
    "subq(theta3;5)^4*(qpow(1)*J(5)^8*J(20)^14*J(200)/(J(10)^20*J(40)^2*Jam(40,200))"
    " + 2*qpow(6)*J(5)^8*J(20)^7*J(40)^2*Jam(30,100)*Jam(40,200)/(J(10)^18*J(200)))"
)


def t_series(i: int, depth) -> FracSeries:
    return linear_theta(*T_SERIES[i], depth)


def _result(relation_id: str, params: Dict[str, str], lhs: FracSeries, rhs: FracSeries,
            depth, tolerance=None) -> RelationResult:
    report = compare(lhs, rhs, depth, tolerance)
    ring = CoefRing.RATIONAL
    for s in (lhs, rhs):
        if s.ring != CoefRing.RATIONAL:
            ring = s.ring
    if not report.equal:
        logger.debug("relation_failed", relation=relation_id, params=params)
    return RelationResult(
        relation_id=relation_id,
        params=params,
        depth=str(depth),
        status="pass" if report.equal else "fail",
        ring=ring.value,
        mismatch=report.mismatch,
    )


def _half_integral(x: Fraction) -> bool:
    return (2 * x).denominator == 1 and x.denominator == 2


def _phase(turns: Fraction, prec: int):
    """exp(i pi turns) in the smallest ring that holds it"""
    turns = turns % 2
    if (2 * turns).denominator == 1:
        return GaussRational.unit_root(int(2 * turns))
    ctx = complex_context(prec)
    return ctx.expjpi(ctx.mpf(turns.numerator) / turns.denominator)


def _shifted(series: FracSeries, times: int, prec: int) -> FracSeries:
    """tau -> tau + times, staying exact when the exponents allow it"""
    if series.reduced_denom() in (1, 2, 4):
        out = series.with_ring(CoefRing.GAUSS)
    else:
        out = series.with_ring(CoefRing.COMPLEX, prec)
    for _ in range(times):
        out = out.tau_shift()
    return out


def _scaled(series: FracSeries, phase, prec: int) -> FracSeries:
    if isinstance(phase, GaussRational):
        return series.scale(phase)
    return series.with_ring(CoefRing.COMPLEX, prec).scale(phase)


def check_theta_relations(k, depth, prec: Optional[int] = None) -> List[RelationResult]:
    """Vanishing, reflection, dissection and T-shift laws of dTheta/dG at index k"""
    k = Fraction(k)
    depth = Fraction(depth)
    prec = prec or settings.precision_bits
    tol = mpmath.mpf(2) ** (-(prec // 2))
    results: List[RelationResult] = []
    zero = FracSeries.zero(depth)
    results.append(_result("vanish-zero", {"k": str(k)}, partial_theta(0, k, False, depth), zero, depth))
    results.append(_result("vanish-k", {"k": str(k)}, partial_theta(k, k, False, depth), zero, depth))

    top = int(4 * k)
    for twice_j in range(1, top):
        j = Fraction(twice_j, 2)
        params = {"j": str(j), "k": str(k)}
        theta = partial_theta(j, k, False, depth)
        g = partial_theta(j, k, True, depth)
        results.append(_result("reflect-theta", params, theta, -partial_theta(2 * k - j, k, False, depth), depth))
        results.append(_result("reflect-g", params, g, partial_theta(2 * k - j, k, True, depth), depth))
        results.append(_result(
            "dissect-theta", params, theta,
            (partial_theta(2 * j, 4 * k, False, depth) + partial_theta(2 * j + 4 * k, 4 * k, False, depth)).scale(Fraction(1, 2)),
            depth,
        ))
        results.append(_result(
            "dissect-g", params, g,
            (partial_theta(2 * j, 4 * k, False, depth) - partial_theta(2 * j + 4 * k, 4 * k, False, depth)).scale(Fraction(1, 2)),
            depth,
        ))
        # e^{2 pi i (k n^2 + j n)} = (-1)^n exactly when one of k, j is half-integral
        swaps = _half_integral(k) != _half_integral(j)
        phase = _phase(j * j / (2 * k), prec)
        for name, series, signed in (("tshift-theta", theta, False), ("tshift-g", g, True)):
            image = g if (signed != swaps) else theta
            results.append(_result(name, params, _shifted(series, 1, prec), _scaled(image, phase, prec), depth, tol))
        double = _phase(j * j / k, prec)
        results.append(_result("tshift2-theta", params, _shifted(theta, 2, prec), _scaled(theta, double, prec), depth, tol))
        results.append(_result("tshift2-g", params, _shifted(g, 2, prec), _scaled(g, double, prec), depth, tol))
    return results


def dissection_battery(depth, expander: Optional[ProductExpander] = None) -> List[RelationResult]:
    """2-dissections of T_1 and T_2, the product forms of T_1..T_4 and of the parts of T_1"""
    depth = Fraction(depth)
    expander = expander or ProductExpander()
    results: List[RelationResult] = []
    wide = 2 * depth + 2
    t1, t2 = t_series(1, wide), t_series(2, wide)
    half = {i: t_series(i, depth + 2).substitute_power(2) for i in (1, 2, 3, 4)}

    results.append(_result("t1-even", {}, t1.dissect(2, 0), half[3], depth))
    results.append(_result("t1-odd", {}, t1.dissect(2, 1), half[2].shift(1).scale(-2), depth))
    results.append(_result("t2-even", {}, t2.dissect(2, 0), half[1].scale(2), depth))
    results.append(_result("t2-odd", {}, t2.dissect(2, 1), -half[4], depth))
    for r, text in L_PRODUCTS.items():
        results.append(_result(f"l{r}-product", {}, t1.dissect(2, r), expander.expand(text, depth), depth))
    for i, text in T_PRODUCTS.items():
        results.append(_result(f"t{i}-product", {}, t_series(i, depth), expander.expand(text, depth), depth))
    results.append(_result("j1-squared", {}, expander.expand("J(1)^2", depth),
                           expander.expand(J1_SQUARED, depth), depth))
    results.append(_result("t1-four-term", {}, t_series(1, depth), expander.expand(T1_FOUR_TERM, depth), depth))
    return results


def sturm_identity_check(depth=None, expander: Optional[ProductExpander] = None) -> RelationResult:
    """theta3(5 tau) times the residue-1 theta series against its eta-quotient form"""
    depth = Fraction(depth or settings.sturm_depth)
    expander = expander or ProductExpander()
    lhs = expander.expand("subq(theta3;5)", depth) * theta_residue_class(1, 5, depth)
    return _result("sturm", {"coefficients": str(depth)}, lhs, expander.expand(STURM_RHS, depth), depth)


def residue_class_battery(depth) -> List[RelationResult]:
    """theta(psi) against its residue-class assembly and the class reflection"""
    from src.theta.characters import character_theta, character_theta_classes

    depth = Fraction(depth)
    results = []
    for kind in (0, 1):
        results.append(_result("psi-classes", {"kind": str(kind)}, character_theta(kind, depth),
                               character_theta_classes(kind, depth), depth))
    for a in range(1, 5):
        results.append(_result("class-reflection", {"a": str(a)}, theta_residue_class(a, 5, depth),
                               -theta_residue_class(5 - a, 5, depth), depth))
    return results
