# src/nahm/derivations.py
"""Replay of the constant-term derivations behind the six sum identities.

Part p starts from chi0 at the p-th dual vector, read at base q^2. Each
stage of the derivation is recomputed on its own and compared with that
direct lattice value:

    euler       third index summed with Euler's identity
    integrand   constant term of a product of bivariate Pochhammer symbols
    window      the same constant term with a wider z-window
    collapsed   outer sum over a unary theta sum (parts 1-4)
    product     closed product form
    relation    parts 5 and 6 against twice parts 3 and 2
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import structlog

from src.config.settings import settings
from src.errors import ParameterError
from src.nahm.lattice import chi0, lattice_points
from src.nahm.triples import DUAL_VECTORS, tadpole
from src.products.atoms import FactorBag
from src.products.expand import ProductExpander
from src.schemas.analysis import DerivationReport, StageResult
from src.series.bivariate import BivariateSeries, bivariate_pochhammer, constant_term, default_window
from src.series.core import FracSeries, compare
from src.series.deepen import deepen
from src.theta.partial import quadratic_sum

logger = structlog.get_logger(__name__)

DEFAULT_REPLAY_DEPTH = 30

# (sign, zpow, r) stands for x = sign * q^r * z^zpow in (x; q^2)_inf
BivFactor = Tuple[int, int, int]

_THETA_PAIR = ((-1, 1, 1), (-1, 1, 1), (-1, -1, 1), (-1, -1, 1))
_SHIFTED_PAIR = ((-1, 1, 0), (-1, 1, 2), (-1, -1, 2), (-1, -1, 0))

_S_FORMS = {
    1: "J(4)^6*J(40)/(J(2)^3*J(8)^2*Jam(8,40))"
       " + 2*qpow(1)*J(8)^2*Jam(6,20)*Jam(8,40)/(J(2)*J(4)*J(40))",
    2: "J(4)^5*Jam(2,20)*Jam(16,40)/(J(2)^3*J(8)^2*J(40))"
       " + 2*qpow(2)*J(8)^2*Jam(8,20)*Jam(4,40)/(J(2)*J(4)*J(40))",
    3: "2*J(8)^2*J(40)/(J(2)*Jam(8,40))"
       " + J(4)^5*Jam(6,20)*Jam(8,40)/(J(2)^3*J(8)^2*J(40))",
    4: "2*J(8)^2*Jam(2,20)*Jam(16,40)/(J(2)*J(4)*J(40))"
       " + qpow(1)*J(4)^5*Jam(8,20)*Jam(4,40)/(J(2)^3*J(8)^2*J(40))",
}


@dataclass(frozen=True)
class Integrand:
    """CT data of one part: value = prefactor * (q^2;q^2)_inf * CT[prod factors / inverse]"""

    prefactor: str
    factors: Tuple[BivFactor, ...]
    inverse: BivFactor
    product: str
    collapsed: Optional[Tuple[int, int]] = None


def _closed(prefactor: str, part: int) -> str:
    return f"{prefactor}/J(2)*({_S_FORMS[part]})"


INTEGRANDS = {
    1: Integrand("P(-1;2;inf)", _THETA_PAIR, (1, -1, 0), _closed("P(-1;2;inf)", 1), (0, 0)),
    2: Integrand("P(-2;2;inf)", _THETA_PAIR, (1, -1, 1), _closed("P(-2;2;inf)", 2), (1, 0)),
    3: Integrand("P(-2;2;inf)", ((-1, 1, 2), (-1, -1, 0), (-1, 1, 0), (-1, -1, 2)),
                 (1, -1, 0), _closed("P(-2;2;inf)", 3), (-1, 2)),
    4: Integrand("P(-1;2;inf)", _SHIFTED_PAIR, (1, -1, 1), _closed("P(-1;2;inf)", 4), (2, -2)),
    5: Integrand("2*P(-2;2;inf)", _SHIFTED_PAIR, (1, -1, 0), "2*" + _closed("P(-2;2;inf)", 3)),
    6: Integrand("2*P(-2;2;inf)", ((-1, 1, -1), (-1, -1, 3), (-1, 1, 3), (-1, -1, -1)),
                 (1, -1, 1), "2*qpow(-2)*" + _closed("P(-2;2;inf)", 2)),
}

# part -> (related part, power of q) with value = 2 * q^power * related
RELATED = {5: (3, 0), 6: (2, -2)}


def direct_value(part: int, depth) -> FracSeries:
    """chi0 at the dual vector of ``part``, at base q^2"""
    return chi0(3, DUAL_VECTORS[part - 1], Fraction(depth) / 2).substitute_power(2)


def euler_stage(shifts: Sequence, depth) -> FracSeries:
    """Double sum left after summing k: the k-sum is (-q^(s3+1/2-j); q)_inf"""
    s1, s2, s3 = (Fraction(x) for x in shifts)
    depth = Fraction(depth)
    acc = FracSeries.zero(depth)
    for i, j in lattice_points(tadpole(2), (s1, s2 + s3), depth + s3 * s3 / 2):
        bag = FactorBag(shift=Fraction(i * i + j * j - i * j) + s1 * i + s2 * j)
        for k in range(1, i + 1):
            bag.add_factor(Fraction(k), -1, -1)
        for k in range(1, j + 1):
            bag.add_factor(Fraction(k), -1, -1)
        e = s3 + Fraction(1, 2) - j
        while e <= 0:
            bag.add_factor(e, 1, 1)
            e += 1
        bag.add_family(e, Fraction(1), 1, 1)
        acc = acc + bag.expand(depth)
    return acc


def _pieces(factor: BivFactor, depth: Fraction, window: int):
    """(x; q^2)_inf as finite binomial heads times a tail with r >= 0"""
    sign, zpow, r = factor
    r = Fraction(r)
    while r < 0:
        yield BivariateSeries({0: FracSeries.constant(1), zpow: FracSeries.monomial(r, -sign)},
                              -window, window)
        r += 2
    yield bivariate_pochhammer(sign, zpow, r, 2, depth, window)


def integrand_value(part: int, depth, window: int, expander: ProductExpander) -> FracSeries:
    spec = INTEGRANDS[part]
    sign, zpow, r = spec.inverse
    if r < 0:
        raise ParameterError(f"reciprocal factor needs r >= 0, got {r}")

    def build(working: Fraction) -> FracSeries:
        acc = None
        for factor in spec.factors:
            for piece in _pieces(factor, working, window):
                acc = piece if acc is None else acc * piece
        acc = acc * bivariate_pochhammer(sign, zpow, r, 2, working, window, inverse=True)
        return constant_term(acc) * expander.expand(f"{spec.prefactor}*J(2)", working)

    return deepen(build, depth, what=f"integrand-{part}")


def collapsed_sum(a: int, b: int, depth) -> FracSeries:
    """sum over n >= 0 of q^(n^2+an)/(q^2;q^2)_n * sum over i in Z of q^(2i^2-2ni+bi)"""
    depth = Fraction(depth)
    slope = a + Fraction(b, 2)
    acc = FracSeries.zero(depth)
    n = 0
    while True:
        # minimum over real i of the full exponent
        low = Fraction(n * n, 2) + slope * n - Fraction(b * b, 8)
        if low >= depth:
            if n > -slope:
                break
        else:
            inner = quadratic_sum(lambda i: 1,
                                  lambda i: Fraction(2 * i * i - 2 * n * i + b * i + n * n + a * n),
                                  Fraction(2 * n - b, 4), depth)
            if not inner.is_zero:
                bag = FactorBag()
                for k in range(1, n + 1):
                    bag.add_factor(Fraction(2 * k), -1, -1)
                acc = acc + (inner * bag.expand(depth - low)).truncate(depth)
        n += 1
    return acc


def _stage(name: str, expected: FracSeries, value: FracSeries, depth,
           window: Optional[int] = None) -> StageResult:
    report = compare(expected, value, depth)
    return StageResult(stage=name, equal=report.equal, window=window, mismatch=report.mismatch)


def replay_derivation(part: int, depth=None, expander: Optional[ProductExpander] = None) -> DerivationReport:
    if part not in INTEGRANDS:
        raise ParameterError(f"derivation part must be 1..6, got {part}")
    depth = Fraction(depth or DEFAULT_REPLAY_DEPTH)
    spec = INTEGRANDS[part]
    expander = expander or ProductExpander()
    direct = direct_value(part, depth)
    stages = []

    euler = euler_stage(DUAL_VECTORS[part - 1], depth / 2).substitute_power(2)
    stages.append(_stage("euler", direct, euler, depth))

    window = default_window(depth, 2, settings.window_margin)
    ct = integrand_value(part, depth, window, expander)
    stages.append(_stage("integrand", direct, ct, depth, window))
    wider = integrand_value(part, depth, window + 5, expander)
    stages.append(_stage("window", ct, wider, depth, window + 5))

    if spec.collapsed is not None:
        a, b = spec.collapsed
        collapsed = collapsed_sum(a, b, depth) * expander.expand(f"{spec.prefactor}/J(2)", depth)
        stages.append(_stage("collapsed", direct, collapsed, depth))

    stages.append(_stage("product", direct, expander.expand(spec.product, depth), depth))

    if part in RELATED:
        other, power = RELATED[part]
        related = direct_value(other, depth - power).shift(power).scale(2)
        stages.append(_stage("relation", direct, related, depth))

    report = DerivationReport(part=part, depth=str(depth), stages=stages)
    logger.debug("derivation_replayed", part=part, depth=str(depth), passed=report.passed)
    return report
