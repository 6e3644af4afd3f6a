# src/nahm/lattice.py
"""Lattice-sum evaluation of Nahm sums.

    f_{A,B,C}(q) = sum over n >= 0 of q^(n^T A n / 2 + n^T B + C) / prod (q;q)_{n_i}

The sum is peeled one coordinate at a time. With the first coordinate fixed
at n the rest is again a Nahm sum with vector B' + n*a, and completing the
square over the remaining real coordinates gives a quadratic lower bound
for every exponent that can still appear. The loop over n stops once that
bound has passed its vertex and reached the depth.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Sequence, Tuple

import structlog

from src.errors import DepthError, ParameterError
from src.nahm.triples import (
    NahmTriple,
    Vector,
    dot,
    mat_vec,
    matrix_inverse,
    parse_matrix,
    parse_vector,
    tadpole,
)
from src.products.atoms import FactorBag
from src.products.escapes import int_args, rational_args
from src.series.core import FracSeries

logger = structlog.get_logger(__name__)

# leading exponents lambda_i making q^lambda_i F_i modular
LAMBDAS = (
    Fraction(-7, 80), Fraction(1, 40), Fraction(9, 40),
    Fraction(17, 80), Fraction(-7, 80), Fraction(17, 80),
)

# shift vectors of chi0 defining F_1..F_4
F_SHIFTS = (
    (0, 0, 0),
    (0, 0, Fraction(1, 2)),
    (1, -1, Fraction(1, 2)),
    (-1, 1, 0),
)


@lru_cache(maxsize=4096)
def inverse_qfactorial(n: int, depth: Fraction) -> FracSeries:
    """1/(q;q)_n known below q^depth"""
    bag = FactorBag()
    for k in range(1, n + 1):
        bag.add_factor(Fraction(k), -1, -1)
    return bag.expand(depth)


class _Level:
    """Precomputed data for peeling coordinate ``i``"""

    def __init__(self, A, i: int):
        r = len(A)
        self.a = A[i][i]
        self.col: Vector = tuple(A[j][i] for j in range(i + 1, r))
        if i + 1 < r:
            sub = tuple(tuple(A[x][y] for y in range(i + 1, r)) for x in range(i + 1, r))
            self.sub_inv = matrix_inverse(sub)
            self.u = mat_vec(self.sub_inv, self.col)
            self.schur = self.a - dot(self.col, self.u)
        else:
            self.sub_inv = ()
            self.u = ()
            self.schur = self.a

    def inner_bound(self, rest: Vector) -> Fraction:
        """Lower bound of the remaining exponents for vector ``rest``"""
        if not rest:
            return Fraction(0)
        return -dot(rest, mat_vec(self.sub_inv, rest)) / 2

    def bound(self, b0: Fraction, rest: Vector, n: int) -> Fraction:
        shifted = tuple(x + n * c for x, c in zip(rest, self.col))
        return self.a * n * n / 2 + b0 * n + self.inner_bound(shifted)

    def vertex(self, b0: Fraction, rest: Vector) -> Fraction:
        # d/dn of the bound: schur*n + b0 - rest.u
        return (dot(rest, self.u) - b0) / self.schur


class NahmEvaluator:
    """Evaluates f_{A,B,C}; memoizes inner sums by (level, vector)"""

    def __init__(self, A, margin: Fraction = Fraction(0)):
        self.A = A
        self.r = len(A)
        self.margin = Fraction(margin)
        self.levels = [_Level(A, i) for i in range(self.r)]
        self._memo: Dict[Tuple[int, Vector], FracSeries] = {}

    def level_sum(self, i: int, b: Vector, depth: Fraction) -> FracSeries:
        key = (i, b)
        hit = self._memo.get(key)
        if hit is not None and hit.trunc >= depth:
            return hit.truncate(depth)
        result = self._compute(i, b, depth)
        self._memo[key] = result
        return result

    def _compute(self, i: int, b: Vector, depth: Fraction) -> FracSeries:
        level = self.levels[i]
        b0, rest = b[0], b[1:]
        vertex = level.vertex(b0, rest)
        stop = depth + self.margin
        acc = FracSeries.zero(depth)
        n = 0
        while True:
            if n > vertex and level.bound(b0, rest, n) >= stop:
                break
            e = level.a * n * n / 2 + b0 * n
            inner_vec = tuple(x + n * c for x, c in zip(rest, level.col))
            remaining = depth - e
            if i + 1 < self.r:
                low = level.inner_bound(inner_vec)
                if remaining > low:
                    inner = self.level_sum(i + 1, inner_vec, remaining)
                    if not inner.is_zero:
                        term = inverse_qfactorial(n, remaining - min(low, Fraction(0))) * inner
                        acc = acc + term.truncate(remaining).shift(e)
            elif remaining > 0:
                acc = acc + inverse_qfactorial(n, remaining).shift(e)
            n += 1
        return acc.truncate(depth)

    def evaluate(self, B: Sequence, C, depth) -> FracSeries:
        depth = Fraction(depth)
        C = Fraction(C)
        B = tuple(Fraction(x) for x in B)
        bound = C - dot(B, mat_vec(matrix_inverse(self.A), B)) / 2
        if depth <= bound:
            raise DepthError(f"depth {depth} is not above the minimal exponent bound {bound}")
        return self.level_sum(0, B, depth - C).shift(C)


def lattice_points(A, B: Sequence, depth) -> Iterator[Tuple[int, ...]]:
    """Points n >= 0 with n^T A n / 2 + n^T B below depth, by the same peeling"""
    levels = [_Level(A, i) for i in range(len(A))]

    def walk(i: int, b: Vector, remaining: Fraction, prefix: Tuple[int, ...]):
        level = levels[i]
        b0, rest = b[0], b[1:]
        vertex = level.vertex(b0, rest)
        n = 0
        while not (n > vertex and level.bound(b0, rest, n) >= remaining):
            e = level.a * n * n / 2 + b0 * n
            if i + 1 < len(levels):
                inner = tuple(x + n * c for x, c in zip(rest, level.col))
                if remaining - e > level.inner_bound(inner):
                    yield from walk(i + 1, inner, remaining - e, prefix + (n,))
            elif e < remaining:
                yield prefix + (n,)
            n += 1

    yield from walk(0, tuple(Fraction(x) for x in B), Fraction(depth), ())


def nahm_sum(t: NahmTriple, depth, margin=0) -> FracSeries:
    logger.debug("nahm_sum", rank=t.rank, depth=str(depth))
    return NahmEvaluator(t.A, margin).evaluate(t.B, t.C, depth)


def chi0(r: int, shifts: Sequence, depth) -> FracSeries:
    """Shifted tadpole character: chi0(q^s_1, ..., q^s_r; q)"""
    if len(shifts) != r:
        raise ParameterError(f"chi0 of rank {r} needs {r} shifts, got {len(shifts)}")
    return _tadpole_evaluator(r).evaluate(shifts, 0, depth)


@lru_cache(maxsize=16)
def _tadpole_evaluator(r: int) -> NahmEvaluator:
    return NahmEvaluator(tadpole(r))


def f_series(i: int, depth) -> FracSeries:
    """F_1..F_6; F_5 and F_6 are the tau -> tau+1 images of F_1 and F_4"""
    if not 1 <= i <= 6:
        raise ParameterError(f"F index must be 1..6, got {i}")
    if i <= 4:
        return chi0(3, F_SHIFTS[i - 1], depth)
    return f_series(1 if i == 5 else 4, depth).tau_shift()


def f_tilde(i: int, depth) -> FracSeries:
    """q^lambda_i F_i known below q^depth"""
    lam = LAMBDAS[i - 1]
    return f_series(i, Fraction(depth) - lam).shift(lam)


def rogers_sum(a, b, c: int, d: int, depth) -> FracSeries:
    """sum over n >= 0 of q^(a n^2 + b n) / (q;q)_{c n + d}"""
    a, b, depth = Fraction(a), Fraction(b), Fraction(depth)
    if a < 0 or (a == 0 and b <= 0) or c < 0 or d < 0:
        raise ParameterError("single sum needs a growing exponent and nonnegative lengths")
    acc = FracSeries.zero(depth)
    vertex = -b / (2 * a) if a else Fraction(0)
    n = 0
    while True:
        e = a * n * n + b * n
        if e >= depth:
            if n > vertex:
                break
        else:
            acc = acc + inverse_qfactorial(c * n + d, depth - e).shift(e)
        n += 1
    return acc


def quadratic_form(A, n: Sequence[int]) -> Fraction:
    return sum(A[x][y] * n[x] * n[y] for x in range(len(n)) for y in range(len(n))) / 2


def _term(A, n: Sequence[int], extra: Fraction, depth: Fraction) -> FracSeries:
    """q^(Q(n) + extra) / prod (q;q)_{n_i}"""
    e = quadratic_form(A, n) + extra
    if e >= depth:
        return FracSeries.zero(depth)
    bag = FactorBag(shift=e)
    for m in n:
        for k in range(1, m + 1):
            bag.add_factor(Fraction(k), -1, -1)
    return bag.expand(depth)


def xvar_coefficient_check(i: int, j: int, k: int, depth) -> bool:
    """q^(Q+j-i)/P = q^(Q+j)/P + q^(Q(i-1,j,k)+i-1)/P' termwise for the rank 3 tadpole form"""
    if min(i, j, k) < 0:
        raise ParameterError("indices must be nonnegative")
    A = tadpole(3)
    depth = Fraction(depth)
    lhs = _term(A, (i, j, k), Fraction(j - i), depth)
    rhs = _term(A, (i, j, k), Fraction(j), depth)
    if i > 0:
        rhs = rhs + _term(A, (i - 1, j, k), Fraction(i - 1), depth)
    return lhs == rhs


def enumeration_margin_check(t: NahmTriple, depth, factor=2) -> bool:
    """Widening the stopping bound must not change any coefficient below depth"""
    depth = Fraction(depth)
    base = nahm_sum(t, depth)
    widened = nahm_sum(t, depth, margin=(Fraction(factor) - 1) * (depth - t.minimal_exponent_bound()))
    return base == widened


# -- expression escapes -----------------------------------------------------

def _chi0_escape(raw: str, depth: Fraction) -> FracSeries:
    head, _, tail = raw.partition(";")
    r = int(head)
    return chi0(r, rational_args(tail, r), depth)


def _nahm_escape(raw: str, depth: Fraction) -> FracSeries:
    parts = [p.strip() for p in raw.split(";")]
    if len(parts) not in (2, 3):
        raise ParameterError(f"nahm(A; B; C) expects three fields, got {raw!r}")
    A = parse_matrix(parts[0])
    B = parse_vector(parts[1])
    C = Fraction(parts[2]) if len(parts) == 3 else Fraction(0)
    return nahm_sum(NahmTriple(A, B, C), depth)


def _rsum_escape(raw: str, depth: Fraction) -> FracSeries:
    a, b, c, d = rational_args(raw, 4)
    return rogers_sum(a, b, int(c), int(d), depth)


def _f_escape(raw: str, depth: Fraction) -> FracSeries:
    (i,) = int_args(raw, 1)
    return f_series(i, depth)


def _ft_escape(raw: str, depth: Fraction) -> FracSeries:
    (i,) = int_args(raw, 1)
    return f_tilde(i, depth)


def register_escapes(registry):
    from src.products.escapes import SeriesProvider

    registry.register(SeriesProvider("chi0", _chi0_escape, "shifted tadpole character chi0(r; s_1,...,s_r)"))
    registry.register(SeriesProvider("nahm", _nahm_escape, "Nahm sum nahm(A; B; C)"))
    registry.register(SeriesProvider("rsum", _rsum_escape, "sum q^(an^2+bn)/(q;q)_(cn+d)"))
    registry.register(SeriesProvider("F", _f_escape, "F_i, i = 1..6"))
    registry.register(SeriesProvider("Ft", _ft_escape, "q^lambda_i F_i, i = 1..6"))
