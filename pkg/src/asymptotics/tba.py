# src/asymptotics/tba.py
"""Fixed-point solver for the TBA system 1 - Q_i = prod_j Q_j^(A_ij).

Damped Gauss-Seidel sweeps from Q = 1/2 bring the iterate into the basin,
then ``findroot`` polishes it to the requested tolerance. Exact forms in
Q(sqrt 5) are recovered by integer relation search and checked exactly.
"""
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import structlog

from src.config.settings import settings
from src.errors import ConvergenceError, NotPositiveDefiniteError, ParameterError
from src.monitoring.logging_config import VerificationLogger
from src.nahm.triples import Matrix, as_matrix, is_positive_definite
from src.schemas.analysis import TbaSolution
from src.series.rings import Root5Elem, complex_context

logger = structlog.get_logger(__name__)
log = VerificationLogger()

# closed forms of the rank 3 tadpole solution
TADPOLE3_CLOSED_FORMS = (
    Root5Elem(Fraction(3, 2), Fraction(-1, 2)),
    Root5Elem(-2, 1),
    Root5Elem(Fraction(3, 4), Fraction(-1, 4)),
)


def _mpf(ctx, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


def _products(ctx, A: Matrix, q: Sequence) -> List:
    return [ctx.fprod(ctx.power(q[j], _mpf(ctx, A[i][j])) for j in range(len(q)) if A[i][j])
            for i in range(len(q))]


def residuals(ctx, A: Matrix, q: Sequence) -> List:
    return [1 - qi - p for qi, p in zip(q, _products(ctx, A, q))]


def _check_matrix(A: Matrix):
    if any(len(row) != len(A) for row in A):
        raise ParameterError("TBA matrix must be square")
    if not is_positive_definite(A):
        raise NotPositiveDefiniteError("TBA matrix must be positive definite")


def solve_tba(A, prec: Optional[int] = None, tol=None, start: Optional[Sequence[float]] = None,
              damping: Optional[float] = None, max_sweeps: Optional[int] = None) -> TbaSolution:
    A = as_matrix(A)
    _check_matrix(A)
    prec = prec or settings.tba_precision_bits
    ctx = complex_context(prec)
    tol = ctx.mpf(settings.tba_tolerance if tol is None else tol)
    omega = ctx.mpf(damping or settings.tba_damping)
    max_sweeps = max_sweeps or settings.tba_max_sweeps
    r = len(A)
    eps = ctx.mpf(2) ** (-prec // 2)

    q = [ctx.mpf(x) for x in start] if start else [ctx.mpf(1) / 2] * r
    best = max(ctx.fabs(x) for x in residuals(ctx, A, q))
    sweeps = 0
    # sweep until Newton can take over
    handover = max(tol, ctx.mpf(10) ** -8)
    while best > handover and sweeps < max_sweeps:
        for i in range(r):
            p = ctx.fprod(ctx.power(q[j], _mpf(ctx, A[i][j])) for j in range(r) if A[i][j])
            target = min(max(1 - p, eps), 1 - eps)
            q[i] = (1 - omega) * q[i] + omega * target
        sweeps += 1
        current = max(ctx.fabs(x) for x in residuals(ctx, A, q))
        if current > best:
            omega /= 2
        best = min(best, current)
        if sweeps % 100 == 0:
            log.tba_sweep(sweeps, ctx.nstr(current, 5))

    try:
        if r == 1:
            polished = [ctx.findroot(lambda x: residuals(ctx, A, [x])[0], q[0], tol=tol ** 2)]
        else:
            root = ctx.findroot(lambda *xs: residuals(ctx, A, xs), q, tol=tol ** 2)
            polished = [root[i] for i in range(r)]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConvergenceError(f"Newton polish failed after {sweeps} sweeps: {exc}", residual=best) from exc

    res = residuals(ctx, A, polished)
    worst = max(ctx.fabs(x) for x in res)
    if worst > tol or any(not (0 < ctx.re(x) < 1) for x in polished):
        raise ConvergenceError(
            f"no solution in (0,1)^{r} within {max_sweeps} sweeps (residual {ctx.nstr(worst, 5)})",
            residual=worst,
        )
    values = [ctx.re(x) for x in polished]
    exact = [match_root5(x, prec) for x in values]
    logger.debug("tba_solved", rank=r, sweeps=sweeps, residual=ctx.nstr(worst, 5))
    return TbaSolution(
        Q=[ctx.nstr(x, prec * 3 // 10) for x in values],
        residuals=[ctx.nstr(ctx.fabs(x), 5) for x in res],
        precision_bits=prec,
        sweeps=sweeps,
        exact_forms=[str(e) if e is not None else None for e in exact],
    )


def match_root5(x, prec: int, max_coeff: int = 10 ** 6) -> Optional[Root5Elem]:
    """Find a + b sqrt5 equal to x via pslq on (x, 1, sqrt5)"""
    ctx = complex_context(prec)
    x = ctx.mpf(x)
    relation = ctx.pslq([x, ctx.mpf(1), ctx.sqrt(5)], tol=ctx.mpf(2) ** (-(prec * 3 // 4)),
                        maxcoeff=max_coeff, maxsteps=10 ** 5)
    if relation is None or relation[0] == 0:
        return None
    c0, c1, c2 = relation
    candidate = Root5Elem(Fraction(-c1, c0), Fraction(-c2, c0))
    if ctx.fabs(candidate.to_mp(ctx) - x) > ctx.mpf(2) ** (-(prec // 2)):
        return None
    return candidate


def verify_closed_form(A, Q: Sequence[Root5Elem]) -> bool:
    """1 - Q_i == prod Q_j^(A_ij) exactly in Q(sqrt 5)"""
    A = as_matrix(A)
    if any(x.denominator != 1 for row in A for x in row):
        raise ParameterError("exact verification needs an integral matrix")
    for i, row in enumerate(A):
        rhs = Root5Elem(1, 0)
        for j, a in enumerate(row):
            if a:
                rhs = rhs * Q[j] ** int(a)
        if 1 - Q[i] != rhs:
            return False
    return True


def gamma_coefficient(C, solution: TbaSolution):
    """C + (1/24) sum (1 + Q_i)/(1 - Q_i) at the solution precision"""
    ctx = complex_context(solution.precision_bits)
    total = _mpf(ctx, Fraction(C))
    for x in solution.values(ctx):
        total += (1 + x) / (1 - x) / 24
    return total


def gamma_exact(C, Q: Sequence[Root5Elem]) -> Root5Elem:
    total = Root5Elem(Fraction(C), 0)
    for x in Q:
        total = total + (1 + x) / (1 - x) * Fraction(1, 24)
    return total


def uniqueness_sweep(A, starts: int = 100, seed: int = 0, prec: Optional[int] = None,
                     tol=None, agree=1e-10) -> Tuple[bool, List[TbaSolution]]:
    """Solve from ``starts`` random points of (0,1)^r; True when every solution agrees"""
    A = as_matrix(A)
    rng = random.Random(seed)
    prec = prec or settings.tba_precision_bits
    ctx = complex_context(prec)
    solutions = []
    for _ in range(starts):
        start = [rng.uniform(0.05, 0.95) for _ in A]
        solutions.append(solve_tba(A, prec=prec, tol=tol, start=start))
    reference = solutions[0].values(ctx)
    same = all(
        max(ctx.fabs(x - y) for x, y in zip(s.values(ctx), reference)) < agree
        for s in solutions
    )
    return same, solutions
