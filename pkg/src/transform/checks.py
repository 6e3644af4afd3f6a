# src/transform/checks.py
"""Residual checks of S and T laws, closure and the weight 3/2 theta laws."""
from fractions import Fraction
from typing import List, Optional, Sequence

import structlog

from src.config.settings import settings
from src.errors import IllConditionedError, ParameterError
from src.schemas.analysis import TransformReport
from src.series.rings import complex_context
from src.theta.partial import partial_theta
from src.transform.descriptors import VVMFDescriptor, column, least_squares, rho_tilde_matrix
from src.transform.evaluate import as_tau, evaluate

logger = structlog.get_logger(__name__)


def _setup(prec, depth, tol):
    prec = prec or settings.precision_bits
    depth = int(depth or settings.default_depth)
    tol = settings.tolerance if tol is None else tol
    return prec, depth, tol, complex_context(prec)


def automorphy(ctx, tau, weight: Fraction):
    """(-i tau)^weight on the principal branch"""
    if weight == 0:
        return ctx.mpc(1)
    return ctx.power(ctx.mpc(0, -1) * tau, ctx.mpf(weight.numerator) / weight.denominator)


def _values(series, tau, prec, ctx, tol):
    """Component values at tau and the worst tail bound"""
    values, tail = [], ctx.mpf(0)
    for s in series:
        ev = evaluate(s, tau, prec, tolerance=ctx.mpf(tol) / 1000)
        values.append(ev.value)
        tail = max(tail, ev.tail_bound)
    return values, tail


def _residual(ctx, lhs: Sequence, rhs: Sequence):
    worst = ctx.mpf(0)
    for x, y in zip(lhs, rhs):
        worst = max(worst, ctx.fabs(x - y) / max(1, ctx.fabs(x)))
    return worst


def _apply(ctx, matrix, values):
    return [ctx.fsum(matrix[i, j] * values[j] for j in range(len(values))) for i in range(matrix.rows)]


TAIL_NOTE = "tail_bound extrapolates an A exp(kappa sqrt(n)) coefficient envelope"


def _report(name, kind, tau, ctx, prec, depth, residual, tail, tol, notes=None) -> TransformReport:
    passed = bool(residual < tol)
    logger.debug("transform_checked", name=name, kind=kind, residual=ctx.nstr(residual, 5), passed=passed)
    return TransformReport(
        name=name,
        kind=kind,
        tau=ctx.nstr(tau, 15) if not isinstance(tau, str) else tau,
        precision_bits=prec,
        depth=depth,
        residual=float(residual),
        tail_bound=float(tail),
        tolerance=float(tol),
        passed=passed,
        notes=(notes or []) + [TAIL_NOTE],
    )


def check_S(d: VVMFDescriptor, tau, prec: Optional[int] = None, depth=None, tol=None,
            kind: str = "S") -> TransformReport:
    """F(-1/tau) against (-i tau)^w S F(tau)"""
    prec, depth, tol, ctx = _setup(prec, depth, tol)
    tau = as_tau(tau, prec)
    image = -1 / tau
    if image.imag <= 0:
        raise ParameterError("-1/tau must lie in the upper half-plane")
    components = d.components(depth)
    here, tail_here = _values(components, tau, prec, ctx, tol)
    there, tail_there = _values(components, image, prec, ctx, tol)
    factor = automorphy(ctx, tau, d.weight)
    expected = [factor * v for v in _apply(ctx, d.s_matrix(ctx), here)]
    residual = _residual(ctx, there, expected)
    return _report(d.name, kind, tau, ctx, prec, depth, residual, max(tail_here, tail_there), tol)


def check_T(d: VVMFDescriptor, tau, prec: Optional[int] = None, depth=None, tol=None) -> TransformReport:
    """F(tau + 1) against T F(tau)"""
    prec, depth, tol, ctx = _setup(prec, depth, tol)
    tau = as_tau(tau, prec)
    components = d.components(depth)
    here, tail_here = _values(components, tau, prec, ctx, tol)
    there, tail_there = _values(components, tau + 1, prec, ctx, tol)
    residual = _residual(ctx, there, _apply(ctx, d.t_matrix(ctx), here))
    return _report(d.name, "T", tau, ctx, prec, depth, residual, max(tail_here, tail_there), tol)


def fixed_point_check(d: VVMFDescriptor, prec: Optional[int] = None, depth=None, tol=None) -> TransformReport:
    """(I - (-i tau)^w S) F(tau) = 0 at tau = i"""
    return check_S(d, "0,1", prec, depth, tol, kind="fixed-point")


def sample_points(count: int, prec: int) -> List:
    """Deterministic points with 1 <= Im tau <= 3/2 and |Re tau| <= 1/2, off the imaginary axis"""
    ctx = complex_context(prec)
    points = []
    for k in range(count):
        x = Fraction(-1, 2) + Fraction(2 * k + 1, 4 * count)
        y = 1 + Fraction(k % 3, 4)
        points.append(ctx.mpc(ctx.mpf(x.numerator) / x.denominator, ctx.mpf(y.numerator) / y.denominator))
    return points


def closure_check(d: VVMFDescriptor, action: str = "S", taus: Optional[Sequence] = None,
                  prec: Optional[int] = None, depth=None, tol=None) -> TransformReport:
    """Fit F(g tau) inside the span of F(tau) over sample points.

    Uses no knowledge of the stated matrices: a small residual means the
    span closes under g.
    """
    prec, depth, tol, ctx = _setup(prec, depth, tol)
    if action not in ("S", "T"):
        raise ParameterError(f"closure action must be S or T, got {action!r}")
    components = d.components(depth)
    dim = len(components)
    points = [as_tau(t, prec) for t in taus] if taus else sample_points(2 * dim, prec)
    if len(points) < dim:
        raise IllConditionedError(f"{len(points)} sample points cannot determine {dim} components")

    a = ctx.matrix(len(points), dim)
    b = ctx.matrix(len(points), dim)
    tail = ctx.mpf(0)
    for row, tau in enumerate(points):
        image = -1 / tau if action == "S" else tau + 1
        here, t1 = _values(components, tau, prec, ctx, tol)
        there, t2 = _values(components, image, prec, ctx, tol)
        factor = automorphy(ctx, tau, d.weight) if action == "S" else 1
        tail = max(tail, t1, t2)
        for j in range(dim):
            a[row, j] = here[j]
            b[row, j] = there[j] / factor

    gram = normalized_gram(ctx, a)
    det = ctx.fabs(ctx.det(gram))
    if det < settings.gram_threshold:
        raise IllConditionedError(f"Gram determinant {ctx.nstr(det, 5)} of the sample set is below threshold")

    worst = ctx.mpf(0)
    for i in range(dim):
        rhs = column(ctx, b, i)
        _, res = least_squares(ctx, a, rhs)
        worst = max(worst, res / max(1, ctx.mnorm(rhs, 1)))
    return _report(f"{d.name}-closure", "closure", f"samples:{len(points)}", ctx, prec, depth, worst, tail, tol,
                   notes=[f"action {action}", f"gram determinant {ctx.nstr(det, 5)}"])


def normalized_gram(ctx, a):
    """Gram matrix of the columns of ``a`` scaled to unit length"""
    scaled = a.copy()
    for j in range(a.cols):
        norm = ctx.sqrt(ctx.fsum(ctx.fabs(a[i, j]) ** 2 for i in range(a.rows)))
        for i in range(a.rows):
            scaled[i, j] = a[i, j] / norm
    return scaled.H * scaled


def decomposition_closure(prec: Optional[int] = None, tol=None) -> List[TransformReport]:
    """Residual of the S and T matrices of the six F~ derived from their W_p Z_q forms"""
    prec, _, tol, ctx = _setup(prec, None, tol)
    reports = []
    for kind in ("S", "T"):
        _, residual = rho_tilde_matrix(ctx, kind)
        reports.append(_report(f"rho-tilde-{kind}", "closure", "formal", ctx, prec, 1, residual, 0, tol,
                               notes=[f"{kind} matrix induced from the weber, rho1 and rho2 actions"]))
    return reports


def theta_s_terms(j: Fraction, k: Fraction, signed: bool):
    """(phase turns, j', signed') of the weight 3/2 S-law; phase is exp(i pi turns)"""
    integral = j.denominator == 1
    if not signed:
        return [(j * jp / k, Fraction(jp), not integral) for jp in range(1, int(2 * k))]
    out = []
    for jp in range(1, int(2 * k) + 1):
        half = Fraction(2 * jp - 1, 2)
        out.append((j * (2 * jp - 1) / (2 * k), half, not integral))
    return out


def check_theta_S(j, k, signed: bool, tau, prec: Optional[int] = None, depth=None, tol=None) -> TransformReport:
    """dTheta or dG at -1/tau against (-tau) sqrt(-i tau/2k) times the mixed sum at tau"""
    prec, depth, tol, ctx = _setup(prec, depth, tol)
    j, k = Fraction(j), Fraction(k)
    if (2 * j).denominator != 1 or (2 * k).denominator != 1 or k <= 0:
        raise ParameterError("j and k must be half-integers with k > 0")
    tau = as_tau(tau, prec)
    image = -1 / tau
    lhs_series = partial_theta(j, k, signed, depth)
    lhs, tail = _values([lhs_series], image, prec, ctx, tol)
    total = ctx.mpc(0)
    for turns, jp, sg in theta_s_terms(j, k, signed):
        val, t = _values([partial_theta(jp, k, sg, depth)], tau, prec, ctx, tol)
        tail = max(tail, t)
        total += ctx.expjpi(ctx.mpf(turns.numerator) / turns.denominator) * val[0]
    two_k = 2 * k
    factor = -tau * ctx.sqrt(ctx.mpc(0, -1) * tau * two_k.denominator / two_k.numerator)
    residual = _residual(ctx, lhs, [factor * total])
    name = f"{'dg' if signed else 'dtheta'}({j},{k})"
    return _report(name, "S", tau, ctx, prec, depth, residual, tail, tol)
