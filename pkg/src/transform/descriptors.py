# src/transform/descriptors.py
"""Vector-valued modular forms as component builders plus S and T matrices.

Matrices are built in a caller supplied mpmath context; ``F(-1/tau) =
(-i tau)^w S F(tau)`` and ``F(tau + 1) = T F(tau)``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import structlog

from src.errors import ParameterError
from src.nahm.lattice import f_tilde
from src.products.expand import ProductExpander
from src.series.core import FracSeries
from src.theta.characters import W, Z, Z_SUMS

logger = structlog.get_logger(__name__)

Builder = Callable[[Fraction], List[FracSeries]]
MatrixBuilder = Callable[[object], object]

WEBER = ("f", "f1", "f2")

# F~_i = weber_i * sum of coef * W_p * Z_q
DECOMPOSITION: Dict[int, Tuple[str, Tuple[Tuple[int, int, int], ...]]] = {
    1: ("f", ((1, 1, 4), (1, 2, 3))),
    2: ("f2", ((1, 1, 1), (1, 2, 2))),
    3: ("f2", ((1, 1, 3), (1, 2, 4))),
    4: ("f", ((1, 1, 2), (1, 2, 1))),
    5: ("f1", ((1, 1, 4), (-1, 2, 3))),
    6: ("f1", ((1, 2, 1), (-1, 1, 2))),
}


@dataclass(frozen=True)
class VVMFDescriptor:
    name: str
    weight: Fraction
    build: Builder
    s_matrix: MatrixBuilder
    t_matrix: MatrixBuilder
    labels: Tuple[str, ...] = field(default_factory=tuple)

    def components(self, depth) -> List[FracSeries]:
        return self.build(Fraction(depth))


# -- matrices ---------------------------------------------------------------

def weber_s(ctx):
    r2 = ctx.sqrt(2)
    return ctx.matrix([[1, 0, 0], [0, 0, r2], [0, 1 / r2, 0]])


def weber_t(ctx):
    a = ctx.expjpi(ctx.mpf(-1) / 24)
    return ctx.matrix([[0, a, 0], [a, 0, 0], [0, 0, ctx.expjpi(ctx.mpf(1) / 12)]])


def rho1_s(ctx):
    r2 = ctx.sqrt(2)
    return ctx.matrix([[1, 1], [1, -1]]) / r2


def rho1_t(ctx):
    return ctx.diag([ctx.expjpi(ctx.mpf(-1) / 12), ctx.expjpi(ctx.mpf(5) / 12)])


def rho2_s(ctx, corrected: bool = True):
    s1, s2 = ctx.sin(ctx.pi / 5), ctx.sin(2 * ctx.pi / 5)
    m = ctx.matrix([
        [s2, -s2, -s1, s1],
        [-s2, -s2, s1, s1],
        [-s1, s1, -s2, s2],
        [s1, s1, s2, s2],
    ])
    if not corrected:
        m[2, 2] = s2
    return m * ctx.sqrt(ctx.mpf(2) / 5)


def rho2_t(ctx):
    return ctx.diag([ctx.expjpi(2 * ctx.mpf(s.numerator) / s.denominator) for s, _ in
                     (Z_SUMS[i] for i in range(1, 5))])


def kron(ctx, *matrices):
    out = ctx.matrix([[1]])
    for m in matrices:
        rows, cols = out.rows * m.rows, out.cols * m.cols
        nxt = ctx.matrix(rows, cols)
        for i in range(out.rows):
            for j in range(out.cols):
                for k in range(m.rows):
                    for l in range(m.cols):
                        nxt[i * m.rows + k, j * m.cols + l] = out[i, j] * m[k, l]
        out = nxt
    return out


def decomposition_vectors(ctx):
    """Columns: F~_1..F~_6 in the basis weber_a * W_p * Z_q, 0-based index (2a + p)*4 + q"""
    v = ctx.matrix(24, 6)
    for col, (weber, terms) in DECOMPOSITION.items():
        a = WEBER.index(weber)
        for coef, p, q in terms:
            v[(a * 2 + p - 1) * 4 + q - 1, col - 1] = coef
    return v


def column(ctx, m, j):
    return ctx.matrix([m[i, j] for i in range(m.rows)])


def least_squares(ctx, a, b):
    """Normal-equation solution of a x ~ b and the residual norm"""
    gram = a.H * a
    x = ctx.lu_solve(gram, a.H * b)
    return x, ctx.mnorm(a * x - b, 1)


def induced_matrix(ctx, action) -> Tuple[object, object]:
    """Matrix M with F~(g tau) = M F~(tau) given the basis action, and its residual"""
    v = decomposition_vectors(ctx)
    image = action.T * v
    m = ctx.matrix(6, 6)
    worst = ctx.mpf(0)
    for i in range(6):
        x, res = least_squares(ctx, v, column(ctx, image, i))
        worst = max(worst, res)
        for j in range(6):
            m[i, j] = x[j]
    return m, worst


def rho_tilde_matrix(ctx, kind: str = "S"):
    """S (or T) matrix of the six F~ implied by the W_p Z_q decomposition"""
    if kind == "S":
        action = kron(ctx, weber_s(ctx), rho1_s(ctx), rho2_s(ctx))
    elif kind == "T":
        action = kron(ctx, weber_t(ctx), rho1_t(ctx), rho2_t(ctx))
    else:
        raise ParameterError(f"matrix kind must be S or T, got {kind!r}")
    return induced_matrix(ctx, action)


# -- component builders -----------------------------------------------------

def _expander_builder(texts: Sequence[str]) -> Builder:
    def build(depth: Fraction) -> List[FracSeries]:
        expander = ProductExpander()
        return [expander.expand(t, depth) for t in texts]
    return build


def _weber_components(depth):
    return _expander_builder([f"weber({w})" for w in WEBER])(depth)


def _w_components(depth):
    return [W(1, depth), W(2, depth)]


def _z_components(depth):
    return [Z(i, depth) for i in range(1, 5)]


def _wz_components(depth):
    ws, zs = _w_components(depth), _z_components(depth)
    return [w * z for w in ws for z in zs]


def _f_tilde_components(depth):
    return [f_tilde(i, depth) for i in range(1, 7)]


def _eta_components(depth):
    return _expander_builder(["eta"])(depth)


def _first(builder: Builder) -> Builder:
    return lambda depth: builder(depth)[:1]


DESCRIPTORS: Dict[str, VVMFDescriptor] = {
    "weber": VVMFDescriptor("weber", Fraction(0), _weber_components, weber_s, weber_t, WEBER),
    "eta": VVMFDescriptor(
        "eta", Fraction(1, 2), _eta_components,
        lambda ctx: ctx.matrix([[1]]),
        lambda ctx: ctx.matrix([[ctx.expjpi(ctx.mpf(1) / 12)]]),
        ("eta",),
    ),
    "rho1": VVMFDescriptor("rho1", Fraction(0), _w_components, rho1_s, rho1_t, ("W1", "W2")),
    "rho2": VVMFDescriptor("rho2", Fraction(0), _z_components, rho2_s, rho2_t, ("Z1", "Z2", "Z3", "Z4")),
    "rho2-uncorrected": VVMFDescriptor(
        "rho2-uncorrected", Fraction(0), _z_components,
        lambda ctx: rho2_s(ctx, corrected=False), rho2_t, ("Z1", "Z2", "Z3", "Z4"),
    ),
    "rho1xrho2": VVMFDescriptor(
        "rho1xrho2", Fraction(0), _wz_components,
        lambda ctx: kron(ctx, rho1_s(ctx), rho2_s(ctx)),
        lambda ctx: kron(ctx, rho1_t(ctx), rho2_t(ctx)),
        tuple(f"W{p}Z{q}" for p in (1, 2) for q in range(1, 5)),
    ),
    "rho-tilde": VVMFDescriptor(
        "rho-tilde", Fraction(0), _f_tilde_components,
        lambda ctx: rho_tilde_matrix(ctx, "S")[0],
        lambda ctx: rho_tilde_matrix(ctx, "T")[0],
        tuple(f"F~{i}" for i in range(1, 7)),
    ),
    "w1-alone": VVMFDescriptor(
        "w1-alone", Fraction(0), _first(_w_components),
        lambda ctx: ctx.matrix([[1]]), lambda ctx: ctx.matrix([[ctx.expjpi(ctx.mpf(-1) / 12)]]),
        ("W1",),
    ),
}


def get_descriptor(name: str) -> VVMFDescriptor:
    try:
        return DESCRIPTORS[name]
    except KeyError:
        raise ParameterError(f"unknown descriptor {name!r}; known: {', '.join(sorted(DESCRIPTORS))}")
