# src/asymptotics/obstruction.py
"""Exact non-modularity test for rank 3 tadpole Nahm sums with shift vector B.

Matching the constant term of the asymptotic expansion with the rational
prefactor forces C to equal a quadratic polynomial in B over Q(sqrt 5);
a nonzero sqrt5 part rules out every rational C.
"""
from fractions import Fraction
from typing import Sequence

from src.errors import ParameterError
from src.schemas.analysis import ObstructionVerdict
from src.series.rings import Root5Elem

INV_SQRT5 = Root5Elem(0, Fraction(1, 5))

# (coefficient of 1/sqrt5, rational coefficient) per monomial B1^i B2^j B3^k
C_POLYNOMIAL = {
    (2, 0, 0): (Fraction(9, 4), Fraction(-3, 4)),
    (1, 1, 0): (Fraction(3), Fraction(-1)),
    (1, 0, 1): (Fraction(-1, 2), Fraction(1, 2)),
    (1, 0, 0): (Fraction(2), Fraction(-9, 10)),
    (0, 2, 0): (Fraction(1), Fraction(0)),
    (0, 1, 1): (Fraction(1, 2), Fraction(1, 2)),
    (0, 1, 0): (Fraction(7, 4), Fraction(-17, 20)),
    (0, 0, 2): (Fraction(1), Fraction(1, 4)),
    (0, 0, 1): (Fraction(-1, 2), Fraction(1, 10)),
    (0, 0, 0): (Fraction(0), Fraction(-7, 80)),
}


def parse_vector(text: str) -> tuple:
    try:
        values = tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"unreadable vector {text!r}") from exc
    if len(values) != 3:
        raise ParameterError(f"B must have three entries, got {len(values)}")
    return values


def c_formula(B: Sequence) -> Root5Elem:
    """The value C must take for q^C f_(T3,B) to be modular"""
    if len(B) != 3:
        raise ParameterError(f"B must have three entries, got {len(B)}")
    b1, b2, b3 = (Fraction(x) for x in B)
    total = Root5Elem(0, 0)
    for (i, j, k), (irrational, rational) in C_POLYNOMIAL.items():
        monomial = b1 ** i * b2 ** j * b3 ** k
        total = total + INV_SQRT5 * (irrational * monomial) + rational * monomial
    return total


def modularity_obstruction(B: Sequence) -> ObstructionVerdict:
    c = c_formula(B)
    obstructed = c.b != 0
    return ObstructionVerdict(
        B=[str(Fraction(x)) for x in B],
        verdict="obstructed" if obstructed else "candidate",
        c={"a": str(c.a), "b": str(c.b)},
        candidate_C=None if obstructed else str(c.a),
    )
