# src/nahm/triples.py
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import sympy

from src.errors import NotPositiveDefiniteError, ParameterError

Matrix = Tuple[Tuple[Fraction, ...], ...]
Vector = Tuple[Fraction, ...]


def to_sympy(matrix: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row]
                         for row in matrix])


def from_sympy(matrix: sympy.Matrix) -> Matrix:
    return tuple(
        tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in matrix.row(i))
        for i in range(matrix.rows)
    )


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def as_vector(values: Sequence) -> Vector:
    return tuple(Fraction(x) for x in values)


def tadpole(r: int) -> Matrix:
    """Tadpole Cartan matrix: 2 on the diagonal except a_rr = 1, -1 beside it"""
    if r < 1:
        raise ParameterError(f"tadpole rank must be at least 1, got {r}")
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            if i == j:
                row.append(Fraction(1 if i == r - 1 else 2))
            elif abs(i - j) == 1:
                row.append(Fraction(-1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return tuple(rows)


def tadpole_inverse(r: int) -> Matrix:
    """Inverse of the tadpole matrix: entry min(i, j) (1-based)"""
    if r < 1:
        raise ParameterError(f"tadpole rank must be at least 1, got {r}")
    return tuple(tuple(Fraction(min(i, j)) for j in range(1, r + 1)) for i in range(1, r + 1))


def leading_minors(matrix: Matrix):
    m = to_sympy(matrix)
    return [m[:k, :k].det() for k in range(1, m.rows + 1)]


def is_positive_definite(matrix: Matrix) -> bool:
    """Sylvester's criterion on exact leading principal minors"""
    return all(d > 0 for d in leading_minors(matrix))


def matrix_inverse(matrix: Matrix) -> Matrix:
    return from_sympy(to_sympy(matrix).inv())


def mat_vec(matrix: Matrix, vector: Vector) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in matrix)


def dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def parse_matrix(text: str) -> Matrix:
    """``tadpole:R`` | ``tadpole-inv:R`` | rows split by ';' or '|', entries by ','"""
    text = text.strip()
    if text.startswith("tadpole-inv:"):
        return tadpole_inverse(int(text.split(":", 1)[1]))
    if text.startswith("tadpole:"):
        return tadpole(int(text.split(":", 1)[1]))
    sep = "|" if "|" in text else ";"
    try:
        rows = [[Fraction(x) for x in row.split(",")] for row in text.strip("[]").split(sep)]
    except ValueError as exc:
        raise ParameterError(f"unreadable matrix {text!r}") from exc
    if any(len(row) != len(rows) for row in rows):
        raise ParameterError(f"matrix {text!r} is not square")
    return as_matrix(rows)


def parse_vector(text: str) -> Vector:
    try:
        return as_vector([x for x in text.replace(" ", "").split(",") if x])
    except ValueError as exc:
        raise ParameterError(f"unreadable vector {text!r}") from exc


@dataclass(frozen=True)
class NahmTriple:
    A: Matrix
    B: Vector
    C: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "B", as_vector(self.B))
        object.__setattr__(self, "C", Fraction(self.C))
        r = len(self.A)
        if r == 0 or any(len(row) != r for row in self.A) or len(self.B) != r:
            raise ParameterError("A must be square and match the length of B")
        if any(self.A[i][j] != self.A[j][i] for i in range(r) for j in range(i)):
            raise ParameterError("A must be symmetric")
        if not is_positive_definite(self.A):
            raise NotPositiveDefiniteError(f"matrix {self.A} is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.A)

    def minimal_exponent_bound(self) -> Fraction:
        """C - B^T A^-1 B / 2, a lower bound for every exponent of the sum"""
        inv = matrix_inverse(self.A)
        return self.C - dot(self.B, mat_vec(inv, self.B)) / 2

    @classmethod
    def parse(cls, matrix: str, vector: str, constant: str = "0") -> "NahmTriple":
        return cls(parse_matrix(matrix), parse_vector(vector), Fraction(constant.strip() or "0"))


def dual_triple(t: NahmTriple) -> NahmTriple:
    """(A^-1, A^-1 B, B^T A^-1 B / 2 - r/24 - C)"""
    inv = matrix_inverse(t.A)
    b = mat_vec(inv, t.B)
    c = dot(t.B, b) / 2 - Fraction(t.rank, 24) - t.C
    return NahmTriple(inv, b, c)


# modular B-vectors for the inverse tadpole of rank 3 and their duals
ZAGIER_VECTORS = [as_vector(v) for v in [
    (0, 0, 0),
    (Fraction(1, 2), 1, Fraction(3, 2)),
    (Fraction(1, 2), 0, Fraction(1, 2)),
    (0, 1, 1),
    (Fraction(-1, 2), 0, Fraction(-1, 2)),
    # entries 1 and 3 swapped relative to the usual table so that it maps onto (-2, 2, -1/2)
    (Fraction(-1, 2), 1, Fraction(1, 2)),
]]

DUAL_VECTORS = [as_vector(v) for v in [
    (0, 0, 0),
    (0, 0, Fraction(1, 2)),
    (1, -1, Fraction(1, 2)),
    (-1, 1, 0),
    (-1, 1, Fraction(-1, 2)),
    (-2, 2, Fraction(-1, 2)),
]]
