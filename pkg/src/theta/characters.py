# src/theta/characters.py
"""Characters behind the decomposition of the six F-tilde series.

Z_1..Z_4 are the (3,5) minimal-model characters written as Rogers sums,
W_1, W_2 are the level one characters theta3/eta and theta2/eta, and
theta(psi) is the weight 3/2 theta series of a quartic character mod 5.
"""
from fractions import Fraction

from src.errors import ParameterError
from src.nahm.lattice import rogers_sum
from src.products.atoms import Eta, FactorBag
from src.products.escapes import int_args, rational_args
from src.products.expand import ProductExpander
from src.series.core import FracSeries
from src.series.deepen import deepen
from src.series.rings import GaussRational
from src.theta.partial import linear_theta, quadratic_sum, theta_residue_class

# i -> (prefactor exponent, (a, b, c, d) of sum q^(an^2+bn)/(q;q)_(cn+d))
Z_SUMS = {
    1: (Fraction(1, 40), (1, 1, 2, 0)),
    2: (Fraction(31, 40), (1, 2, 2, 1)),
    3: (Fraction(9, 40), (1, 1, 2, 1)),
    4: (Fraction(-1, 40), (1, 0, 2, 0)),
}

# Z_i = ch^{r,s} of the (3,5) minimal model
Z_LABELS = {1: (1, 1), 2: (2, 1), 3: (2, 2), 4: (1, 2)}

W_EXPRESSIONS = {1: "theta3/eta", 2: "theta2/eta"}


def Z(i: int, depth) -> FracSeries:
    if i not in Z_SUMS:
        raise ParameterError(f"Z index must be 1..4, got {i}")
    shift, (a, b, c, d) = Z_SUMS[i]
    return rogers_sum(a, b, c, d, Fraction(depth) - shift).shift(shift)


def W(i: int, depth, expander: ProductExpander = None) -> FracSeries:
    if i not in W_EXPRESSIONS:
        raise ParameterError(f"W index must be 1 or 2, got {i}")
    return (expander or ProductExpander()).expand(W_EXPRESSIONS[i], depth)


def inverse_eta(depth) -> FracSeries:
    bag = FactorBag()
    bag.absorb(Eta().bag(), -1)
    return bag.expand(depth)


def minimal_model_char(r: int, s: int, depth) -> FracSeries:
    """ch^{r,s} of the (3,5) minimal model as a theta difference over eta"""
    if (r, s) not in Z_LABELS.values():
        raise ParameterError(f"(r, s) must lie in {{1,2}} x {{1,2}}, got ({r}, {s})")
    depth = Fraction(depth)

    def difference(d: Fraction) -> FracSeries:
        def side(c: int) -> FracSeries:
            return quadratic_sum(lambda n: 1, lambda n: Fraction((30 * n + c) ** 2, 60),
                                 Fraction(-c, 30), d)
        return side(5 * r - 3 * s) - side(5 * r + 3 * s)

    def build(working: Fraction) -> FracSeries:
        return difference(working + Fraction(1, 24)) * inverse_eta(working + 1)

    return deepen(build, depth, what=f"ch{r}{s}")


def character_theta(kind: int, depth) -> FracSeries:
    """sum over n in Z of psi(n) n q^(n^2), psi(2) = i for kind 0 and -i for kind 1"""
    if kind not in (0, 1):
        raise ParameterError(f"character kind must be 0 or 1, got {kind}")
    i = GaussRational.i() if kind == 0 else -GaussRational.i()
    values = {0: 0, 1: 1, 2: i, 3: -i, 4: -1}

    def coefficient(n: int):
        v = values[n % 5]
        return v * n if v else 0

    return quadratic_sum(coefficient, lambda n: Fraction(n * n), Fraction(0), depth)


def character_theta_classes(kind: int, depth) -> FracSeries:
    """2 class(1) + 2i class(2), or with -2i for kind 1"""
    unit = GaussRational(0, 2 if kind == 0 else -2)
    return theta_residue_class(1, 5, depth).scale(2) + theta_residue_class(2, 5, depth).scale(unit)


# -- expression escapes -----------------------------------------------------

def _z_escape(raw: str, depth: Fraction) -> FracSeries:
    (i,) = int_args(raw, 1)
    return Z(i, depth)


def _w_escape(raw: str, depth: Fraction) -> FracSeries:
    (i,) = int_args(raw, 1)
    return W(i, depth)


def _ch_escape(raw: str, depth: Fraction) -> FracSeries:
    r, s = int_args(raw, 2)
    return minimal_model_char(r, s, depth)


def _lsum_escape(raw: str, depth: Fraction) -> FracSeries:
    a, b, c, d = rational_args(raw, 4)
    return linear_theta(a, b, c, d, depth)


def _tclass_escape(raw: str, depth: Fraction) -> FracSeries:
    a, m = int_args(raw, 2)
    return theta_residue_class(a, m, depth)


def _psi_escape(raw: str, depth: Fraction) -> FracSeries:
    (kind,) = int_args(raw, 1)
    return character_theta(kind, depth)


def register_escapes(registry):
    from src.products.escapes import SeriesProvider

    registry.register(SeriesProvider("Z", _z_escape, "(3,5) minimal-model character Z_i, i = 1..4"))
    registry.register(SeriesProvider("W", _w_escape, "level one character W_1 = theta3/eta, W_2 = theta2/eta"))
    registry.register(SeriesProvider("ch", _ch_escape, "ch^{r,s} of the (3,5) minimal model"))
    registry.register(SeriesProvider("lsum", _lsum_escape, "sum over Z of (an+b) q^(cn^2+dn)"))
    registry.register(SeriesProvider("tclass", _tclass_escape, "sum over n = a mod m of n q^(n^2)"))
    registry.register(SeriesProvider("psi", _psi_escape, "theta series of the quartic character mod 5"))
