# tests/test_series.py
import pytest
from fractions import Fraction

import numpy as np

from src.errors import (
    DepthError,
    FractionalExponentError,
    InsufficientDepthError,
    RingMismatchError,
    WindowError,
    ZeroSeriesError,
)
from src.series.bivariate import BivariateSeries, bivariate_pochhammer, constant_term, default_window
from src.series.core import FracSeries, compare
from src.series.deepen import deepen
from src.series.dense import convolve, lattice_step, multiply_binomial
from src.series.rings import CoefRing, GaussRational, Root5Elem


class TestArithmetic:
    def test_addition_cancels(self, one_minus_q):
        """Exact sums drop cancelled terms"""
        total = one_minus_q + FracSeries.from_terms({0: 1, 1: 1})
        assert total == FracSeries.constant(2)
        assert total.is_exact

    def test_half_integral_square(self):
        """q^(1/2) squared lands on q^1"""
        m = FracSeries.monomial(Fraction(1, 2))
        assert m.denom == 2
        square = m * m
        assert square.coefficient(1) == 1
        assert square.coefficient(Fraction(1, 2)) == 0

    def test_truncation_propagates(self):
        a = FracSeries.from_terms({0: 1, 1: 1}, trunc=5)
        b = FracSeries.from_terms({2: 1}, trunc=6)
        product = a * b
        # min(5 + 2, 6 + 0)
        assert product.trunc == 6
        assert list(product.items()) == [(2, 1), (3, 1)]

    def test_coefficient_beyond_truncation(self):
        s = FracSeries.constant(1, trunc=3)
        with pytest.raises(DepthError):
            s.coefficient(3)

    def test_mixed_rings_rejected(self):
        with pytest.raises(RingMismatchError):
            FracSeries.constant(Root5Elem(0, 1)) + FracSeries.constant(GaussRational(0, 1))

    def test_rational_joins_root5(self):
        s = FracSeries.constant(1) + FracSeries.constant(Root5Elem(0, 1))
        assert s.ring == CoefRing.ROOT5
        assert s.coefficient(0) == Root5Elem(1, 1)


class TestInversion:
    def test_geometric_series(self, one_minus_q):
        inverse = one_minus_q.invert(6)
        assert inverse.trunc == 6
        assert [inverse.coefficient(n) for n in range(6)] == [1] * 6
        assert one_minus_q * inverse == FracSeries.constant(1, trunc=6)

    def test_exact_polynomial_needs_depth(self, one_minus_q):
        with pytest.raises(DepthError):
            one_minus_q.invert()

    def test_exact_monomial(self):
        inverse = FracSeries.monomial(Fraction(3, 2), 2).invert()
        assert inverse.is_exact
        assert inverse.coefficient(Fraction(-3, 2)) == Fraction(1, 2)

    def test_negative_valuation_result(self, half_integral_series):
        """Truncation drops by twice the valuation"""
        inverse = half_integral_series.invert()
        assert inverse.valuation == Fraction(-1, 2)
        assert inverse.trunc == 9
        assert inverse.coefficient(Fraction(1, 2)) == 1

    def test_zero_series(self):
        with pytest.raises(ZeroSeriesError):
            FracSeries.zero(5).invert()
        with pytest.raises(ZeroSeriesError):
            FracSeries.zero(5).leading_term()

    def test_division_keeps_numerator_depth(self, one_minus_q):
        quotient = FracSeries.constant(1, trunc=8) / one_minus_q
        assert quotient.trunc == 8
        assert quotient.coefficient(7) == 1


class TestExponentMaps:
    def test_substitute_integral_power(self):
        s = FracSeries.from_terms({0: 1, 1: 1}, trunc=3).substitute_power(2)
        assert list(s.items()) == [(0, 1), (2, 1)]
        assert s.trunc == 6

    def test_substitute_rational_power(self):
        s = FracSeries.from_terms({0: 1, 1: 1}, trunc=3).substitute_power(Fraction(1, 2))
        assert s.exponents() == [0, Fraction(1, 2)]
        assert s.trunc == Fraction(3, 2)

    def test_substitute_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            FracSeries.constant(1).substitute_power(0)

    def test_shift(self):
        s = FracSeries.constant(1, trunc=5).shift(Fraction(1, 3))
        assert s.valuation == Fraction(1, 3)
        assert s.trunc == Fraction(16, 3)

    def test_dissect(self):
        s = FracSeries.from_terms({n: n for n in range(10)}, trunc=10)
        assert s.dissect(3, 1) == FracSeries.from_terms({0: 1, 1: 4, 2: 7}, trunc=3)

    def test_dissect_fractional_truncation(self):
        """(trunc - r)/m off the integers stays the truncation of the result"""
        s = FracSeries.from_terms({0: 1, 1: 2, 2: 3, 3: 4}, trunc=10)
        odd = s.dissect(2, 1)
        assert odd.trunc == Fraction(9, 2)
        assert odd == FracSeries.from_terms({0: 2, 1: 4}, trunc=Fraction(9, 2))
        assert odd.coefficient(4) == 0
        with pytest.raises(DepthError):
            odd.coefficient(5)

    def test_compact_refines_to_truncation_lattice(self):
        s = FracSeries({0: 1, 4: 3}, 1, Fraction(13, 2))
        compact = s.compact()
        assert compact.denom == 2
        assert list(compact.items()) == [(0, 1), (4, 3)]

    def test_dissect_fractional(self):
        with pytest.raises(FractionalExponentError):
            FracSeries.monomial(Fraction(1, 2)).dissect(2, 0)

    def test_tau_shift_half_integral(self):
        s = FracSeries.from_terms({0: 1, Fraction(1, 2): 1, 1: 1}, trunc=2)
        shifted = s.tau_shift()
        assert shifted == FracSeries.from_terms({0: 1, Fraction(1, 2): -1, 1: 1}, trunc=2)

    def test_tau_shift_quarter_needs_gauss(self):
        quarter = FracSeries.monomial(Fraction(1, 4))
        with pytest.raises(RingMismatchError):
            quarter.tau_shift()
        shifted = quarter.with_ring(CoefRing.GAUSS).tau_shift()
        assert shifted.coefficient(Fraction(1, 4)) == GaussRational(0, 1)

    def test_truncate(self):
        s = FracSeries.from_terms({0: 1, 5: 1}, trunc=10)
        assert list(s.truncate(3).items()) == [(0, 1)]
        with pytest.raises(DepthError):
            s.truncate(11)


class TestViews:
    def test_leading_term_and_order(self, half_integral_series):
        assert half_integral_series.leading_term() == (Fraction(1, 2), 1)
        assert half_integral_series.vanishing_order() == Fraction(1, 2)

    def test_text_rendering(self):
        s = FracSeries.from_terms({0: 1, 1: -1}, trunc=3)
        assert s.to_text() == "{1 - 1*q^(1)} + O(q^(3))"

    def test_json_restores_root5_series(self):
        s = FracSeries.from_terms({0: Root5Elem(1, 1), Fraction(1, 2): 3}, trunc=4)
        restored = FracSeries.from_json(s.to_json())
        assert restored.ring == CoefRing.ROOT5
        assert restored == s


class TestCompare:
    def setup_method(self):
        self.a = FracSeries.from_terms({0: 1, 1: 2}, trunc=5)
        self.b = FracSeries.from_terms({0: 1, 1: 3}, trunc=5)

    def test_equal(self):
        report = compare(self.a, self.a, 5)
        assert report.equal
        assert report.mismatch is None

    def test_first_mismatch(self):
        report = compare(self.a, self.b, 5)
        assert not report.equal
        assert report.mismatch.exponent == "1"
        assert report.mismatch.lhs == "2"
        assert report.mismatch.rhs == "3"

    def test_agreement_below_mismatch(self):
        assert compare(self.a, self.b, 1).equal

    def test_depth_beyond_known(self):
        with pytest.raises(DepthError):
            compare(self.a, self.b, 6)


class TestRings:
    def test_root5_arithmetic(self):
        assert Root5Elem.sqrt5() ** 2 == 5
        x = Root5Elem(2, 1)
        assert x * x.inverse() == 1
        assert Root5Elem(1, 1) ** -1 == Root5Elem(Fraction(-1, 4), Fraction(1, 4))

    def test_root5_parse(self):
        assert Root5Elem.parse("-139/80+17/20*sqrt5") == Root5Elem(Fraction(-139, 80), Fraction(17, 20))
        assert Root5Elem.parse("-7/80") == Fraction(-7, 80)
        assert Root5Elem.parse(str(Root5Elem(3, -2))) == Root5Elem(3, -2)

    def test_gauss_unit_roots(self):
        assert GaussRational.unit_root(2) == -1
        assert GaussRational.i() * GaussRational.i() == -1


class TestBivariate:
    def test_default_window(self):
        assert default_window(8, 1) == 12

    def test_constant_term_outside_window(self):
        b = BivariateSeries({1: FracSeries.constant(1, trunc=5)}, 1, 3)
        with pytest.raises(WindowError):
            constant_term(b)

    def test_pochhammer_times_inverse(self):
        """(z;q)_inf / (z;q)_inf has constant term 1 and no other degrees"""
        forward = bivariate_pochhammer(1, 1, 0, 1, 8, 6)
        backward = bivariate_pochhammer(1, 1, 0, 1, 8, 6, inverse=True)
        product = forward * backward
        assert constant_term(product) == FracSeries.constant(1, trunc=8)
        assert product.component(2).is_zero


class TestDenseKernels:
    def test_lattice_step(self):
        assert lattice_step([3, 7, 11]) == 4
        assert lattice_step([5]) == 0

    def test_sparse_and_dense_paths_agree(self):
        left = {0: 1, 1: 1}
        right = {0: 1, 1: -1}
        assert convolve(left, right) == {0: 1, 2: -1}
        assert convolve(left, right, dense_threshold=1) == {0: 1, 2: -1}

    def test_limit_drops_high_keys(self):
        assert convolve({0: 1, 1: 1}, {0: 1, 1: -1}, limit=2) == {0: 1}
        assert convolve({0: 1, 1: 1}, {0: 1, 1: -1}, limit=2, dense_threshold=1) == {0: 1}

    def test_binomial_powers(self):
        arr = np.array([1, 0, 0, 0, 0], dtype=object)
        multiply_binomial(arr, 2, 1, 2)
        assert list(arr) == [1, 0, 2, 0, 1]

    def test_binomial_inverse(self):
        arr = np.array([1, 0, 0, 0, 0], dtype=object)
        multiply_binomial(arr, 1, -1, 1)
        assert list(arr) == [1, -1, 0, 0, 0]
        multiply_binomial(arr, 1, -1, -1)
        assert list(arr) == [1, 0, 0, 0, 0]


class TestDeepen:
    def test_retries_with_deficit(self):
        calls = []

        def build(working):
            calls.append(working)
            return FracSeries.constant(1, trunc=working - 3)

        result = deepen(build, 10, attempts=3)
        assert calls == [10, 14]
        assert result.trunc == 10

    def test_gives_up(self):
        with pytest.raises(InsufficientDepthError):
            deepen(lambda working: FracSeries.constant(1, trunc=1), 10, attempts=2)
