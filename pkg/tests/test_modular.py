# tests/test_modular.py
import pytest
from fractions import Fraction

from src.errors import ParameterError
from src.modular.checks import (
    conjecture_check,
    conjecture_exponent,
    eisenstein_wronskian_check,
    g_leading_data,
    sturm_bound,
    wronskian_order,
)
from src.modular.eisenstein import eisenstein
from src.modular.wronskian import D, determinant, normalized_wronskian, serre, serre_wronskian, wronskian
from src.series.core import FracSeries, compare


class TestEisenstein:
    def test_leading_coefficients(self):
        assert [eisenstein(4, 4).coefficient(n) for n in range(4)] == [1, 240, 2160, 6720]
        assert [eisenstein(6, 3).coefficient(n) for n in range(3)] == [1, -504, -16632]
        assert [eisenstein(2, 3).coefficient(n) for n in range(3)] == [1, -24, -72]

    def test_unsupported_weight(self):
        with pytest.raises(ParameterError):
            eisenstein(8, 5)

    def test_escape(self, expander):
        assert expander.expand("E(6)", 15) == eisenstein(6, 15)

    def test_ramanujan_e4(self):
        """D(E4) = (E2 E4 - E6)/3"""
        e2, e4, e6 = (eisenstein(w, 30) for w in (2, 4, 6))
        assert compare(D(e4), (e2 * e4 - e6).scale(Fraction(1, 3)), 30).equal

    def test_serre_derivatives(self):
        e4, e6 = eisenstein(4, 30), eisenstein(6, 30)
        assert compare(serre(e4, 4), e6.scale(Fraction(-1, 3)), 30).equal
        assert compare(serre(e6, 6), (e4 * e4).scale(Fraction(-1, 2)), 30).equal

    def test_serre_needs_truncation(self):
        with pytest.raises(ParameterError):
            serre(FracSeries.from_terms({0: 1, 1: 1}), 4)


class TestWronskian:
    def test_derivative(self):
        s = FracSeries.from_terms({Fraction(1, 2): 2, 3: 1})
        assert D(s) == FracSeries.from_terms({Fraction(1, 2): 1, 3: 3})

    def test_two_by_two(self):
        a = FracSeries.constant(1, trunc=10)
        b = FracSeries.monomial(1, 1, trunc=10)
        assert wronskian([a, b]) == FracSeries.monomial(1, 1, trunc=10)

    def test_single_component(self):
        s = FracSeries.from_terms({1: 3, 2: 6}, trunc=5)
        assert wronskian([s]) == s
        assert normalized_wronskian([s]).leading_term() == (1, 1)

    def test_determinant_shape(self):
        with pytest.raises(ParameterError):
            determinant([])

    def test_monomial_wronskian_order(self):
        """W(q^a, q^b, q^c) = (b-a)(c-a)(c-b) q^(a+b+c)"""
        parts = [FracSeries.monomial(e, 1, trunc=20) for e in (Fraction(1, 3), 1, 2)]
        w = wronskian(parts)
        assert w.leading_term() == (Fraction(10, 3), Fraction(2, 3) * Fraction(5, 3) * 1)

    @pytest.mark.slow
    def test_f_tilde_wronskian_order(self):
        assert wronskian_order(10) == Fraction(3, 2)

    @pytest.mark.slow
    def test_eisenstein_form(self):
        assert eisenstein_wronskian_check(20).status == "pass"


class TestSturmBound:
    def test_level_200(self):
        assert sturm_bound(2, 200) == 2401

    def test_level_one(self):
        assert sturm_bound(12, 1) == 1

    def test_validation(self):
        with pytest.raises(ParameterError):
            sturm_bound(0, 5)


class TestGBasis:
    @pytest.mark.slow
    def test_leading_data(self):
        data = g_leading_data(depth=4, count=3)
        assert data[1] == (Fraction(-7, 80), [2, 12, 30])
        assert data[5] == (Fraction(1, 40), [1, 6, 15])
        assert data[6] == (Fraction(9, 40), [3, 11, 30])


class TestConjecture:
    def test_exponents(self):
        assert conjecture_exponent(2) == Fraction(-5, 96)
        assert conjecture_exponent(3) == Fraction(-7, 80)

    def test_rank_bound(self):
        with pytest.raises(ParameterError):
            conjecture_exponent(1)

    @pytest.mark.slow
    def test_rank_two(self):
        result = conjecture_check(2, 30)
        assert result.status == "pass"
        assert result.params["a"] == "-5/96"


class TestSerreWronskian:
    def test_weight_zero_agrees_with_plain_wronskian(self):
        """Lower Serre rows only add multiples of earlier rows"""
        parts = [FracSeries.monomial(e, 1, trunc=20) for e in (Fraction(1, 3), 1, 2)]
        assert compare(serre_wronskian(parts, 0), wronskian(parts), 12).equal
