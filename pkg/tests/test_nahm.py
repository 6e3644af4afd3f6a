# tests/test_nahm.py
import pytest
from fractions import Fraction

from src.errors import NotPositiveDefiniteError, ParameterError
from src.nahm.derivations import direct_value, euler_stage, replay_derivation
from src.nahm.lattice import (
    F_SHIFTS,
    chi0,
    enumeration_margin_check,
    f_series,
    f_tilde,
    inverse_qfactorial,
    lattice_points,
    nahm_sum,
    quadratic_form,
    rogers_sum,
    xvar_coefficient_check,
)
from src.nahm.triples import (
    DUAL_VECTORS,
    NahmTriple,
    dual_triple,
    matrix_inverse,
    parse_matrix,
    tadpole,
    tadpole_inverse,
)
from src.series.core import FracSeries, compare


class TestTriples:
    def test_tadpole_matrix(self):
        assert tadpole(1) == ((1,),)
        assert tadpole(3) == ((2, -1, 0), (-1, 2, -1), (0, -1, 1))

    def test_tadpole_inverse(self):
        for r in (1, 2, 3, 5):
            assert matrix_inverse(tadpole(r)) == tadpole_inverse(r)

    def test_rank_validation(self):
        with pytest.raises(ParameterError):
            tadpole(0)

    def test_triple_validation(self):
        with pytest.raises(ParameterError):
            NahmTriple([[2, 1], [0, 2]], [0, 0])
        with pytest.raises(NotPositiveDefiniteError):
            NahmTriple([[1, 2], [2, 1]], [0, 0])
        with pytest.raises(ParameterError):
            NahmTriple([[2]], [0, 0])

    def test_parse_matrix_forms(self):
        assert parse_matrix("tadpole:3") == tadpole(3)
        assert parse_matrix("tadpole-inv:2") == tadpole_inverse(2)
        assert parse_matrix("2,-1;-1,2") == ((2, -1), (-1, 2))
        with pytest.raises(ParameterError):
            parse_matrix("1,2;3")

    def test_dual_triple(self):
        dual = dual_triple(NahmTriple([[2]], [0]))
        assert dual.A == ((Fraction(1, 2),),)
        assert dual.B == (0,)
        assert dual.C == Fraction(-1, 24)

    def test_dual_is_involution(self):
        t = NahmTriple(tadpole(3), [0, 0, Fraction(1, 2)], Fraction(1, 40))
        assert dual_triple(dual_triple(t)) == t


class TestLatticeSums:
    def test_lattice_points(self):
        assert list(lattice_points(((Fraction(2),),), [0], 5)) == [(0,), (1,), (2,)]

    def test_rogers_ramanujan(self, expander, rogers_ramanujan_coefficients):
        s = nahm_sum(NahmTriple([[2]], [0]), 10)
        assert [s.coefficient(n) for n in range(10)] == rogers_ramanujan_coefficients

    def test_distinct_parts(self, expander):
        """sum q^(n(n+1)/2)/(q;q)_n = (-q;q)_inf"""
        s = nahm_sum(NahmTriple([[1]], [Fraction(1, 2)]), 30)
        assert s == expander.expand("P(-1;1;inf)", 30)

    def test_rank_two_sum(self, expander):
        """Andrews-Gordon with A = 2*tadpole_inverse(2) is prod over n != 0, +-3 mod 7"""
        s = nahm_sum(NahmTriple([[2, 2], [2, 4]], [0, 0]), 30)
        assert s == expander.expand("1/(P(+1;7;inf)*P(+2;7;inf)*P(+5;7;inf)*P(+6;7;inf))", 30)

    def test_constant_shifts_exponents(self):
        s = nahm_sum(NahmTriple([[2]], [0], Fraction(-1, 60)), 5)
        assert s.leading_term() == (Fraction(-1, 60), 1)

    def test_single_sum(self, expander):
        """sum q^(n^2+n)/(q;q)_n = 1/((q^2;q^5)(q^3;q^5))"""
        assert rogers_sum(1, 1, 1, 0, 40) == expander.expand("1/(P(+2;5;inf)*P(+3;5;inf))", 40)

    def test_rogers_sum_validation(self):
        with pytest.raises(ParameterError):
            rogers_sum(0, 0, 1, 0, 10)


class TestTadpoleCharacters:
    def test_chi0_matches_f1(self):
        assert chi0(3, [0, 0, 0], 12) == f_series(1, 12)

    def test_chi0_leading_term(self):
        assert chi0(3, [0, 0, 0], 6).leading_term() == (0, 1)

    def test_chi0_shift_count(self):
        with pytest.raises(ParameterError):
            chi0(3, [0, 0], 5)

    def test_f_index_range(self):
        with pytest.raises(ParameterError):
            f_series(7, 5)

    def test_f_tilde_prefactor(self):
        s = f_tilde(1, 6)
        assert s.vanishing_order() == Fraction(-7, 80)
        assert s.trunc == 6

    @pytest.mark.parametrize("i,source", [(5, 0), (6, 3)])
    def test_f5_f6_equal_signed_lattice_sums(self, i, source):
        """(-1)^(2e) q^e / prod (q;q)_n summed over the lattice of F_1 and F_4"""
        depth = Fraction(16)
        A, shifts = tadpole(3), [Fraction(b) for b in F_SHIFTS[source]]
        total = FracSeries.zero(depth)
        for n in lattice_points(A, shifts, depth):
            e = quadratic_form(A, n) + sum(b * m for b, m in zip(shifts, n))
            assert (2 * e).denominator == 1
            term = FracSeries.constant(1 if (2 * e) % 2 == 0 else -1, trunc=depth - e)
            for m in n:
                term = term * inverse_qfactorial(m, depth - e)
            total = total + term.shift(e)
        assert f_series(i, depth) == total
        assert total != f_series(source + 1, depth)

    def test_escape_agrees_with_function(self, expander):
        assert expander.expand("chi0(3; 0,0,1/2)", 10) == f_series(2, 10)
        assert expander.expand("Ft(3)", 6) == f_tilde(3, 6)


class TestDerivedRelations:
    @pytest.mark.parametrize("i,j,k", [(0, 0, 0), (1, 0, 2), (2, 1, 0), (2, 2, 2)])
    def test_xvar_recursion(self, i, j, k):
        assert xvar_coefficient_check(i, j, k, 20)

    def test_xvar_rejects_negative(self):
        with pytest.raises(ParameterError):
            xvar_coefficient_check(-1, 0, 0, 10)

    def test_enumeration_margin(self):
        assert enumeration_margin_check(NahmTriple(tadpole(3), [0, 0, 0]), 20)
        assert enumeration_margin_check(NahmTriple(tadpole(2), [Fraction(1, 2), 0]), 20, factor=3)


class TestDerivationReplay:
    def test_part_range(self):
        with pytest.raises(ParameterError):
            replay_derivation(7, 10)

    def test_euler_stage_matches_lattice_sum(self):
        shifts = DUAL_VECTORS[0]
        direct = direct_value(1, 12)
        euler = euler_stage(shifts, 6).substitute_power(2)
        assert compare(direct, euler, 12).equal

    @pytest.mark.slow
    @pytest.mark.parametrize("part", [1, 2, 3, 4, 5, 6])
    def test_replay(self, part):
        report = replay_derivation(part, 16)
        failed = [s.stage for s in report.stages if not s.equal]
        assert not failed
        assert report.stages[0].stage == "euler"
