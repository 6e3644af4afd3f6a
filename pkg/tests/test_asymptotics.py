# tests/test_asymptotics.py
import pytest
from fractions import Fraction

from src.asymptotics.obstruction import c_formula, modularity_obstruction, parse_vector
from src.asymptotics.tba import (
    TADPOLE3_CLOSED_FORMS,
    gamma_coefficient,
    gamma_exact,
    match_root5,
    solve_tba,
    uniqueness_sweep,
    verify_closed_form,
)
from src.errors import NotPositiveDefiniteError, ParameterError
from src.nahm.triples import tadpole
from src.series.rings import Root5Elem, complex_context

PREC = 128


class TestClosedForm:
    def test_tadpole_solution_is_exact(self):
        assert verify_closed_form(tadpole(3), TADPOLE3_CLOSED_FORMS)

    def test_perturbed_solution_fails(self):
        wrong = (TADPOLE3_CLOSED_FORMS[0], Root5Elem(-2, 1) + Fraction(1, 100), TADPOLE3_CLOSED_FORMS[2])
        assert not verify_closed_form(tadpole(3), wrong)

    def test_integral_matrix_required(self):
        with pytest.raises(ParameterError):
            verify_closed_form([[Fraction(1, 2)]], [Root5Elem(1, 0)])

    def test_gamma_exact(self):
        assert gamma_exact(0, TADPOLE3_CLOSED_FORMS) == Root5Elem(Fraction(-5, 48), Fraction(7, 48))


class TestSolver:
    def setup_method(self):
        self.solution = solve_tba(tadpole(3), prec=PREC, tol=1e-25)

    def test_matches_closed_forms(self):
        ctx = complex_context(PREC)
        for value, exact in zip(self.solution.values(ctx), TADPOLE3_CLOSED_FORMS):
            assert ctx.fabs(value - exact.to_mp(ctx)) < ctx.mpf("1e-20")

    def test_exact_forms_recovered(self):
        assert Root5Elem.parse(self.solution.exact_forms[1]) == Root5Elem(-2, 1)

    def test_gamma_coefficient(self):
        ctx = complex_context(PREC)
        numeric = gamma_coefficient(Fraction(1, 40), self.solution)
        exact = gamma_exact(Fraction(1, 40), TADPOLE3_CLOSED_FORMS)
        assert ctx.fabs(numeric - exact.to_mp(ctx)) < ctx.mpf("1e-20")

    def test_rank_one(self):
        """1 - Q = Q^2 has the golden-ratio solution"""
        solution = solve_tba([[2]], prec=PREC, tol=1e-25)
        assert Root5Elem.parse(solution.exact_forms[0]) == Root5Elem(Fraction(-1, 2), Fraction(1, 2))

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefiniteError):
            solve_tba([[1, 2], [2, 1]], prec=PREC)

    @pytest.mark.slow
    def test_uniqueness(self):
        same, solutions = uniqueness_sweep(tadpole(3), starts=10, seed=1, prec=PREC, tol=1e-25)
        assert same
        assert len(solutions) == 10


class TestRoot5Matching:
    def test_golden_ratio(self):
        phi = "1.6180339887498948482045868343656381177203091798058"
        assert match_root5(phi, PREC) == Root5Elem(Fraction(1, 2), Fraction(1, 2))


class TestObstruction:
    def test_c_formula_values(self):
        assert c_formula((1, 0, 0)) == Root5Elem(Fraction(-139, 80), Fraction(17, 20))
        assert c_formula((0, 0, 0)) == Fraction(-7, 80)
        assert c_formula((0, 0, Fraction(1, 2))) == Fraction(1, 40)

    def test_obstructed(self):
        verdict = modularity_obstruction((0, 1, 0))
        assert verdict.verdict == "obstructed"
        assert verdict.candidate_C is None

    def test_candidate(self):
        verdict = modularity_obstruction((0, 0, 0))
        assert verdict.verdict == "candidate"
        assert verdict.candidate_C == "-7/80"

    def test_vector_length(self):
        with pytest.raises(ParameterError):
            c_formula((1, 0))
        with pytest.raises(ParameterError):
            parse_vector("1,2")
