# tests/test_transform.py
import math
import pytest
from fractions import Fraction

from src.errors import EvaluationError, ParameterError
from src.series.core import FracSeries
from src.series.rings import complex_context
from src.transform.checks import (
    TAIL_NOTE,
    check_S,
    check_T,
    check_theta_S,
    closure_check,
    decomposition_closure,
    fixed_point_check,
    sample_points,
)
from src.transform.descriptors import get_descriptor
from src.transform.evaluate import evaluate, growth_envelope, parse_tau

PREC = 128
TOL = 1e-20


class TestEvaluate:
    def test_exact_constant(self):
        ev = evaluate(FracSeries.constant(1), "0,1", PREC)
        assert ev.value == 1
        assert ev.tail_bound == 0

    def test_eta_at_i(self, expander):
        """eta(i) = Gamma(1/4) / (2 pi^(3/4))"""
        ev = evaluate(expander.expand("eta", 40), "0,1", PREC)
        assert abs(float(ev.value.real) - 0.7682254223260566) < 1e-12
        assert abs(float(ev.value.imag)) < 1e-15

    def test_lower_half_plane(self):
        with pytest.raises(EvaluationError):
            evaluate(FracSeries.constant(1), "1,0", PREC)

    def test_tail_tolerance(self):
        with pytest.raises(EvaluationError):
            evaluate(FracSeries.constant(1, trunc=1), "0,1/100", PREC, tolerance=1e-10)

    def test_envelope_dominates_stored_terms(self, expander):
        partitions = expander.expand("1/J(1)", 40)
        ctx = complex_context(PREC)
        moduli = [(e, ctx.mpf(int(c))) for e, c in partitions.items()]
        amplitude, kappa = growth_envelope(ctx, moduli)
        assert kappa > 1
        for e, m in moduli:
            assert m <= amplitude * ctx.exp(kappa * ctx.sqrt(e.numerator / e.denominator)) * (1 + 1e-30)

    def test_tail_tracks_growing_coefficients(self, expander):
        """Partition numbers outgrow the largest stored coefficient"""
        shallow = expander.expand("1/J(1)", 20)
        ev = evaluate(shallow, "0,1/4", PREC)
        true_tail = abs(evaluate(expander.expand("1/J(1)", 80), "0,1/4", PREC).value - ev.value)
        largest = max(int(c) for _, c in shallow.items())
        modulus = math.exp(-math.pi / 2)
        assert true_tail > largest * modulus ** 20 / (1 - modulus)
        assert ev.tail_bound > true_tail / 2

    def test_reports_label_tail_as_estimate(self):
        report = check_T(get_descriptor("rho1"), "0,1", prec=PREC, depth=40, tol=TOL)
        assert TAIL_NOTE in report.notes

    def test_parse_tau(self):
        tau = parse_tau("1/3,1", PREC)
        assert abs(float(tau.real) - 1 / 3) < 1e-15
        assert float(tau.imag) == 1.0
        with pytest.raises(EvaluationError):
            parse_tau("bad", PREC)


class TestTransformLaws:
    @pytest.mark.parametrize("tau", ["0,1", "1/3,1", "-1/4,3/2"])
    def test_weber_s(self, tau):
        report = check_S(get_descriptor("weber"), tau, prec=PREC, depth=60, tol=TOL)
        assert report.passed, report.residual

    def test_weber_t(self):
        report = check_T(get_descriptor("weber"), "1/5,1", prec=PREC, depth=60, tol=TOL)
        assert report.passed
        assert report.kind == "T"

    def test_eta_s_has_weight_half(self):
        assert check_S(get_descriptor("eta"), "1/3,1", prec=PREC, depth=60, tol=TOL).passed

    def test_rho1_fixed_point(self):
        report = fixed_point_check(get_descriptor("rho1"), prec=PREC, depth=60, tol=TOL)
        assert report.kind == "fixed-point"
        assert report.passed

    def test_rho2_uncorrected_fails(self):
        corrected = check_S(get_descriptor("rho2"), "1/3,1", prec=PREC, depth=80, tol=TOL)
        uncorrected = check_S(get_descriptor("rho2-uncorrected"), "1/3,1", prec=PREC, depth=80, tol=TOL)
        assert corrected.passed
        assert not uncorrected.passed

    def test_unknown_descriptor(self):
        with pytest.raises(ParameterError):
            get_descriptor("nope")


class TestClosure:
    def test_sample_points_in_fundamental_strip(self):
        for tau in sample_points(6, PREC):
            assert abs(float(tau.real)) <= 0.5
            assert 1 <= float(tau.imag) <= 1.5

    def test_rho1_closes(self):
        assert closure_check(get_descriptor("rho1"), "S", prec=PREC, depth=60, tol=TOL).passed

    def test_single_character_does_not_close(self):
        report = closure_check(get_descriptor("w1-alone"), "S", prec=PREC, depth=60, tol=TOL)
        assert not report.passed

    def test_action_validation(self):
        with pytest.raises(ParameterError):
            closure_check(get_descriptor("rho1"), "U", prec=PREC, depth=20, tol=TOL)


class TestThetaLaws:
    @pytest.mark.parametrize("j,signed,tau", [(1, False, "1/3,1"), (1, True, "1/3,1"), (Fraction(1, 2), True, "0,1")])
    def test_weight_three_halves(self, j, signed, tau):
        report = check_theta_S(j, Fraction(5, 2), signed, tau, prec=PREC, depth=120, tol=TOL)
        assert report.passed, report.residual

    def test_index_validation(self):
        with pytest.raises(ParameterError):
            check_theta_S(Fraction(1, 3), 1, False, "0,1", prec=PREC, depth=20, tol=TOL)

    @pytest.mark.slow
    def test_decomposition_matrices_close(self):
        reports = decomposition_closure(PREC, TOL)
        assert [r.name for r in reports] == ["rho-tilde-S", "rho-tilde-T"]
        assert all(r.passed for r in reports)
