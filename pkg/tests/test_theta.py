# tests/test_theta.py
import pytest
from fractions import Fraction

from src.errors import ParameterError
from src.series.rings import CoefRing, GaussRational
from src.theta.characters import Z, character_theta, character_theta_classes, minimal_model_char
from src.theta.partial import linear_theta, partial_theta, theta_residue_class
from src.theta.relations import check_theta_relations, dissection_battery, residue_class_battery


class TestPartialTheta:
    def test_terms(self):
        s = partial_theta(Fraction(1, 2), 1, False, 4)
        assert list(s.items()) == [
            (Fraction(1, 16), Fraction(1, 2)),
            (Fraction(9, 16), Fraction(-3, 2)),
            (Fraction(25, 16), Fraction(5, 2)),
            (Fraction(49, 16), Fraction(-7, 2)),
        ]

    def test_signed_terms(self):
        s = partial_theta(Fraction(1, 2), 1, True, 4)
        assert [c for _, c in s.items()] == [Fraction(1, 2), Fraction(3, 2), Fraction(-5, 2), Fraction(-7, 2)]

    def test_vanishing_indices(self):
        assert partial_theta(0, 2, False, 30).is_zero
        assert partial_theta(2, 2, False, 30).is_zero

    def test_positive_index_required(self):
        with pytest.raises(ParameterError):
            partial_theta(1, 0, False, 10)

    def test_residue_class(self):
        s = theta_residue_class(1, 5, 40)
        assert list(s.items()) == [(1, 1), (16, -4), (36, 6)]
        with pytest.raises(ParameterError):
            theta_residue_class(5, 5, 10)

    def test_linear_theta_shift(self):
        """class(1) = q * sum (5n+1) q^(25n^2+10n)"""
        assert theta_residue_class(1, 5, 60) == linear_theta(5, 1, 25, 10, 59).shift(1)


class TestRelationBatteries:
    @pytest.mark.parametrize("k", [Fraction(1, 2), Fraction(1), Fraction(3, 2)])
    def test_theta_relations(self, k):
        results = check_theta_relations(k, 10, prec=128)
        failed = [r for r in results if r.status != "pass"]
        assert not failed, failed[:1]

    def test_relation_rings(self):
        """Integral k and j keep the T-shift laws in the Gaussian ring"""
        results = check_theta_relations(1, 10, prec=128)
        rings = {r.ring for r in results if r.relation_id == "tshift-theta" and r.params["j"] == "1"}
        assert rings == {CoefRing.GAUSS.value}

    def test_residue_classes(self):
        results = residue_class_battery(50)
        assert all(r.status == "pass" for r in results)
        assert {r.relation_id for r in results} == {"psi-classes", "class-reflection"}

    @pytest.mark.slow
    def test_dissections(self):
        results = dissection_battery(60)
        failed = [r.relation_id for r in results if r.status != "pass"]
        assert not failed


class TestCharacters:
    def test_character_theta_is_gaussian(self):
        s = character_theta(0, 10)
        assert s.ring == CoefRing.GAUSS
        # n = 2 and n = -2 both give 2i q^4
        assert s.coefficient(4) == GaussRational(0, 4)

    def test_character_theta_classes(self):
        for kind in (0, 1):
            assert character_theta(kind, 40) == character_theta_classes(kind, 40)

    def test_character_kind(self):
        with pytest.raises(ParameterError):
            character_theta(2, 10)

    @pytest.mark.parametrize("i", [1, 2, 3, 4])
    def test_z_equals_minimal_model_character(self, i):
        r, s = {1: (1, 1), 2: (2, 1), 3: (2, 2), 4: (1, 2)}[i]
        assert Z(i, 30) == minimal_model_char(r, s, 30)

    def test_z4_prefactor(self):
        assert Z(4, 10).vanishing_order() == Fraction(-1, 40)

    def test_character_label_range(self):
        with pytest.raises(ParameterError):
            minimal_model_char(3, 1, 10)
        with pytest.raises(ParameterError):
            Z(5, 10)
