# tests/test_products.py
import pytest
from fractions import Fraction

from src.errors import ExpressionSyntaxError, ParameterError
from src.products.atoms import J, Jam, Pochhammer, Product
from src.products.escapes import EscapeRegistry, SeriesProvider, register_escape
from src.products.expand import ProductExpander, pochhammer
from src.products.grammar import parse
from src.series.core import FracSeries


class TestGrammar:
    def test_parse_builds_atoms(self):
        node = parse("J(1)^2*Jam(1,5)")
        assert isinstance(node, Product)
        atoms = list(node.atoms())
        assert J(1) in atoms
        assert Jam(1, 5) in atoms

    def test_pochhammer_notation(self):
        node = parse("P(-1/2;2;inf)")
        assert node == Pochhammer(-1, Fraction(1, 2), Fraction(2), None)

    def test_syntax_error_reports_column(self):
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            parse("J(1)*(J(2)")
        assert exc_info.value.column >= 1
        assert exc_info.value.text == "J(1)*(J(2)"

    def test_invalid_parameters(self):
        with pytest.raises(ParameterError):
            parse("J(0)")
        with pytest.raises(ParameterError):
            parse("Jam(5,5)")
        with pytest.raises(ParameterError):
            parse("P(+0;1;inf)")

    def test_unknown_escape(self, expander):
        with pytest.raises(ParameterError):
            expander.expand("nosuch(1)", 5)


class TestExpansion:
    def test_euler_pentagonal(self, expander):
        s = expander.expand("J(1)", 8)
        assert dict(s.items()) == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1}
        assert s.trunc == 8

    def test_rogers_ramanujan_product(self, expander, rogers_ramanujan_coefficients):
        s = expander.expand("1/(P(+1;5;inf)*P(+4;5;inf))", 10)
        assert [s.coefficient(n) for n in range(10)] == rogers_ramanujan_coefficients

    def test_finite_pochhammer(self, expander):
        s = expander.expand("P(+1;1;3)", 10)
        assert dict(s.items()) == {0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}
        assert pochhammer(1, 1, 1, 3, 10) == s

    def test_distinct_parts_equal_odd_parts(self, expander):
        """(-q;q)_inf = 1/(q;q^2)_inf"""
        assert expander.expand("P(-1;1;inf)", 30) == expander.expand("1/P(+1;2;inf)", 30)

    def test_theta3_product(self, expander):
        assert expander.expand("theta3", 30) == expander.expand("J(2)^5/(J(1)^2*J(4)^2)", 30)

    def test_theta2_product(self, expander):
        assert expander.expand("theta2", 20) == expander.expand("2*qpow(1/4)*J(4)^2/J(2)", 20)

    def test_eta_prefactor(self, expander):
        s = expander.expand("eta", 5)
        assert s.valuation == Fraction(1, 24)
        assert s.coefficient(Fraction(25, 24)) == -1

    def test_weber_product_is_one(self, expander):
        s = expander.expand("weber(f)*weber(f1)*weber(f2)", 10)
        assert s == FracSeries.constant(1, trunc=10)

    def test_weber_eighth_powers(self, expander):
        """f^8 = f1^8 + 16 f2^8 with f2 normalized without sqrt 2"""
        lhs = expander.expand("weber(f)^8", 10)
        assert lhs == expander.expand("weber(f1)^8 + 16*weber(f2)^8", 10)

    def test_sums_and_constants(self, expander):
        s = expander.expand("J(1) - 1 + qpow(1)", 5)
        assert dict(s.items()) == {2: -1}

    def test_tshift_of_half_integral_exponents(self, expander):
        """tau -> tau + 1 maps (-q^(1/2);q)_inf to (q^(1/2);q)_inf"""
        assert expander.expand("tshift(P(-1/2;1;inf))", 12) == expander.expand("P(+1/2;1;inf)", 12)

    def test_subq(self, expander):
        assert expander.expand("subq(J(1);2)", 20) == expander.expand("J(2)", 20)

    def test_escape_matches_product(self, expander):
        """Rogers-Ramanujan as a rank one Nahm sum"""
        assert expander.expand("nahm(2; 0; 0)", 40) == expander.expand("1/(P(+1;5;inf)*P(+4;5;inf))", 40)

    def test_cache_per_instance(self):
        expander = ProductExpander()
        first = expander.expand("J(3)/J(1)", 20)
        assert expander.expand("J(3)/J(1)", 20) == first


class TestEscapeRegistry:
    def setup_method(self):
        self.registry = EscapeRegistry()

    def test_singleton_with_providers(self):
        assert EscapeRegistry() is self.registry
        for name in ("nahm", "chi0", "F", "Z", "E"):
            assert name in self.registry.list()

    def test_register_provider(self):
        register_escape("unit", lambda raw, depth: FracSeries.constant(1), "constant one")
        assert isinstance(self.registry.get("unit"), SeriesProvider)
        assert self.registry.resolve("unit", "", 5) == FracSeries.constant(1)

    def test_unknown_escape(self):
        with pytest.raises(ParameterError):
            self.registry.resolve("no-such-escape", "", 5)

    def test_broken_provider_module_raises(self):
        with pytest.raises(ImportError):
            self.registry.load_from_module("src.products.no_such_provider")
