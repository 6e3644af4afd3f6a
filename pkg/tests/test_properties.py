# tests/test_properties.py
"""Seeded randomized properties of the series engine and the classical identities."""
import random
from fractions import Fraction

import pytest

from src.modular.wronskian import serre_wronskian, wronskian
from src.nahm.lattice import enumeration_margin_check, inverse_qfactorial
from src.nahm.triples import NahmTriple
from src.products.expand import ProductExpander, pochhammer
from src.series.bivariate import bivariate_pochhammer, constant_term, default_window
from src.series.core import FracSeries, compare
from src.series.rings import CoefRing, GaussRational, Root5Elem

SEEDS = [11, 23, 37, 59]


def rational(rng: random.Random, zero_ok: bool = True) -> Fraction:
    while True:
        value = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if value or zero_ok:
            return value


def coefficient(rng: random.Random, ring: CoefRing, zero_ok: bool = True):
    if ring == CoefRing.ROOT5:
        while True:
            value = Root5Elem(rational(rng), rational(rng))
            if value or zero_ok:
                return value
    if ring == CoefRing.GAUSS:
        while True:
            value = GaussRational(rational(rng), rational(rng))
            if value or zero_ok:
                return value
    return rational(rng, zero_ok)


def random_series(rng: random.Random, denoms=(1, 2, 3), terms: int = 6, span: int = 6,
                  ring: CoefRing = CoefRing.RATIONAL, valuation=0, trunc=None) -> FracSeries:
    """Random truncated series whose lowest stored exponent is ``valuation``"""
    d = rng.choice(denoms)
    valuation = Fraction(valuation)
    if trunc is None:
        trunc = valuation + span + Fraction(rng.randint(1, 3 * d), d)
    exps = {valuation + Fraction(rng.randrange(1, span * d), d) for _ in range(terms - 1)}
    terms_map = {e: coefficient(rng, ring) for e in exps}
    terms_map[valuation] = coefficient(rng, ring, zero_ok=False)
    return FracSeries.from_terms(terms_map, trunc=Fraction(trunc), ring=ring)


def agree(a: FracSeries, b: FracSeries) -> bool:
    """Equal below the shallower of the two truncations"""
    return compare(a, b, min(a.trunc, b.trunc)).equal


class TestRingAxioms:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_rational_axioms(self, seed):
        rng = random.Random(seed)
        for _ in range(100):
            a, b, c = (random_series(rng) for _ in range(3))
            assert a * b == b * a
            assert a + b == b + a
            assert agree((a + b) + c, a + (b + c))
            assert agree((a * b) * c, a * (b * c))
            assert agree(a * (b + c), a * b + a * c)
            assert (a - a).is_zero

    @pytest.mark.parametrize("ring", [CoefRing.ROOT5, CoefRing.GAUSS])
    def test_extension_rings(self, ring):
        rng = random.Random(17 if ring == CoefRing.ROOT5 else 19)
        for _ in range(60):
            a = random_series(rng, ring=ring)
            b = random_series(rng)
            c = random_series(rng, ring=ring, denoms=(1, 2))
            assert a * b == b * a
            assert agree((a * b) * c, a * (b * c))
            assert agree(a * (b + c), a * b + a * c)


class TestInversion:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_truncated_units(self, seed):
        rng = random.Random(seed)
        for _ in range(200):
            ring = rng.choice([CoefRing.RATIONAL, CoefRing.RATIONAL, CoefRing.ROOT5, CoefRing.GAUSS])
            s = random_series(rng, denoms=(1, 2, 4), ring=ring)
            inverse = s.invert()
            one = FracSeries.constant(1, trunc=s.trunc)
            assert inverse.trunc == s.trunc
            assert compare(s * inverse, one, s.trunc).equal
            assert compare(inverse * s, one, s.trunc).equal

    def test_exact_units_with_depth(self):
        rng = random.Random(7)
        for _ in range(200):
            poly = random_series(rng, denoms=(1, 2)).truncate(4)
            exact = FracSeries.from_terms(dict(poly.items()))
            depth = Fraction(rng.randint(4, 12))
            inverse = exact.invert(depth)
            assert compare(exact * inverse, FracSeries.constant(1, trunc=depth), depth).equal

    def test_shifted_units(self):
        """An inverse loses twice the valuation in depth"""
        rng = random.Random(5)
        for _ in range(100):
            v = Fraction(rng.randint(-4, 4), rng.choice([1, 2]))
            s = random_series(rng, denoms=(1, 2), valuation=v)
            inverse = s.invert()
            assert inverse.trunc == s.trunc - 2 * v
            assert inverse.valuation == -v
            assert agree(s * inverse, FracSeries.constant(1, trunc=s.trunc))


class TestExponentMaps:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_dissect_reassembles(self, m):
        rng = random.Random(100 + m)
        for _ in range(60):
            s = random_series(rng, denoms=(1,), span=12, terms=9, valuation=rng.randint(-3, 2),
                              trunc=Fraction(rng.randint(16, 40), rng.choice([1, 2, 3])))
            pieces = [s.dissect(m, r) for r in range(m)]
            total = FracSeries.zero(s.trunc)
            for r, piece in enumerate(pieces):
                assert piece.trunc == (s.trunc - r) / m
                total = total + piece.substitute_power(m).shift(r)
            assert total == s

    def test_tau_shift_twice(self):
        rng = random.Random(3)
        for _ in range(200):
            s = random_series(rng, denoms=(1, 2), trunc=Fraction(rng.randint(14, 30), rng.choice([1, 2, 3])))
            once = s.tau_shift()
            assert once.tau_shift() == s
            for e, c in s.items():
                assert once.coefficient(e) == (c if e.denominator == 1 else -c)

    def test_tau_shift_four_times_on_quarters(self):
        rng = random.Random(4)
        for _ in range(50):
            s = random_series(rng, denoms=(4,), ring=CoefRing.GAUSS)
            image = s
            for _ in range(4):
                image = image.tau_shift()
            assert image == s


class TestConstantTerm:
    def test_window_stability(self):
        rng = random.Random(29)
        depth = Fraction(12)
        for _ in range(24):
            r, s = (Fraction(rng.randint(1, 4), 2) for _ in range(2))
            sign_a, sign_b = rng.choice([1, -1]), rng.choice([1, -1])
            inverse_a = rng.random() < 0.5
            window = default_window(depth, 1)

            def product(w):
                a = bivariate_pochhammer(sign_a, 1, r, 1, depth, w, inverse=inverse_a)
                b = bivariate_pochhammer(sign_b, -1, s, 1, depth, w)
                return constant_term(a * b)

            narrow, wide = product(window), product(window + rng.randint(2, 6))
            assert compare(narrow, wide, depth).equal


class TestClassicalIdentities:
    DEPTH = 40

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("r", [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])
    def test_euler(self, sign, r):
        depth = Fraction(self.DEPTH)
        plain, quadratic = FracSeries.zero(depth), FracSeries.zero(depth)
        n = 0
        while r * n < depth:
            e = r * n
            plain = plain + inverse_qfactorial(n, depth - e).scale(sign ** n).shift(e)
            e2 = e + Fraction(n * (n - 1), 2)
            if e2 < depth:
                quadratic = quadratic + inverse_qfactorial(n, depth - e2).scale(sign ** n).shift(e2)
            n += 1
        assert compare(plain, pochhammer(sign, r, 1, None, depth).invert(), depth).equal
        assert compare(quadratic, pochhammer(-sign, r, 1, None, depth), depth).equal

    @pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(5, 2)])
    @pytest.mark.parametrize("beta", [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(3)])
    def test_q_binomial(self, alpha, beta):
        """sum (a;q)_n z^n/(q;q)_n = (az;q)_inf/(z;q)_inf for a = q^alpha, z = q^beta"""
        depth = Fraction(30)
        lhs = FracSeries.zero(depth)
        n = 0
        while beta * n < depth:
            e = beta * n
            term = pochhammer(1, alpha, 1, n, depth - e) * inverse_qfactorial(n, depth - e)
            lhs = lhs + term.shift(e)
            n += 1
        rhs = pochhammer(1, alpha + beta, 1, None, depth) * pochhammer(1, beta, 1, None, depth).invert()
        assert compare(lhs, rhs, depth).equal

    @pytest.mark.parametrize("shift", [Fraction(0), Fraction(1, 2), Fraction(-1, 3)])
    def test_jacobi_triple_product(self, shift):
        """(q^2;q^2)(-zq;q^2)(-q/z;q^2) = sum z^n q^(n^2), with z -> q^shift z"""
        depth = Fraction(25)
        window = default_window(depth, 2)
        product = (bivariate_pochhammer(-1, 1, 1, 2, depth, window)
                   * bivariate_pochhammer(-1, -1, 1, 2, depth, window)
                   * pochhammer(1, 2, 2, None, depth))
        product = product.scale_z(shift)
        for d in range(-window, window + 1):
            expected = FracSeries.from_terms({d * d + shift * d: 1}, trunc=depth + shift * d)
            assert agree(product.component(d), expected)


class TestWeberConsistency:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_product_relations(self, seed):
        rng = random.Random(seed)
        expander = ProductExpander()
        for _ in range(4):
            depth = rng.randint(10, 40)
            pairs = [
                ("weber(f)*weber(f1)", "qpow(-1/24)*P(+1;2;inf)"),
                ("weber(f)*weber(f1)*weber(f2)", "1"),
                ("subq(weber(f1);2)*weber(f2)", "1"),
                ("weber(f)^8", "weber(f1)^8 + 16*weber(f2)^8"),
            ]
            for lhs, rhs in pairs:
                assert compare(expander.expand(lhs, depth), expander.expand(rhs, depth), depth).equal, lhs


def random_triple(rng: random.Random, rank: int) -> NahmTriple:
    """Diagonally dominant, hence positive definite"""
    A = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i):
            A[i][j] = A[j][i] = Fraction(rng.choice([-1, 0, 0, 1]))
    for i in range(rank):
        A[i][i] = Fraction(1 + sum(abs(A[i][j]) for j in range(rank) if j != i) + rng.randint(0, 2))
    B = [Fraction(rng.randint(-2, 2), 2) for _ in range(rank)]
    return NahmTriple(A, B)


class TestEnumeration:
    def test_margin_stability(self):
        rng = random.Random(41)
        for _ in range(15):
            assert enumeration_margin_check(random_triple(rng, rng.randint(1, 3)), 6)

    @pytest.mark.slow
    def test_margin_stability_up_to_rank_four(self):
        rng = random.Random(43)
        for _ in range(50):
            assert enumeration_margin_check(random_triple(rng, rng.randint(1, 4)), 8)


class TestWronskianProperties:
    def setup_method(self):
        self.rng = random.Random(61)

    def components(self, count: int):
        return [random_series(self.rng, denoms=(1, 2), span=4, terms=4) for _ in range(count)]

    def test_multilinear(self):
        for _ in range(30):
            size = self.rng.randint(2, 3)
            parts = self.components(size)
            extra = self.components(1)[0]
            c = rational(self.rng, zero_ok=False)
            summed = wronskian([parts[0] + extra] + parts[1:])
            split = wronskian(parts) + wronskian([extra] + parts[1:])
            assert agree(summed, split)
            assert agree(wronskian([parts[0].scale(c)] + parts[1:]), wronskian(parts).scale(c))

    def test_antisymmetric(self):
        for _ in range(30):
            size = self.rng.randint(2, 3)
            parts = self.components(size)
            i, j = self.rng.sample(range(size), 2)
            swapped = list(parts)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            assert agree(wronskian(swapped), -wronskian(parts))
            assert wronskian([parts[0], parts[0]]).is_zero

    def test_order_is_sum_of_leading_exponents(self):
        for _ in range(100):
            size = self.rng.randint(2, 4)
            leads = self.rng.sample([Fraction(k, 4) for k in range(12)], size)
            parts = [random_series(self.rng, denoms=(1, 2, 4), span=3, terms=3, valuation=v, trunc=8)
                     for v in leads]
            assert wronskian(parts).vanishing_order() == sum(leads)

    def test_serre_wronskian_at_weight_zero(self):
        for _ in range(20):
            parts = self.components(self.rng.randint(2, 3))
            assert agree(serre_wronskian(parts, 0), wronskian(parts))
