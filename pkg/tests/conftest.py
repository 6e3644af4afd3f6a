# tests/conftest.py
import pytest
from fractions import Fraction
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.config.settings import settings
from src.products.expand import ProductExpander
from src.series.core import FracSeries


@pytest.fixture
def expander():
    return ProductExpander()


@pytest.fixture
def one_minus_q():
    """Exact polynomial 1 - q"""
    return FracSeries.from_terms({0: 1, 1: -1})


@pytest.fixture
def half_integral_series():
    """q^(1/2) - q^(3/2) known below q^10"""
    return FracSeries.from_terms({Fraction(1, 2): 1, Fraction(3, 2): -1}, trunc=10)


@pytest.fixture
def fast_config():
    """Settings with small precision and two workers"""
    return settings.model_copy(update={
        "jobs": 2,
        "precision_bits": 128,
        "tba_precision_bits": 128,
        "tba_tolerance": 1e-25,
    })


@pytest.fixture
def rogers_ramanujan_coefficients():
    """Partitions into parts congruent to 1 or 4 mod 5, n = 0..9"""
    return [1, 1, 1, 1, 2, 2, 3, 3, 4, 5]


@pytest.fixture
def sample_suite_text():
    return """@suite sample
@description small suite for parser tests
@depth 12
# a comment line

euler-pentagonal: J(1) == 1 - qpow(1) - qpow(2) + qpow(5) + qpow(7) + qpow(12) @ 13
rogers: nahm(2; 0; 0) == 1/(P(+1;5;inf)*P(+4;5;inf))
bound: check sturm-bound weight=2 level=200 expect=2401
"""
