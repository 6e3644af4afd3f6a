# src/products/expand.py
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Tuple, Union

import structlog

from src.errors import ParameterError
from src.monitoring.metrics import metrics
from src.products.atoms import (
    Const,
    Escape,
    FactorBag,
    Node,
    PartialTheta,
    Pochhammer,
    Power,
    Product,
    SubQ,
    Sum,
    Theta2,
    Theta3,
    TShift,
)
from src.products.escapes import EscapeRegistry
from src.products.grammar import parse
from src.series.core import FracSeries
from src.series.deepen import deepen
from src.theta.partial import partial_theta

logger = structlog.get_logger(__name__)


def theta2_series(depth) -> FracSeries:
    """sum over n in Z of q^((n+1/2)^2)"""
    depth = Fraction(depth)
    terms: Dict[Fraction, int] = {}
    n = 0
    while Fraction(2 * n + 1, 2) ** 2 < depth:
        e = Fraction(2 * n + 1, 2) ** 2
        terms[e] = 2
        n += 1
    return FracSeries.from_terms(terms, trunc=depth)


def theta3_series(depth) -> FracSeries:
    """sum over n in Z of q^(n^2)"""
    depth = Fraction(depth)
    terms = {Fraction(0): 1} if depth > 0 else {}
    for n in range(1, isqrt(max(0, int(depth))) + 2):
        if n * n < depth:
            terms[Fraction(n * n)] = 2
    return FracSeries.from_terms(terms, trunc=depth)


def pochhammer(sign: int, r, base, length, depth) -> FracSeries:
    """(sign*q^r; q^base)_length truncated at q^depth (length None for infinity)"""
    return Pochhammer(sign, Fraction(r), Fraction(base), length).bag().expand(depth)


class ProductExpander:
    """Expands expression trees; caches (node, depth) results per instance"""

    def __init__(self, escapes: EscapeRegistry = None):
        self.escapes = escapes
        self._cache: Dict[Tuple[Node, Fraction], FracSeries] = {}

    def expand(self, node: Union[Node, str], depth) -> FracSeries:
        if isinstance(node, str):
            node = parse(node)
        depth = Fraction(depth)
        result = self._expand(node, depth).truncate(depth)
        metrics.record_series(len(result))
        return result

    def _expand(self, node: Node, depth: Fraction) -> FracSeries:
        key = (node, depth)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = self._dispatch(node, depth)
        self._cache[key] = result
        return result

    def _dispatch(self, node: Node, depth: Fraction) -> FracSeries:
        bag = node.bag()
        if bag is not None:
            return bag.expand(depth)
        if isinstance(node, Theta2):
            return theta2_series(depth)
        if isinstance(node, Theta3):
            return theta3_series(depth)
        if isinstance(node, PartialTheta):
            return partial_theta(node.j, node.k, node.signed, depth)
        if isinstance(node, Escape):
            registry = self.escapes or EscapeRegistry()
            return deepen(lambda d: registry.resolve(node.name, node.raw, d), depth, what=node.name)
        if isinstance(node, Sum):
            total = None
            for sign, term in node.terms:
                s = self._expand(term, depth)
                s = s if sign > 0 else -s
                total = s if total is None else total + s
            return total
        if isinstance(node, Product):
            return self._expand_product(node, depth)
        if isinstance(node, Power):
            return self._expand_product(Product(((node.base, node.exponent),)), depth)
        if isinstance(node, TShift):
            return self._expand(node.body, depth).tau_shift()
        if isinstance(node, SubQ):
            return self._expand(node.body, depth / node.m).substitute_power(node.m)
        raise ParameterError(f"cannot expand node {node!r}")

    def _collect(self, node: Node, power: int, bag: FactorBag, others: List[Tuple[Node, int]]):
        """Split a product into one factor bag and the remaining factors"""
        own = node.bag()
        if own is not None:
            bag.absorb(own, power)
            return
        if isinstance(node, Product):
            for child, p in node.factors:
                self._collect(child, p * power, bag, others)
        elif isinstance(node, Power):
            self._collect(node.base, node.exponent * power, bag, others)
        else:
            others.append((node, power))

    def _expand_product(self, node: Node, depth: Fraction) -> FracSeries:
        bag = FactorBag()
        others: List[Tuple[Node, int]] = []
        self._collect(node, 1, bag, others)
        trivial_bag = not bag.finite and not bag.families and bag.shift == 0 and bag.scale == 1

        def build(working: Fraction) -> FracSeries:
            acc = None if trivial_bag else bag.expand(working)
            for child, p in others:
                s = self._expand(child, working)
                s = s ** p if p > 0 else s.invert() ** (-p)
                acc = s if acc is None else acc * s
            return acc

        if not others:
            return bag.expand(depth)
        return deepen(build, depth, what="product")


def expand(expr: Union[Node, str], depth) -> FracSeries:
    """Parse if needed and expand to ``depth``"""
    return ProductExpander().expand(expr, depth)
