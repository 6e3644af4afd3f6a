# src/products/grammar.py
"""pyparsing grammar for product expressions.

    Expr   := ['-'] Term (('+'|'-') Term)*
    Term   := Factor (('*'|'/') Factor)*
    Factor := Primary ('^' int)?
    Primary:= Atom | tshift(Expr) | subq(Expr; rational) | name(raw)
            | '(' Expr ')' | integer | '-' Factor

Numeric literals between operators are integers so that ``J(2)/4/5``
reads left to right; rational parameters live inside atom arguments.
Nodes are built after a successful parse so syntax errors are reported
before parameter errors.
"""
import threading
from fractions import Fraction

import pyparsing as pp

from src.errors import ExpressionSyntaxError
from src.products.atoms import (
    Const,
    Escape,
    Eta,
    GenEta,
    J,
    Jam,
    Node,
    PartialTheta,
    Pochhammer,
    Power,
    Product,
    QPow,
    SubQ,
    Sum,
    Theta2,
    Theta3,
    TShift,
    Weber,
)


class _Deferred:
    """Node constructor recorded during parsing"""

    __slots__ = ("factory", "args")

    def __init__(self, factory, *args):
        self.factory = factory
        self.args = args

    def build(self) -> Node:
        return self.factory(*(_force(a) for a in self.args))


def _force(value):
    if isinstance(value, _Deferred):
        return value.build()
    if isinstance(value, tuple):
        return tuple(_force(v) for v in value)
    return value


def _sum(*terms):
    return Sum(terms)


def _product(*factors):
    return Product(factors)


def _pochhammer(sign, r, base, length):
    return Pochhammer(sign, r, base, None if length == "inf" else length)


def _defer(factory):
    def action(tokens):
        return _Deferred(factory, *tokens)
    return action


def _term_action(tokens):
    items = list(tokens)
    if len(items) == 1:
        return items[0]
    factors = [(items[0], 1)]
    for op, factor in zip(items[1::2], items[2::2]):
        factors.append((factor, 1 if op == "*" else -1))
    return _Deferred(_product, *factors)


def _expr_action(tokens):
    items = list(tokens)
    sign = 1
    if items and items[0] == "neg":
        sign = -1
        items = items[1:]
    if len(items) == 1 and sign == 1:
        return items[0]
    terms = [(sign, items[0])]
    for op, term in zip(items[1::2], items[2::2]):
        terms.append((1 if op == "+" else -1, term))
    return _Deferred(_sum, *terms)


def _power_action(tokens):
    if len(tokens) == 1:
        return tokens[0]
    return _Deferred(Power, tokens[0], tokens[1])


def _negate(tokens):
    return _Deferred(_product, (_Deferred(Const, Fraction(-1)), 1), (tokens[0], 1))


def _build_grammar() -> pp.ParserElement:
    LPAR, RPAR, COMMA, SEMI, CARET = map(pp.Suppress, "(),;^")
    integer = pp.Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
    natural = pp.Regex(r"\d+").set_parse_action(lambda t: int(t[0]))
    rational = pp.Regex(r"[+-]?\d+(?:/\d+)?").set_parse_action(lambda t: Fraction(t[0]))
    unsigned = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(lambda t: Fraction(t[0]))
    sign = pp.one_of("+ -").set_parse_action(lambda t: 1 if t[0] == "+" else -1)
    length = natural | pp.Keyword("inf")

    expr = pp.Forward()
    factor = pp.Forward()

    j_atom = (pp.Suppress(pp.Keyword("J")) + LPAR - (integer + RPAR)).set_parse_action(_defer(J))
    jam_atom = (pp.Suppress(pp.Keyword("Jam")) + LPAR
                - (integer + COMMA + integer + RPAR)).set_parse_action(_defer(Jam))
    poch_atom = (pp.Suppress(pp.Keyword("P")) + LPAR
                 - (sign + unsigned + SEMI + rational + SEMI + length + RPAR)).set_parse_action(_defer(_pochhammer))
    geta_atom = (pp.Suppress(pp.Keyword("geta")) + LPAR
                 - (integer + SEMI + integer + RPAR)).set_parse_action(_defer(GenEta))
    eta_atom = pp.Keyword("eta").set_parse_action(lambda: _Deferred(Eta))
    weber_atom = (pp.Suppress(pp.Keyword("weber")) + LPAR
                  - (pp.one_of("f1 f2 f") + RPAR)).set_parse_action(_defer(Weber))
    theta2_atom = pp.Keyword("theta2").set_parse_action(lambda: _Deferred(Theta2))
    theta3_atom = pp.Keyword("theta3").set_parse_action(lambda: _Deferred(Theta3))
    dtheta_atom = (pp.Suppress(pp.Keyword("dtheta")) + LPAR
                   - (rational + COMMA + rational + RPAR)).set_parse_action(
        lambda t: _Deferred(PartialTheta, t[0], t[1], False))
    dg_atom = (pp.Suppress(pp.Keyword("dg")) + LPAR
               - (rational + COMMA + rational + RPAR)).set_parse_action(
        lambda t: _Deferred(PartialTheta, t[0], t[1], True))
    qpow_atom = (pp.Suppress(pp.Keyword("qpow")) + LPAR - (rational + RPAR)).set_parse_action(_defer(QPow))
    tshift = (pp.Suppress(pp.Keyword("tshift")) + LPAR - (expr + RPAR)).set_parse_action(_defer(TShift))
    subq = (pp.Suppress(pp.Keyword("subq")) + LPAR
            - (expr + SEMI + unsigned + RPAR)).set_parse_action(_defer(SubQ))
    escape = (pp.Regex(r"[A-Za-z_][A-Za-z_0-9]*") + LPAR
              - (pp.Regex(r"[^()]+") + RPAR)).set_parse_action(
        lambda t: _Deferred(Escape, t[0], t[1].strip()))

    atom = (jam_atom | j_atom | poch_atom | geta_atom | eta_atom | weber_atom | theta2_atom
            | theta3_atom | dtheta_atom | dg_atom | qpow_atom | tshift | subq | escape)
    constant = natural.copy().set_parse_action(lambda t: _Deferred(Const, Fraction(int(t[0]))))
    negated = (pp.Suppress("-") + factor).set_parse_action(_negate)
    primary = atom | (LPAR - (expr + RPAR)) | constant | negated

    factor <<= (primary + pp.Opt(CARET - integer)).set_parse_action(_power_action)
    term = (factor + pp.ZeroOrMore(pp.one_of("* /") - factor)).set_parse_action(_term_action)
    lead = pp.Opt(pp.Literal("-").set_parse_action(lambda: "neg"))
    expr <<= (lead + term + pp.ZeroOrMore(pp.one_of("+ -") - term)).set_parse_action(_expr_action)
    return expr


_GRAMMAR = _build_grammar()
# pyparsing resolves parse action arities lazily on shared state
_PARSE_LOCK = threading.Lock()


def parse(text: str) -> Node:
    """Parse product-expression text into a validated tree"""
    try:
        with _PARSE_LOCK:
            result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise ExpressionSyntaxError(exc.msg, exc.lineno, exc.col, text) from None
    return _force(result[0])
