# src/suites/loader.py
"""Reader for ``.suite`` files.

    @suite rogers
    @description Rogers-Ramanujan type single sums
    @depth 150
    @ring rational
    @deep
    @alias rr
    # comment
    rr1: rsum(1,0,1,0) == 1/(P(+1;5;inf)*P(+4;5;inf)) @ 100
    sturm: check sturm-bound weight=2 level=200 expect=2401
"""
from pathlib import Path
from typing import Dict, List

import pyparsing as pp

from src.errors import ExpressionSyntaxError, ParameterError
from src.schemas.reports import CheckKind, CheckSpec, SuiteDefinition

_ID = pp.Word(pp.alphanums + "-_.")
_DIRECTIVE = pp.Suppress("@") + pp.Word(pp.alphas + "-")("name") + pp.Optional(pp.restOfLine)("value")

_PARAM = pp.Group(pp.Word(pp.alphanums + "_-")("key") + pp.Suppress("=") + pp.Word(pp.printables)("value"))
_BUILTIN = (
    _ID("check_id") + pp.Suppress(":") + pp.Keyword("check").suppress()
    + pp.Word(pp.alphanums + "-_")("builtin") + pp.ZeroOrMore(_PARAM) + pp.StringEnd()
)

_DEPTH_SUFFIX = pp.Suppress("@") + pp.Word(pp.nums)("depth") + pp.StringEnd()
_IDENTITY = (
    _ID("check_id") + pp.Suppress(":")
    + pp.SkipTo("==")("lhs") + pp.Suppress("==")
    + pp.SkipTo(_DEPTH_SUFFIX | pp.StringEnd())("rhs")
    + pp.Optional(_DEPTH_SUFFIX)
)

KNOWN_DIRECTIVES = ("suite", "description", "depth", "ring", "deep", "alias")


def _directive(line: str, lineno: int, header: Dict[str, str]):
    try:
        parsed = _DIRECTIVE.parseString(line, parseAll=True)
    except pp.ParseException as exc:
        raise ExpressionSyntaxError(exc.msg, lineno, exc.col, line) from None
    name = parsed["name"]
    if name not in KNOWN_DIRECTIVES:
        raise ParameterError(f"line {lineno}: unknown directive @{name}")
    value = (parsed.get("value") or "").strip()
    if name == "alias" and name in header:
        value = f"{header[name]} {value}"
    header[name] = value


def _check(line: str, lineno: int) -> CheckSpec:
    try:
        parsed = _BUILTIN.parseString(line)
        params = {p["key"]: p["value"] for p in parsed if isinstance(p, pp.ParseResults)}
        return CheckSpec(check_id=parsed["check_id"], kind=CheckKind.BUILTIN, builtin=parsed["builtin"],
                         params=params, line=lineno)
    except pp.ParseException:
        pass
    try:
        parsed = _IDENTITY.parseString(line, parseAll=True)
    except pp.ParseException as exc:
        raise ExpressionSyntaxError(f"not a check line: {exc.msg}", lineno, exc.col, line) from None
    depth = parsed.get("depth")
    return CheckSpec(
        check_id=parsed["check_id"],
        kind=CheckKind.IDENTITY,
        lhs=parsed["lhs"].strip(),
        rhs=parsed["rhs"].strip(),
        depth=int(depth) if depth else None,
        line=lineno,
    )


def parse_suite(text: str, source: str = "<suite>") -> SuiteDefinition:
    header: Dict[str, str] = {}
    checks: List[CheckSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            _directive(line, lineno, header)
        else:
            checks.append(_check(line, lineno))
    if not header.get("suite"):
        raise ParameterError(f"{source}: missing @suite directive")
    fields = {
        "suite_id": header["suite"],
        "description": header.get("description", ""),
        "deep_only": "deep" in header,
        "aliases": header.get("alias", "").split(),
        "checks": checks,
    }
    if header.get("depth"):
        fields["depth"] = int(header["depth"])
    if header.get("ring"):
        fields["ring"] = header["ring"]
    return SuiteDefinition(**fields)


def load_suite(path: Path) -> SuiteDefinition:
    path = Path(path)
    return parse_suite(path.read_text(encoding="utf-8"), source=str(path))
