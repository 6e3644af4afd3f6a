# src/suites/builtins.py
"""Named checks usable as ``id: check <name> key=value ...`` in suite files.

Every builtin maps to one engine operation and returns a ``CheckResult``.
``expect=fail`` turns a check into a negative control that passes only
when the underlying relation fails.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional
import importlib
import threading

import structlog

from src.config.settings import Settings, settings
from src.errors import ParameterError
from src.schemas.analysis import RelationResult, TransformReport
from src.schemas.reports import CheckResult, CheckStatus
from src.schemas.series import Mismatch
from src.series.rings import Root5Elem, complex_context

logger = structlog.get_logger(__name__)

BuiltinFn = Callable[[str, Dict[str, str], int, Settings], CheckResult]

BUILTIN_MODULES = ["src.suites.builtins"]


@dataclass
class Builtin:
    name: str
    run: BuiltinFn
    description: str = ""


class BuiltinRegistry:
    """Registry for named checks"""

    _instance = None
    _lock = threading.RLock()
    _builtins: Dict[str, Builtin] = {}

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(BuiltinRegistry, cls).__new__(cls)
                cls._instance._initialize_default_builtins()
        return cls._instance

    def _initialize_default_builtins(self):
        for module_path in BUILTIN_MODULES:
            self.load_from_module(module_path)

    def register(self, builtin: Builtin):
        self._builtins[builtin.name] = builtin

    def get(self, name: str) -> Optional[Builtin]:
        return self._builtins.get(name)

    def list(self) -> List[str]:
        return sorted(self._builtins)

    def run(self, name: str, check_id: str, params: Dict[str, str], depth: int,
            config: Optional[Settings] = None) -> CheckResult:
        builtin = self.get(name)
        if builtin is None:
            raise ParameterError(f"unknown builtin check {name!r}")
        return builtin.run(check_id, params, depth, config or settings)

    def load_from_module(self, module_path: str):
        """Load checks from a module exposing register_builtins(registry)"""
        try:
            module = importlib.import_module(module_path)
        except ImportError as e:
            logger.error("builtin_module_unavailable", module=module_path, error=str(e))
            raise
        if hasattr(module, 'register_builtins'):
            module.register_builtins(self)


# -- parameter helpers --------------------------------------------------------

def _get(params: Dict[str, str], key: str, default=None) -> str:
    if key in params:
        return params[key]
    if default is None:
        raise ParameterError(f"builtin check needs parameter {key!r}")
    return default


def _int(params, key, default=None) -> int:
    return int(_get(params, key, None if default is None else str(default)))


def _frac(params, key, default=None) -> Fraction:
    return Fraction(_get(params, key, None if default is None else str(default)))


def _flag(params, key, default="false") -> bool:
    return _get(params, key, default).lower() in ("1", "true", "yes")


def _vector(text: str) -> List[Fraction]:
    return [Fraction(x) for x in text.split(",") if x]


# -- result builders ------------------------------------------------------------

def _result(check_id: str, params: Dict[str, str], ok: bool, depth, mismatch: Optional[Mismatch] = None,
            detail: Optional[str] = None) -> CheckResult:
    """Apply ``expect=fail`` and fill the mismatch a failure must carry"""
    negative = params.get("expect") == "fail"
    if negative:
        if ok:
            return CheckResult(check_id=check_id, status=CheckStatus.FAIL, depth=str(depth),
                               mismatch=Mismatch(exponent="-", lhs="holds", rhs="expected to fail"),
                               detail=detail)
        return CheckResult(check_id=check_id, status=CheckStatus.PASS, depth=str(depth),
                           detail=f"negative control failed as designed; {detail or ''}".strip("; "))
    if ok:
        return CheckResult(check_id=check_id, status=CheckStatus.PASS, depth=str(depth), detail=detail)
    return CheckResult(check_id=check_id, status=CheckStatus.FAIL, depth=str(depth),
                       mismatch=mismatch or Mismatch(exponent="-", lhs="false", rhs="true"), detail=detail)


def from_relations(check_id: str, params, results: Iterable[RelationResult], depth) -> CheckResult:
    results = list(results)
    failed = [r for r in results if r.status == "fail"]
    detail = f"{len(results) - len(failed)}/{len(results)} relations hold"
    if failed:
        first = failed[0]
        detail += f"; first failure {first.relation_id} {first.params}"
        return _result(check_id, params, False, depth, first.mismatch, detail)
    return _result(check_id, params, True, depth, detail=detail)


def from_transforms(check_id: str, params, reports: Iterable[TransformReport]) -> CheckResult:
    reports = list(reports)
    worst = max(reports, key=lambda r: r.residual)
    detail = f"max residual {worst.residual:.3e} (tolerance {worst.tolerance:.1e})"
    ok = all(r.passed for r in reports)
    mismatch = None if ok else Mismatch(exponent="-", lhs=f"{worst.residual:.3e}", rhs=f"< {worst.tolerance:.1e}")
    return _result(check_id, params, ok, worst.depth, mismatch, detail)


def _equal(check_id, params, depth, got, expected) -> CheckResult:
    ok = got == expected
    mismatch = None if ok else Mismatch(exponent="-", lhs=str(got), rhs=str(expected))
    return _result(check_id, params, ok, depth, mismatch, detail=str(got))


# -- nahm -----------------------------------------------------------------------

def xvar_check(check_id, params, depth, config):
    from src.nahm.lattice import xvar_coefficient_check

    size = _int(params, "size", 3)
    bad = [(i, j, k) for i in range(size) for j in range(size) for k in range(size)
           if not xvar_coefficient_check(i, j, k, depth)]
    mismatch = Mismatch(exponent="-", lhs=str(bad[0]), rhs="termwise identity") if bad else None
    return _result(check_id, params, not bad, depth, mismatch, detail=f"{size ** 3 - len(bad)}/{size ** 3} index triples")


def enumeration_margin(check_id, params, depth, config):
    from src.nahm.lattice import enumeration_margin_check
    from src.nahm.triples import NahmTriple, tadpole

    r = _int(params, "rank", 3)
    shifts = _vector(_get(params, "B", ",".join("0" * r)))
    ok = enumeration_margin_check(NahmTriple(tadpole(r), shifts), depth, _frac(params, "factor", 2))
    return _result(check_id, params, ok, depth)


def replay(check_id, params, depth, config):
    from src.nahm.derivations import replay_derivation

    report = replay_derivation(_int(params, "part"), depth)
    failed = [s for s in report.stages if not s.equal]
    detail = ", ".join(f"{s.stage}={'ok' if s.equal else 'FAIL'}" for s in report.stages)
    if failed:
        mismatch = failed[0].mismatch or Mismatch(exponent="-", lhs=failed[0].stage, rhs="direct value")
        return _result(check_id, params, False, depth, mismatch, detail)
    return _result(check_id, params, True, depth, detail=detail)


# -- theta ----------------------------------------------------------------------

def theta_relations(check_id, params, depth, config):
    from src.theta.relations import check_theta_relations

    return from_relations(check_id, params, check_theta_relations(_frac(params, "k"), depth), depth)


def residue_thetas(check_id, params, depth, config):
    from src.theta.relations import residue_class_battery

    return from_relations(check_id, params, residue_class_battery(depth), depth)


def dissections(check_id, params, depth, config):
    from src.theta.relations import dissection_battery

    return from_relations(check_id, params, dissection_battery(depth), depth)


def sturm_identity(check_id, params, depth, config):
    from src.theta.relations import sturm_identity_check

    return from_relations(check_id, params, [sturm_identity_check(depth)], depth)


# -- modular --------------------------------------------------------------------

def sturm(check_id, params, depth, config):
    from src.modular.checks import sturm_bound

    got = sturm_bound(_int(params, "weight"), _int(params, "level"))
    return _equal(check_id, params, depth, got, _int(params, "expect"))


def g_leading(check_id, params, depth, config):
    from src.modular.checks import g_leading_data

    g = _int(params, "g")
    expected = (_frac(params, "exponent"), [int(x) for x in _get(params, "coefficients").split(",")])
    e, coeffs = g_leading_data(depth=max(4, min(depth, 6)), count=len(expected[1]))[g]
    return _equal(check_id, params, depth, (e, list(coeffs)), expected)


def wronskian_identity(check_id, params, depth, config):
    from src.modular.checks import eisenstein_wronskian_check

    return from_relations(check_id, params, [eisenstein_wronskian_check(depth)], depth)


def wronskian_order(check_id, params, depth, config):
    from src.modular.checks import wronskian_order as order

    return _equal(check_id, params, depth, order(min(depth, 10)), _frac(params, "expect", "3/2"))


def conjecture(check_id, params, depth, config):
    from src.modular.checks import conjecture_check

    return from_relations(check_id, params, [conjecture_check(_int(params, "n"), depth)], depth)


def serre_ramanujan(check_id, params, depth, config):
    """D(E4) = (E2 E4 - E6)/3"""
    from src.modular.eisenstein import eisenstein
    from src.modular.wronskian import D
    from src.series.core import compare

    e2, e4, e6 = (eisenstein(w, depth) for w in (2, 4, 6))
    report = compare(D(e4), (e2 * e4 - e6).scale(Fraction(1, 3)), depth)
    return _result(check_id, params, report.equal, depth, report.mismatch)


# -- asymptotics ------------------------------------------------------------------

def tba(check_id, params, depth, config):
    from src.asymptotics.tba import TADPOLE3_CLOSED_FORMS, solve_tba
    from src.nahm.triples import tadpole

    prec = _int(params, "prec", config.tba_precision_bits)
    solution = solve_tba(tadpole(3), prec=prec, tol=_get(params, "tol", str(config.tba_tolerance)),
                         damping=config.tba_damping, max_sweeps=config.tba_max_sweeps)
    ctx = complex_context(prec)
    agree = ctx.mpf(_get(params, "agree", "1e-30"))
    gaps = [ctx.fabs(x - q.to_mp(ctx)) for x, q in zip(solution.values(ctx), TADPOLE3_CLOSED_FORMS)]
    worst = max(gaps)
    ok = worst < agree
    mismatch = None if ok else Mismatch(exponent="-", lhs=ctx.nstr(worst, 5), rhs=f"< {ctx.nstr(agree, 3)}")
    return _result(check_id, params, ok, depth, mismatch, detail=f"Q = {', '.join(x[:14] for x in solution.Q)}")


def tba_exact(check_id, params, depth, config):
    from src.asymptotics.tba import TADPOLE3_CLOSED_FORMS, verify_closed_form
    from src.nahm.triples import tadpole

    return _result(check_id, params, verify_closed_form(tadpole(3), TADPOLE3_CLOSED_FORMS), depth)


def tba_uniqueness(check_id, params, depth, config):
    from src.asymptotics.tba import uniqueness_sweep
    from src.nahm.triples import tadpole

    same, solutions = uniqueness_sweep(tadpole(_int(params, "rank", 3)), starts=_int(params, "starts", 100),
                                       seed=_int(params, "seed", 0), prec=_int(params, "prec", 128),
                                       tol=_get(params, "tol", "1e-25"))
    return _result(check_id, params, same, depth, detail=f"{len(solutions)} starts")


def gamma(check_id, params, depth, config):
    from src.asymptotics.tba import TADPOLE3_CLOSED_FORMS, gamma_coefficient, gamma_exact, solve_tba
    from src.nahm.triples import tadpole

    C = _frac(params, "C")
    solution = solve_tba(tadpole(3), prec=config.tba_precision_bits, tol=str(config.tba_tolerance))
    ctx = complex_context(solution.precision_bits)
    numeric = gamma_coefficient(C, solution)
    exact = gamma_exact(C, TADPOLE3_CLOSED_FORMS)
    ok = ctx.fabs(numeric - exact.to_mp(ctx)) < ctx.mpf(_get(params, "agree", "1e-10"))
    return _result(check_id, params, ok, depth, Mismatch(exponent="-", lhs=ctx.nstr(numeric, 20), rhs=str(exact)),
                   detail=f"gamma = {exact}")


def c_formula_check(check_id, params, depth, config):
    from src.asymptotics.obstruction import c_formula

    got = c_formula(_vector(_get(params, "B")))
    return _equal(check_id, params, depth, got, Root5Elem.parse(_get(params, "expect")))


def obstruction(check_id, params, depth, config):
    from src.asymptotics.obstruction import modularity_obstruction

    verdict = modularity_obstruction(_vector(_get(params, "B")))
    return _equal(check_id, params, depth, verdict.verdict, _get(params, "verdict"))


# -- transform --------------------------------------------------------------------

def _transform_args(params, depth, config):
    return {
        "prec": _int(params, "prec", config.precision_bits),
        "depth": depth,
        "tol": float(_get(params, "tol", str(config.tolerance))),
    }


def transform_s(check_id, params, depth, config):
    from src.transform.checks import check_S
    from src.transform.descriptors import get_descriptor

    d = get_descriptor(_get(params, "descriptor"))
    taus = _get(params, "tau", "0,1").split(";")
    return from_transforms(check_id, params, [check_S(d, t, **_transform_args(params, depth, config)) for t in taus])


def transform_t(check_id, params, depth, config):
    from src.transform.checks import check_T
    from src.transform.descriptors import get_descriptor

    d = get_descriptor(_get(params, "descriptor"))
    taus = _get(params, "tau", "0,1").split(";")
    return from_transforms(check_id, params, [check_T(d, t, **_transform_args(params, depth, config)) for t in taus])


def fixed_point(check_id, params, depth, config):
    from src.transform.checks import fixed_point_check
    from src.transform.descriptors import get_descriptor

    d = get_descriptor(_get(params, "descriptor"))
    return from_transforms(check_id, params, [fixed_point_check(d, **_transform_args(params, depth, config))])


def closure(check_id, params, depth, config):
    from src.transform.checks import closure_check
    from src.transform.descriptors import get_descriptor

    d = get_descriptor(_get(params, "descriptor"))
    report = closure_check(d, _get(params, "action", "S"), **_transform_args(params, depth, config))
    return from_transforms(check_id, params, [report])


def theta_s(check_id, params, depth, config):
    from src.transform.checks import check_theta_S

    report = check_theta_S(_frac(params, "j"), _frac(params, "k"), _flag(params, "signed"),
                           _get(params, "tau", "0,1"), **_transform_args(params, depth, config))
    return from_transforms(check_id, params, [report])


def rho_tilde(check_id, params, depth, config):
    from src.transform.checks import decomposition_closure

    args = _transform_args(params, depth, config)
    return from_transforms(check_id, params, decomposition_closure(args["prec"], args["tol"]))


def register_builtins(registry: BuiltinRegistry):
    for name, fn, description in (
        ("xvar", xvar_check, "x-variable recursion of the rank 3 tadpole terms"),
        ("enumeration-margin", enumeration_margin, "lattice enumeration is stable under a wider margin"),
        ("replay", replay, "constant-term derivation replay of one sum identity"),
        ("theta-relations", theta_relations, "vanishing, reflection, dissection and T laws at index k"),
        ("residue-thetas", residue_thetas, "quartic character theta series from residue classes"),
        ("dissections", dissections, "2-dissections and product forms of T_1..T_4"),
        ("sturm-identity", sturm_identity, "theta3(5 tau)-multiplied identity to the Sturm count"),
        ("sturm-bound", sturm, "Sturm bound for Gamma_1(N)"),
        ("g-leading", g_leading, "leading exponent and coefficients of one g series"),
        ("wronskian-identity", wronskian_identity, "normalized Wronskian of the F~ against eta^36 E4/E6"),
        ("wronskian-order", wronskian_order, "vanishing order of the F~ Wronskian"),
        ("conjecture", conjecture, "tadpole conjecture at rank n"),
        ("serre-ramanujan", serre_ramanujan, "D(E4) = (E2 E4 - E6)/3"),
        ("tba", tba, "rank 3 tadpole TBA solution against its closed forms"),
        ("tba-exact", tba_exact, "closed forms solve the TBA system in Q(sqrt5)"),
        ("tba-uniqueness", tba_uniqueness, "multi-start TBA sweep"),
        ("gamma", gamma, "numeric gamma against its exact Q(sqrt5) value"),
        ("c-formula", c_formula_check, "exact C(B) in Q(sqrt5)"),
        ("obstruction", obstruction, "modularity obstruction verdict"),
        ("transform-S", transform_s, "S law of a vector-valued form"),
        ("transform-T", transform_t, "T law of a vector-valued form"),
        ("fixed-point", fixed_point, "S law at tau = i"),
        ("closure", closure, "span closure under S or T"),
        ("theta-S", theta_s, "weight 3/2 S law of dTheta or dG"),
        ("rho-tilde-matrix", rho_tilde, "F~ S and T matrices from the W Z decomposition"),
    ):
        registry.register(Builtin(name, fn, description))
