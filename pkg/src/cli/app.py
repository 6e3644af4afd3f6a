# src/cli/app.py
import argparse
import asyncio
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from tabulate import tabulate

from src.config.settings import Settings, settings
from src.errors import ExpressionSyntaxError, NahmLabError, ParameterError
from src.monitoring.logging_config import setup_logging
from src.monitoring.metrics import metrics
from src.schemas.reports import CheckStatus, VerificationReport

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

RINGS = ("rational", "root5", "gauss", "complex")


class NahmLabCLI:
    """Command-line front end for suites and single computations"""

    def __init__(self, config: Settings, overrides: Dict, fmt: str = "text"):
        self.config = config
        self.overrides = overrides
        self.fmt = fmt

    # -- output ---------------------------------------------------------------

    def emit(self, payload, rows: Optional[List[Dict]] = None, title: Optional[str] = None):
        if self.fmt == "json":
            print(json.dumps(payload, indent=2, sort_keys=True, default=str))
            return
        if title:
            print(f"\n{title}")
        if rows is not None:
            print(tabulate(rows, headers="keys", tablefmt="grid"))
        elif isinstance(payload, dict):
            print(tabulate(sorted(payload.items()), tablefmt="plain"))
        else:
            print(payload)

    def depth(self, fallback: int) -> int:
        return int(self.overrides.get("depth") or fallback)

    def emit_series(self, series):
        if self.fmt == "json":
            self.emit(series.to_json())
        else:
            print(series.to_text())

    # -- suites ---------------------------------------------------------------

    def verify(self, suite_ids: List[str], run_all: bool) -> int:
        from src.suites.registry import SuiteRegistry
        from src.suites.runner import SuiteRunner

        registry = SuiteRegistry()
        if run_all:
            suite_ids = registry.list(include_deep=self.config.deep)
        if not suite_ids:
            print("no suites given; use --all or name suites (see `suites`)", file=sys.stderr)
            return EXIT_USAGE
        runner = SuiteRunner(self.config, registry)
        reports = [asyncio.run(runner.run(s, self.overrides)) for s in suite_ids]
        if self.fmt == "json":
            payload = [r.model_dump(mode="json") for r in reports]
            self.emit(payload[0] if len(payload) == 1 else payload)
        else:
            for report in reports:
                self._print_report(report)
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED

    def _print_report(self, report: VerificationReport):
        rows = []
        for c in report.checks:
            rows.append({
                "check": c.check_id,
                "status": c.status.value.upper(),
                "depth": c.depth or "",
                "ms": f"{c.elapsed_ms:.0f}",
                "detail": self._detail(c),
            })
        counts = report.counts()
        print(f"\nSuite {report.suite_id} (config {report.config_hash}, v{report.tool_version})")
        print(tabulate(rows, headers="keys", tablefmt="grid"))
        print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['error']} errors")

    @staticmethod
    def _detail(c) -> str:
        if c.status == CheckStatus.FAIL and c.mismatch is not None:
            m = c.mismatch
            return f"q^({m.exponent}): {m.lhs} != {m.rhs}"
        return (c.detail or "")[:80]

    def list_suites(self) -> int:
        from src.suites.registry import SuiteRegistry

        registry = SuiteRegistry()
        rows = []
        for suite_id in registry.list():
            s = registry.get(suite_id)
            rows.append({"suite": s.suite_id, "checks": len(s.checks), "depth": s.depth,
                         "ring": s.ring, "deep": "yes" if s.deep_only else "", "aliases": " ".join(s.aliases),
                         "description": s.description})
        self.emit(rows, rows=rows)
        return EXIT_OK

    # -- single computations --------------------------------------------------

    def expand(self, text: str) -> int:
        from src.products.expand import ProductExpander

        series = ProductExpander().expand(text, self.depth(self.config.default_depth))
        self.emit_series(series)
        return EXIT_OK

    def nahm(self, matrix: str, shifts: Optional[str], C: str, dual: bool) -> int:
        from src.nahm.lattice import nahm_sum
        from src.nahm.triples import NahmTriple, dual_triple, parse_matrix, parse_vector

        A = parse_matrix(matrix)
        B = parse_vector(shifts) if shifts else [0] * len(A)
        triple = NahmTriple(A, B, Fraction(C))
        if dual:
            triple = dual_triple(triple)
            if self.fmt != "json":
                print(f"dual triple: A={[[str(x) for x in row] for row in triple.A]} "
                      f"B={[str(x) for x in triple.B]} C={triple.C}")
        self.emit_series(nahm_sum(triple, self.depth(self.config.nahm_depth)))
        return EXIT_OK

    def tba(self, matrix: str, tol: Optional[str]) -> int:
        from src.asymptotics.tba import solve_tba
        from src.nahm.triples import parse_matrix

        solution = solve_tba(parse_matrix(matrix), prec=self.overrides.get("precision_bits"), tol=tol)
        rows = [{"i": i + 1, "Q": q[:40], "exact": e or "", "residual": r}
                for i, (q, e, r) in enumerate(zip(solution.Q, solution.exact_forms, solution.residuals))]
        self.emit(solution.model_dump(), rows=rows, title=f"TBA solution after {solution.sweeps} sweeps")
        return EXIT_OK

    def obstruction(self, shifts: str) -> int:
        from src.asymptotics.obstruction import modularity_obstruction, parse_vector

        verdict = modularity_obstruction(parse_vector(shifts))
        self.emit(verdict.model_dump())
        return EXIT_OK

    def transform(self, name: str, action: str, taus: List[str], tol: Optional[float] = None) -> int:
        from src.transform.checks import check_S, check_T, closure_check, fixed_point_check
        from src.transform.descriptors import get_descriptor

        d = get_descriptor(name)
        kwargs = {"prec": self.config.precision_bits, "depth": self.depth(self.config.default_depth),
                  "tol": tol or self.config.tolerance}
        if action == "S":
            reports = [check_S(d, t, **kwargs) for t in taus]
        elif action == "T":
            reports = [check_T(d, t, **kwargs) for t in taus]
        elif action == "ST":
            reports = [check(d, t, **kwargs) for t in taus for check in (check_S, check_T)]
        elif action == "closure":
            reports = [closure_check(d, "S", **kwargs), closure_check(d, "T", **kwargs)]
        else:
            reports = [fixed_point_check(d, **kwargs)]
        rows = [{"name": r.name, "kind": r.kind, "tau": r.tau, "residual": f"{r.residual:.3e}",
                 "tail": f"{r.tail_bound:.1e}", "passed": r.passed} for r in reports]
        self.emit([r.model_dump() for r in reports], rows=rows)
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED

    def wronskian(self) -> int:
        from src.modular.checks import eisenstein_wronskian_check, wronskian_order

        depth = self.depth(30)
        result = eisenstein_wronskian_check(depth)
        payload = {"order": str(wronskian_order(min(depth, 10))), "identity": result.model_dump()}
        self.emit(payload, rows=[{"order": payload["order"], "eta/Eisenstein form": result.status, "depth": depth}])
        return EXIT_OK if result.status == "pass" else EXIT_FAILED

    def conjecture(self, ranks: List[int]) -> int:
        from src.modular.checks import conjecture_check

        depth = self.depth(40)
        results = [conjecture_check(n, depth) for n in ranks]
        rows = [{"n": r.params["n"], "a": r.params["a"], "status": r.status,
                 "first mismatch": r.mismatch.exponent if r.mismatch else ""} for r in results]
        self.emit([r.model_dump() for r in results], rows=rows)
        return EXIT_OK if all(r.status == "pass" for r in results) else EXIT_FAILED

    def sturm(self, weight: int, level: int, check: bool) -> int:
        from src.modular.checks import sturm_bound
        from src.theta.relations import sturm_identity_check

        bound = sturm_bound(weight, level)
        payload = {"weight": weight, "level": level, "bound": bound}
        code = EXIT_OK
        if check:
            depth = self.config.sturm_depth if self.config.deep else self.depth(200)
            result = sturm_identity_check(depth)
            payload["identity"] = result.model_dump()
            code = EXIT_OK if result.status == "pass" else EXIT_FAILED
        self.emit(payload)
        return code

    def replay(self, parts: List[int]) -> int:
        from src.nahm.derivations import replay_derivation

        depth = self.overrides.get("depth")
        reports = [replay_derivation(p, depth) for p in parts]
        rows = [{"part": r.part, "stage": s.stage, "equal": s.equal, "window": s.window or ""}
                for r in reports for s in r.stages]
        self.emit([r.model_dump() for r in reports], rows=rows)
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nahmlab",
        description="Exact q-series verification of tadpole Nahm sum identities",
    )
    parser.add_argument("--depth", type=int, help="truncation depth (overrides suite defaults)")
    parser.add_argument("--ring", choices=RINGS, help="coefficient ring for identity checks")
    parser.add_argument("--prec", type=int, help="working precision in bits")
    parser.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    parser.add_argument("--jobs", type=int, help="concurrent checks per suite")
    parser.add_argument("--deep", action="store_true", help="enable suites at full Sturm depth")

    sub = parser.add_subparsers(dest="command", help="Command to execute")

    verify = sub.add_parser("verify", help="Run verification suites")
    verify.add_argument("suites", nargs="*", help="suite ids")
    verify.add_argument("--all", action="store_true", help="run every registered suite")

    sub.add_parser("suites", help="List registered suites")

    expand = sub.add_parser("expand", help="Expand a product expression")
    expand.add_argument("expression")

    nahm = sub.add_parser("nahm", help="Expand a Nahm sum")
    nahm.add_argument("--matrix", required=True, help="tadpole:R | tadpole-inv:R | rows like 2,-1;-1,2")
    nahm.add_argument("--B", dest="shifts", help="comma separated rationals")
    nahm.add_argument("--C", default="0")
    nahm.add_argument("--dual", action="store_true", help="expand the dual triple instead")

    tba = sub.add_parser("tba", help="Solve the TBA system")
    tba.add_argument("--matrix", default="tadpole:3")
    tba.add_argument("--tol", help="residual tolerance")

    obstruction = sub.add_parser("obstruction", help="Exact modularity obstruction for a shift vector")
    obstruction.add_argument("--B", dest="shifts", required=True, help="b1,b2,b3")

    transform = sub.add_parser("transform", help="Numeric S/T checks of a vector-valued form")
    transform.add_argument("descriptor", nargs="?", help="descriptor name; same as --suite")
    transform.add_argument("--suite", help="weber | rho1 | rho2 | rho-tilde | any registered descriptor")
    transform.add_argument("--action", choices=("S", "T", "ST", "closure", "fixed-point"), default="ST")
    transform.add_argument("--tau", action="append", help="re,im with rational parts; repeatable")
    transform.add_argument("--tol", type=float, help="residual tolerance")
    # also accepted after the subcommand; SUPPRESS keeps the global value when absent
    transform.add_argument("--prec", type=int, default=argparse.SUPPRESS, help="working precision in bits")
    transform.add_argument("--depth", type=int, default=argparse.SUPPRESS, help="truncation depth")

    sub.add_parser("wronskian", aliases=["remark44"], help="Wronskian order and eta/Eisenstein identity of the F-tilde series")

    conjecture = sub.add_parser("conjecture", help="Tadpole conjecture at the given ranks")
    conjecture.add_argument("ranks", nargs="*", type=int, default=[2, 3, 4, 5])

    sturm = sub.add_parser("sturm", help="Sturm bound for Gamma_1(N)")
    sturm.add_argument("--weight", type=int, default=2)
    sturm.add_argument("--level", type=int, default=200)
    sturm.add_argument("--check", action="store_true", help="also verify the theta3(5 tau) identity")

    replay = sub.add_parser("replay", help="Replay the constant-term derivation of sum identities")
    replay.add_argument("parts", nargs="*", type=int, default=[1, 2, 3, 4, 5, 6])
    return parser


def overrides_from(args) -> Dict:
    overrides = {
        "depth": args.depth,
        "ring": args.ring,
        "precision_bits": args.prec,
        "jobs": args.jobs,
        "deep": True if args.deep else None,
    }
    return {k: v for k, v in overrides.items() if v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    overrides = overrides_from(args)
    config = settings.model_copy(update={k: v for k, v in overrides.items() if k in Settings.model_fields})
    setup_logging(config.log_level, config.log_file)
    cli = NahmLabCLI(config, overrides, args.format)

    try:
        if args.command == "verify":
            code = cli.verify(args.suites, args.all)
        elif args.command == "suites":
            code = cli.list_suites()
        elif args.command == "expand":
            code = cli.expand(args.expression)
        elif args.command == "nahm":
            code = cli.nahm(args.matrix, args.shifts, args.C, args.dual)
        elif args.command == "tba":
            code = cli.tba(args.matrix, args.tol)
        elif args.command == "obstruction":
            code = cli.obstruction(args.shifts)
        elif args.command == "transform":
            name = args.suite or args.descriptor
            if not name:
                raise ParameterError("transform needs a descriptor (--suite NAME)")
            code = cli.transform(name, args.action, args.tau or ["0,1"], args.tol)
        elif args.command in ("wronskian", "remark44"):
            code = cli.wronskian()
        elif args.command == "conjecture":
            code = cli.conjecture(args.ranks)
        elif args.command == "sturm":
            code = cli.sturm(args.weight, args.level, args.check)
        else:
            code = cli.replay(args.parts)
    except ExpressionSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.text:
            print(f"  {e.text}\n  {' ' * (e.column - 1)}^", file=sys.stderr)
        code = EXIT_USAGE
    except NahmLabError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE

    if config.metrics_file:
        metrics.write(config.metrics_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
