"""
Command-line front end.

    parallax parallel --norm schatten:inf A.json B.json
    parallax certificate --norm kyfan:2 A.json B.json --json
    parallax numrange T.json --point 0.5,0 --boundary 64
    parallax module-verify --theorem b --dims 2 2 --trials 200
    parallax oracle --what dual --norm induced:linf A.json

Exit status is 0 when the tested property holds, 1 when it fails and 2 on
malformed input or a violated numerical precondition. `--json` writes a
JobReport to stdout; logs always go to stderr.
"""
import argparse
import logging
import sys
import time
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path

import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.pretty import Pretty
from rich.table import Table

from parallax.config import default_oracle_config, default_tolerance, get_config, load_settings, print_config
from parallax.errors import ParallaxError, ParseError
from parallax.models import JobReport, JobRequest, MatrixPayload, OracleModel, ToleranceModel, encode, read_matrix

logger = logging.getLogger("parallax.cli")

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2

DEFAULT_NORM = "schatten:inf"
DEFAULT_TRIALS = 100

Handler = Callable[[JobRequest, list[np.ndarray], "Context"], tuple[bool, dict]]


class Context:
    """Tolerance and oracle settings resolved for one job."""

    def __init__(self, request: JobRequest):
        self.tol = request.tolerance.to_tolerance() if request.tolerance else default_tolerance()
        self.oracle = request.oracle.to_config() if request.oracle else default_oracle_config()


def _need(mats: list, count: int, what: str):
    if len(mats) != count:
        raise ParseError(f"{what} needs {count} matrix file(s), got {len(mats)}")


def _norm(request: JobRequest):
    from parallax.norms import NormHandle
    return NormHandle.parse(request.norm or DEFAULT_NORM)


# ---------- Handlers ----------

def _run_parallel(request, mats, ctx):
    from parallax.geometry import is_parallel

    _need(mats, 2, "parallel")
    verdict = is_parallel(mats[0], mats[1], _norm(request), ctx.tol)
    return verdict.parallel, {"verdict": encode(verdict)}


def _run_bjo(request, mats, ctx):
    from parallax.geometry import is_bj_orthogonal

    _need(mats, 2, "bjo")
    verdict = is_bj_orthogonal(mats[0], mats[1], _norm(request), ctx.tol)
    return verdict.orthogonal, {"verdict": encode(verdict)}


def _run_certificate(request, mats, ctx):
    import math

    from parallax import certificates as cert
    from parallax.geometry import is_parallel
    from parallax.norms import NormKind, VectorNormTag

    _need(mats, 2, "certificate")
    a, b = mats
    h = _norm(request)
    tol = ctx.tol

    if (h.kind == NormKind.SCHATTEN and math.isinf(h.p)) or h.vector == VectorNormTag.L2:
        verdict, certificate = cert.opnorm_parallel_decide(a, b, tol)
        result = {"kind": "operator-norm", "verdict": encode(verdict), "certificate": encode(certificate)}
        if certificate is not None:
            report = certificate.verify(a, b, tol)
            result["report"] = encode(report)
            result["ok"] = report.ok
        if h.kind == NormKind.INDUCED:
            result["vector_level"] = encode(cert.vector_level_sufficiency(a, b, h.vector, tol))
        return verdict.parallel, result

    if h.kind == NormKind.KYFAN or (h.kind == NormKind.SCHATTEN and h.p == 1):
        if h.kind == NormKind.KYFAN:
            certificate = cert.kyfan_certificate(a, b, h.k, tol)
        else:
            certificate = cert.trace_certificate(a, b, tol)
        result = {"kind": "dual-matrix", "certificate": encode(certificate)}
        if certificate is None:
            result["verdict"] = encode(is_parallel(a, b, h, tol))
            return False, result
        result["ok"] = certificate.report.ok
        result["tie_warning"] = certificate.tie_warning
        return True, result

    if h.kind == NormKind.SCHATTEN:
        condition = cert.schatten_condition(a, b, h.p, tol)
        return condition.holds, {"kind": "schatten-trace", "condition": encode(condition)}

    decomposition = cert.extreme_point_check(a, b, h.vector, tol)
    result = {
        "kind": "extreme-points",
        "decomposition": encode(decomposition),
        "vector_level": encode(cert.vector_level_sufficiency(a, b, h.vector, tol)),
    }
    return decomposition is not None, result


def _run_numrange(request, mats, ctx):
    from parallax.numrange import boundary, in_numerical_range, numerical_radius_witness, numrange_query

    _need(mats, 1, "numrange")
    t = mats[0]
    w, theta, xi = numerical_radius_witness(t, ctx.tol)
    result = {"numerical_radius": w, "theta": theta, "xi": encode(xi)}
    holds = True
    if request.point is not None:
        z = complex(*request.point)
        query = numrange_query(t, z, ctx.tol)
        holds = in_numerical_range(t, z, ctx.tol)
        result["membership"] = {"point": encode(z), "margin": query.margin, "theta": query.theta, "inside": holds}
    if request.boundary:
        result["boundary"] = encode(boundary(t, request.boundary))
    return holds, result


def _run_module_verify(request, mats, ctx):
    from parallax import kmodule

    theorem = request.theorem or "a"
    if theorem == "b":
        if request.dims is None:
            raise ParseError("module-verify --theorem b needs --dims d n")
        d, n = request.dims
        if d < 1 or n < 1:
            raise ParseError(f"--dims must be positive (got d={d}, n={n})")
        xi = np.zeros(d, dtype=np.complex128)
        xi[0] = 1.0
        basis = kmodule.orthonormal_basis(xi, n)
        worst = kmodule.thm_b_search(basis, request.trials or DEFAULT_TRIALS, ctx.tol, seed=ctx.oracle.seed)
        return worst < 0, {"theorem": "b", "worst_violation": worst, "d": d, "n": n}

    if theorem == "transitive":
        _need(mats, 3, "module-verify --theorem transitive")
        check = kmodule.transitivity_check(*mats, tol=ctx.tol)
        return not check.violated, {"theorem": theorem, **encode(check), "violated": check.violated}

    checks = {
        "a": kmodule.thm_a_check,
        "L": kmodule.thm_L_check,
        "idempotent": kmodule.corollary_idempotent_check,
        "inner": kmodule.inner_range_check,
    }
    _need(mats, 2, f"module-verify --theorem {theorem}")
    check = checks[theorem](mats[0], mats[1], ctx.tol)
    return check.agrees, {"theorem": theorem, **encode(check), "agrees": check.agrees}


def _run_oracle(request, mats, ctx):
    from parallax import oracle

    what = request.what or "parallel"
    if what == "parallel":
        _need(mats, 2, "oracle --what parallel")
        verdict = oracle.oracle_parallel(mats[0], mats[1], _norm(request), ctx.oracle, ctx.tol)
        return verdict.parallel, {"verdict": encode(verdict)}
    _need(mats, 1, f"oracle --what {what}")
    if what == "radius":
        return True, {"numerical_radius": oracle.oracle_numerical_radius(mats[0], ctx.oracle)}
    estimate = oracle.oracle_dual_norm(mats[0], _norm(request), ctx.oracle)
    return True, {"dual_norm": encode(estimate)}


HANDLERS: dict[str, Handler] = {
    "parallel": _run_parallel,
    "bjo": _run_bjo,
    "certificate": _run_certificate,
    "numrange": _run_numrange,
    "module-verify": _run_module_verify,
    "oracle": _run_oracle,
}


def run(request: JobRequest, timing: bool = True) -> JobReport:
    """Dispatch one job and collect its report.

    Input and precondition errors become exit status 2 with the message in
    `error`; they are never raised.
    """
    start = time.perf_counter()
    report = JobReport(command=request.command, norm=request.norm, exit_code=EXIT_ERROR)
    try:
        ctx = Context(request)
        report.tolerance = ToleranceModel.from_tolerance(ctx.tol)
        report.oracle = OracleModel.from_config(ctx.oracle)
        mats = [payload.to_array() for payload in request.inputs]
        holds, result = HANDLERS[request.command](request, mats, ctx)
        report.holds = bool(holds)
        report.result = result
        report.exit_code = EXIT_HOLDS if holds else EXIT_FAILS
    except (ParallaxError, ValidationError, np.linalg.LinAlgError) as e:
        logger.error(f"{request.command}: {type(e).__name__}: {e}")
        report.error = f"{type(e).__name__}: {e}"
    if timing:
        report.elapsed_seconds = time.perf_counter() - start
    return report


# ---------- Argument parsing ----------

def _point(text: str) -> tuple[float, float]:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im (got '{text}')")
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im (got '{text}')")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--norm", help="schatten:<p|inf>, kyfan:<k> or induced:<l1|l2|linf>")
    common.add_argument("--tol", type=float, help="absolute and relative tolerance")
    common.add_argument("--grid", type=int, help="unit-circle grid points")
    common.add_argument("--seed", type=int, help="oracle seed")
    common.add_argument("--config", type=Path, help="YAML file with tolerance/oracle settings")
    common.add_argument("--json", action="store_true", help="write the JSON report to stdout")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock time from the report")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="parallax", description="Norm-parallelism and Birkhoff-James orthogonality of matrices")
    parser.add_argument("--show-config", action="store_true", help="print configuration and exit")
    sub = parser.add_subparsers(dest="command")

    for name, help_text in (
        ("parallel", "decide A || B"),
        ("bjo", "decide X _|_B Y"),
        ("certificate", "decide A || B with a norm-specific certificate"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("files", nargs=2, type=Path)

    p = sub.add_parser("numrange", parents=[common], help="numerical range and radius of T")
    p.add_argument("files", nargs=1, type=Path)
    p.add_argument("--point", type=_point, help="membership test for re,im")
    p.add_argument("--boundary", type=int, help="emit an N-point boundary polyline")

    p = sub.add_parser("module-verify", parents=[common], help="check a Hilbert-module statement")
    p.add_argument("files", nargs="*", type=Path)
    p.add_argument("--theorem", choices=["a", "L", "idempotent", "b", "transitive", "inner"], default="a")
    p.add_argument("--dims", type=int, nargs=2, metavar=("D", "N"))
    p.add_argument("--trials", type=int)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference values")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--what", choices=["parallel", "radius", "dual"], default="parallel")
    return parser


def request_from_args(args: argparse.Namespace) -> JobRequest:
    """Resolve settings files, flag overrides and matrix files into a JobRequest."""
    settings = load_settings(args.config)
    tol, oracle = settings.tolerance, settings.oracle
    try:
        if args.tol is not None:
            tol = replace(tol, abs_tol=args.tol, rel_tol=args.tol)
        if args.grid is not None:
            tol = replace(tol, grid_points=args.grid)
        if args.seed is not None:
            oracle = replace(oracle, seed=args.seed)
    except ParallaxError as e:
        raise ParseError(f"Bad option: {e}") from e

    return JobRequest(
        command=args.command,
        norm=args.norm,
        inputs=[MatrixPayload.from_array(read_matrix(path)) for path in args.files],
        tolerance=ToleranceModel.from_tolerance(tol),
        oracle=OracleModel.from_config(oracle),
        point=getattr(args, "point", None),
        boundary=getattr(args, "boundary", None),
        theorem=getattr(args, "theorem", None),
        dims=getattr(args, "dims", None),
        trials=getattr(args, "trials", None),
        what=getattr(args, "what", None),
    )


def render(report: JobReport, console: Console):
    """Rich table view of a report."""
    status = {EXIT_HOLDS: "[green]holds[/green]", EXIT_FAILS: "[yellow]fails[/yellow]"}.get(report.exit_code, "[red]error[/red]")
    table = Table(title=f"parallax {report.command}" + (f" [{report.norm}]" if report.norm else ""))
    table.add_column("Field", style="bold")
    table.add_column("Value")
    table.add_row("status", status)
    if report.error:
        table.add_row("error", report.error)
    for key, value in report.result.items():
        table.add_row(key, Pretty(value, max_length=8, max_string=80))
    if report.elapsed_seconds is not None:
        table.add_row("elapsed", f"{report.elapsed_seconds:.3f}s")
    console.print(table)


def main(argv: list[str] | None = None) -> int:
    """Entry point for the parallax command."""
    from parallax.log import init_logging

    parser = build_parser()
    args = parser.parse_args(argv)
    init_logging("cli", level="DEBUG" if getattr(args, "verbose", False) else None)

    if args.show_config:
        print_config(get_config())
        return EXIT_HOLDS
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_ERROR

    try:
        request = request_from_args(args)
    except (ParallaxError, ValidationError) as e:
        logger.error(f"{args.command}: {type(e).__name__}: {e}")
        report = JobReport(command=args.command, norm=args.norm, exit_code=EXIT_ERROR, error=f"{type(e).__name__}: {e}")
    else:
        report = run(request, timing=not args.no_timing)

    if args.json:
        sys.stdout.write(report.model_dump_json() + "\n")
    else:
        render(report, Console())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
