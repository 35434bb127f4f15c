"""``loopalg``: run the loop-space computations on a ``.model`` file.

Exit status is 0 on success, 1 when a requested check fails and 2 for any
input problem (bad file, parse error, cutoff too small, unsupported model).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .dsl import DSLError, load_model, parse_class, render_element, render_model
from .homology import Complex, CutoffError, LiftError, NotACocycle
from .models import ModelError, classify, formal_dimension
from .modules import Scaffold, render_susp_word
from .operations import (
    ContextError,
    LoopOpsContext,
    check_associativity,
    check_coassociativity,
    check_frobenius,
    dual_loop_coproduct,
    dual_loop_product,
    triviality_scan,
)
from .report import Check, Report, Result, coords_list, element_terms, render_report
from .shriek import ShriekError, build_shriek, verify_shriek_cocycle, verify_shriek_nonboundary

DEFAULT_CUTOFF = 20
ENV_CUTOFF = "LOOPALG_MAX_DEGREE"

INPUT_ERRORS = (DSLError, ModelError, ShriekError, ContextError, CutoffError, LiftError,
                NotACocycle, OSError)

CHECKS = {
    "associativity": check_associativity,
    "coassociativity": check_coassociativity,
    "frobenius": check_frobenius,
}


class InputError(Exception):
    pass


def default_cutoff() -> int:
    raw = os.environ.get(ENV_CUTOFF)
    if raw is None or raw == "":
        return DEFAULT_CUTOFF
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{ENV_CUTOFF}={raw!r} is not an integer") from None


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="path to a .model file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--ascii", action="store_true", help="ASCII-only output")
    common.add_argument("--cutoff", type=int, default=None,
                        help=f"degree cutoff N (default {DEFAULT_CUTOFF}, or ${ENV_CUTOFF})")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    common.add_argument("--convention", choices=Scaffold.CONVENTIONS, default="standard",
                        help="path-arc convention for the operations")

    p = argparse.ArgumentParser(prog="loopalg", description="Rational string operations on Sullivan models.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("fdim", parents=[common], help="formal dimension")
    sub.add_parser("classify", parents=[common], help="model class")
    s = sub.add_parser("cohomology", parents=[common], help="cohomology of ΛV, the path model or the loop model")
    s.add_argument("--space", choices=("base", "loop", "path"), default="base")
    s.add_argument("--max-degree", type=int, default=8)
    s = sub.add_parser("shriek", parents=[common], help="the generator Δ^! on suspension words")
    s.add_argument("--verify", action="store_true")
    s = sub.add_parser("dlp", parents=[common], help="dual loop product of a class")
    s.add_argument("--class", dest="cls", required=True)
    s = sub.add_parser("dlcop", parents=[common], help="dual loop coproduct of a class")
    s.add_argument("--class", dest="cls", required=True)
    s = sub.add_parser("check", parents=[common], help="associativity-type identities")
    s.add_argument("--assoc", action="store_true")
    s.add_argument("--coassoc", action="store_true")
    s.add_argument("--frobenius", action="store_true")
    s.add_argument("--max-degree", type=int, default=4)
    s = sub.add_parser("scan", parents=[common], help="search for nonzero values of Dlp and Dlcop")
    s.add_argument("--max-degree", type=int, default=6)
    sub.add_parser("render", parents=[common], help="print the parsed model back in normal form")
    return p


# ---------------------------------------------------------------------------
# commands


def _model_summary(m) -> dict:
    return {"name": m.name, "fdim": formal_dimension(m), "class": classify(m).value}


def _key_text(ctx: LoopOpsContext, key, ascii: bool) -> str:
    parts = []
    for n, k in key:
        rep = ctx.loop_cx.slice(n).representative(k)
        parts.append("[" + render_element(ctx.scaffold.loop, rep, ascii) + "]")
    return " (x) ".join(parts)


def _coords_text(ctx: LoopOpsContext, coords: dict, ascii: bool) -> str:
    if not coords:
        return "0"
    dot = "*" if ascii else "·"
    out = []
    for i, (k, v) in enumerate(sorted(coords.items())):
        v = Fraction(v)
        body = f"{abs(v)}{dot}{_key_text(ctx, k, ascii)}"
        out.append(("-" if v < 0 else "") + body if i == 0 else (" - " if v < 0 else " + ") + body)
    return "".join(out)


def cmd_cohomology(args, m, cutoff, report):
    if args.max_degree + 1 > cutoff:
        raise InputError(f"--max-degree {args.max_degree} needs cutoff >= {args.max_degree + 1}")
    sc = Scaffold(m)
    host = {"base": sc.base, "loop": sc.loop, "path": sc.path}[args.space]
    cx = Complex(host, cutoff)
    for n in range(args.max_degree + 1):
        s = cx.slice(n)
        report.results.append(Result(f"dim H^{n}({args.space})", n, value=str(s.dim_h)))
        for k in range(s.dim_h):
            rep = s.representative(k)
            report.results.append(Result(f"H^{n}({args.space}) basis {k}", n, element_terms(host, rep)))


def cmd_shriek(args, m, cutoff, report):
    sc = Scaffold(m)
    delta = build_shriek(sc)
    report.notes.append(f"Δ^! has degree {delta.degree}; words not listed map to 0")
    for exps, v in delta.nonzero_items():
        if v.terms:
            report.results.append(
                Result(f"Δ^!({render_susp_word(sc, exps)})", delta.susp_degree(exps), element_terms(sc.pair, v))
            )
    if args.verify:
        n1 = min(cutoff, 12)
        rc = verify_shriek_cocycle(delta, n1)
        report.checks.append(Check("shriek cocycle", n1, "PASS" if rc.ok else "FAIL",
                                   detail=f"{rc.checked} words checked",
                                   witness={"word": str(rc.witness)} if not rc.ok else None))
        n2 = min(cutoff, 10)
        rn = verify_shriek_nonboundary(delta, n2)
        report.checks.append(Check("shriek non-boundary", n2, "PASS" if rn.ok else "FAIL",
                                   detail=f"{rn.checked} suspension words in range", witness=None))


def _context(args, m, cutoff) -> LoopOpsContext:
    return LoopOpsContext(m, cutoff, convention=args.convention)


def cmd_dlp(args, m, cutoff, report):
    ctx = _context(args, m, cutoff)
    z = parse_class(args.cls, ctx.scaffold.loop, 1)
    c = dual_loop_product(ctx, _as_cocycle_class(ctx.loop_class, z))
    _class_result(ctx, report, "Dlp", c, 2)


def cmd_dlcop(args, m, cutoff, report):
    ctx = _context(args, m, cutoff)
    z = parse_class(args.cls, ctx.scaffold.loop2, 2)
    c = dual_loop_coproduct(ctx, _as_cocycle_class(ctx.loop2_class, z))
    _class_result(ctx, report, "Dlcop", c, 1)


def _as_cocycle_class(to_class, z):
    try:
        return to_class(z)
    except ValueError as exc:
        raise InputError(f"--class: {exc}") from None


def _class_result(ctx, report, name, c, slots):
    P = {1: ctx.P1, 2: ctx.P2}[slots]
    host = ctx.scaffold.loop if slots == 1 else ctx.scaffold.loop2
    rep = host.algebra.zero()
    for key, v in c.coords:
        rep = rep + P.representative(key).scale(v)
    report.results.append(Result(name, c.degree, element_terms(host, rep), coords=coords_list(c.coords)))


def _run_check(model_text: str, cutoff: int, convention: str, name: str, max_degree: int, ascii: bool):
    """Worker entry point: rebuilds the context so it can run in a subprocess."""
    from .dsl import parse_model as _pm

    m = _pm(model_text)
    ctx = LoopOpsContext(m, cutoff, convention=convention)
    return _check_summary(ctx, name, max_degree, ascii)


def _check_summary(ctx, name, max_degree, ascii):
    rep = CHECKS[name](ctx, max_degree)
    bad = rep.first_failure()
    witness = None
    if bad is not None:
        witness = {
            "input": _key_text(ctx, bad.input, ascii),
            "lhs": _coords_text(ctx, bad.lhs, ascii),
            "rhs": _coords_text(ctx, bad.rhs, ascii),
        }
    detail = f"{len(rep.comparisons)} basis inputs, {rep.nonzero()} with nonzero value"
    return Check(name, max_degree, rep.status, detail=detail, witness=witness)


def cmd_check(args, m, cutoff, report):
    names = [n for n, on in (("associativity", args.assoc), ("coassociativity", args.coassoc),
                             ("frobenius", args.frobenius)) if on] or list(CHECKS)
    need = args.max_degree + 2 * formal_dimension(m) + 1
    if need > cutoff:
        raise InputError(f"--max-degree {args.max_degree} needs cutoff >= {need}, have {cutoff}")
    if args.jobs > 1 and len(names) > 1:
        text = render_model(m)
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futs = [ex.submit(_run_check, text, cutoff, args.convention, n, args.max_degree, args.ascii)
                    for n in names]
            report.checks.extend(f.result() for f in futs)
    else:
        ctx = _context(args, m, cutoff)
        for n in names:
            report.checks.append(_check_summary(ctx, n, args.max_degree, args.ascii))


def cmd_scan(args, m, cutoff, report):
    ctx = _context(args, m, cutoff)
    res = triviality_scan(ctx, args.max_degree)
    for op in ("product", "coproduct"):
        r = res[op]
        if r.structural:
            status = "trivial"
            detail = f"structural: {r.structural}"
        elif r.trivial:
            status = "trivial"
            detail = f"no nonzero value on {r.evaluated} basis inputs"
        else:
            status = "witness"
            detail = f"nonzero after {r.evaluated} basis inputs"
        witness = None
        if r.witness is not None:
            witness = {"input": _key_text(ctx, r.witness, args.ascii),
                       "value": _coords_text(ctx, r.value, args.ascii)}
        report.checks.append(Check(op, args.max_degree, status, detail=detail, witness=witness))


def cmd_render(args, m, cutoff, report):
    report.results.append(Result("model", value=render_model(m, ascii=args.ascii).rstrip()))


def cmd_scalar(args, m, cutoff, report):
    if args.command == "fdim":
        report.results.append(Result("fdim", value=str(formal_dimension(m))))
    else:
        report.results.append(Result("class", value=classify(m).value))


COMMANDS = {
    "fdim": cmd_scalar,
    "classify": cmd_scalar,
    "cohomology": cmd_cohomology,
    "shriek": cmd_shriek,
    "dlp": cmd_dlp,
    "dlcop": cmd_dlcop,
    "check": cmd_check,
    "scan": cmd_scan,
    "render": cmd_render,
}


def run_command(argv) -> tuple[Report, int]:
    """Parse argv, run the command, and return (report, exit status)."""
    return _execute(build_parser().parse_args(argv), list(argv))


def _execute(args, argv) -> tuple[Report, int]:
    cutoff = args.cutoff if args.cutoff is not None else default_cutoff()
    if cutoff < 0:
        raise InputError("cutoff must be non-negative")
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    m = load_model(args.model)
    report = Report(command=["loopalg", *argv], model=_model_summary(m), cutoff=cutoff,
                    convention=args.convention)
    COMMANDS[args.command](args, m, cutoff, report)
    return report, (1 if report.failed else 0)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors are already printed by argparse
        return int(exc.code) if exc.code is not None else 0
    try:
        report, status = _execute(args, argv)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"loopalg: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render_report(report, args.format, ascii=args.ascii))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
