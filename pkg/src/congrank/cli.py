"""Command-line surface.

Human-readable tables by default; ``--json`` switches to the machine format
(tool_version / params / results / elapsed_ms), ``--csv`` emits delimited
rows where a table shape exists.  Exit codes: 0 all pass, 1 a check failed,
2 usage error or infeasible request.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import __version__
from .errors import CongrankError, InfeasibleError
from .matgroup import enumerate_group
from .modring import modulus
from .prank import (
    expected_sl2_rank,
    involution_census_sl2,
    p_rank,
    sylow_restricted_rank,
    verify_kernel_lemma,
)
from .selftest import DEFAULT_GRID, CheckResult, load_grid, run_selftest, serialize_matrix
from .symbolalg import AlgebraPresentation, pairing_matches_standard_form, value_group_index
from .symplectic import SymplecticSpace, enumerate_lagrangians, lagrangian_count_oracle
from .verdict import VerdictParams, threshold, verdict


def _emit(args, params: dict, results: list[CheckResult], started: float, lines: list[str]) -> int:
    """Shared output path: JSON schema, CSV rows, or the prepared text lines."""
    elapsed_ms = int((time.monotonic() - started) * 1000)
    if getattr(args, "json", False):
        payload = {
            "tool_version": __version__,
            "params": params,
            "results": [r.to_dict() for r in results],
            "elapsed_ms": elapsed_ms,
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)
    if any(r.status == "skipped" for r in results):
        return 2
    return 1 if any(r.status == "fail" for r in results) else 0


def _cmd_prank(args) -> int:
    started = time.monotonic()
    descriptor = args.group.upper()
    if args.sylow:
        rank = sylow_restricted_rank(descriptor, args.n, args.p, args.e)
        witness = None
    else:
        table = enumerate_group(descriptor, args.n, modulus(args.p, args.e))
        rank, rank_witness = p_rank(table)
        witness = serialize_matrix(rank_witness.basis[0]) if rank_witness.basis else None
    params = {"group": descriptor, "n": args.n, "p": args.p, "e": args.e, "sylow": args.sylow}
    expected = expected_sl2_rank(args.p, args.e) if (descriptor, args.n) == ("SL", 2) else None
    status = "pass" if expected is None or rank == expected else "fail"
    result = CheckResult(
        check_id=f"prank/{descriptor.lower()}{args.n},p={args.p},e={args.e}",
        status=status,
        value={"computed": rank, "expected": expected},
        anchor="exhaustive elementary abelian subgroup search",
        witness=witness,
    )
    if args.csv:
        lines = ["p,e,n,computed_rank,bound,match"]
        lines.append(
            f"{args.p},{args.e},{args.n},{rank},{'' if expected is None else expected},"
            f"{'' if expected is None else str(rank == expected).lower()}"
        )
    else:
        lines = [f"{descriptor}_{args.n}(Z/{args.p}^{args.e}): p-rank = {rank}"]
        if expected is not None:
            lines.append(f"expected value: {expected} ({status})")
    return _emit(args, params, [result], started, lines)


def _cmd_lemma(args) -> int:
    started = time.monotonic()
    params = {"n": args.n, "p": args.p, "e": args.e, "probe_h1": args.probe_h1}
    results = []
    lines = []
    for descriptor in ("SL", "GL"):
        rep = verify_kernel_lemma(
            descriptor, args.n, args.p, args.e, probe_h1=args.probe_h1
        )
        if args.probe_h1:
            status = "expected-fail" if rep.violations else "fail"
        else:
            status = "pass" if rep.passed else "fail"
        results.append(
            CheckResult(
                check_id=f"lemma/{descriptor.lower()}{args.n},p={args.p},e={args.e}"
                + ("/probe" if args.probe_h1 else ""),
                status=status,
                value={"checked": rep.checked_count, "violations": len(rep.violations)},
                anchor="order-p elements of the source kernel lie at level e-1",
                witness=serialize_matrix(rep.violations[0]) if rep.violations else None,
            )
        )
        verdict_text = (
            "expected violation found" if args.probe_h1 and rep.violations else status
        )
        lines.append(
            f"{descriptor}_{args.n}(Z/{args.p}^{args.e}) source H_{rep.source_level}: "
            f"checked {rep.checked_count} order-{args.p} elements, "
            f"{len(rep.violations)} outside H_{rep.target_level} [{verdict_text}]"
        )
        if rep.violations:
            lines.append(f"  first violation: {rep.violations[0]}")
    return _emit(args, params, results, started, lines)


def _cmd_involutions(args) -> int:
    started = time.monotonic()
    census = involution_census_sl2(args.e)
    expected_count = 16 if args.e >= 3 else 8
    ok = (
        census.count == expected_count
        and census.matches_reference
        and census.form_ok
        and census.is_elementary_abelian
    )
    result = CheckResult(
        check_id=f"involutions/e={args.e}",
        status="pass" if ok else "fail",
        value={
            "count": census.count,
            "rank": census.rank,
            "matches_reference": census.matches_reference,
            "form_ok": census.form_ok,
        },
        anchor="square roots of the identity in SL_2(Z/2^e)",
    )
    lines = [
        f"SL_2(Z/2^{args.e}): {census.count} solutions of M^2 = I, rank {census.rank}",
        f"equals {census.reference}: {census.matches_reference}; "
        f"scalar-plus-halfstep form: {census.form_ok}",
    ]
    return _emit(args, {"e": args.e}, [result], started, lines)


def _cmd_lagrangians(args) -> int:
    started = time.monotonic()
    space = SymplecticSpace(args.p, args.r)
    lags = enumerate_lagrangians(space)
    oracle = lagrangian_count_oracle(args.p, args.r)
    ok = len(lags) == oracle and all(sub.dim == args.r for sub in lags)
    result = CheckResult(
        check_id=f"lagrangians/p={args.p},r={args.r}",
        status="pass" if ok else "fail",
        value={"enumerated": len(lags), "oracle": oracle},
        anchor="maximal totally isotropic subspaces of the standard form",
    )
    if args.csv:
        lines = ["p,r,enumerated,oracle,match"]
        lines.append(f"{args.p},{args.r},{len(lags)},{oracle},{str(ok).lower()}")
    else:
        lines = [
            f"symplectic space dim {2 * args.r} over F_{args.p}: "
            f"{len(lags)} Lagrangians (oracle {oracle})"
        ]
        if not args.count_only:
            for sub in lags:
                lines.append("  " + " | ".join(str(list(row)) for row in sub.basis))
    return _emit(args, {"p": args.p, "r": args.r}, [result], started, lines)


def _cmd_pairing(args) -> int:
    started = time.monotonic()
    ok = pairing_matches_standard_form(AlgebraPresentation(args.p, args.r))
    result = CheckResult(
        check_id=f"pairing/p={args.p},r={args.r}",
        status="pass" if ok else "fail",
        value={"matches": ok},
        anchor="monomial commutators realize the standard symplectic form",
    )
    lines = [
        f"commutator pairing for p={args.p}, r={args.r} matches the split form: {ok}"
    ]
    return _emit(args, {"p": args.p, "r": args.r}, [result], started, lines)


def _cmd_index(args) -> int:
    started = time.monotonic()
    index = value_group_index(AlgebraPresentation(args.p, args.r))
    expected = args.p ** (2 * args.r)
    result = CheckResult(
        check_id=f"index/p={args.p},r={args.r}",
        status="pass" if index == expected else "fail",
        value={"computed": index, "expected": expected},
        anchor="value-group index equals the algebra dimension",
    )
    lines = [f"[value group : center values] = {index} (dimension {expected})"]
    return _emit(args, {"p": args.p, "r": args.r}, [result], started, lines)


def _cmd_threshold(args) -> int:
    started = time.monotonic()
    t = threshold(args.p, args.g)
    result = CheckResult(
        check_id=f"threshold/p={args.p},g={args.g}",
        status="pass",
        value={"threshold": t},
        anchor="least symbol count forcing a rank contradiction",
    )
    if args.csv:
        lines = ["p,g,threshold", f"{args.p},{args.g},{t}"]
    else:
        lines = [f"threshold(p={args.p}, g={args.g}) = {t}"]
    return _emit(args, {"p": args.p, "g": args.g}, [result], started, lines)


def _cmd_verdict(args) -> int:
    started = time.monotonic()
    report = verdict(VerdictParams(p=args.p, g=args.g, r=args.r, e=args.e))
    result = CheckResult(
        check_id=f"verdict/p={args.p},g={args.g},r={args.r}",
        status="pass",
        value=report.to_dict(),
        anchor="rank comparison across the inequality chain",
    )
    lines = [
        f"p={args.p} g={args.g} r={args.r}: lower bound {report.lower_bound}, "
        f"upper bound {report.upper_bound}, threshold {report.threshold}",
        f"contradiction: {report.contradiction}",
    ]
    for step in report.chain:
        lines.append(f"  [{step.step_id}] {step.statement}")
    return _emit(args, report.to_dict()["params"], [result], started, lines)


def _cmd_selftest(args) -> int:
    grid = load_grid(args.grid) if args.grid else None
    report = run_selftest(grid)
    if args.json:
        print(report.to_json())
    else:
        for res in report.results:
            value = res.value if isinstance(res.value, str) else json.dumps(res.value)
            print(f"[{res.status:>13}] {res.check_id}: {value}")
        print(
            f"{len(report.results)} checks, {len(report.failed)} failed, "
            f"{len(report.skipped)} skipped, {report.elapsed_ms} ms"
        )
    return report.exit_code


def _cmd_report(args) -> int:
    from .report import write_all_reports

    files = write_all_reports(args.outdir, quick=args.quick)
    for path in files:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="congrank",
        description="p-ranks of congruence matrix groups, symplectic Lagrangians, "
        "twisted monomial algebra checks, and the rank-inequality verdict",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(sp, csv=False):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if csv:
            sp.add_argument("--csv", action="store_true", help="delimited table output")

    sp = sub.add_parser("prank", help="exact p-rank of SL_n/GL_n over Z/p^e")
    sp.add_argument("--group", choices=["sl", "gl"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--sylow", action="store_true", help="restrict to the unitriangular Sylow subgroup (e=1)")
    add_output_flags(sp, csv=True)
    sp.set_defaults(func=_cmd_prank)

    sp = sub.add_parser("lemma", help="order-p kernel membership sweep (SL and GL)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--probe-h1", action="store_true", dest="probe_h1",
                    help="run the deliberately false level-1 variant (p=2)")
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_lemma)

    sp = sub.add_parser("involutions", help="census of M^2 = I in SL_2(Z/2^e)")
    sp.add_argument("--e", type=int, required=True)
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_involutions)

    sp = sub.add_parser("lagrangians", help="enumerate Lagrangian subspaces over F_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--count-only", action="store_true", dest="count_only")
    add_output_flags(sp, csv=True)
    sp.set_defaults(func=_cmd_lagrangians)

    sp = sub.add_parser("pairing", help="check the commutator pairing is the standard form")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_pairing)

    sp = sub.add_parser("index", help="value-group index of the twisted algebra")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_index)

    sp = sub.add_parser("threshold", help="least symbol count forcing a contradiction")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    add_output_flags(sp, csv=True)
    sp.set_defaults(func=_cmd_threshold)

    sp = sub.add_parser("verdict", help="full inequality chain for (p, g, r)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--e", type=int, default=None)
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_verdict)

    sp = sub.add_parser("selftest", help="run the full verification grid")
    sp.add_argument("--grid", type=str, default=None, help="JSON grid config file")
    add_output_flags(sp)
    sp.set_defaults(func=_cmd_selftest)

    sp = sub.add_parser("report", help="write CSV tables and figures to a directory")
    sp.add_argument("--outdir", type=str, required=True)
    sp.add_argument("--quick", action="store_true", help="trim the rank grid to small groups")
    sp.set_defaults(func=_cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except CongrankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
