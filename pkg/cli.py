"""
socksort command line

    python3 cli.py sort --sigma aba --input abcab
    python3 cli.py verify --max-len 8

Exit codes: 0 success, 1 a checked claim failed, 2 bad invocation.
Command output goes to stdout; logs go to stderr.
"""

import argparse
import json
import sys
import time
from typing import Any, List, Optional

from loguru import logger

from config import configure_logging, get_cap
from enumeration import count_table, depth_profile, extremal_patterns, find_periodic
from errors import PreconditionError, SockSortError, VerificationError
from reports import (
    AsymptoticModel,
    CountTableModel,
    CycleReportModel,
    DepthProfileModel,
    RunReport,
    SortTraceModel,
    VerifyRow,
    count_table_csv,
    depth_profile_csv,
    verify_table,
)
from sequences import distinct_count, parse_multiset, parse_pattern, parse_sequence, render
from series import EXPANSIONS, coefficient_polynomials, estimate_K, render_q_polynomial
from sorter import (
    certify_prop52,
    prop52_witness,
    sort_depth,
    sort_pass,
    sort_pass_consecutive_trace,
    tightness_witness,
)


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _emit(text: str) -> None:
    print(text)


def cmd_sort(args) -> Any:
    sigma = parse_pattern(args.sigma)
    p = parse_sequence(args.input)
    if args.consecutive:
        trace = sort_pass_consecutive_trace(sigma, p)
    else:
        _, trace = sort_pass(sigma, p)
    _emit(render(trace.output))
    model = SortTraceModel.from_trace(trace, sigma)
    if args.trace:
        _emit(model.model_dump_json())
    return model.model_dump()


def cmd_depth(args) -> Any:
    sigma = parse_pattern(args.sigma)
    p = parse_sequence(args.input)
    cap = args.cap if args.cap is not None else get_cap("max_iterations")
    depth = sort_depth(sigma, p, cap)
    _emit("NOT-SORTED" if depth is None else str(depth))
    return {"depth": depth, "cap": cap}


def cmd_count(args) -> Any:
    if args.max_len < 1:
        raise PreconditionError("--max-len must be at least 1")
    table = count_table(args.max_len, args.k, args.threads)
    model = CountTableModel.from_table(table, args.refined)
    if args.format == "json":
        _emit(model.model_dump_json())
    else:
        sys.stdout.write(count_table_csv(model))
    return model.model_dump()


def cmd_gf(args) -> Any:
    if args.terms is None:
        args.terms = get_cap("bi_terms" if args.bivariate else "uni_terms")
    if args.terms < 1:
        raise PreconditionError("--terms must be at least 1")
    P = EXPANSIONS[(args.bivariate, args.method)](args.terms)
    if args.bivariate:
        rows = coefficient_polynomials(P)
        payload = [{"n": n, "coefficients": rows[n]} for n in range(1, args.terms + 1)]
        lines = [f'{n},"{render_q_polynomial(rows[n])}"' for n in range(1, args.terms + 1)]
    else:
        counts = P.integers()
        payload = [{"n": n, "count": counts[n]} for n in range(1, args.terms + 1)]
        lines = [f"{n},{counts[n]}" for n in range(1, args.terms + 1)]
    _emit(json.dumps(payload) if args.format == "json" else "\n".join(lines))
    return payload


def _verify_rows(max_len: int, refined: bool, threads: Optional[int]) -> List[VerifyRow]:
    table = count_table(max_len, 1, threads)
    closed = EXPANSIONS[(refined, "closed")](max_len)
    functional = EXPANSIONS[(refined, "functional")](max_len)
    if not refined:
        closed_counts, functional_counts = closed.integers(), functional.integers()
        return [
            VerifyRow(n=n, brute=table.marginal(n), closed=closed_counts[n], functional=functional_counts[n])
            for n in range(1, max_len + 1)
        ]
    closed_rows, functional_rows = coefficient_polynomials(closed), coefficient_polynomials(functional)

    def at(row: List[int], r: int) -> int:
        return row[r] if r < len(row) else 0

    rows = []
    for n in range(1, max_len + 1):
        for r in range(1, n + 1):
            rows.append(
                VerifyRow(
                    n=n,
                    r=r,
                    brute=table.entries.get((n, r), 0),
                    closed=at(closed_rows[n], r),
                    functional=at(functional_rows[n], r),
                )
            )
    return rows


def cmd_verify(args) -> Any:
    if args.max_len is None:
        args.max_len = get_cap("ci_max_len")
    cap = get_cap("max_len_refined" if args.refined else "max_len")
    if not 1 <= args.max_len <= cap:
        raise PreconditionError(f"--max-len must lie in 1..{cap}, got {args.max_len}")
    logger.info(f"🚀 Verifying counts through n={args.max_len} (refined={args.refined})")
    rows = _verify_rows(args.max_len, args.refined, args.threads)
    _emit(verify_table(rows))
    payload = [row.model_dump() for row in rows]
    for row in rows:
        if not row.matches:
            where = (row.n, row.r) if row.r is not None else (row.n,)
            raise VerificationError(f"counts differ at {where}", first_mismatch=where)
    logger.info("✅ Brute force and both expansions agree")
    return payload


def cmd_asympt(args) -> Any:
    estimate = estimate_K(args.terms, args.precision)
    model = AsymptoticModel.from_estimate(estimate)
    for n, value in model.samples.items():
        logger.info(f"K_{n} = {value}")
    _emit(model.model_dump_json())
    return model.model_dump()


def cmd_periodic(args) -> Any:
    sigma = parse_pattern(args.sigma)
    M = parse_multiset(args.multiset)
    report = find_periodic(sigma, M, args.max_period, args.max_transient)
    model = CycleReportModel.from_report(report)
    _emit(model.model_dump_json())
    return model.model_dump()


def cmd_witness(args) -> Any:
    if args.tight is not None:
        if args.multiset is not None:
            raise PreconditionError("--multiset only applies to --sigma witnesses")
        witness = tightness_witness(args.tight)
        depth = sort_depth((0, 1, 0), witness, distinct_count(witness))
        certificate = {"depth": depth}
        if depth is None:
            _emit(render(witness))
            raise VerificationError(f"{render(witness)} was not sorted within {distinct_count(witness)} passes")
    else:
        if args.sigma is None or args.multiset is None:
            raise PreconditionError("witness needs --tight N or both --sigma and --multiset")
        sigma = parse_pattern(args.sigma)
        witness = prop52_witness(sigma, parse_multiset(args.multiset))
        cert = certify_prop52(sigma, witness)
        certificate = {
            "avoids_sigma": cert.avoids_sigma,
            "avoids_reverse": cert.avoids_reverse,
            "period": cert.period,
            "sorted_within": cert.sorted_within,
        }
        if not cert.ok:
            _emit(render(witness))
            raise VerificationError(f"witness {render(witness)} failed its certificate: {certificate}")
    _emit(render(witness))
    _emit(json.dumps(certificate))
    return {"witness": render(witness), "certificate": certificate}


def cmd_profile(args) -> Any:
    if args.max_len < 1:
        raise PreconditionError("--max-len must be at least 1")
    if args.extremal:
        found = {n: [render(p) for p in extremal_patterns(n)] for n in range(1, args.max_len + 1)}
        if args.format == "json":
            _emit(json.dumps(found))
        else:
            _emit("\n".join(f"{n},{p}" for n, patterns in found.items() for p in patterns))
        return found
    models = [DepthProfileModel.from_profile(depth_profile(n, args.threads)) for n in range(1, args.max_len + 1)]
    if args.format == "json":
        _emit(json.dumps([m.model_dump() for m in models]))
    else:
        sys.stdout.write(depth_profile_csv(models))
    return [m.model_dump() for m in models]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socksort", description="Pattern-avoiding stack sorting of sock sequences")
    parser.add_argument("--log-level", default=None, help="loguru level for stderr (default from SOCKSORT_LOG_LEVEL)")
    parser.add_argument("--report", default=None, help="also write a JSON run report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="one pass of the sigma-avoiding stack")
    p.add_argument("--sigma", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--consecutive", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(handler=cmd_sort)

    p = sub.add_parser("depth", help="passes needed to sort")
    p.add_argument("--sigma", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--cap", type=_non_negative, default=None)
    p.set_defaults(handler=cmd_depth)

    p = sub.add_parser("count", help="brute-force sortable pattern counts")
    p.add_argument("--max-len", type=_non_negative, required=True)
    p.add_argument("--k", type=_non_negative, default=1)
    p.add_argument("--refined", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=_non_negative, default=None)
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("gf", help="generating function coefficients")
    p.add_argument("--terms", type=_non_negative, default=None, help="default from SOCKSORT_UNI_TERMS or SOCKSORT_BI_TERMS")
    p.add_argument("--bivariate", action="store_true")
    p.add_argument("--method", choices=["closed", "functional"], default="closed")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_gf)

    p = sub.add_parser("verify", help="brute force against both expansions")
    p.add_argument("--max-len", type=_non_negative, default=None, help="default from SOCKSORT_CI_MAX_LEN")
    p.add_argument("--refined", action="store_true")
    p.add_argument("--threads", type=_non_negative, default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("asympt", help="growth constant and K estimate")
    p.add_argument("--terms", type=_non_negative, default=None)
    p.add_argument("--precision", type=_non_negative, default=None)
    p.set_defaults(handler=cmd_asympt)

    p = sub.add_parser("periodic", help="cycles of phi_sigma on S(M)")
    p.add_argument("--sigma", required=True)
    p.add_argument("--multiset", required=True)
    p.add_argument("--max-period", type=_non_negative, default=64)
    p.add_argument("--max-transient", type=_non_negative, default=64)
    p.set_defaults(handler=cmd_periodic)

    p = sub.add_parser("witness", help="tightness or never-sorted witnesses")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--tight", type=_non_negative)
    group.add_argument("--sigma")
    p.add_argument("--multiset")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("profile", help="depth histograms and extremal patterns")
    p.add_argument("--max-len", type=_non_negative, required=True)
    p.add_argument("--extremal", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=_non_negative, default=None)
    p.set_defaults(handler=cmd_profile)
    return parser


def _write_report(path: str, args, results: Any, started: float) -> None:
    parameters = {k: v for k, v in vars(args).items() if k not in ("handler", "command", "report")}
    report = RunReport(command=args.command, parameters=parameters, results=results, wall_time=time.time() - started)
    with open(path, "w") as f:
        f.write(report.model_dump_json(indent=2))
    logger.debug(f"📝 Run report written to {path}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    started = time.time()
    try:
        configure_logging(args.log_level)
        results = args.handler(args)
        if args.report:
            _write_report(args.report, args, results, started)
    except SockSortError as e:
        logger.error(f"❌ {args.command} failed: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    logger.debug(f"✅ {args.command} finished in {time.time() - started:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
