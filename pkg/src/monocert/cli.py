"""Command-line interface.

Verbs: `classify` (invariants of one or all cases), `verify` (check the
shipped certificates), `search` (heuristic certificate reconstruction),
`report` (summaries over persisted run records, optionally with CSV and
figures).  Exit codes: 0 all requested checks passed, 1 a mathematical
check failed or a claim mismatch was found, 2 input or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .catalog import CaseSpec, case_by_id, load_catalog
from .errors import (
    CoprimalityError,
    DuplicateIdError,
    MissingCertificateError,
    MonocertError,
    SchemaError,
)
from .report import build_rows, render_human, render_json, write_outputs
from .runner import (
    ResultsStore,
    classify_case,
    run_search,
    run_verification,
)
from .search import SearchConfig

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_INPUT_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monocert",
        description="Exact certifier for ping-pong free-product decompositions "
        "of degree-5 orthogonal monodromy groups.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--catalog",
        metavar="DIR",
        help="case directory (defaults to the bundled catalog)",
    )
    common.add_argument(
        "--results-dir",
        metavar="DIR",
        help="run-record directory (default: $MONOCERT_RESULTS_DIR or ./monocert-results)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser(
        "classify", help="compute case invariants", parents=[common]
    )
    group = p_classify.add_mutually_exclusive_group(required=True)
    group.add_argument("--case", metavar="ID")
    group.add_argument("--all", action="store_true")
    p_classify.add_argument("--format", choices=("human", "json"), default="human")

    p_verify = sub.add_parser(
        "verify", help="verify shipped certificates", parents=[common]
    )
    group = p_verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--case", metavar="ID")
    group.add_argument("--all", action="store_true")
    group.add_argument("--type", choices=("o32", "o41"), dest="family")
    p_verify.add_argument("--jobs", type=int, default=1, metavar="N")
    p_verify.add_argument("--format", choices=("human", "json"), default="human")

    p_search = sub.add_parser(
        "search", help="search for a certificate", parents=[common]
    )
    p_search.add_argument("--case", required=True, metavar="ID")
    p_search.add_argument("--max-rounds", type=int, default=None, metavar="R")
    p_search.add_argument("--seed-cap", type=int, default=None, metavar="N")

    p_report = sub.add_parser(
        "report", help="summarize persisted run records", parents=[common]
    )
    p_report.add_argument("--format", choices=("human", "json"), default="human")
    p_report.add_argument(
        "--out-dir",
        metavar="DIR",
        help="also write summary.csv and figures into this directory",
    )
    return parser


def _select_cases(cases: list[CaseSpec], args) -> list[CaseSpec]:
    if getattr(args, "case", None):
        try:
            return [case_by_id(cases, args.case)]
        except KeyError as err:
            raise SchemaError(str(err)) from err
    if getattr(args, "family", None):
        return [c for c in cases if c.family == args.family]
    return list(cases)


def _cmd_classify(cases: list[CaseSpec], args) -> int:
    selected = _select_cases(cases, args)
    failures = 0
    payload = []
    for case in selected:
        record = classify_case(case)
        payload.append(record.to_dict())
        if record.mismatches:
            failures += 1
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for rec in payload:
            sig = rec["signature"]
            order = "inf" if rec["order"] is None else rec["order"]
            line = (
                f"{rec['case_id']}: signature ({sig[0]},{sig[1]}), order {order}, "
                f"eta {rec['eta']}, {rec['presentation']}"
            )
            if rec["mismatches"]:
                line += "  MISMATCH: " + "; ".join(rec["mismatches"])
            print(line)
    return EXIT_MATH_FAILURE if failures else EXIT_OK


def _verify_one(case: CaseSpec) -> dict:
    return run_verification(case).to_dict()


def _cmd_verify(cases: list[CaseSpec], args, store: ResultsStore) -> int:
    selected = _select_cases(cases, args)
    if getattr(args, "case", None) is None:
        selected = [c for c in selected if c.has_certificate]
    if not selected:
        print("no cases with certificates selected", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for case in selected:
        if not case.has_certificate:
            raise MissingCertificateError(f"case {case.id} has no certificate")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_verify_one, selected))
    else:
        records = [_verify_one(case) for case in selected]
    records.sort(key=lambda r: r["case_id"])
    failures = 0
    for raw in records:
        from .runner import RunRecord

        store.append(
            RunRecord(
                case_id=raw["case_id"],
                timestamp=raw["timestamp"],
                version=raw["version"],
                kind=raw["kind"],
                classification=raw["classification"],
                report=raw["report"],
            )
        )
        verdict = raw["report"]["verdict"]
        mismatches = raw["classification"]["mismatches"]
        if verdict != "pass" or mismatches:
            failures += 1
        if args.format == "human":
            line = f"{raw['case_id']}: {verdict}"
            if verdict != "pass":
                failed = [s["name"] for s in raw["report"]["steps"] if not s["passed"]]
                line += f" (failed: {', '.join(failed)})"
            if mismatches:
                line += "  MISMATCH: " + "; ".join(mismatches)
            print(line)
    if args.format == "json":
        print(json.dumps(records, indent=2, sort_keys=True))
    else:
        total = len(records)
        print(f"{total - failures}/{total} certificates verified")
    return EXIT_MATH_FAILURE if failures else EXIT_OK


def _cmd_search(cases: list[CaseSpec], args, store: ResultsStore) -> int:
    case = case_by_id(cases, args.case)
    overrides = {}
    if args.max_rounds is not None:
        overrides["max_rounds"] = args.max_rounds
    if args.seed_cap is not None:
        overrides["seed_rays_cap"] = args.seed_cap
    config = SearchConfig(**overrides)
    certificate_dir = Path(args.catalog) if args.catalog else None
    record = run_search(case, config, store, certificate_dir)
    payload = record.search or {}
    print(f"{case.id}: {payload.get('status')} after {payload.get('rounds_used')} rounds")
    if payload.get("status") == "found":
        print(f"certificate rays: {len(payload['certificate'][0])}")
        return EXIT_OK
    print(payload.get("detail", ""))
    return EXIT_MATH_FAILURE


def _cmd_report(cases: list[CaseSpec], args, store: ResultsStore) -> int:
    latest = store.latest_by_case()
    rows = build_rows(cases, latest)
    if args.format == "json":
        print(render_json(rows))
    else:
        print(render_human(rows))
    if args.out_dir:
        written = write_outputs(rows, args.out_dir)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    flagged = any(row.flagged for row in rows)
    return EXIT_MATH_FAILURE if flagged else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cases = load_catalog(args.catalog)
        store = ResultsStore(args.results_dir)
        if args.command == "classify":
            return _cmd_classify(cases, args)
        if args.command == "verify":
            return _cmd_verify(cases, args, store)
        if args.command == "search":
            return _cmd_search(cases, args, store)
        if args.command == "report":
            return _cmd_report(cases, args, store)
        raise AssertionError(f"unhandled command {args.command}")
    except (SchemaError, DuplicateIdError, MissingCertificateError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (CoprimalityError, MonocertError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_MATH_FAILURE


if __name__ == "__main__":
    sys.exit(main())
