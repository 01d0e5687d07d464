"""Command-line interface.

Commands::

    qdnet run <file> [--json OUT] [--tol EPS] [--no-oracle] [--no-suite]
    qdnet check <file>
    qdnet scenario <epr|measurement|undo|chsh|billiard> [--json OUT]

Exit codes: 0 all checks pass, 1 check failure, 2 usage or parse error.
The environment variable ``DESCRIPTOR_TOL`` overrides the default tolerance;
an explicit ``--tol`` flag wins over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys

from .dsl import parse_circuit
from .errors import ParseError, QdnetError
from .linalg import DEFAULT_TOL
from .runner import RunOptions, RunReport, dumps_canonical, execute
from .scenarios import SCENARIOS


def _env_tol() -> float:
    raw = os.environ.get("DESCRIPTOR_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise QdnetError(f"DESCRIPTOR_TOL is not a number: {raw!r}") from None
    if value < 0:
        raise QdnetError(f"DESCRIPTOR_TOL must be non-negative, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdnet", description="Descriptor-network simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a circuit file and report")
    run.add_argument("file")
    run.add_argument("--json", dest="json_out", metavar="OUT")
    run.add_argument("--tol", type=float, default=None)
    run.add_argument("--no-oracle", action="store_true")
    run.add_argument("--no-suite", action="store_true")

    check = sub.add_parser("check", help="run the invariant suite only")
    check.add_argument("file")

    scenario = sub.add_parser("scenario", help="run a canned experiment")
    scenario.add_argument("name", choices=sorted(SCENARIOS))
    scenario.add_argument("--json", dest="json_out", metavar="OUT")
    return parser


def _load_program(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        print(f"qdnet: cannot read {path}: {err}", file=sys.stderr)
        raise SystemExit(2) from err
    try:
        return parse_circuit(text)
    except QdnetError as err:
        # Index and unitarity violations at parse time are usage errors too.
        print(f"qdnet: {path}: {err}", file=sys.stderr)
        raise SystemExit(2) from err


def _print_run_summary(report: RunReport) -> None:
    data = report.data
    print(f"program: {data['program']['n']} qubits, init {data['program']['init']}")
    for step in data["steps"]:
        blochs = " ".join(
            "({:+.4f},{:+.4f},{:+.4f})".format(*entry["bloch"]) for entry in step["phenomenal"]
        )
        flags = "".join(
            "." if entry.get("pass", True) else "F" for entry in step["suite"].values()
        )
        print(f"  t={step['t']:<3} {step['directive']:<28} {blochs} [{flags}]")
    for record in data["branches"]:
        print(f"  branches of qubit {record['qubit']} relative to qubit {record['on']} at t0={record['t0']}:")
        for branch in record["branches"]:
            exp = "({:+.4f},{:+.4f},{:+.4f})".format(*branch["expectation"])
            print(f"    label {branch['label']:+d}  weight {branch['weight']:.6f}  <q> = {exp}")
    summary = data["summary"]
    verdict = "PASS" if summary["pass"] else "FAIL"
    print(f"{verdict}: {summary['n_checks'] - summary['n_failed']}/{summary['n_checks']} checks passed")


def _print_scenario_summary(data: dict) -> None:
    print(f"scenario: {data['name']}")
    for check in data["checks"]:
        mark = "ok " if check["pass"] else "FAIL"
        print(
            f"  [{mark}] {check['label']}: expected {check['expected']:.10g}, "
            f"got {check['actual']:.10g} (tol {check['tolerance']:.1e})"
        )
    print("PASS" if data["pass"] else "FAIL")


def _write_json(text: str, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse already printed the diagnostic; normalize the code.
        return 2 if err.code not in (0, None) else 0

    try:
        if args.command == "run":
            tol = args.tol if args.tol is not None else _env_tol()
            program = _load_program(args.file)
            report = execute(
                program,
                RunOptions(tol=tol, oracle=not args.no_oracle, suite=not args.no_suite),
            )
            if args.json_out:
                _write_json(report.to_json(), args.json_out)
            else:
                _print_run_summary(report)
            return 0 if report.passed else 1

        if args.command == "check":
            program = _load_program(args.file)
            report = execute(program, RunOptions(tol=_env_tol(), oracle=True, suite=True))
            summary = report.data["summary"]
            verdict = "PASS" if summary["pass"] else "FAIL"
            print(f"{verdict}: {summary['n_checks'] - summary['n_failed']}/{summary['n_checks']} checks passed")
            return 0 if report.passed else 1

        if args.command == "scenario":
            data = SCENARIOS[args.name]().to_dict()
            if args.json_out:
                _write_json(dumps_canonical(data), args.json_out)
            else:
                _print_scenario_summary(data)
            return 0 if data["pass"] else 1
    except ParseError as err:
        print(f"qdnet: parse error: {err}", file=sys.stderr)
        return 2
    except SystemExit as err:
        return int(err.code or 0)
    except QdnetError as err:
        print(f"qdnet: {err}", file=sys.stderr)
        return 1
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
