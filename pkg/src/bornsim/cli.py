"""Command-line front end: run scenarios, validate them, report the version.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
3 internal error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, InvalidAmplitudeError, ReportIOError, ZeroStateError
from .runner import emit_report, run_scenario
from .scenario import load_scenario

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bornsim",
        description="Sample measurement labels uniformly over outcome disks and "
        "check the resulting outcome statistics against the squared-modulus rule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file")
    run.add_argument("scenario", help="path to the scenario JSON document")
    run.add_argument("--out", metavar="PATH", help="write the canonical JSON report here")
    run.add_argument("--csv", metavar="PATH", help="write the per-outcome CSV table here")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--samples", type=int, help="override the scenario sample count")
    run.add_argument("--workers", type=int, help="override the scenario worker count")

    val = sub.add_parser("validate", help="check a scenario file without running it")
    val.add_argument("scenario", help="path to the scenario JSON document")

    sub.add_parser("version", help="print the tool version")
    return parser


def _apply_overrides(scenario, args):
    from dataclasses import replace

    fields = {}
    if args.seed is not None:
        fields["seed"] = args.seed
    if args.samples is not None:
        fields["samples"] = args.samples
    if args.workers is not None:
        fields["workers"] = args.workers
    if not fields:
        return scenario
    updated = replace(scenario, **fields)
    # Re-validate the overridden values through the sampler config rules.
    if not 0 <= updated.seed < 2**64:
        raise ConfigError(f"--seed must fit in 64 unsigned bits, got {updated.seed}")
    if updated.samples < 1:
        raise ConfigError(f"--samples must be positive, got {updated.samples}")
    if updated.workers < 1:
        raise ConfigError(f"--workers must be positive, got {updated.workers}")
    return updated


def _cmd_run(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    raw = scenario.state if scenario.state is not None else np.kron(*scenario.composite)
    norm = float(np.sqrt(np.sum(np.abs(raw) ** 2)))
    if abs(norm - 1.0) > 1e-6:
        print(
            f"note: input state norm is {norm:.9g}; renormalizing",
            file=sys.stderr,
        )
    report = run_scenario(scenario)
    if args.out:
        emit_report(report, "json", args.out)
    else:
        sys.stdout.write(report.to_json())
    if args.csv:
        emit_report(report, "csv", args.csv)
    verdict = "all checks passed" if report.all_passed else "CHECK FAILED"
    failed = [c["name"] for c in report.checks if not c["passed"]]
    detail = f" ({', '.join(failed)})" if failed else ""
    print(
        f"{scenario.name}: {verdict}{detail} in {report.wall_time_s:.2f} s",
        file=sys.stderr,
    )
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


def _cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    state = scenario.resolve_state()
    kind = "composite" if scenario.composite is not None else "state"
    print(
        f"ok: '{scenario.name}' ({kind}, dim {state.dim}, {scenario.samples} samples, "
        f"checks: {', '.join(scenario.checks)})"
    )
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        raise RuntimeError(f"unhandled command {args.command!r}")
    except (ConfigError, ZeroStateError, InvalidAmplitudeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ReportIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything else is a bug, not user error
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
