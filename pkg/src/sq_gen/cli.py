#!/usr/bin/env python3
"""
Command line interface for sq-gen.
"""

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterator, Optional, TextIO

from pydantic import ValidationError

from sq_gen.errors import InconsistentData, SqGenError, TorsionInput
from sq_gen.models import (
    Command,
    JobConfig,
    SequenceParams,
    SequenceRecord,
    Verdict,
)
from sq_gen.sq_gen import SqGen, load_fixture
from sq_gen.steps._1_construction import quartic_from_params
from sq_gen.steps._2_two_cover import distinguished_point, jacobian
from sq_gen.utils.curves import family_to_weierstrass

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_VERIFY_FAILED = 3
EXIT_INCONCLUSIVE = 4
EXIT_DEPENDENT = 5

# most severe first
_SEVERITY = (
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    EXIT_DEPENDENT,
    EXIT_INCONCLUSIVE,
    EXIT_PARTIAL,
    EXIT_OK,
)

_VERDICT_EXIT = {
    Verdict.INDEPENDENT: EXIT_OK,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    Verdict.DEPENDENT_SUSPECTED: EXIT_DEPENDENT,
}


def worst(codes: list[int]) -> int:
    return min(codes, key=_SEVERITY.index, default=EXIT_OK)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


@contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8") as f:
        yield f


def _read_records(path: Optional[str]) -> list[SequenceRecord]:
    if path is None:
        raise ValueError("an input record file is required")
    records = SqGen.from_file(sys.stdin if path == "-" else path)
    if not records:
        raise ValueError(f"no records in {path}")
    return records


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sqgen",
        description="sq-gen: elliptic curves with five consecutive-square rational points",
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument(
        "--self-check",
        action="store_true",
        help="Run the built-in reproduction suite and exit",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def common(sub: argparse.ArgumentParser):
        sub.add_argument("--config", help="JSON job file; explicit flags override it")
        sub.add_argument("--out", dest="output", help="Output file (default: stdout)")
        sub.add_argument(
            "--digit-guard", type=int, default=None, help="Maximum decimal digits of coordinates"
        )

    construct_parser = subparsers.add_parser("construct", help="Generate family members")
    common(construct_parser)
    for name in ("t", "q", "w", "p"):
        construct_parser.add_argument(f"--{name}", default=None, help=f"Rational {name} as n/d")
    construct_parser.add_argument(
        "--m",
        dest="m_range",
        default=None,
        help="Multiplier k or range a..b, 0 is skipped (write --m=-2..2 for negative starts)",
    )
    construct_parser.add_argument(
        "--fixture", choices=["paper"], default=None, help="Use a built-in specialization"
    )
    construct_parser.add_argument(
        "--y-scale", dest="y_scale", default=None, help="Divide presented y-values by this rational"
    )
    construct_parser.add_argument(
        "--progress", action="store_true", help="Show a progress bar on stderr"
    )

    for name, text in (
        ("verify", "Verify record files"),
        ("heights", "Certify independence of each record's points"),
        ("lift", "Lift records to the genus 2 curve"),
    ):
        sub = subparsers.add_parser(name, help=text)
        common(sub)
        sub.add_argument("input", nargs="?", default=None, help="JSON Lines record file, or -")
        if name == "heights":
            sub.add_argument(
                "--target-error", type=float, default=None, help="Height error bound"
            )
    return parser


def job_from_args(args: argparse.Namespace) -> JobConfig:
    data: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            data = json.load(f)
    for key in (
        "t",
        "q",
        "w",
        "p",
        "fixture",
        "m_range",
        "y_scale",
        "target_error",
        "digit_guard",
        "input",
        "output",
    ):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    data["command"] = args.command
    return JobConfig.model_validate(data)


def cmd_construct(job: JobConfig, sq: SqGen, show_progress: bool = False) -> int:
    y_scale = job.y_scale
    if job.fixture is not None:
        fixture = load_fixture(job.fixture)
        params = fixture.params
        if y_scale is None:
            y_scale = fixture.y_scale
    else:
        missing = [name for name in ("t", "q", "w", "p") if getattr(job, name) is None]
        if missing:
            raise ValueError(f"missing parameters: {', '.join('--' + m for m in missing)}")
        params = SequenceParams(t=job.t, q=job.q, w=job.w, p=job.p)

    records, skipped = sq.construct(
        params, job.ms, y_scale=y_scale or Fraction(1), show_progress=show_progress
    )
    with _open_output(job.output) as out:
        SqGen.export_records(records, out)
    if skipped:
        logger.warning(f"Skipped exceptional m values: {', '.join(map(str, skipped))}")
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_verify(job: JobConfig, sq: SqGen) -> int:
    reports = [sq.verify(record) for record in _read_records(job.input)]
    with _open_output(job.output) as out:
        SqGen.export_records(reports, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def cmd_heights(job: JobConfig, sq: SqGen) -> int:
    codes = []
    certificates = []
    for record in _read_records(job.input):
        if not sq.verify(record).passed:
            logger.error(f"Record m={record.m} fails verification, not certifying")
            codes.append(EXIT_VERIFY_FAILED)
            continue
        certificate = sq.certify(record, target_error=job.target_error)
        certificates.append(certificate)
        codes.append(_VERDICT_EXIT[certificate.verdict])
    with _open_output(job.output) as out:
        SqGen.export_records(certificates, out)
    return worst(codes)


def cmd_lift(job: JobConfig, sq: SqGen) -> int:
    lifted = [sq.lift(record) for record in _read_records(job.input)]
    with _open_output(job.output) as out:
        SqGen.export_records(lifted, out)
    return EXIT_OK


def self_check(sq: SqGen) -> int:
    """Reproduce the published specialization end to end; report on stderr."""
    fixture = load_fixture("paper")
    expected = fixture.expected
    results: dict[str, bool] = {}

    def check(name: str, fn: Callable[[], bool]):
        try:
            results[name] = bool(fn())
        except (SqGenError, ValueError, ArithmeticError) as e:
            logger.error(f"{name}: {type(e).__name__}: {e}")
            results[name] = False
        logger.info(f"[{'PASS' if results[name] else 'FAIL'}] {name}")

    records, _ = sq.construct_fixture(ms=[1])
    e1 = records[0]
    quartic = quartic_from_params(fixture.params.t, fixture.params.q, fixture.params.w)

    check("E1 coefficients", lambda: e1.curve == expected.curve)
    check("E1 points", lambda: e1.points == expected.points)
    check("quartic leading coefficient", lambda: quartic.A == expected.quartic_leading)
    check("Jacobian", lambda: jacobian(quartic) == expected.jacobian)
    check(
        "distinguished point",
        lambda: distinguished_point(quartic) == expected.distinguished_point,
    )

    def members_verify() -> bool:
        members, skipped = sq.construct_fixture(ms=[1, 2, 3])
        return not skipped and all(
            sq.verify(r).passed and len(sq.lift(r).points) >= 5 for r in members
        )

    check("members m=1..3 verify and lift", members_verify)
    check(
        "E1 points independent",
        lambda: sq.certify(e1).verdict == Verdict.INDEPENDENT,
    )

    def degenerate_rejected() -> bool:
        for t in (Fraction(-1), Fraction(-1, 2), Fraction(-3, 2), Fraction(-2)):
            try:
                quartic_from_params(t, fixture.params.q, fixture.params.w)
            except SqGenError:
                continue
            return False
        return True

    check("degenerate t rejected", degenerate_rejected)
    check(
        "E1 Weierstrass model nonsingular",
        lambda: not family_to_weierstrass(e1.curve)[0].is_singular,
    )

    failed = [name for name, ok in results.items() if not ok]
    logger.info(f"Self-check: {len(results) - len(failed)}/{len(results)} passed")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def main(argv: Optional[list[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        sq = SqGen(digit_guard=getattr(args, "digit_guard", None))
        if args.self_check:
            return self_check(sq)
        if not args.command:
            parser.print_help(sys.stderr)
            return EXIT_USAGE

        job = job_from_args(args)
        sq.digit_guard = job.digit_guard or sq.digit_guard
        if job.command == Command.CONSTRUCT:
            return cmd_construct(job, sq, show_progress=args.progress)
        if job.command == Command.VERIFY:
            return cmd_verify(job, sq)
        if job.command == Command.HEIGHTS:
            return cmd_heights(job, sq)
        return cmd_lift(job, sq)
    except ValidationError as e:
        first = e.errors()[0]["msg"]
        logger.error(f"Malformed input: {e.error_count()} validation error(s): {first}")
        return EXIT_USAGE
    except TorsionInput as e:
        logger.error(f"Torsion point in record: {e}")
        return EXIT_USAGE
    except InconsistentData as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except (SqGenError, ValueError, ArithmeticError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
