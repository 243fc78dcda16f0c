import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Iterable, Optional, TextIO

from dotenv import load_dotenv
from tqdm import tqdm

from sq_gen.errors import MemberExceptional, NotASquare
from sq_gen.models import (
    CurvePoint,
    Fixture,
    HyperellipticRecord,
    IndependenceCertificate,
    QuarticCurve,
    SequenceParams,
    SequenceRecord,
    SqModel,
    VerificationReport,
    read_lines,
    write_lines,
)
from sq_gen.steps._1_construction import h_from_quartic, quartic_from_params
from sq_gen.steps._3_family import (
    generate_member,
    to_hyperelliptic,
    verify_sequence,
)
from sq_gen.steps._4_heights import (
    DEFAULT_PRECISION,
    DEFAULT_TARGET_ERROR,
    MIN_PRECISION,
    independence_certificate,
)
from sq_gen.utils.curves import family_to_weierstrass
from sq_gen.utils.exact_algebra import RationalLike, to_rational

logger = logging.getLogger(__name__)

DEFAULT_DIGIT_GUARD = 100_000

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def load_fixture(name: str = "paper") -> Fixture:
    """Load a bundled specialization from the fixtures directory."""
    fixture_path = FIXTURE_DIR / f"{name}.json"
    if not fixture_path.exists():
        raise ValueError(f"Unknown fixture {name!r}")
    return Fixture.from_file(fixture_path)


class SqGen:
    def __init__(
        self,
        target_error: Optional[float] = None,
        digit_guard: Optional[int] = None,
        precision: Optional[int] = None,
        max_workers: Optional[int] = None,
    ):
        """Initialize SqGen; unset options fall back to the environment, then to defaults.

        Args:
            target_error: Radius bound for each canonical height (SQGEN_TARGET_ERROR)
            digit_guard: Maximum decimal digits of any generated coordinate (SQGEN_DIGIT_GUARD)
            precision: Starting binary precision for heights in bits (SQGEN_PRECISION)
            max_workers: Thread pool size used when constructing several members
        """
        load_dotenv()
        self.target_error = target_error or float(
            os.getenv("SQGEN_TARGET_ERROR", DEFAULT_TARGET_ERROR)
        )
        self.digit_guard = digit_guard or int(
            os.getenv("SQGEN_DIGIT_GUARD", DEFAULT_DIGIT_GUARD)
        )
        self.precision = max(
            precision or int(os.getenv("SQGEN_PRECISION", DEFAULT_PRECISION)),
            MIN_PRECISION,
        )
        self.max_workers = max_workers
        self.validate_target_error(self.target_error)

    @staticmethod
    def validate_target_error(target_error: float):
        if not target_error > 0:
            raise ValueError("target_error must be positive")

    # ====== Construction ======

    @staticmethod
    def quartic(t: RationalLike, q: RationalLike, w: RationalLike) -> QuarticCurve:
        return quartic_from_params(t, q, w)

    @staticmethod
    def seed(
        quartic: QuarticCurve, p: RationalLike, h: Optional[RationalLike] = None
    ) -> CurvePoint:
        """Quartic point at p, using the non-negative root unless h is given."""
        p = to_rational(p)
        if h is None:
            h = h_from_quartic(quartic, p)
            if h is None:
                raise NotASquare(f"Q({p}) is not the square of a rational")
        return CurvePoint(x=p, y=to_rational(h))

    def construct(
        self,
        params: SequenceParams,
        ms: Iterable[int],
        y_scale: RationalLike = 1,
        show_progress: bool = False,
    ) -> tuple[list[SequenceRecord], list[int]]:
        """Build the members for every m, in ascending order of m.

        Returns the records and the m values skipped as exceptional.
        """
        if params.p is None:
            raise ValueError("params.p selects the seed and must be set")
        ms = sorted(set(ms))
        if 0 in ms:
            raise ValueError("m must be nonzero")

        quartic = self.quartic(params.t, params.q, params.w)
        seed = self.seed(quartic, params.p)
        y_scale = to_rational(y_scale)

        def _process(m: int) -> SequenceRecord:
            return generate_member(
                params.t,
                params.q,
                params.w,
                seed,
                m,
                y_scale=y_scale,
                digit_guard=self.digit_guard,
                quartic=quartic,
            )

        records: dict[int, SequenceRecord] = {}
        skipped: list[int] = []
        if len(ms) == 1:
            try:
                records[ms[0]] = _process(ms[0])
            except MemberExceptional as e:
                logger.warning(f"Skipping m={e.m}: {e}")
                skipped.append(e.m)
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_m = {executor.submit(_process, m): m for m in ms}
                for future in tqdm(
                    as_completed(future_to_m),
                    total=len(future_to_m),
                    desc="Members",
                    disable=not show_progress,
                ):
                    m = future_to_m[future]
                    try:
                        records[m] = future.result()
                    except MemberExceptional as e:
                        logger.warning(f"Skipping m={m}: {e}")
                        skipped.append(m)

        return [records[m] for m in sorted(records)], sorted(skipped)

    def construct_fixture(
        self, ms: Iterable[int] = (1,), name: str = "paper", show_progress: bool = False
    ) -> tuple[list[SequenceRecord], list[int]]:
        fixture = load_fixture(name)
        return self.construct(
            fixture.params, ms, y_scale=fixture.y_scale, show_progress=show_progress
        )

    # ====== Checks ======

    @staticmethod
    def verify(record: SequenceRecord) -> VerificationReport:
        return verify_sequence(record)

    @staticmethod
    def lift(record: SequenceRecord) -> HyperellipticRecord:
        return to_hyperelliptic(record)

    def certify(
        self, record: SequenceRecord, target_error: Optional[float] = None
    ) -> IndependenceCertificate:
        """Certify the record's five points on the Weierstrass model of its curve."""
        target_error = target_error or self.target_error
        self.validate_target_error(target_error)
        weierstrass, coordinates = family_to_weierstrass(record.curve)
        points = [coordinates.forward(pt) for pt in record.points]
        return independence_certificate(
            points,
            weierstrass,
            target_error=target_error,
            digit_guard=self.digit_guard,
            precision=self.precision,
            m=record.m,
        )

    # ====== I/O ======

    @staticmethod
    def from_file(file_path: str | Path | TextIO) -> list[SequenceRecord]:
        return read_lines(file_path, SequenceRecord)

    @staticmethod
    def export_records(records: Iterable[SqModel], output: str | Path | TextIO):
        write_lines(records, output)
