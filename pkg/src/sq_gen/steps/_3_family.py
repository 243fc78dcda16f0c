import logging
from fractions import Fraction
from typing import Iterable, Iterator

from sq_gen.errors import (
    DegenerateModel,
    ExceptionalPoint,
    InconsistentData,
    InvalidMultiplier,
    MemberExceptional,
    NotOnCurve,
    SizeLimit,
    SqGenError,
    TorsionSeed,
)
from sq_gen.models import (
    CurvePoint,
    HyperellipticRecord,
    QuarticCurve,
    SequenceParams,
    SequenceRecord,
    VerificationReport,
    WeierstrassCurve,
)
from sq_gen.steps._1_construction import curve_from_params, quartic_from_params
from sq_gen.steps._2_two_cover import cubic_to_quartic, jacobian, quartic_to_cubic
from sq_gen.utils.curves import family_to_weierstrass, is_torsion, scalar_mul
from sq_gen.utils.exact_algebra import RationalLike, decimal_digits, to_rational

logger = logging.getLogger(__name__)

SEQUENCE_LENGTH = 5


def _guard(value: Fraction, digit_guard: int | None, what: str) -> None:
    if digit_guard is not None and decimal_digits(value) > digit_guard:
        raise SizeLimit(f"{what} has more than {digit_guard} decimal digits")


def seed_image(
    quartic: QuarticCurve, seed: CurvePoint
) -> tuple[CurvePoint, WeierstrassCurve]:
    """Image of the seed on the Jacobian, rejecting torsion seeds."""
    target = jacobian(quartic)
    image = quartic_to_cubic(seed, quartic)
    if is_torsion(image, target):
        raise TorsionSeed(f"seed p={seed.x} has torsion image on the Jacobian")
    return image, target


def build_record(
    params: SequenceParams,
    m: int,
    p_m: Fraction,
    h_m: Fraction,
    y_scale: RationalLike = 1,
    digit_guard: int | None = None,
) -> SequenceRecord:
    """Assemble the member selected by the quartic point (p_m, h_m)."""
    y_scale = to_rational(y_scale)
    _guard(p_m, digit_guard, f"p_{m}")
    _guard(h_m, digit_guard, f"h_{m}")

    t = params.t
    raw_curve, values = curve_from_params(t, p_m, params.q, params.w)
    ys = (values.d, values.e, values.f, values.g, h_m)
    points = tuple(
        CurvePoint(x=(t + i) ** 2, y=y / y_scale) for i, y in enumerate(ys)
    )
    curve = raw_curve.scaled(y_scale)
    for coefficient in (curve.a, curve.b, curve.c):
        _guard(coefficient, digit_guard, f"curve coefficient of member {m}")
    return SequenceRecord(
        params=params,
        m=m,
        p_m=p_m,
        h_m=h_m,
        y_scale=y_scale,
        curve=curve,
        points=points,
    )


def generate_member(
    t0: RationalLike,
    q0: RationalLike,
    w0: RationalLike,
    seed: CurvePoint,
    m: int,
    y_scale: RationalLike = 1,
    digit_guard: int | None = None,
    quartic: QuarticCurve | None = None,
) -> SequenceRecord:
    """Member E_m built from m times the seed on the quartic.

    m = 1 uses the seed directly. ``quartic`` may be passed to skip recomputing it.
    """
    if m == 0:
        raise InvalidMultiplier("m must be a nonzero integer")
    t0, q0, w0 = to_rational(t0), to_rational(q0), to_rational(w0)
    if quartic is None:
        quartic = quartic_from_params(t0, q0, w0)
    if not quartic.contains(seed):
        raise NotOnCurve(f"seed ({seed.x}, {seed.y}) is not on the quartic")

    image, target = seed_image(quartic, seed)
    if m == 1:
        p_m, h_m = seed.x, seed.y
    else:
        try:
            multiple = cubic_to_quartic(scalar_mul(m, image, target), quartic)
        except ExceptionalPoint as err:
            raise MemberExceptional(m, str(err)) from err
        p_m, h_m = multiple.x, multiple.y

    params = SequenceParams(t=t0, q=q0, w=w0, p=seed.x)
    record = build_record(params, m, p_m, h_m, y_scale=y_scale, digit_guard=digit_guard)
    logger.info(f"Built member m={m} with p_m of {decimal_digits(p_m)} digits")
    return record


def generate_members(
    t0: RationalLike,
    q0: RationalLike,
    w0: RationalLike,
    seed: CurvePoint,
    ms: Iterable[int],
    y_scale: RationalLike = 1,
    digit_guard: int | None = None,
) -> Iterator[SequenceRecord]:
    """Lazily yield members for each m; exceptional values raise MemberExceptional."""
    quartic = quartic_from_params(t0, q0, w0)
    for m in ms:
        yield generate_member(
            t0, q0, w0, seed, m, y_scale=y_scale, digit_guard=digit_guard, quartic=quartic
        )


def verify_sequence(record: SequenceRecord) -> VerificationReport:
    points = record.points
    curve = record.curve
    on_curve = tuple(not pt.is_infinity and curve.contains(pt) for pt in points)

    u = None
    consecutive = False
    affine = len(points) == SEQUENCE_LENGTH and not any(pt.is_infinity for pt in points)
    if affine:
        u = (points[1].x - points[0].x - 1) / 2
        consecutive = all(pt.x == (u + i) ** 2 for i, pt in enumerate(points))

    try:
        weierstrass, _ = family_to_weierstrass(curve)
        nonsingular = not weierstrass.is_singular
    except DegenerateModel:
        nonsingular = False

    quartic_consistent = False
    if affine:
        try:
            quartic = quartic_from_params(record.params.t, record.params.q, record.params.w)
            quartic_consistent = (
                record.h_m**2 == quartic.evaluate(record.p_m)
                and points[-1].y == record.h_m / record.y_scale
                and u == record.params.t
            )
        except SqGenError as err:
            logger.warning(f"Quartic check failed for m={record.m}: {err}")

    report = VerificationReport(
        m=record.m,
        on_curve=on_curve,
        u=u,
        consecutive_squares=consecutive,
        nonsingular=nonsingular,
        quartic_consistent=quartic_consistent,
    )
    if not report.passed:
        logger.warning(f"Record m={record.m} failed verification: {report.model_dump()}")
    return report


def to_hyperelliptic(record: SequenceRecord) -> HyperellipticRecord:
    """Lift to y^2 = a x^6 + b x^2 + c through (+-(t0 + i), y_i)."""
    if not verify_sequence(record).passed:
        raise InconsistentData(f"record m={record.m} does not pass verification")
    t0 = record.params.t
    curve = record.curve

    positives = [CurvePoint(x=t0 + i, y=pt.y) for i, pt in enumerate(record.points)]
    negatives = [pt.model_copy(update={"x": -pt.x}) for pt in positives if pt.x != 0]
    lifted = HyperellipticRecord(
        m=record.m,
        coefficients=(curve.c, 0, curve.b, 0, 0, 0, curve.a),
        points=tuple(positives + negatives),
    )
    if not all(lifted.contains(pt) for pt in lifted.points):
        raise InconsistentData("lifted point off the sextic")
    return lifted
