import enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Iterable, Optional, TextIO, Type, TypeVar

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
    computed_field,
    field_validator,
    model_validator,
)

from sq_gen.utils.bounded_real import BoundedReal
from sq_gen.utils.exact_algebra import RationalPolynomial, format_rational, to_rational


def _validate_rational(value: Any) -> Fraction:
    if isinstance(value, float):
        raise ValueError("floats are not accepted, write rationals as 'n/d'")
    return to_rational(value)


def _validate_ball(value: Any) -> BoundedReal:
    if isinstance(value, BoundedReal):
        return value
    if isinstance(value, dict) and {"mid", "rad"} <= value.keys():
        return BoundedReal.from_json(value)
    raise ValueError("expected an object with 'mid' and 'rad'")


# Exact rational, serialized as the canonical string "n/d".
Rational = Annotated[
    Fraction,
    PlainValidator(_validate_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

Ball = Annotated[
    BoundedReal,
    PlainValidator(_validate_ball),
    PlainSerializer(lambda ball: ball.to_json(), return_type=dict),
    WithJsonSchema(
        {
            "type": "object",
            "properties": {"mid": {"type": "string"}, "rad": {"type": "string"}},
        }
    ),
]


class SqModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def to_line(self) -> str:
        """Canonical compact JSON, one record per line."""
        return self.model_dump_json()

    @classmethod
    def from_file(cls, file_path: str | Path):
        return cls.model_validate_json(Path(file_path).read_text(encoding="utf-8"))


# ~~~ CURVE MODELS ~~~
class CurvePoint(SqModel):
    """Affine point (x, y), or the point at infinity when both coordinates are None."""

    x: Optional[Rational] = None
    y: Optional[Rational] = None

    @model_validator(mode="after")
    def _both_or_neither(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("a point needs both coordinates, or neither for infinity")
        return self

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls()

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(x=x, y=y)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def negate(self) -> "CurvePoint":
        if self.is_infinity:
            return self
        return CurvePoint(x=self.x, y=-self.y)


class FamilyCurve(SqModel):
    """y^2 = a x^3 + b x + c"""

    a: Rational
    b: Rational
    c: Rational

    def y_squared(self, x: Fraction) -> Fraction:
        return (self.a * x * x + self.b) * x + self.c

    def contains(self, point: CurvePoint) -> bool:
        if point.is_infinity:
            return True
        return point.y * point.y == self.y_squared(point.x)

    def scaled(self, y_scale: Fraction) -> "FamilyCurve":
        """Model whose points are (x, y / y_scale) of this one."""
        s2 = Fraction(y_scale) ** 2
        return FamilyCurve(a=self.a / s2, b=self.b / s2, c=self.c / s2)


class WeierstrassCurve(SqModel):
    """y^2 = x^3 + alpha x + beta"""

    alpha: Rational
    beta: Rational

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.alpha**3 + 27 * self.beta**2)

    @property
    def is_singular(self) -> bool:
        return self.discriminant == 0

    @property
    def j_invariant(self) -> Fraction:
        return -1728 * (4 * self.alpha) ** 3 / self.discriminant

    def rhs(self, x: Fraction) -> Fraction:
        return (x * x + self.alpha) * x + self.beta

    def contains(self, point: CurvePoint) -> bool:
        if point.is_infinity:
            return True
        return point.y * point.y == self.rhs(point.x)


class QuarticCurve(SqModel):
    """h^2 = A p^4 + B p^3 + C p^2 + D p + E"""

    A: Rational
    B: Rational
    C: Rational
    D: Rational
    E: Rational

    @field_validator("A")
    @classmethod
    def _leading_nonzero(cls, value: Fraction) -> Fraction:
        if value == 0:
            raise ValueError("quartic leading coefficient A must be nonzero")
        return value

    @property
    def polynomial(self) -> RationalPolynomial:
        return RationalPolynomial((self.E, self.D, self.C, self.B, self.A))

    def evaluate(self, p) -> Fraction:
        p = to_rational(p)
        return (((self.A * p + self.B) * p + self.C) * p + self.D) * p + self.E

    def contains(self, point: CurvePoint) -> bool:
        # the affine model has no point at infinity
        if point.is_infinity:
            return False
        return point.y * point.y == self.evaluate(point.x)


class QuarticInvariants(SqModel):
    I: Rational
    J: Rational

    @property
    def discriminant_factor(self) -> Fraction:
        """4I^3 - J^2; the Jacobian is singular exactly when this vanishes."""
        return 4 * self.I**3 - self.J**2

    @property
    def is_degenerate(self) -> bool:
        return self.discriminant_factor == 0


# ~~~ SEQUENCE DATA ~~~
class SequenceParams(SqModel):
    t: Rational = Field(..., description="First base: x-coordinates are (t+i)^2")
    q: Rational
    w: Rational
    p: Optional[Rational] = Field(None, description="Abscissa of the seed on the quartic")


class YValues(SqModel):
    d: Rational
    e: Rational
    f: Rational
    g: Rational
    h: Optional[Rational] = None


class SequenceRecord(SqModel):
    params: SequenceParams
    m: int
    p_m: Rational
    h_m: Rational = Field(..., description="Signed h in the quartic's normalization")
    y_scale: Rational = Field(
        Fraction(1), description="Presented y-values are the raw ones divided by this"
    )
    curve: FamilyCurve
    points: tuple[CurvePoint, ...]

    @field_validator("y_scale")
    @classmethod
    def _scale_nonzero(cls, value: Fraction) -> Fraction:
        if value == 0:
            raise ValueError("y_scale must be nonzero")
        return value


class HyperellipticRecord(SqModel):
    """y^2 = a x^6 + b x^2 + c with coefficients stored lowest degree first."""

    m: int
    coefficients: tuple[Rational, ...]
    points: tuple[CurvePoint, ...]

    @property
    def sextic(self) -> RationalPolynomial:
        return RationalPolynomial(self.coefficients)

    def contains(self, point: CurvePoint) -> bool:
        if point.is_infinity:
            return False
        return point.y * point.y == self.sextic(point.x)


class VerificationReport(SqModel):
    m: Optional[int] = None
    on_curve: tuple[bool, ...]
    u: Optional[Rational] = None
    consecutive_squares: bool
    nonsingular: bool
    quartic_consistent: bool

    @computed_field
    @property
    def passed(self) -> bool:
        return (
            bool(self.on_curve)
            and all(self.on_curve)
            and self.consecutive_squares
            and self.nonsingular
            and self.quartic_consistent
        )


# ~~~ HEIGHTS ~~~
class Verdict(str, enum.Enum):
    INDEPENDENT = "independent"
    INCONCLUSIVE = "inconclusive"
    DEPENDENT_SUSPECTED = "dependent-suspected"


class IndependenceCertificate(SqModel):
    m: Optional[int] = None
    gram: tuple[tuple[Ball, ...], ...]
    determinant: Ball
    verdict: Verdict
    target_error: float
    relation: Optional[tuple[tuple[int, int], ...]] = Field(
        None, description="(point index, coefficient) pairs summing to the identity"
    )

    @model_validator(mode="after")
    def _verdict_matches_determinant(self):
        if self.verdict == Verdict.INDEPENDENT and not self.determinant.is_positive():
            raise ValueError("verdict 'independent' needs a strictly positive determinant")
        return self


# ~~~ FIXTURES ~~~
class FixtureExpectation(SqModel):
    curve: FamilyCurve
    points: tuple[CurvePoint, ...]
    quartic_leading: Rational
    jacobian: WeierstrassCurve
    distinguished_point: CurvePoint


class Fixture(SqModel):
    """A published specialization together with the values it must reproduce."""

    name: str
    params: SequenceParams
    y_scale: Rational = Fraction(1)
    expected: FixtureExpectation


# ~~~ JOBS ~~~
class Command(enum.Enum):
    CONSTRUCT = "construct"
    VERIFY = "verify"
    HEIGHTS = "heights"
    LIFT = "lift"


def parse_m_range(text: str) -> tuple[int, int]:
    """Parse "k" or "a..b" into an inclusive range."""
    start, sep, end = text.strip().partition("..")
    try:
        bounds = (int(start), int(end)) if sep else (int(start), int(start))
    except ValueError as e:
        raise ValueError(f"invalid m range {text!r}") from e
    if bounds[0] > bounds[1]:
        raise ValueError(f"empty m range {text!r}")
    if bounds == (0, 0):
        raise ValueError("m must be nonzero")
    return bounds


class JobConfig(SqModel):
    command: Command
    t: Optional[Rational] = None
    q: Optional[Rational] = None
    w: Optional[Rational] = None
    p: Optional[Rational] = None
    fixture: Optional[str] = None
    m_range: tuple[int, int] = (1, 1)
    y_scale: Optional[Rational] = None
    target_error: Optional[float] = Field(None, gt=0)
    digit_guard: Optional[int] = Field(None, gt=0)
    input: Optional[str] = None
    output: Optional[str] = None

    @field_validator("m_range", mode="before")
    @classmethod
    def _parse_range(cls, value: Any):
        if isinstance(value, str):
            return parse_m_range(value)
        if isinstance(value, int):
            return parse_m_range(str(value))
        return value

    @model_validator(mode="after")
    def _check(self):
        if self.m_range[0] > self.m_range[1] or self.m_range == (0, 0):
            raise ValueError("m range must be non-empty and exclude 0")
        if self.fixture is not None and self.fixture != "paper":
            raise ValueError(f"unknown fixture {self.fixture!r}")
        if self.y_scale == 0:
            raise ValueError("y_scale must be nonzero")
        return self

    @property
    def ms(self) -> list[int]:
        return [m for m in range(self.m_range[0], self.m_range[1] + 1) if m != 0]


# ~~~ FILE HELPERS ~~~
ModelT = TypeVar("ModelT", bound=SqModel)


def read_lines(source: str | Path | TextIO, model: Type[ModelT]) -> list[ModelT]:
    """Parse a JSON Lines stream of ``model`` objects. Blank lines are skipped."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            return read_lines(f, model)
    return [
        model.model_validate_json(line) for line in source.read().splitlines() if line.strip()
    ]


def write_lines(items: Iterable[SqModel], sink: str | Path | TextIO) -> None:
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as f:
            write_lines(items, f)
        return
    for item in items:
        sink.write(item.to_line() + "\n")
