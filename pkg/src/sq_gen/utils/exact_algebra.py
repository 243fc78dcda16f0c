"""Exact rational helpers: square roots, small linear solves, dense polynomials and interpolation.

Everything here works on ``fractions.Fraction``. Floats only seed digit-count
estimates, which are then corrected exactly.
"""

import sys
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, log10
from typing import Iterable, Sequence, Union

from sq_gen.errors import (
    DomainError,
    DuplicateAbscissa,
    InconsistentData,
    SingularSystem,
)

RationalLike = Union[Fraction, int, str]

_LOG10_2 = log10(2)

# sizes are bounded by the digit guard, not by the interpreter's int/str limit
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "n/d" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse "n/d" or "n". Decimal points and exponents are rejected to keep inputs exact."""
    cleaned = text.strip().replace("−", "-")
    if not cleaned:
        raise ValueError("empty rational")
    if any(ch in cleaned for ch in ".eE"):
        raise ValueError(f"rational must be written as n/d, got {text!r}")
    numerator, sep, denominator = cleaned.partition("/")
    try:
        if not sep:
            return Fraction(int(numerator))
        if int(denominator) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(numerator), int(denominator))
    except ValueError as e:
        raise ValueError(f"invalid rational {text!r}: {e}") from e


def format_rational(value: Fraction) -> str:
    """Canonical "n/d" form. The denominator is always written, so 1 becomes "1/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def integer_digits(n: int) -> int:
    """Decimal digits of |n|, counted from its bit length."""
    n = abs(n)
    if n < 10:
        return 1
    digits = max(1, int((n.bit_length() - 1) * _LOG10_2) - 1)
    while 10**digits <= n:
        digits += 1
    return digits


def decimal_digits(value: Fraction) -> int:
    """Number of decimal digits of the larger of |numerator| and denominator."""
    value = Fraction(value)
    return integer_digits(max(abs(value.numerator), value.denominator))


def rat_sqrt(r: RationalLike) -> Fraction | None:
    r = to_rational(r)
    if r < 0:
        raise DomainError(f"square root of negative rational {r}")
    num_root = isqrt(r.numerator)
    den_root = isqrt(r.denominator)
    if num_root * num_root != r.numerator or den_root * den_root != r.denominator:
        return None
    return Fraction(num_root, den_root)


def _det3(m: Sequence[Sequence[Fraction]]) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def solve_linear_3(
    matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]
) -> tuple[Fraction, Fraction, Fraction]:
    """Solve a 3x3 system exactly by Cramer's rule."""
    if len(matrix) != 3 or any(len(row) != 3 for row in matrix) or len(rhs) != 3:
        raise ValueError("solve_linear_3 expects a 3x3 matrix and a 3-vector")
    m = [[to_rational(v) for v in row] for row in matrix]
    b = [to_rational(v) for v in rhs]

    det = _det3(m)
    if det == 0:
        raise SingularSystem("matrix is singular")

    solution = []
    for col in range(3):
        replaced = [
            [b[row] if j == col else m[row][j] for j in range(3)] for row in range(3)
        ]
        solution.append(_det3(replaced) / det)
    return solution[0], solution[1], solution[2]


@dataclass(frozen=True)
class RationalPolynomial:
    """Dense univariate polynomial, coefficients lowest degree first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [to_rational(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[RationalLike]) -> "RationalPolynomial":
        return cls(tuple(to_rational(c) for c in coefficients))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def evaluate(self, x: RationalLike) -> Fraction:
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPolynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(n))
        )

    def __mul__(self, other: Union["RationalPolynomial", Fraction, int]) -> "RationalPolynomial":
        if not isinstance(other, RationalPolynomial):
            scalar = to_rational(other)
            return RationalPolynomial(tuple(c * scalar for c in self.coefficients))
        if not self.coefficients or not other.coefficients:
            return RationalPolynomial(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    __rmul__ = __mul__


def interpolate(
    points: Sequence[tuple[RationalLike, RationalLike]], degree: int
) -> RationalPolynomial:
    """Lagrange interpolation through the first ``degree + 1`` points.

    Any further points are treated as checks and must lie on the result.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if len(points) < degree + 1:
        raise ValueError(
            f"need at least {degree + 1} points for degree {degree}, got {len(points)}"
        )
    pts = [(to_rational(x), to_rational(y)) for x, y in points]
    abscissae = [x for x, _ in pts]
    if len(set(abscissae)) != len(abscissae):
        raise DuplicateAbscissa("interpolation nodes must have distinct abscissae")

    nodes, extra = pts[: degree + 1], pts[degree + 1 :]
    result = RationalPolynomial(())
    for i, (xi, yi) in enumerate(nodes):
        basis = RationalPolynomial((Fraction(1),))
        denom = Fraction(1)
        for j, (xj, _) in enumerate(nodes):
            if j == i:
                continue
            basis = basis * RationalPolynomial((-xj, Fraction(1)))
            denom *= xi - xj
        result = result + basis * (yi / denom)

    for x, y in extra:
        if result.evaluate(x) != y:
            raise InconsistentData(
                f"sample ({x}, {y}) does not lie on the degree-{degree} interpolant"
            )
    return result
