"""Midpoint-radius ball arithmetic on top of mpmath.

Midpoints are rounded to nearest at the current ``mp.mp.prec``. Every operation
inflates the propagated radius by a relative ``4 * 2**-prec`` and adds
``2 * 2**-prec * |mid|`` for the rounding of the midpoint itself, so the true
value always stays inside the ball.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath as mp

Number = Union["BoundedReal", Fraction, int]

# significant digits written for midpoints and radii; TEXT_PRECISION bits hold MID_DIGITS exactly
MID_DIGITS = 40
RAD_DIGITS = 8
TEXT_PRECISION = 192


def _eps() -> mp.mpf:
    return mp.ldexp(mp.mpf(1), -mp.mp.prec)


def _widen(rad: mp.mpf, mid: mp.mpf) -> mp.mpf:
    eps = _eps()
    return rad * (1 + 4 * eps) + 2 * eps * abs(mid)


@dataclass(frozen=True)
class BoundedReal:
    mid: mp.mpf
    rad: mp.mpf

    def __post_init__(self):
        if self.rad < 0 or mp.isnan(self.rad):
            raise ValueError("ball radius must be a non-negative number")

    @classmethod
    def exact(cls, value: Union[Fraction, int]) -> "BoundedReal":
        value = Fraction(value)
        if value.denominator == 1:
            mid = mp.mpf(value.numerator)
        else:
            mid = mp.mpf(value.numerator) / value.denominator
        return cls(mid, 4 * _eps() * abs(mid))

    @classmethod
    def unbounded(cls) -> "BoundedReal":
        return cls(mp.mpf(0), mp.inf)

    @staticmethod
    def coerce(value: Number) -> "BoundedReal":
        if isinstance(value, BoundedReal):
            return value
        return BoundedReal.exact(value)

    @property
    def lower(self) -> mp.mpf:
        return self.mid - self.rad * (1 + 2 * _eps())

    @property
    def upper(self) -> mp.mpf:
        return self.mid + self.rad * (1 + 2 * _eps())

    @property
    def is_finite(self) -> bool:
        return mp.isfinite(self.rad) and mp.isfinite(self.mid)

    def contains_zero(self) -> bool:
        return not (self.lower > 0 or self.upper < 0)

    def is_positive(self) -> bool:
        return self.is_finite and self.lower > 0

    def is_negative(self) -> bool:
        return self.is_finite and self.upper < 0

    def overlaps(self, other: Number) -> bool:
        other = BoundedReal.coerce(other)
        return not (self.upper < other.lower or other.upper < self.lower)

    def contains(self, value: Union[Fraction, int, float]) -> bool:
        v = mp.mpf(value.numerator) / value.denominator if isinstance(value, Fraction) else mp.mpf(value)
        return self.lower <= v <= self.upper

    def __add__(self, other: Number) -> "BoundedReal":
        other = BoundedReal.coerce(other)
        mid = self.mid + other.mid
        return BoundedReal(mid, _widen(self.rad + other.rad, mid))

    __radd__ = __add__

    def __neg__(self) -> "BoundedReal":
        return BoundedReal(-self.mid, self.rad)

    def __sub__(self, other: Number) -> "BoundedReal":
        return self + (-BoundedReal.coerce(other))

    def __rsub__(self, other: Number) -> "BoundedReal":
        return BoundedReal.coerce(other) - self

    def __mul__(self, other: Number) -> "BoundedReal":
        other = BoundedReal.coerce(other)
        mid = self.mid * other.mid
        rad = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return BoundedReal(mid, _widen(rad, mid))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "BoundedReal":
        other = BoundedReal.coerce(other)
        if other.contains_zero():
            raise ZeroDivisionError("division by a ball containing zero")
        low = abs(other.mid) - other.rad
        mid = self.mid / other.mid
        rad = (self.rad + abs(mid) * other.rad) / low
        return BoundedReal(mid, _widen(rad, mid))

    def __rtruediv__(self, other: Number) -> "BoundedReal":
        return BoundedReal.coerce(other) / self

    def __abs__(self) -> "BoundedReal":
        if self.contains_zero():
            upper = abs(self.mid) + self.rad
            return BoundedReal(upper / 2, _widen(upper / 2, upper))
        return BoundedReal(abs(self.mid), self.rad)

    def scale(self, factor: Union[Fraction, int]) -> "BoundedReal":
        return self * BoundedReal.exact(factor)

    def log(self) -> "BoundedReal":
        low = self.mid - self.rad
        if low <= 0:
            raise ValueError("logarithm of a ball that is not strictly positive")
        mid = mp.log(self.mid)
        return BoundedReal(mid, _widen(self.rad / low, mid))

    def to_json(self) -> dict[str, str]:
        return {
            "mid": mp.nstr(self.mid, MID_DIGITS, strip_zeros=False),
            "rad": format_radius(self.rad),
        }

    @classmethod
    def from_json(cls, value: dict[str, str]) -> "BoundedReal":
        """Inverse of to_json: formatting a parsed ball gives back the same text."""
        mid = mp.mpf(value["mid"], prec=TEXT_PRECISION)
        return cls(mid, parse_radius(value["rad"]))

    def __repr__(self) -> str:
        return f"BoundedReal({mp.nstr(self.mid, 20)} ± {mp.nstr(self.rad, 5)})"


def ball_max(*balls: BoundedReal) -> BoundedReal:
    """Enclosure of max over the members of each ball."""
    lower = max(b.lower for b in balls)
    upper = max(b.upper for b in balls)
    mid = (lower + upper) / 2
    return BoundedReal(mid, _widen((upper - lower) / 2, mid))


def log_of_integer(n: int) -> BoundedReal:
    """log |n| for a nonzero integer of any size."""
    if n == 0:
        raise ValueError("log of zero")
    return BoundedReal.exact(abs(n)).log()


def _as_fraction(x: mp.mpf) -> Fraction:
    man, exp = x.man_exp
    return Fraction(man) * Fraction(2) ** exp


def format_radius(rad: mp.mpf) -> str:
    """rad rounded up to RAD_DIGITS significant digits, as "d.ddddddde<k>"."""
    if mp.isinf(rad):
        return "inf"
    exact = _as_fraction(mp.mpf(rad))
    if exact == 0:
        return "0"
    k = int(mp.floor(mp.log10(rad)))
    while Fraction(10) ** k > exact:
        k -= 1
    while Fraction(10) ** (k + 1) <= exact:
        k += 1
    digits = math.ceil(exact / Fraction(10) ** (k - RAD_DIGITS + 1))
    if digits == 10**RAD_DIGITS:
        digits //= 10
        k += 1
    text = str(digits)
    return f"{text[0]}.{text[1:]}e{k}"


def parse_radius(text: str) -> mp.mpf:
    """Rounds down, so format_radius(parse_radius(s)) == s for canonical s."""
    if text == "inf":
        return mp.inf
    return mp.mpf(text, prec=TEXT_PRECISION, rounding="f")
