"""Exact group law on short Weierstrass curves and the family-curve isomorphism."""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

from sq_gen.errors import DegenerateModel, NotOnCurve
from sq_gen.models import CurvePoint, FamilyCurve, QuarticCurve, WeierstrassCurve

INFINITY = CurvePoint.infinity()

# Rational torsion orders never exceed 12.
TORSION_BOUND = 12

AnyCurve = Union[FamilyCurve, WeierstrassCurve, QuarticCurve]


@dataclass(frozen=True)
class CoordinateMap:
    """(x, y) -> (a x, a y) from y^2 = ax^3 + bx + c to Y^2 = X^3 + abX + a^2c."""

    scale: Fraction

    def forward(self, point: CurvePoint) -> CurvePoint:
        if point.is_infinity:
            return point
        return CurvePoint(x=self.scale * point.x, y=self.scale * point.y)

    def backward(self, point: CurvePoint) -> CurvePoint:
        if point.is_infinity:
            return point
        return CurvePoint(x=point.x / self.scale, y=point.y / self.scale)


def family_to_weierstrass(curve: FamilyCurve) -> tuple[WeierstrassCurve, CoordinateMap]:
    if curve.a == 0:
        raise DegenerateModel("y^2 = bx + c is not a cubic model")
    weierstrass = WeierstrassCurve(alpha=curve.a * curve.b, beta=curve.a**2 * curve.c)
    return weierstrass, CoordinateMap(scale=curve.a)


def is_on_curve(point: CurvePoint, curve: AnyCurve) -> bool:
    return curve.contains(point)


def discriminant(curve: WeierstrassCurve) -> Fraction:
    return curve.discriminant


def j_invariant(curve: WeierstrassCurve) -> Fraction:
    return curve.j_invariant


def negate(point: CurvePoint) -> CurvePoint:
    return point.negate()


def _require_on(curve: WeierstrassCurve, *points: CurvePoint) -> None:
    for point in points:
        if not curve.contains(point):
            raise NotOnCurve(f"({point.x}, {point.y}) is not on {curve!r}")


def _add(p: CurvePoint, q: CurvePoint, alpha: Fraction) -> CurvePoint:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return INFINITY
        slope = (3 * p.x * p.x + alpha) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)
    x3 = slope * slope - p.x - q.x
    y3 = slope * (p.x - x3) - p.y
    return CurvePoint(x=x3, y=y3)


def _mul(m: int, point: CurvePoint, alpha: Fraction) -> CurvePoint:
    if m < 0:
        m, point = -m, point.negate()
    result, addend = INFINITY, point
    while m:
        if m & 1:
            result = _add(result, addend, alpha)
        m >>= 1
        if m:
            addend = _add(addend, addend, alpha)
    return result


def add(p: CurvePoint, q: CurvePoint, curve: WeierstrassCurve) -> CurvePoint:
    _require_on(curve, p, q)
    return _add(p, q, curve.alpha)


def double(point: CurvePoint, curve: WeierstrassCurve) -> CurvePoint:
    return add(point, point, curve)


def scalar_mul(m: int, point: CurvePoint, curve: WeierstrassCurve) -> CurvePoint:
    """m * point by double-and-add; negative m gives -(|m| * point)."""
    _require_on(curve, point)
    return _mul(m, point, curve.alpha)


def is_torsion(point: CurvePoint, curve: WeierstrassCurve) -> bool:
    _require_on(curve, point)
    multiple = point
    for _ in range(TORSION_BOUND):
        if multiple.is_infinity:
            return True
        multiple = _add(multiple, point, curve.alpha)
    return False


def linear_combination(
    terms: list[tuple[int, CurvePoint]], curve: WeierstrassCurve
) -> CurvePoint:
    """Sum of coefficient * point over ``terms``."""
    total = INFINITY
    for coefficient, point in terms:
        total = _add(total, _mul(coefficient, point, curve.alpha), curve.alpha)
    return total


_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % d for d in range(2, int(p**0.5) + 1))]


def integral_model(curve: WeierstrassCurve) -> tuple[WeierstrassCurve, int]:
    """Isomorphic model (alpha u^4, beta u^6) with integer coefficients.

    u starts as the lcm of the denominators and small prime factors are
    stripped while the scaled coefficients stay integral. The result is not
    necessarily minimal.
    """
    u = lcm(curve.alpha.denominator, curve.beta.denominator)

    def integral(v: int) -> bool:
        return (curve.alpha * v**4).denominator == 1 and (curve.beta * v**6).denominator == 1

    for prime in _SMALL_PRIMES:
        while u % prime == 0 and integral(u // prime):
            u //= prime
    return WeierstrassCurve(alpha=curve.alpha * u**4, beta=curve.beta * u**6), u


def to_integral(point: CurvePoint, u: int) -> CurvePoint:
    if point.is_infinity:
        return point
    return CurvePoint(x=point.x * u * u, y=point.y * u**3)
