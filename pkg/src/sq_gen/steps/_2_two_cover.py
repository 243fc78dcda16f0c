"""The quartic as a two-cover of its Jacobian y^2 = x^3 - 27Ix - 27J.

The quartic h^2 = Q(p) has the rational point (1 : sqrt(A) : 0) at infinity when A
is a square. Reversing p -> 1/p moves it to (0, sqrt(A)) on

    y^2 = E x^4 + D x^3 + C x^2 + B x + A,

and the classical map for quartics with a square constant term sends that curve to
a long Weierstrass model. Completing the square and cube and scaling by 2 gives
exactly the Jacobian model used here.
"""

from dataclasses import dataclass
from fractions import Fraction

from sq_gen.errors import ExceptionalPoint, NotASquare, NotOnCurve, SingularJacobian
from sq_gen.models import CurvePoint, QuarticCurve, QuarticInvariants, WeierstrassCurve
from sq_gen.utils.curves import scalar_mul
from sq_gen.utils.exact_algebra import rat_sqrt


def invariants(quartic: QuarticCurve) -> QuarticInvariants:
    A, B, C, D, E = quartic.A, quartic.B, quartic.C, quartic.D, quartic.E
    I = 12 * A * E - 3 * B * D + C * C  # noqa: E741
    J = 72 * A * C * E + 9 * B * C * D - 27 * A * D * D - 27 * B * B * E - 2 * C**3
    return QuarticInvariants(I=I, J=J)


def jacobian(quartic: QuarticCurve) -> WeierstrassCurve:
    inv = invariants(quartic)
    if inv.is_degenerate:
        raise SingularJacobian("4I^3 - J^2 vanishes, the quartic is singular")
    return WeierstrassCurve(alpha=-27 * inv.I, beta=-27 * inv.J)


def _sqrt_leading(quartic: QuarticCurve) -> Fraction:
    root = rat_sqrt(quartic.A) if quartic.A > 0 else None
    if root is None:
        raise NotASquare(f"leading coefficient {quartic.A} is not a rational square")
    return root


def distinguished_point(quartic: QuarticCurve) -> CurvePoint:
    """The point coming from (1 : sqrt(A) : 0), with A^{3/2} taken as sqrt(A)^3 for sqrt(A) > 0."""
    A, B, C, D = quartic.A, quartic.B, quartic.C, quartic.D
    root = _sqrt_leading(quartic)
    x = 3 * (3 * B * B - 8 * A * C) / (4 * A)
    y = 27 * (B**3 + 8 * A * A * D - 4 * A * B * C) / (8 * A * root)
    return CurvePoint(x=x, y=y)


@dataclass(frozen=True)
class _ReversedModel:
    """Coefficients of the reversed quartic y^2 = a x^4 + b x^3 + c x^2 + d x + s^2
    and of the long Weierstrass model it maps to."""

    s: Fraction
    c: Fraction
    d: Fraction
    a1: Fraction
    a3: Fraction
    b2: Fraction

    @classmethod
    def of(cls, quartic: QuarticCurve) -> "_ReversedModel":
        s = _sqrt_leading(quartic)
        b, c, d = quartic.D, quartic.C, quartic.B
        a1 = d / s
        a2 = c - d * d / (4 * s * s)
        a3 = 2 * s * b
        return cls(s=s, c=c, d=d, a1=a1, a3=a3, b2=a1 * a1 + 4 * a2)


def quartic_to_cubic(point: CurvePoint, quartic: QuarticCurve) -> CurvePoint:
    if not quartic.contains(point):
        raise NotOnCurve(f"({point.x}, {point.y}) is not on the quartic")
    if point.x == 0:
        raise ExceptionalPoint("p = 0 has no image under the reversed map")
    model = _ReversedModel.of(quartic)
    s, c, d = model.s, model.c, model.d

    x = 1 / point.x
    y = point.y * x * x
    X = (2 * s * (y + s) + d * x) / (x * x)
    Y = (4 * s * s * (y + s) + 2 * s * (d * x + c * x * x) - d * d * x * x / (2 * s)) / x**3

    U = 9 * X + Fraction(3, 4) * model.b2
    V = Fraction(27, 2) * (2 * Y + model.a1 * X + model.a3)
    return CurvePoint(x=U, y=V)


def cubic_to_quartic(point: CurvePoint, quartic: QuarticCurve) -> CurvePoint:
    if point.is_infinity:
        raise ExceptionalPoint("the identity maps to the point at infinity of the quartic")
    target = jacobian(quartic)
    if not target.contains(point):
        raise NotOnCurve(f"({point.x}, {point.y}) is not on the Jacobian")
    model = _ReversedModel.of(quartic)
    s, c, d = model.s, model.c, model.d

    X = (point.x - Fraction(3, 4) * model.b2) / 9
    Y = (Fraction(2, 27) * point.y - model.a1 * X - model.a3) / 2
    if Y == 0:
        raise ExceptionalPoint("intermediate ordinate vanishes")
    x = (2 * s * (X + c) - d * d / (2 * s)) / Y
    if x == 0:
        raise ExceptionalPoint("preimage lies at p = infinity")
    y = -s + x * (x * X - d) / (2 * s)
    return CurvePoint(x=1 / x, y=y / (x * x))


def quartic_points(quartic: QuarticCurve, seed: CurvePoint, count: int) -> list[CurvePoint]:
    """Up to ``count`` quartic points from k * image(seed), k = 1, 2, ...

    Multiples landing on an exceptional point are skipped.
    """
    target = jacobian(quartic)
    image = quartic_to_cubic(seed, quartic)
    points: list[CurvePoint] = []
    k = 1
    while len(points) < count and k <= 4 * count:
        try:
            points.append(cubic_to_quartic(scalar_mul(k, image, target), quartic))
        except ExceptionalPoint:
            pass
        k += 1
    return points
