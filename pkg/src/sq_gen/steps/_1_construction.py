from fractions import Fraction

from sq_gen.errors import DegenerateParameter, InconsistentData, SingularSystem
from sq_gen.models import FamilyCurve, QuarticCurve, YValues
from sq_gen.utils.exact_algebra import (
    RationalLike,
    RationalPolynomial,
    interpolate,
    rat_sqrt,
    solve_linear_3,
    to_rational,
)

# Coefficient polynomials in t of the (d, e, f, g) parametrization, lowest degree first.
_PQ_COEFF = RationalPolynomial.from_coefficients([65, 141, 111, 41, 6])
_PW_COEFF = RationalPolynomial.from_coefficients([20, 66, 66, 31, 6])
_LEADING_ROOT = RationalPolynomial.from_coefficients([140, 246, 166, 51, 6])

# Sample abscissae for recovering the quartic in p; the last one is a consistency check.
_QUARTIC_SAMPLES = (0, 1, 2, 3, 4, 5)


def is_degenerate(t: RationalLike) -> bool:
    """True when two of the five squares t^2, ..., (t+4)^2 coincide or 3t^2+6t+5 vanishes.

    Coinciding squares happen exactly when 2t is an integer in [-7, -1]; this set
    contains the roots of 1+t, 1+2t, 3+2t, 5+2t and of the 3x3 system determinant.
    """
    t = to_rational(t)
    twice = 2 * t
    if twice.denominator == 1 and -7 <= twice <= -1:
        return True
    return 3 * t * t + 6 * t + 5 == 0


def check_nondegenerate(t: RationalLike) -> Fraction:
    t = to_rational(t)
    if is_degenerate(t):
        raise DegenerateParameter(f"t={t} lies in the degeneracy set")
    return t


def leading_coefficient(t: RationalLike) -> Fraction:
    """(140 + 246t + 166t^2 + 51t^3 + 6t^4)^2, the p^4 coefficient of the quartic."""
    return _LEADING_ROOT(to_rational(t)) ** 2


def solve_abc(
    t: RationalLike, d: RationalLike, e: RationalLike, f: RationalLike
) -> FamilyCurve:
    """The curve y^2 = ax^3 + bx + c through (t^2, d), ((t+1)^2, e), ((t+2)^2, f)."""
    t = to_rational(t)
    rows = [[(t + i) ** 6, (t + i) ** 2, 1] for i in range(3)]
    rhs = [to_rational(v) ** 2 for v in (d, e, f)]
    try:
        a, b, c = solve_linear_3(rows, rhs)
    except SingularSystem as err:
        raise DegenerateParameter(f"t={t} makes the coefficient system singular") from err
    return FamilyCurve(a=a, b=b, c=c)


def g_squared(
    t: RationalLike, d: RationalLike, e: RationalLike, f: RationalLike
) -> Fraction:
    """Value of a(t+3)^6 + b(t+3)^2 + c, i.e. what g^2 must be for a fourth point."""
    t = to_rational(t)
    if (1 + t) * (1 + 2 * t) * (5 + 6 * t + 3 * t * t) == 0:
        raise DegenerateParameter(f"t={t} makes the four-term condition undefined")
    curve = solve_abc(t, d, e, f)
    return curve.y_squared((t + 3) ** 2)


def defg_parametrization(
    t: RationalLike, p: RationalLike, q: RationalLike, w: RationalLike
) -> YValues:
    t = check_nondegenerate(t)
    p, q, w = to_rational(p), to_rational(q), to_rational(w)

    k1 = (2 + t) * (5 + 2 * t) * (14 + 12 * t + 3 * t * t)
    k2 = 3 * (1 + t) * (5 + 2 * t) * (13 + 10 * t + 3 * t * t)
    k3 = 3 * (2 + t) * (1 + 2 * t) * (10 + 8 * t + 3 * t * t)
    pq = _PQ_COEFF(t)
    pw = _PW_COEFF(t)
    lead = _LEADING_ROOT(t)

    d = k1 * p * p + k2 * q * q - k3 * w * w - 6 * pq * p * q + 6 * pw * p * w
    e = -k1 * p * p - k2 * q * q - k3 * w * w + 2 * lead * p * q + 6 * pw * q * w
    f = -k1 * p * p + k2 * q * q + k3 * w * w - 2 * k2 * q * w + 2 * k1 * p * w
    g = -lead * p * p + 3 * (pq * q * q - pw * w * w)
    return YValues(d=d, e=e, f=f, g=g)


def curve_from_params(
    t: RationalLike, p: RationalLike, q: RationalLike, w: RationalLike
) -> tuple[FamilyCurve, YValues]:
    """Curve and y-values of the member selected by p."""
    values = defg_parametrization(t, p, q, w)
    return solve_abc(t, values.d, values.e, values.f), values


def h_squared(
    t: RationalLike, p: RationalLike, q: RationalLike, w: RationalLike
) -> Fraction:
    """a(t+4)^6 + b(t+4)^2 + c for the curve selected by (t, p, q, w)."""
    t = to_rational(t)
    curve, _ = curve_from_params(t, p, q, w)
    return curve.y_squared((t + 4) ** 2)


def quartic_from_params(
    t: RationalLike, q: RationalLike, w: RationalLike
) -> QuarticCurve:
    """Recover h^2 = Ap^4 + Bp^3 + Cp^2 + Dp + E by exact interpolation in p."""
    t = check_nondegenerate(t)
    samples = [(p, h_squared(t, p, q, w)) for p in _QUARTIC_SAMPLES]
    poly = interpolate(samples, degree=4)

    quartic = QuarticCurve(
        A=poly.coefficient(4),
        B=poly.coefficient(3),
        C=poly.coefficient(2),
        D=poly.coefficient(1),
        E=poly.coefficient(0),
    )
    if quartic.A != leading_coefficient(t):
        raise InconsistentData(
            f"leading coefficient {quartic.A} disagrees with the closed form at t={t}"
        )
    return quartic


def h_from_quartic(quartic: QuarticCurve, p: RationalLike) -> Fraction | None:
    """Non-negative h with h^2 = Q(p), or None when Q(p) is negative or not a square."""
    value = quartic.evaluate(p)
    if value < 0:
        return None
    return rat_sqrt(value)


def y_values(
    t: RationalLike, p: RationalLike, q: RationalLike, w: RationalLike
) -> YValues:
    """(d, e, f, g) plus the non-negative h when the fifth point is rational."""
    values = defg_parametrization(t, p, q, w)
    h = h_from_quartic(quartic_from_params(t, q, w), p)
    return values.model_copy(update={"h": h})
