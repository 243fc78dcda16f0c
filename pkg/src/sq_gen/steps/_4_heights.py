"""Canonical heights, the height-pairing Gram matrix and the independence certificate.

Heights use the normalization  h(x) = log max(|num x|, den x)  and
ĥ(P) = lim 4^-n h(x(2^n P)).

On an integral model y^2 = x^3 + Ax + B write x = X/Z in lowest terms and let

    F = X^4 - 2AX^2Z^2 - 8BXZ^3 + A^2Z^4,    G = 4Z(X^3 + AXZ^2 + BZ^3)

so that x(2P) = F/G. With g_n = gcd(F, G) along the doubling orbit,

    ĥ(P) = h(x_0) + sum_n 4^-(n+1) (log Phi(x_n) - log g_n),

where Phi = max(|F|, |G|) evaluated at (X, Z) scaled to max(|X|, |Z|) = 1.
g_n divides M = 4|4A^3 + 27B^2|, so the integer orbit is only needed modulo
a power of M (at most M^(N+1)), while Phi is evaluated along the real orbit
in ball arithmetic. The resultant identities

    (12X^2Z + 16AZ^3) F - (3X^3 - 5AXZ^2 - 27BZ^3) G = 4 Delta' Z^7
    f2 F + g2 G = 4 Delta' X^7

give a per-term bound T depending on (A, B) only, so the tail after N terms is
at most T 4^-N / 3.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

import mpmath as mp

from sq_gen.errors import NotOnCurve, SizeLimit, TorsionInput
from sq_gen.models import CurvePoint, IndependenceCertificate, Verdict, WeierstrassCurve
from sq_gen.utils.bounded_real import BoundedReal, ball_max, log_of_integer
from sq_gen.utils.curves import add, integral_model, is_torsion, scalar_mul, to_integral
from sq_gen.utils.exact_algebra import integer_digits

logger = logging.getLogger(__name__)

DEFAULT_TARGET_ERROR = 1e-8
DEFAULT_PRECISION = 192
MIN_PRECISION = 128
# precision may be doubled until it reaches this multiple of the starting value
MAX_PRECISION_FACTOR = 16
RELATION_BOUND = 5


class _PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class _DoublingForms:
    A: int
    B: int
    modulus: int  # M = 4 |4A^3 + 27B^2|
    term_bound: mp.mpf  # T

    @classmethod
    def of(cls, curve: WeierstrassCurve) -> "_DoublingForms":
        A, B = int(curve.alpha), int(curve.beta)
        delta = 4 * A**3 + 27 * B**2
        if delta == 0:
            raise ValueError("canonical height needs a nonsingular curve")
        modulus = 4 * abs(delta)

        sum_fg = max(1 + 2 * abs(A) + 8 * abs(B) + A * A, 4 + 4 * abs(A) + 4 * abs(B))
        s1 = (12 + 16 * abs(A)) + (3 + 5 * abs(A) + 27 * abs(B))
        s2 = (
            abs(4 * delta)
            + 4 * A * A * abs(B)
            + 4 * abs(A * (3 * A**3 + 22 * B * B))
            + 12 * abs(B * (A**3 + 8 * B * B))
            + A * A * abs(B)
            + abs(A * (5 * A**3 + 32 * B * B))
            + 2 * abs(B * (13 * A**3 + 96 * B * B))
            + 3 * A * A * abs(A**3 + 8 * B * B)
        )
        # log Phi lies in [log M - log max(s1, s2), log sum_fg] and 1 <= g <= M
        term_bound = max(log_of_integer(sum_fg).upper, log_of_integer(max(s1, s2)).upper)
        return cls(A=A, B=B, modulus=modulus, term_bound=term_bound)

    def exact(self, X: int, Z: int, mod: int) -> tuple[int, int]:
        A, B = self.A, self.B
        X2, Z2 = X * X, Z * Z
        F = (X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2) % mod
        G = (4 * Z * (X2 * X + A * X * Z2 + B * Z2 * Z)) % mod
        return F, G

    def real(self, X: BoundedReal, Z: BoundedReal) -> tuple[BoundedReal, BoundedReal]:
        A, B = self.A, self.B
        X2, Z2 = X * X, Z * Z
        F = X2 * X2 - X2 * Z2 * (2 * A) - X * Z2 * Z * (8 * B) + Z2 * Z2 * (A * A)
        G = Z * (X2 * X + X * Z2 * A + Z2 * Z * B) * 4
        return F, G


def _terms_needed(term_bound: mp.mpf, target_error: float) -> int:
    n = 0
    while term_bound * mp.power(4, -n) / 3 > mp.mpf(target_error) / 2:
        n += 1
    return n


def naive_height(point: CurvePoint) -> BoundedReal:
    """log max(|numerator(x)|, denominator(x)); the point at infinity has height 0."""
    if point.is_infinity:
        return BoundedReal(mp.mpf(0), mp.mpf(0))
    x = point.x
    return log_of_integer(max(abs(x.numerator), x.denominator))


def _orbit_gcds_mod(
    forms: _DoublingForms, X0: int, Z0: int, terms: int, mod: int
) -> Optional[list[int]]:
    """g_n along the orbit with (X_n, Z_n) kept modulo ``mod``, or None once mod runs short of M."""
    M = forms.modulus
    Xm, Zm = X0 % mod, Z0 % mod
    gcds = []
    for _ in range(terms):
        if mod % M:
            return None
        Fm, Gm = forms.exact(Xm, Zm, mod)
        g = gcd(gcd(Fm, Gm), M)
        mod //= g
        Xm, Zm = (Fm // g) % mod, (Gm // g) % mod
        gcds.append(g)
    return gcds


def orbit_gcds(
    forms: _DoublingForms,
    X0: int,
    Z0: int,
    terms: int,
    digit_guard: Optional[int] = None,
) -> list[int]:
    """gcd(F, G) for the first ``terms`` doublings of X0/Z0.

    Each g_n divides M, so the orbit is carried modulo M^k and k is doubled whenever
    the divisions use up the modulus. k = terms + 1 always suffices.
    """
    modulus_digits = integer_digits(forms.modulus)
    power = 2
    while True:
        digits = power * modulus_digits
        if digit_guard is not None and digits > digit_guard:
            raise SizeLimit(
                f"doubling orbit modulus needs {digits} digits, guard is {digit_guard}"
            )
        gcds = _orbit_gcds_mod(forms, X0, Z0, terms, forms.modulus**power)
        if gcds is not None:
            return gcds
        logger.debug(f"Orbit modulus M^{power} exhausted, retrying")
        power = min(2 * power, terms + 1)


def _orbit_sum(forms: _DoublingForms, X0: int, Z0: int, gcds: Sequence[int]) -> BoundedReal:
    if abs(X0) >= Z0:
        xr = BoundedReal.exact(1 if X0 > 0 else -1)
        zr = BoundedReal.exact(Fraction(Z0, abs(X0)))
    else:
        xr, zr = BoundedReal.exact(Fraction(X0, Z0)), BoundedReal.exact(1)

    total = log_of_integer(max(abs(X0), Z0))
    for n, g in enumerate(gcds):
        F, G = forms.real(xr, zr)
        size = ball_max(abs(F), abs(G))
        if not size.is_positive():
            raise _PrecisionExhausted("lost the scale of the doubling orbit")
        try:
            log_phi = size.log()
            xr, zr = F / size, G / size
        except (ValueError, ZeroDivisionError) as err:
            raise _PrecisionExhausted(str(err)) from err

        weight = BoundedReal(mp.power(4, -(n + 1)), mp.mpf(0))
        total = total + (log_phi - log_of_integer(g)) * weight
    return total


def canonical_height(
    point: CurvePoint,
    curve: WeierstrassCurve,
    target_error: float = DEFAULT_TARGET_ERROR,
    digit_guard: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
) -> BoundedReal:
    """Enclosure of ĥ(P) with radius at most target_error."""
    if not curve.contains(point):
        raise NotOnCurve(f"({point.x}, {point.y}) is not on the curve")
    if point.is_infinity:
        return BoundedReal(mp.mpf(0), mp.mpf(0))

    model, u = integral_model(curve)
    point = to_integral(point, u)
    forms = _DoublingForms.of(model)
    terms = _terms_needed(forms.term_bound, target_error)

    X0, Z0 = point.x.numerator, point.x.denominator
    gcds = orbit_gcds(forms, X0, Z0, terms, digit_guard)

    base = max(precision, MIN_PRECISION)
    bits = base
    while bits <= base * MAX_PRECISION_FACTOR:
        with mp.workprec(bits):
            tail = BoundedReal(
                mp.mpf(0), forms.term_bound * mp.power(4, -terms) / 3 * (1 + mp.ldexp(1, -40))
            )
            try:
                total = _orbit_sum(forms, X0, Z0, gcds)
            except _PrecisionExhausted as err:
                logger.debug(f"Height at {bits} bits failed ({err}), raising precision")
                bits *= 2
                continue
            if total.rad <= mp.mpf(target_error) * mp.mpf("0.499"):
                return total + tail
        logger.debug(f"Height radius {total.rad} too wide at {bits} bits")
        bits *= 2
    raise SizeLimit(f"height did not reach error {target_error} within {bits // 2} bits")


def pairing(
    heights: dict[int, BoundedReal],
    i: int,
    j: int,
    sum_height: BoundedReal,
) -> BoundedReal:
    """<P_i, P_j> = (ĥ(P_i + P_j) - ĥ(P_i) - ĥ(P_j)) / 2"""
    return (sum_height - heights[i] - heights[j]).scale(Fraction(1, 2))


def gram_matrix(
    points: Sequence[CurvePoint],
    curve: WeierstrassCurve,
    target_error: float = DEFAULT_TARGET_ERROR,
    digit_guard: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
) -> list[list[BoundedReal]]:
    def height(pt: CurvePoint) -> BoundedReal:
        return canonical_height(pt, curve, target_error, digit_guard, precision)

    heights = {i: height(pt) for i, pt in enumerate(points)}
    n = len(points)
    gram: list[list[Optional[BoundedReal]]] = [[None] * n for _ in range(n)]
    with mp.workprec(max(precision, MIN_PRECISION)):
        for i in range(n):
            gram[i][i] = heights[i]
            for j in range(i + 1, n):
                entry = pairing(heights, i, j, height(add(points[i], points[j], curve)))
                gram[i][j] = gram[j][i] = entry
    return gram


def regulator(gram: Sequence[Sequence[BoundedReal]]) -> BoundedReal:
    """Determinant by elimination with partial pivoting on |mid|.

    A pivot ball containing zero before the last column makes the result unbounded.
    """
    rows = [list(row) for row in gram]
    n = len(rows)
    det = BoundedReal.exact(1)
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(rows[r][col].mid))
        pivot = rows[pivot_row][col]
        if pivot.contains_zero() and col < n - 1:
            return BoundedReal.unbounded()
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = -det
        det = det * pivot
        if col == n - 1:
            break
        for r in range(col + 1, n):
            factor = rows[r][col] / pivot
            for k in range(col, n):
                rows[r][k] = rows[r][k] - factor * rows[col][k]
    return det


def _key(point: CurvePoint) -> tuple:
    return (point.x, point.y)


def find_relation(
    points: Sequence[CurvePoint],
    curve: WeierstrassCurve,
    bound: int = RELATION_BOUND,
) -> Optional[tuple[tuple[int, int], ...]]:
    """Search sum c_i P_i = O over at most three points with 0 < |c_i| <= bound."""
    coefficients = [c for c in range(-bound, bound + 1) if c != 0]
    multiples = [
        {c: scalar_mul(c, pt, curve) for c in coefficients} for pt in points
    ]
    lookup = [{_key(mult): c for c, mult in table.items()} for table in multiples]

    for i, j in combinations(range(len(points)), 2):
        for ci in coefficients:
            cj = lookup[j].get(_key(multiples[i][-ci]))
            if cj is not None:
                return ((i, ci), (j, cj))

    for i, j, k in combinations(range(len(points)), 3):
        for ci in coefficients:
            for cj in coefficients:
                partial = add(multiples[i][ci], multiples[j][cj], curve)
                ck = lookup[k].get(_key(partial.negate()))
                if ck is not None:
                    return ((i, ci), (j, cj), (k, ck))
    return None


def independence_certificate(
    points: Sequence[CurvePoint],
    curve: WeierstrassCurve,
    target_error: float = DEFAULT_TARGET_ERROR,
    digit_guard: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
    m: Optional[int] = None,
) -> IndependenceCertificate:
    for index, pt in enumerate(points):
        if not curve.contains(pt):
            raise NotOnCurve(f"point {index} is not on the curve")
        if is_torsion(pt, curve):
            raise TorsionInput(f"point {index} is a torsion point")

    gram = gram_matrix(points, curve, target_error, digit_guard, precision)
    with mp.workprec(max(precision, MIN_PRECISION)):
        det = regulator(gram)
        relation = None
        if det.is_positive():
            verdict = Verdict.INDEPENDENT
        else:
            relation = find_relation(points, curve)
            if relation is not None or det.is_negative():
                verdict = Verdict.DEPENDENT_SUSPECTED
            else:
                verdict = Verdict.INCONCLUSIVE
        logger.info(f"Regulator {det!r}, verdict {verdict.value}")
        return IndependenceCertificate(
            m=m,
            gram=tuple(tuple(row) for row in gram),
            determinant=det,
            verdict=verdict,
            target_error=target_error,
            relation=relation,
        )
