from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sq_gen.errors import ExceptionalPoint, NotASquare, NotOnCurve, SingularJacobian
from sq_gen.models import CurvePoint, QuarticCurve, QuarticInvariants, WeierstrassCurve
from sq_gen.steps._2_two_cover import (
    cubic_to_quartic,
    distinguished_point,
    invariants,
    jacobian,
    quartic_points,
    quartic_to_cubic,
)
from sq_gen.utils.curves import INFINITY, double, is_torsion, scalar_mul
from fixtures import (
    DISTINGUISHED,
    JACOBIAN_ALPHA,
    JACOBIAN_BETA,
    P,
    P_2,
    P_MINUS_1,
    QUARTIC_AT_1,
    RAW_H,
    SEED_IMAGE,
    quartic,  # noqa: F401
)


def test_jacobian_of_published_quartic(quartic):
    target = jacobian(quartic)
    assert target.alpha == JACOBIAN_ALPHA
    assert target.beta == JACOBIAN_BETA
    inv = invariants(quartic)
    assert -27 * inv.I == JACOBIAN_ALPHA


def test_discriminant_identity(quartic):
    inv = invariants(quartic)
    assert jacobian(quartic).discriminant == 2**4 * 3**9 * inv.discriminant_factor


def test_singular_quartic_rejected():
    # (p^2 - 1)^2 has repeated roots
    with pytest.raises(SingularJacobian):
        jacobian(QuarticCurve(A=1, B=0, C=-2, D=0, E=1))


def test_distinguished_point(quartic):
    point = distinguished_point(quartic)
    assert point == DISTINGUISHED
    assert jacobian(quartic).contains(point)


def test_distinguished_point_needs_square_leading():
    with pytest.raises(NotASquare):
        distinguished_point(QuarticCurve(A=2, B=0, C=1, D=0, E=1))


def test_seed_image(quartic):
    seed = CurvePoint(x=P, y=RAW_H)
    image = quartic_to_cubic(seed, quartic)
    target = jacobian(quartic)
    assert image == SEED_IMAGE
    assert image == double(DISTINGUISHED, target).negate()
    assert cubic_to_quartic(image, quartic) == seed


def test_multiples_round_trip(quartic):
    target = jacobian(quartic)
    image = quartic_to_cubic(CurvePoint(x=P, y=RAW_H), quartic)

    second = cubic_to_quartic(scalar_mul(2, image, target), quartic)
    assert second.x == P_2
    assert quartic.contains(second)
    assert quartic_to_cubic(second, quartic) == scalar_mul(2, image, target)

    inverse = cubic_to_quartic(image.negate(), quartic)
    assert inverse.x == P_MINUS_1
    assert quartic.contains(inverse)


def test_exceptional_points(quartic):
    with pytest.raises(ExceptionalPoint):
        cubic_to_quartic(INFINITY, quartic)
    # the distinguished point is where the inverse map degenerates
    with pytest.raises(ExceptionalPoint):
        cubic_to_quartic(DISTINGUISHED, quartic)


def test_off_curve_inputs(quartic):
    with pytest.raises(NotOnCurve):
        quartic_to_cubic(CurvePoint(x=P, y=RAW_H + 1), quartic)
    with pytest.raises(NotOnCurve):
        cubic_to_quartic(CurvePoint(x=0, y=1), quartic)


def test_quartic_fixture_matches_constants(quartic):
    assert quartic == QUARTIC_AT_1
    assert quartic.evaluate(Fraction(0)) == QUARTIC_AT_1.E


def test_quartic_points_sampling(quartic):
    seed = CurvePoint(x=P, y=RAW_H)
    points = quartic_points(quartic, seed, 3)
    assert len(points) == 3
    assert points[0] == seed
    assert points[1].x == P_2
    assert all(quartic.contains(pt) for pt in points)


def test_invariants_small_cases():
    inv = invariants(QuarticCurve(A=1, B=0, C=0, D=0, E=1))
    assert (inv.I, inv.J) == (12, 0)
    degenerate = invariants(QuarticCurve(A=1, B=0, C=0, D=0, E=0))
    assert (degenerate.I, degenerate.J) == (0, 0)
    assert degenerate.is_degenerate


def test_jacobian_and_point_of_biquadratic():
    quartic = QuarticCurve(A=1, B=0, C=0, D=0, E=1)
    target = jacobian(quartic)
    assert (target.alpha, target.beta) == (-324, 0)
    assert distinguished_point(quartic) == CurvePoint(x=0, y=0)


def test_distinguished_point_has_infinite_order(quartic):
    target = jacobian(quartic)
    assert not is_torsion(DISTINGUISHED, target)
    doubled = double(DISTINGUISHED, target)
    assert target.contains(doubled)
    assert scalar_mul(4, DISTINGUISHED, target) == double(doubled, target)


coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=10)
nonzero = coefficients.filter(lambda v: v != 0)


@st.composite
def quartics_through_a_point(draw):
    """A quartic with square leading coefficient and a rational point (p0, h0), p0 != 0."""
    root = draw(nonzero)
    B, C, D = draw(coefficients), draw(coefficients), draw(coefficients)
    p0, h0 = draw(nonzero), draw(coefficients)
    A = root * root
    E = h0 * h0 - (((A * p0 + B) * p0 + C) * p0 + D) * p0
    quartic = QuarticCurve(A=A, B=B, C=C, D=D, E=E)
    assume(not invariants(quartic).is_degenerate)
    return quartic, CurvePoint(x=p0, y=h0)


@settings(max_examples=20, deadline=None)
@given(quartics_through_a_point())
def test_distinguished_point_on_jacobian_random(sample):
    quartic, _ = sample
    assert jacobian(quartic).contains(distinguished_point(quartic))


@settings(max_examples=100, deadline=None)
@given(quartics_through_a_point())
def test_round_trip_random(sample):
    quartic, point = sample
    image = quartic_to_cubic(point, quartic)
    assert jacobian(quartic).contains(image)
    try:
        back = cubic_to_quartic(image, quartic)
    except ExceptionalPoint:
        assume(False)
    assert back == point


@settings(max_examples=50, deadline=None)
@given(I=coefficients, J=coefficients)
def test_discriminant_identity_random(I, J):  # noqa: E741
    inv = QuarticInvariants(I=I, J=J)
    curve = WeierstrassCurve(alpha=-27 * I, beta=-27 * J)
    assert curve.discriminant == 2**4 * 3**9 * inv.discriminant_factor
