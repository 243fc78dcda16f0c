from fractions import Fraction
from itertools import combinations

import mpmath as mp
import pytest

from sq_gen.errors import NotOnCurve, SizeLimit, TorsionInput
from sq_gen.models import CurvePoint, Verdict, WeierstrassCurve
from sq_gen.steps._4_heights import (
    _DoublingForms,
    _orbit_gcds_mod,
    _terms_needed,
    canonical_height,
    find_relation,
    gram_matrix,
    independence_certificate,
    naive_height,
    orbit_gcds,
    regulator,
)
from sq_gen.utils.bounded_real import BoundedReal, format_radius, parse_radius
from sq_gen.utils.curves import (
    INFINITY,
    add,
    family_to_weierstrass,
    integral_model,
    scalar_mul,
    to_integral,
)
from fixtures import E1_CURVE, E1_POINTS, sq  # noqa: F401

MORDELL = WeierstrassCurve(alpha=0, beta=-2)
GEN = CurvePoint(x=3, y=5)
CONGRUENT = WeierstrassCurve(alpha=-1, beta=0)

TARGET = 1e-6


@pytest.fixture(scope="module")
def e1_model():
    weierstrass, coordinates = family_to_weierstrass(E1_CURVE)
    return weierstrass, [coordinates.forward(pt) for pt in E1_POINTS]


def test_ball_arithmetic_encloses():
    third = BoundedReal.exact(Fraction(1, 3))
    assert third.contains(Fraction(1, 3))
    total = third + third + third
    assert total.contains(1)
    assert (third * 3).contains(1)
    assert (BoundedReal.exact(1) / 3).overlaps(third)
    assert BoundedReal.exact(-2).is_negative()
    assert BoundedReal.unbounded().contains_zero()
    with pytest.raises(ZeroDivisionError):
        third / BoundedReal(mp.mpf(0), mp.mpf(1))


@pytest.mark.parametrize("text", ["1.2345678e-9", "1.0000000e-3", "9.9999999e2", "0", "inf"])
def test_radius_text_is_canonical(text):
    assert format_radius(parse_radius(text)) == text


def test_radius_text_rounds_up():
    assert format_radius(mp.mpf(1) / 3) == "3.3333334e-1"
    ball = BoundedReal(mp.mpf(15), mp.mpf(1) / 3)
    assert BoundedReal.from_json(ball.to_json()).to_json() == ball.to_json()


def test_naive_height():
    assert naive_height(INFINITY).mid == 0
    height = naive_height(CurvePoint(x=Fraction(-7, 3), y=0))
    assert height.contains(mp.log(7))


def test_height_bounds_and_target_error(e1_model):
    curve, points = e1_model
    for point in points:
        height = canonical_height(point, curve, target_error=TARGET)
        assert height.rad <= TARGET
        assert 14 < height.mid < 16


def test_height_is_quadratic():
    h1 = canonical_height(GEN, MORDELL, target_error=TARGET)
    h2 = canonical_height(scalar_mul(2, GEN, MORDELL), MORDELL, target_error=TARGET)
    h3 = canonical_height(scalar_mul(3, GEN, MORDELL), MORDELL, target_error=TARGET)
    h4 = canonical_height(scalar_mul(4, GEN, MORDELL), MORDELL, target_error=TARGET)
    assert h1.is_positive()
    assert h2.overlaps(h1 * 4)
    assert h3.overlaps(h1 * 9)
    assert h4.overlaps(h1 * 16)
    assert canonical_height(GEN.negate(), MORDELL, target_error=TARGET).overlaps(h1)


def test_height_is_quadratic_on_e1(e1_model):
    curve, points = e1_model
    h1 = canonical_height(points[0], curve, target_error=TARGET)
    h4 = canonical_height(scalar_mul(4, points[0], curve), curve, target_error=TARGET)
    assert h4.overlaps(h1 * 16)


@pytest.mark.parametrize("i,j", list(combinations(range(5), 2)))
def test_parallelogram_law(e1_model, i, j):
    curve, points = e1_model
    p, q = points[i], points[j]

    def h(pt):
        return canonical_height(pt, curve, target_error=1e-4)

    left = h(add(p, q, curve)) + h(add(p, q.negate(), curve))
    right = (h(p) + h(q)) * 2
    assert left.overlaps(right)


def test_torsion_and_identity_have_zero_height():
    assert canonical_height(INFINITY, MORDELL).mid == 0
    height = canonical_height(CurvePoint(x=0, y=0), CONGRUENT, target_error=TARGET)
    assert height.contains(0)


def test_height_rejects_off_curve_and_guard():
    with pytest.raises(NotOnCurve):
        canonical_height(CurvePoint(x=1, y=1), MORDELL)
    with pytest.raises(SizeLimit):
        canonical_height(GEN, MORDELL, target_error=TARGET, digit_guard=5)


def test_gram_matrix_symmetric():
    points = [GEN, scalar_mul(2, GEN, MORDELL)]
    gram = gram_matrix(points, MORDELL, target_error=TARGET)
    assert gram[0][1] is gram[1][0]
    # <P, 2P> = 2 h(P)
    assert gram[0][1].overlaps(gram[0][0] * 2)


def test_regulator_of_known_matrix():
    exact = [[BoundedReal.exact(v) for v in row] for row in [[2, 1, 0], [1, 2, 1], [0, 1, 2]]]
    assert regulator(exact).contains(4)
    singular = [[BoundedReal.exact(v) for v in row] for row in [[1, 2], [2, 4]]]
    assert regulator(singular).contains_zero()


def test_e1_points_are_independent(e1_model):
    curve, points = e1_model
    certificate = independence_certificate(points, curve, target_error=TARGET, m=1)
    assert certificate.verdict == Verdict.INDEPENDENT
    assert certificate.determinant.is_positive()
    assert len(certificate.gram) == 5
    assert certificate.relation is None


def test_dependent_pairs(e1_model):
    curve, points = e1_model
    p = points[0]
    doubled = independence_certificate([p, scalar_mul(2, p, curve)], curve, target_error=TARGET)
    assert doubled.verdict == Verdict.DEPENDENT_SUSPECTED
    assert doubled.relation is not None

    negated = independence_certificate([p, p.negate()], curve, target_error=TARGET)
    assert negated.verdict == Verdict.DEPENDENT_SUSPECTED
    assert negated.relation is not None


def test_loose_target_is_inconclusive(e1_model):
    curve, points = e1_model
    certificate = independence_certificate(points, curve, target_error=1e3)
    assert certificate.verdict == Verdict.INCONCLUSIVE
    assert not certificate.determinant.is_positive()


def test_torsion_input_rejected():
    with pytest.raises(TorsionInput):
        independence_certificate([CurvePoint(x=0, y=0)], CONGRUENT)


def test_find_relation_on_generator_multiples():
    points = [GEN, scalar_mul(3, GEN, MORDELL), scalar_mul(-2, GEN, MORDELL)]
    relation = find_relation(points, MORDELL, bound=3)
    assert relation is not None
    total = INFINITY
    for index, coefficient in relation:
        total = add(total, scalar_mul(coefficient, points[index], MORDELL), MORDELL)
    assert total.is_infinity


def test_third_member_certified(sq):
    records, skipped = sq.construct_fixture(ms=[3])
    assert not skipped
    certificate = sq.certify(records[0])
    assert certificate.verdict == Verdict.INDEPENDENT
    assert all(entry.rad <= 2 * sq.target_error for row in certificate.gram for entry in row)


@pytest.mark.parametrize("dependent", [False, True])
def test_shrinking_target_never_turns_independent_into_dependent(e1_model, dependent):
    curve, points = e1_model
    if dependent:
        points = [points[0], scalar_mul(2, points[0], curve)]
    verdicts = [
        independence_certificate(points, curve, target_error=target).verdict
        for target in (1e3, 1.0, 1e-3, 1e-6)
    ]
    for before, after in zip(verdicts, verdicts[1:]):
        assert not (before == Verdict.INDEPENDENT and after == Verdict.DEPENDENT_SUSPECTED)
        if before == Verdict.INDEPENDENT:
            assert after == Verdict.INDEPENDENT
    expected = Verdict.DEPENDENT_SUSPECTED if dependent else Verdict.INDEPENDENT
    assert verdicts[-1] == expected


def test_orbit_gcds_match_full_modulus(e1_model):
    curve, points = e1_model
    model, u = integral_model(curve)
    forms = _DoublingForms.of(model)
    terms = _terms_needed(forms.term_bound, TARGET)
    for point in (points[0], scalar_mul(3, points[1], curve)):
        x = to_integral(point, u).x
        X0, Z0 = x.numerator, x.denominator
        full = _orbit_gcds_mod(forms, X0, Z0, terms, forms.modulus ** (terms + 1))
        assert orbit_gcds(forms, X0, Z0, terms) == full
        assert all(forms.modulus % g == 0 for g in full)
    with pytest.raises(SizeLimit):
        orbit_gcds(forms, X0, Z0, terms, digit_guard=10)
