from fractions import Fraction

import pytest

from sq_gen import SqGen
from sq_gen.models import CurvePoint, FamilyCurve, QuarticCurve, SequenceParams
from sq_gen.steps._1_construction import quartic_from_params

# Published specialization t=1, q=81/40, w=1 with seed p=2201/2320.
T = Fraction(1)
Q = Fraction(81, 40)
W = Fraction(1)
P = Fraction(2201, 2320)
Y_SCALE = Fraction(-85323, 40)
RAW_H = Fraction(1317462069, 185600)

E1_CURVE = FamilyCurve(
    a=Fraction(42674183, 52786496000),
    b=Fraction(-612989889, 7540928000),
    c=Fraction(1180698375893607, 2487869785676800),
)
E1_POINTS = (
    CurvePoint(x=1, y=Fraction(-2367005, 3770464)),
    CurvePoint(x=4, y=Fraction(8455597, 18852320)),
    CurvePoint(x=9, y=Fraction(-10868031, 18852320)),
    CurvePoint(x=16, y=Fraction(-29720351, 18852320)),
    CurvePoint(x=25, y=Fraction(-62736289, 18852320)),
)

QUARTIC_AT_1 = QuarticCurve(
    A=370881,
    B=0,
    C=Fraction(1595645163, 200),
    D=Fraction(-3440253789, 50),
    E=Fraction(17309096677089, 160000),
)
JACOBIAN_ALPHA = Fraction(-147183268996968521373, 10000)
JACOBIAN_BETA = Fraction(171278570868444028577352480093, 250000)
DISTINGUISHED = CurvePoint(x=Fraction(-4786935489, 100), y=Fraction(-56568093052527, 50))
SEED_IMAGE = CurvePoint(
    x=Fraction(172409363217, 1600), y=Fraction(-37880026204096377, 64000)
)
P_2 = Fraction(113284563169318535576447, 44098663605971763995360)
P_MINUS_1 = Fraction(441065820871, 145548190480)


@pytest.fixture
def params():
    return SequenceParams(t=T, q=Q, w=W, p=P)


@pytest.fixture
def quartic():
    return quartic_from_params(T, Q, W)


@pytest.fixture
def sq():
    return SqGen(target_error=1e-8, digit_guard=100_000)


@pytest.fixture
def e1(sq):
    records, _ = sq.construct_fixture(ms=[1])
    return records[0]
