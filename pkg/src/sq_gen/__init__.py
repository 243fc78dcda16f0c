from .sq_gen import SqGen, load_fixture
from .models import (
    CurvePoint,
    FamilyCurve,
    HyperellipticRecord,
    IndependenceCertificate,
    QuarticCurve,
    SequenceParams,
    SequenceRecord,
    Verdict,
    VerificationReport,
    WeierstrassCurve,
)
from .errors import SqGenError

__all__ = [
    "SqGen",
    "load_fixture",
    "CurvePoint",
    "FamilyCurve",
    "HyperellipticRecord",
    "IndependenceCertificate",
    "QuarticCurve",
    "SequenceParams",
    "SequenceRecord",
    "Verdict",
    "VerificationReport",
    "WeierstrassCurve",
    "SqGenError",
]
