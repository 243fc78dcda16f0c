from .bounded_real import BoundedReal
from .exact_algebra import RationalPolynomial, interpolate, parse_rational, format_rational

__all__ = [
    "BoundedReal",
    "RationalPolynomial",
    "interpolate",
    "parse_rational",
    "format_rational",
]
