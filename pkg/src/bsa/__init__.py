"""Certificates of bounded, separated, antipodal point sets in normed spaces."""

from .certify import (
    BsaCertificate,
    Functional,
    MarginReport,
    PairCertificate,
    PointSet,
    certify_set,
    check_certificate,
    pair_margin,
    separation,
    transport_certificate,
)
from .errors import BsaError
from .spaces import INF, LpSpace, PolytopeSpace, dual_norm_eval, norm_eval, validate_space

__all__ = [
    "BsaCertificate",
    "BsaError",
    "Functional",
    "INF",
    "LpSpace",
    "MarginReport",
    "PairCertificate",
    "PointSet",
    "PolytopeSpace",
    "certify_set",
    "check_certificate",
    "dual_norm_eval",
    "norm_eval",
    "pair_margin",
    "separation",
    "transport_certificate",
    "validate_space",
]
