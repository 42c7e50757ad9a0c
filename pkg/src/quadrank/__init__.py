"""Exact square-root-rank lower bounds over multiquadratic number fields."""

from .certify import (
    ExtensionReport,
    SqrtRankCertificate,
    build_sigma,
    extension_certify,
    scale_to_form,
    structural_certificate,
)
from .exactla import FieldMatrix, RationalMatrix, SignMatrix, charpoly, entrywise_sqrt, rank
from .gen import generate, matrix_P, parse_spec
from .numfield import (
    FieldElement,
    FieldPolynomial,
    PrimeBasis,
    field_make,
    parse_element,
    sqrt_root_multiplicity,
)
from .oracle import bounds_report, nonneg_factorization_F, sqrt_rank_bruteforce

__version__ = "0.1.0"

__all__ = [
    "ExtensionReport",
    "FieldElement",
    "FieldMatrix",
    "FieldPolynomial",
    "PrimeBasis",
    "RationalMatrix",
    "SignMatrix",
    "SqrtRankCertificate",
    "bounds_report",
    "build_sigma",
    "charpoly",
    "entrywise_sqrt",
    "extension_certify",
    "field_make",
    "generate",
    "matrix_P",
    "nonneg_factorization_F",
    "parse_element",
    "parse_spec",
    "rank",
    "scale_to_form",
    "sqrt_rank_bruteforce",
    "sqrt_root_multiplicity",
    "structural_certificate",
]
