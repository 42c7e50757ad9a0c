"""Seeded random instances for property checks and demos."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exactla import FieldMatrix, RationalMatrix
from .numfield import FieldElement, FieldPolynomial, PrimeBasis


def random_rational(rng, bound: int = 10 ** 6, allow_zero: bool = True) -> Fraction:
    while True:
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        if num or allow_zero:
            return Fraction(num, den)


def random_element(basis: PrimeBasis, rng, bound: int = 10 ** 6, density: float = 0.7) -> FieldElement:
    coeffs = {}
    for s in basis.supports():
        if rng.random() < density:
            coeffs[s] = random_rational(rng, bound)
    return FieldElement(basis, coeffs)


def random_nonzero_element(basis: PrimeBasis, rng, bound: int = 10 ** 6) -> FieldElement:
    while True:
        e = random_element(basis, rng, bound)
        if e:
            return e


def random_small_element(basis: PrimeBasis, rng, span: int = 3, density: float = 0.5) -> FieldElement:
    """Small integer coefficients, to keep exact elimination cheap."""
    coeffs = {}
    for s in basis.supports():
        if rng.random() < density:
            coeffs[s] = int(rng.integers(-span, span + 1))
    return FieldElement(basis, coeffs)


def random_field_matrix(basis: PrimeBasis, rows: int, cols: int, rng, span: int = 3) -> FieldMatrix:
    return FieldMatrix.from_rows(
        basis, [[random_small_element(basis, rng, span) for _ in range(cols)] for _ in range(rows)]
    )


def random_rational_matrix(rows: int, cols: int, rng, span: int = 5) -> RationalMatrix:
    return RationalMatrix.from_rows(
        [[int(rng.integers(-span, span + 1)) for _ in range(cols)] for _ in range(rows)]
    )


def random_polynomial(basis: PrimeBasis, degree: int, rng, span: int = 5) -> FieldPolynomial:
    coeffs = [random_small_element(basis, rng, span, density=0.6) for _ in range(degree)]
    lead = FieldElement.zero(basis)
    while not lead:
        lead = random_small_element(basis, rng, span, density=0.6)
    return FieldPolynomial(basis, coeffs + [lead])


def default_rng(seed: int = 0):
    return np.random.default_rng(seed)
