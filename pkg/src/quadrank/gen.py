"""Generators for the correlation-polytope matrix families.

Rows and columns are indexed by bitstrings x in {0,1}^n in lexicographic
order, i.e. by the integer whose binary expansion (first bit most
significant) is x. With s = x^T y:

    corB  (s - 1)^2          unique disjointness
    corM  (s - 1)(s - 2)
    corF  s (s - 1)
    lowrankA  s - 1          (may be negative)
    IP    s mod 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    DimensionCap,
    DomainTooSmall,
    NotIncreasing,
    ParseError,
    TwoNMinusOneComposite,
    WeightExceedsN,
)
from .exactla import RationalMatrix
from .numfield import is_prime

MAX_N = 14

FAMILIES = ("corB", "corM", "corF", "P", "IP", "fawziQ", "lowrankA")


@dataclass(frozen=True, order=True)
class BitIndex:
    n: int
    value: int
    weight: int = field(compare=False, default=-1)

    def __post_init__(self):
        if self.weight < 0:
            object.__setattr__(self, "weight", bin(self.value).count("1"))

    def bits(self) -> tuple[int, ...]:
        return tuple(self.value >> (self.n - 1 - i) & 1 for i in range(self.n))

    def __str__(self):
        return format(self.value, f"0{self.n}b") if self.n else ""


def bitstrings(n: int, weight: int | None = None) -> list[BitIndex]:
    """All x in {0,1}^n (optionally of one Hamming weight), lexicographically."""
    out = [BitIndex(n, v) for v in range(1 << n)]
    if weight is not None:
        out = [b for b in out if b.weight == weight]
    return out


def overlap(x: int, y: int) -> int:
    return bin(x & y).count("1")


_SLACK = {
    "B": lambda s: (s - 1) ** 2,
    "M": lambda s: (s - 1) * (s - 2),
    "F": lambda s: s * (s - 1),
}


def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise DomainTooSmall(f"n must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise DimensionCap(f"n = {n} exceeds the size cap 2^{MAX_N}")


def _overlap_matrix(values: list[int], f) -> RationalMatrix:
    rows = [[f(overlap(x, y)) for y in values] for x in values]
    return RationalMatrix.from_rows(rows)


def cor_slack(variant: str, n: int) -> RationalMatrix:
    """2^n x 2^n slack-type matrix: variant 'B', 'M' or 'F'."""
    if variant not in _SLACK:
        raise ValueError(f"unknown variant {variant!r}; expected B, M or F")
    _check_n(n)
    return _overlap_matrix(list(range(1 << n)), _SLACK[variant])


def nearest_prime(n: int) -> int:
    """Prime closest to n/2, the smaller one on ties."""
    if n < 4:
        raise DomainTooSmall(f"n = {n} < 4")
    best = None
    # distance |p - n/2| compared as |2p - n|
    for p in range(2, n + 1):
        if is_prime(p):
            d = abs(2 * p - n)
            if best is None or d < best[0]:
                best = (d, p)
    return best[1]


def matrix_P(n: int) -> tuple[RationalMatrix, int]:
    """Restriction of corM(n) to strings of weight p + 1, p = nearest_prime(n)."""
    if n < 4:
        raise DomainTooSmall(f"n = {n} < 4")
    p = nearest_prime(n)
    if p + 1 > n:
        raise WeightExceedsN(f"weight p + 1 = {p + 1} exceeds n = {n}")
    size = math.comb(n, p + 1)
    if size > 1 << MAX_N:
        raise DimensionCap(f"P_{n} has dimension {size}, above the cap 2^{MAX_N}")
    # enumerate the slice directly so n above the full-matrix cap stays cheap
    idx = sorted(sum(1 << (n - 1 - i) for i in c) for c in combinations(range(n), p + 1))
    return _overlap_matrix(idx, _SLACK["M"]), p


def weight_slice(n: int, weight: int) -> list[int]:
    return [b.value for b in bitstrings(n, weight)]


def ip_matrix(n: int) -> RationalMatrix:
    _check_n(n)
    return _overlap_matrix(list(range(1 << n)), lambda s: s % 2)


def fawzi_Q(ns) -> RationalMatrix:
    ns = list(ns)
    for i in range(1, len(ns)):
        if ns[i] <= ns[i - 1]:
            raise NotIncreasing(f"sequence must be strictly increasing: {ns}")
    for i, v in enumerate(ns):
        if not is_prime(2 * v - 1):
            raise TwoNMinusOneComposite(i, v)
    return RationalMatrix.from_rows([[a + b - 1 for b in ns] for a in ns])


def lowrank_A(n: int) -> RationalMatrix:
    _check_n(n)
    return _overlap_matrix(list(range(1 << n)), lambda s: s - 1)


def iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative integers."""
    if x < 2:
        return x
    r = int(round(x ** (1.0 / k))) if x.bit_length() < 1000 else 1 << (x.bit_length() // k + 1)
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class SizeBound:
    n: int
    p: int
    size: int
    bertrand_lower: int
    exp_lower: int
    bertrand_holds: bool
    exp_holds: bool


def size_bound_check(n: int) -> SizeBound:
    """Compare C(n, p+1) with C(n, ceil(n/3)) and ceil(size/2) with 3^(n/3 - 1).

    The exponential comparison is exact: ceil(size/2)^3 >= 3^(n-3).
    ``exp_lower`` is floor(3^(n/3 - 1)).
    """
    if n < 4:
        raise DomainTooSmall(f"n = {n} < 4")
    p = nearest_prime(n)
    size = math.comb(n, p + 1)
    bertrand = math.comb(n, -(-n // 3))
    half = -(-size // 2)
    return SizeBound(
        n=n,
        p=p,
        size=size,
        bertrand_lower=bertrand,
        exp_lower=iroot(3 ** (n - 3), 3),
        bertrand_holds=size >= bertrand,
        exp_holds=half ** 3 >= 3 ** (n - 3),
    )


@dataclass(frozen=True)
class MatrixSpec:
    family: str
    n: int = 0
    aux: tuple = ()

    def __str__(self):
        if self.family == "fawziQ":
            return "fawziQ:" + ",".join(map(str, self.aux))
        return f"{self.family}:{self.n}"


def looks_like_spec(text: str) -> bool:
    return text.split(":", 1)[0] in FAMILIES and ":" in text


def parse_spec(text: str) -> MatrixSpec:
    """Parse "corM:5", "P:10", "fawziQ:2,3,4", ..."""
    fam, sep, arg = text.strip().partition(":")
    if not sep or fam not in FAMILIES:
        raise ParseError(f"unknown matrix spec {text!r}; families: {', '.join(FAMILIES)}")
    try:
        if fam == "fawziQ":
            aux = tuple(int(a) for a in arg.split(",") if a.strip())
            if not aux:
                raise ValueError
            return MatrixSpec(fam, len(aux), aux)
        return MatrixSpec(fam, int(arg))
    except ValueError:
        raise ParseError(f"bad parameter in matrix spec {text!r}") from None


def generate(spec: MatrixSpec | str) -> RationalMatrix:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    fam = spec.family
    if fam in ("corB", "corM", "corF"):
        return cor_slack(fam[-1], spec.n)
    if fam == "P":
        return matrix_P(spec.n)[0]
    if fam == "IP":
        return ip_matrix(spec.n)
    if fam == "fawziQ":
        return fawzi_Q(spec.aux)
    if fam == "lowrankA":
        return lowrank_A(spec.n)
    raise ParseError(f"unknown family {fam!r}")
