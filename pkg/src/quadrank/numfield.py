"""Exact arithmetic in multiquadratic fields Q(sqrt p1, ..., sqrt pt).

An element is stored as a map from squarefree supports to nonzero rationals.
A support is a set of basis primes, encoded as the integer product of its
members (1 for the empty set), so that

    sqrt(s) * sqrt(t) = g * sqrt(s*t / g**2),    g = gcd(s, t).

Univariate polynomials over such a field live here too, together with the
procedure that counts how often x**2 - p divides a polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import (
    BasisMismatch,
    BasisTooLarge,
    DivisionByZero,
    DivisionByZeroPolynomial,
    DuplicateGenerator,
    NonPrimeGenerator,
    NotASubfield,
    OutsideField,
    ParseError,
    PrimeInsideField,
)

MAX_GENERATORS = 16

INFINITE = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (m, s) with n = m**2 * s and s squarefree; n = 0 gives (0, 1)."""
    if n < 0:
        raise ValueError("negative integer has no real square root")
    if n == 0:
        return 0, 1
    m, s = 1, 1
    for q, e in factorize(n).items():
        m *= q ** (e // 2)
        if e % 2:
            s *= q
    return m, s


def squarefree_part(n: int) -> int:
    return squarefree_decomposition(n)[1]


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorize(n))) if n > 1 else ()


@dataclass(frozen=True)
class PrimeBasis:
    """Generators of a multiquadratic field; the empty basis is Q."""

    primes: tuple[int, ...] = ()

    def __post_init__(self):
        ps = self.primes
        if any(not isinstance(p, int) for p in ps):
            raise NonPrimeGenerator(f"generators must be integers: {ps}")
        if list(ps) != sorted(set(ps)):
            raise DuplicateGenerator(f"basis must be strictly increasing: {ps}")
        for p in ps:
            if not is_prime(p):
                raise NonPrimeGenerator(f"{p} is not prime")
        if len(ps) > MAX_GENERATORS:
            raise BasisTooLarge(f"at most {MAX_GENERATORS} generators supported, got {len(ps)}")

    @property
    def degree(self) -> int:
        return 1 << len(self.primes)

    def __contains__(self, p) -> bool:
        return p in self.primes

    def __len__(self) -> int:
        return len(self.primes)

    def issubset(self, other: PrimeBasis) -> bool:
        return set(self.primes) <= set(other.primes)

    def union(self, *others) -> PrimeBasis:
        ps = set(self.primes)
        for o in others:
            ps.update(o.primes if isinstance(o, PrimeBasis) else o)
        return PrimeBasis(tuple(sorted(ps)))

    def without(self, p: int) -> PrimeBasis:
        return PrimeBasis(tuple(q for q in self.primes if q != p))

    def supports(self) -> list[int]:
        """All squarefree supports of the basis, ascending."""
        out = [1]
        for p in self.primes:
            out += [s * p for s in out]
        return sorted(out)

    def admits(self, support: int) -> bool:
        for p in self.primes:
            if support % p == 0:
                support //= p
        return support == 1

    def __str__(self):
        return "Q(" + ", ".join(f"sqrt{p}" for p in self.primes) + ")" if self.primes else "Q"


QQ = PrimeBasis(())


def field_make(primes) -> PrimeBasis:
    """Build a canonical basis from any iterable of primes (sorted, validated)."""
    ps = list(primes)
    for p in ps:
        if not isinstance(p, int) or not is_prime(p):
            raise NonPrimeGenerator(f"{p!r} is not a prime")
    if len(set(ps)) != len(ps):
        raise DuplicateGenerator(f"repeated generator in {ps}")
    return PrimeBasis(tuple(sorted(ps)))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot treat {type(x).__name__} as an exact rational")


class FieldElement:
    """Immutable element of a multiquadratic field.

    ``coeffs`` maps support integers to nonzero Fractions; the zero element
    has an empty map. Arithmetic with ints and Fractions coerces them into
    the same field.
    """

    __slots__ = ("basis", "coeffs", "_hash")

    def __init__(self, basis: PrimeBasis, coeffs=None, *, _trusted=False):
        self.basis = basis
        if _trusted:
            self.coeffs = coeffs
        else:
            clean = {}
            for s, c in (coeffs or {}).items():
                c = _as_fraction(c)
                if c == 0:
                    continue
                if s < 1 or squarefree_part(s) != s or not basis.admits(s):
                    raise OutsideField(
                        set(prime_factors(s)) - set(basis.primes),
                        f"support {s} is not a squarefree product of basis primes {basis.primes}",
                    )
                clean[s] = clean.get(s, Fraction(0)) + c
            self.coeffs = {s: c for s, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def rational(cls, basis: PrimeBasis, value) -> FieldElement:
        value = _as_fraction(value)
        return cls(basis, {1: value} if value else {}, _trusted=True)

    @classmethod
    def zero(cls, basis: PrimeBasis) -> FieldElement:
        return cls(basis, {}, _trusted=True)

    @classmethod
    def one(cls, basis: PrimeBasis) -> FieldElement:
        return cls(basis, {1: Fraction(1)}, _trusted=True)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.basis != self.basis:
                raise BasisMismatch(f"{self.basis} vs {other.basis}")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement.rational(self.basis, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return all(s == 1 for s in self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs.get(1, Fraction(0))

    def primes_used(self) -> set[int]:
        out = set()
        for s in self.coeffs:
            out.update(p for p in self.basis.primes if s % p == 0)
        return out

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, FieldElement) else other
        if other is NotImplemented:
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.basis.primes, frozenset(self.coeffs.items())))
        return self._hash

    def __neg__(self):
        return FieldElement(self.basis, {s: -c for s, c in self.coeffs.items()}, _trusted=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            v = out.get(s, 0) + c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return FieldElement(self.basis, out, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for s, a in self.coeffs.items():
            for t, b in other.coeffs.items():
                if s == 1 or t == 1:
                    g, key = 1, s * t
                else:
                    g = math.gcd(s, t)
                    key = (s // g) * (t // g)
                out[key] = out.get(key, 0) + a * b * g
        return FieldElement(self.basis, {s: c for s, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.invert()

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        result, base = FieldElement.one(self.basis), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, p: int) -> FieldElement:
        """Image under the automorphism sqrt(p) -> -sqrt(p)."""
        return FieldElement(
            self.basis,
            {s: (-c if s % p == 0 else c) for s, c in self.coeffs.items()},
            _trusted=True,
        )

    def split(self, p: int) -> tuple[FieldElement, FieldElement]:
        """Write self = x + y*sqrt(p) with x, y free of sqrt(p)."""
        x, y = {}, {}
        for s, c in self.coeffs.items():
            if s % p == 0:
                y[s // p] = c
            else:
                x[s] = c
        return FieldElement(self.basis, x, _trusted=True), FieldElement(self.basis, y, _trusted=True)

    def invert(self) -> FieldElement:
        """Multiplicative inverse by recursive conjugation over the generators."""
        if not self.coeffs:
            raise DivisionByZero("zero has no inverse")
        used = self.primes_used()
        if not used:
            return FieldElement.rational(self.basis, 1 / self.coeffs[1])
        p = max(used)
        x, y = self.split(p)
        denom = x * x - y * y * p
        # nonzero because sqrt(p) is not in the field generated by the other primes
        if not denom:
            raise ArithmeticError(f"norm vanished while inverting {self}")
        return self.conjugate(p) * denom.invert()

    def __float__(self):
        return float(sum(float(c) * math.sqrt(s) for s, c in self.coeffs.items()))

    def sign(self) -> int:
        """Exact sign of the real value."""
        if not self.coeffs:
            return 0
        if self.is_rational():
            return 1 if self.coeffs[1] > 0 else -1
        k = 0
        while True:
            lo, hi = _scaled_bounds(self, k)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            k += 8

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{self.coeffs[s]}*sqrt({s})" for s in sorted(self.coeffs))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"FieldElement({self.basis.primes}, {self.to_text()!r})"


def sqrt_of_integer(basis: PrimeBasis, n: int) -> FieldElement:
    """m*sqrt(s) for n = m**2 * s, provided every prime of s is a generator."""
    if n < 0:
        raise ValueError(f"negative input {n}")
    m, s = squarefree_decomposition(n)
    if m == 0:
        return FieldElement.zero(basis)
    missing = set(prime_factors(s)) - set(basis.primes)
    if missing:
        raise OutsideField(missing)
    return FieldElement(basis, {s: Fraction(m)}, _trusted=True)


def sqrt_of_rational(basis: PrimeBasis, q) -> FieldElement:
    """sqrt(a/b) = sqrt(a*b)/b."""
    q = _as_fraction(q)
    if q < 0:
        raise ValueError(f"negative input {q}")
    root = sqrt_of_integer(basis, q.numerator * q.denominator)
    return root * Fraction(1, q.denominator)


def multiply(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def subtract(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def negate(a: FieldElement) -> FieldElement:
    return -a


def invert(a: FieldElement) -> FieldElement:
    return a.invert()


def embed(a: FieldElement, larger: PrimeBasis) -> FieldElement:
    if not a.basis.issubset(larger):
        raise NotASubfield(f"{a.basis} is not contained in {larger}")
    return FieldElement(larger, dict(a.coeffs), _trusted=True)


def restrict(a: FieldElement, smaller: PrimeBasis) -> FieldElement:
    """Re-key an element over a smaller basis that still contains all its supports."""
    if not is_in_subfield(a, smaller):
        raise NotASubfield(f"{a} does not lie in {smaller}")
    return FieldElement(smaller, dict(a.coeffs), _trusted=True)


def is_in_subfield(a: FieldElement, sub: PrimeBasis) -> bool:
    return all(sub.admits(s) for s in a.coeffs)


def _scaled_bounds(a: FieldElement, k: int) -> tuple[Fraction, Fraction]:
    """Rational bounds lo <= a * 10**k <= hi, each term enclosed via isqrt."""
    lo = hi = Fraction(0)
    scale = 10 ** k
    for s, c in a.coeffs.items():
        if s == 1:
            lo += c * scale
            hi += c * scale
            continue
        r = math.isqrt(s * scale * scale)
        lower, upper = c * r, c * (r + 1)
        if c < 0:
            lower, upper = upper, lower
        lo += lower
        hi += upper
    return lo, hi


def _floor_scaled(a: FieldElement, k: int, offset: Fraction = Fraction(0)) -> int:
    """floor(a * 10**k + offset) for irrational a (never hits an integer)."""
    guard = 4
    while True:
        lo, hi = _scaled_bounds(a, k + guard)
        f_lo = math.floor(lo / 10 ** guard + offset)
        f_hi = math.floor(hi / 10 ** guard + offset)
        if f_lo == f_hi:
            return f_lo
        guard += 8


def _format_decimal(digits_int: int, point: int) -> str:
    """Render digits_int * 10**(-point) as a plain decimal string."""
    s = str(digits_int)
    if point <= 0:
        return s + "0" * (-point)
    if len(s) <= point:
        s = "0" * (point - len(s) + 1) + s
    return s[:-point] + "." + s[-point:]


def approximate(a: FieldElement, digits: int) -> str:
    """Decimal value rounded to ``digits`` significant digits, every digit exact."""
    if digits < 1:
        raise ValueError("digits must be positive")
    if not a.coeffs:
        return "0"
    negative = a.sign() < 0
    v = -a if negative else a
    if v.is_rational():
        q = v.rational_value()
        e = math.floor(math.log10(q.numerator) - math.log10(q.denominator))
        # correct the float estimate exactly
        while Fraction(10) ** e > q:
            e -= 1
        while Fraction(10) ** (e + 1) <= q:
            e += 1
        k = digits - 1 - e
        n = math.floor(q * Fraction(10) ** k + Fraction(1, 2))
    else:
        est = float(v)
        e = math.floor(math.log10(est)) if est > 0 else 0
        # leading integer part must have exactly ``digits`` digits
        while True:
            k = digits - 1 - e
            lead = _floor_scaled(v, k) if k >= 0 else _floor_scaled(v * Fraction(1, 10 ** -k), 0)
            if lead >= 10 ** digits:
                e += 1
            elif lead < 10 ** (digits - 1):
                e -= 1
            else:
                break
        half = Fraction(1, 2)
        n = _floor_scaled(v, k, half) if k >= 0 else _floor_scaled(v * Fraction(1, 10 ** -k), 0, half)
    if n >= 10 ** digits:
        n //= 10
        k -= 1
    out = _format_decimal(n, k)
    return "-" + out if negative else out


_TERM = re.compile(r"([+-]*)(\d+(?:/\d+)?)?(\*?sqrt\((\d+)\))?")


def parse_element(text: str, basis: PrimeBasis | None = None) -> FieldElement:
    """Parse the text form "c*sqrt(s) + ..." (whitespace-insensitive).

    Without a basis, the smallest basis holding every support is used.
    """
    src = "".join(text.split())
    if not src:
        raise ParseError("empty field element")
    terms = []
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError(f"cannot parse field element {text!r} at offset {pos}")
        if m.group(3) is not None and m.group(2) is not None and not m.group(3).startswith("*"):
            raise ParseError(f"missing '*' in {text!r}")
        sign = -1 if m.group(1).count("-") % 2 else 1
        if pos > 0 and not m.group(1):
            raise ParseError(f"missing '+' between terms in {text!r}")
        coef = Fraction(m.group(2)) if m.group(2) is not None else Fraction(1)
        rad = int(m.group(4)) if m.group(4) is not None else 1
        terms.append((sign * coef, rad))
        pos = m.end()
    if basis is None:
        primes = set()
        for _, rad in terms:
            primes.update(prime_factors(squarefree_part(rad)) if rad else ())
        basis = PrimeBasis(tuple(sorted(primes)))
    total = FieldElement.zero(basis)
    for c, rad in terms:
        total = total + sqrt_of_integer(basis, rad) * c
    return total


# ---------------------------------------------------------------- polynomials


class FieldPolynomial:
    """Polynomial with FieldElement coefficients, lowest degree first."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: PrimeBasis, coeffs=()):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.basis != basis:
                    raise BasisMismatch(f"coefficient over {c.basis}, polynomial over {basis}")
                cs.append(c)
            else:
                cs.append(FieldElement.rational(basis, c))
        while cs and not cs[-1]:
            cs.pop()
        self.basis = basis
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, basis: PrimeBasis) -> FieldPolynomial:
        return cls(basis, [0, 1])

    @classmethod
    def constant(cls, basis: PrimeBasis, c) -> FieldPolynomial:
        return cls(basis, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self) -> FieldElement:
        return self.coeffs[-1]

    def _check(self, other):
        if not isinstance(other, FieldPolynomial):
            other = FieldPolynomial(self.basis, [other])
        if other.basis != self.basis:
            raise BasisMismatch(f"{self.basis} vs {other.basis}")
        return other

    def __eq__(self, other):
        if not isinstance(other, FieldPolynomial):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, self.coeffs))

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = FieldElement.zero(self.basis)
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return FieldPolynomial(self.basis, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FieldPolynomial(self.basis, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if not self.coeffs or not other.coeffs:
            return FieldPolynomial(self.basis)
        out = [FieldElement.zero(self.basis)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return FieldPolynomial(self.basis, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = FieldPolynomial(self.basis, [1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        """Horner evaluation at a field element (or rational)."""
        if not isinstance(x, FieldElement):
            x = FieldElement.rational(self.basis, x)
        acc = FieldElement.zero(x.basis)
        for c in reversed(self.coeffs):
            acc = acc * x + embed(c, x.basis)
        return acc

    def embed(self, larger: PrimeBasis) -> FieldPolynomial:
        return FieldPolynomial(larger, [embed(c, larger) for c in self.coeffs])

    def __repr__(self):
        terms = [f"({c.to_text()})*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return "FieldPolynomial(" + (" + ".join(terms) or "0") + ")"


def poly_divmod(f: FieldPolynomial, g: FieldPolynomial) -> tuple[FieldPolynomial, FieldPolynomial]:
    """Euclidean division f = g*q + r with deg r < deg g."""
    if f.basis != g.basis:
        raise BasisMismatch(f"{f.basis} vs {g.basis}")
    if g.is_zero():
        raise DivisionByZeroPolynomial("division by the zero polynomial")
    basis = f.basis
    rem = list(f.coeffs)
    dg = g.degree
    if len(rem) - 1 < dg:
        return FieldPolynomial(basis), f
    lead_inv = g.leading().invert()
    quot = [FieldElement.zero(basis)] * (len(rem) - dg)
    for i in range(len(rem) - 1 - dg, -1, -1):
        c = rem[i + dg]
        if not c:
            continue
        c = c * lead_inv
        quot[i] = c
        for j, gc in enumerate(g.coeffs):
            if gc:
                rem[i + j] = rem[i + j] - c * gc
    return FieldPolynomial(basis, quot), FieldPolynomial(basis, rem[:dg])


def sqrt_root_multiplicity(q: FieldPolynomial, p: int):
    """Largest k with (x**2 - p)**k dividing q.

    With sqrt(p) outside the coefficient field this is the common multiplicity
    of +sqrt(p) and -sqrt(p) as roots of q. The zero polynomial yields INFINITE.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in q.basis:
        raise PrimeInsideField(f"sqrt({p}) already lies in {q.basis}")
    if q.is_zero():
        return INFINITE
    m = FieldPolynomial(q.basis, [-p, 0, 1])
    k = 0
    while q.degree >= 2:
        quot, rem = poly_divmod(q, m)
        if not rem.is_zero():
            break
        q = quot
        k += 1
    return k
