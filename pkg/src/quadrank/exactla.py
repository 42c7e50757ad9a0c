"""Dense exact linear algebra over multiquadratic fields.

Rank is computed by fraction-free Gaussian elimination on integer coordinate
vectors. Each field entry is expanded into its 2**t coordinates (indexed by
the bitmask of generators in its support), rows are scaled to integers, and
after every elimination step a row is divided by the gcd of all its
coordinates. Scaling a row by a nonzero field element never changes rank, so
the pivot row is multiplied by the product of the pivot's conjugates to make
its pivot a rational integer before it is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

from .errors import (
    BasisMismatch,
    DimensionCapExceeded,
    DimensionMismatch,
    LengthMismatch,
    NegativeEntry,
    NotSquare,
    RaggedBlocks,
)
from .numfield import (
    FieldElement,
    FieldPolynomial,
    PrimeBasis,
    embed,
    prime_factors,
    sqrt_of_rational,
    squarefree_part,
)

CHARPOLY_CAP = 16


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} needs {self.rows * self.cols} entries")

    @classmethod
    def from_rows(cls, rows) -> RationalMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return self.rows, self.cols

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def hadamard(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return RationalMatrix(self.rows, self.cols, tuple(a * b for a, b in zip(self.entries, other.entries)))

    def submatrix(self, row_idx, col_idx) -> RationalMatrix:
        return RationalMatrix.from_rows([[self[i, j] for j in col_idx] for i in row_idx])

    def transpose(self) -> RationalMatrix:
        return RationalMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def to_field(self, basis: PrimeBasis = PrimeBasis(())) -> FieldMatrix:
        return FieldMatrix(
            basis, self.rows, self.cols, tuple(FieldElement.rational(basis, x) for x in self.entries)
        )


@dataclass(frozen=True)
class SignMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} needs {self.rows * self.cols} signs")
        if any(s not in (1, -1) for s in self.entries):
            raise ValueError("sign matrix entries must be +1 or -1")

    @classmethod
    def ones(cls, rows: int, cols: int) -> SignMatrix:
        return cls(rows, cols, (1,) * (rows * cols))

    @classmethod
    def from_rows(cls, rows) -> SignMatrix:
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(int(s) for r in rows for s in r))

    @classmethod
    def random(cls, rows: int, cols: int, rng) -> SignMatrix:
        """Uniform random signs; ``rng`` is a numpy Generator."""
        bits = rng.integers(0, 2, size=rows * cols)
        return cls(rows, cols, tuple(1 - 2 * int(b) for b in bits))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return self.rows, self.cols

    def to_text(self, support=None) -> str:
        """Rows of '+'/'-'; positions where ``support`` is zero print as '.'."""
        lines = []
        for i in range(self.rows):
            chars = []
            for j in range(self.cols):
                if support is not None and not support[i, j]:
                    chars.append(".")
                else:
                    chars.append("+" if self[i, j] > 0 else "-")
            lines.append("".join(chars))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> SignMatrix:
        rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
        return cls.from_rows([[-1 if ch == "-" else 1 for ch in r] for r in rows])


@dataclass(frozen=True)
class FieldMatrix:
    basis: PrimeBasis
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} needs {self.rows * self.cols} entries")
        for e in self.entries:
            if e.basis != self.basis:
                raise BasisMismatch(f"entry over {e.basis} in matrix over {self.basis}")

    @classmethod
    def from_rows(cls, basis: PrimeBasis, rows) -> FieldMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        entries = tuple(
            e if isinstance(e, FieldElement) else FieldElement.rational(basis, e) for r in rows for e in r
        )
        return cls(basis, len(rows), ncols, entries)

    @classmethod
    def zeros(cls, basis: PrimeBasis, rows: int, cols: int) -> FieldMatrix:
        z = FieldElement.zero(basis)
        return cls(basis, rows, cols, (z,) * (rows * cols))

    @classmethod
    def identity(cls, basis: PrimeBasis, n: int) -> FieldMatrix:
        one, zero = FieldElement.one(basis), FieldElement.zero(basis)
        return cls(basis, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return self.rows, self.cols

    def to_rows(self) -> list[list[FieldElement]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def primes_used(self) -> set[int]:
        out = set()
        for e in self.entries:
            out |= e.primes_used()
        return out

    def embed(self, larger: PrimeBasis) -> FieldMatrix:
        return FieldMatrix(larger, self.rows, self.cols, tuple(embed(e, larger) for e in self.entries))

    def rebase(self, basis: PrimeBasis) -> FieldMatrix:
        """Re-key over another basis that contains every support in use."""
        return FieldMatrix(basis, self.rows, self.cols, tuple(FieldElement(basis, e.coeffs) for e in self.entries))

    def shrink(self) -> FieldMatrix:
        """Same matrix over the smallest basis holding all its entries."""
        used = PrimeBasis(tuple(sorted(self.primes_used())))
        return self if used == self.basis else self.rebase(used)

    def is_rational(self) -> bool:
        return all(e.is_rational() for e in self.entries)

    def to_rational(self) -> RationalMatrix:
        return RationalMatrix(self.rows, self.cols, tuple(e.rational_value() for e in self.entries))

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        _check_same(self, other)
        return FieldMatrix(self.basis, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        _check_same(self, other)
        return FieldMatrix(self.basis, self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return FieldMatrix(self.basis, self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> FieldMatrix:
        return FieldMatrix(self.basis, self.rows, self.cols, tuple(a * c for a in self.entries))

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        return matmul(self, other)

    def hadamard(self, other) -> FieldMatrix:
        _check_same(self, other)
        return FieldMatrix(self.basis, self.rows, self.cols, tuple(a * b for a, b in zip(self.entries, other.entries)))

    def transpose(self) -> FieldMatrix:
        return FieldMatrix.from_rows(self.basis, [[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def diagonal(self) -> list[FieldElement]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> FieldMatrix:
        return FieldMatrix.from_rows(self.basis, [[self[i, j] for j in range(c0, c1)] for i in range(r0, r1)])


def _check_same(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    if a.basis != b.basis:
        raise BasisMismatch(f"{a.basis} vs {b.basis}")


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.basis != b.basis:
        raise BasisMismatch(f"{a.basis} vs {b.basis}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    zero = FieldElement.zero(a.basis)
    brows = b.to_rows()
    out = []
    for i in range(a.rows):
        acc = [zero] * b.cols
        for k in range(a.cols):
            aik = a[i, k]
            if not aik:
                continue
            for j, bkj in enumerate(brows[k]):
                if bkj:
                    acc[j] = acc[j] + aik * bkj
        out.extend(acc)
    return FieldMatrix(a.basis, a.rows, b.cols, tuple(out))


# ------------------------------------------------------------------ rank core


@lru_cache(maxsize=None)
def _mult_table(primes: tuple[int, ...]):
    """(mask_a, mask_b, mask_out, weight) for all coordinate pairs."""
    t = len(primes)
    weight = [math.prod(primes[i] for i in range(t) if m >> i & 1) for m in range(1 << t)]
    return tuple((a, b, a ^ b, weight[a & b]) for a in range(1 << t) for b in range(1 << t))


def _support_to_mask(primes: tuple[int, ...]) -> dict[int, int]:
    out = {}
    for m in range(1 << len(primes)):
        out[math.prod(primes[i] for i in range(len(primes)) if m >> i & 1)] = m
    return out


def _mul(x, y, table, D):
    out = [0] * D
    for a, b, o, w in table:
        xa = x[a]
        if xa:
            yb = y[b]
            if yb:
                out[o] += w * xa * yb
    return out


def _conj_cofactor(x, primes, table, D):
    """Product of all nontrivial conjugates of x, so x * result is rational."""
    result = [0] * D
    result[0] = 1
    for s in range(1, D):
        conj = [-v if bin(m & s).count("1") & 1 else v for m, v in enumerate(x)]
        result = _mul(result, conj, table, D)
    return result


def _integer_rows(M: FieldMatrix):
    """Integer coordinate rows (None for zero entries), each row scaled by a positive rational."""
    M = M.shrink()
    primes = M.basis.primes
    D = M.basis.degree
    tomask = _support_to_mask(primes)
    rows = []
    for r in M.to_rows():
        den = 1
        for e in r:
            for c in e.coeffs.values():
                den = den * c.denominator // math.gcd(den, c.denominator)
        row = []
        for e in r:
            if not e.coeffs:
                row.append(None)
                continue
            v = [0] * D
            for s, c in e.coeffs.items():
                v[tomask[s]] = c.numerator * (den // c.denominator)
            row.append(v)
        rows.append(row)
    return rows, primes, D


def _make_primitive(row):
    g = 0
    for e in row:
        if e is not None:
            g = math.gcd(g, *e)
            if g == 1:
                return row
    if g > 1:
        return [None if e is None else [v // g for v in e] for e in row]
    return row


def _eliminate(rows, ncols, primes, D):
    table = _mult_table(primes)
    nrows = len(rows)
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][c] is not None), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        P = rows[rank]
        pi = P[c]
        if any(pi[1:]):
            cof = _conj_cofactor(pi, primes, table, D)
            P = _make_primitive([None if e is None else _mul(cof, e, table, D) for e in P])
        n0 = P[c][0]
        tail = [(j, P[j]) for j in range(c + 1, ncols) if P[j] is not None]
        for r in range(rank + 1, nrows):
            R = rows[r]
            e = R[c]
            if e is None:
                continue
            R = list(R)
            R[c] = None
            if n0 != 1:
                for j in range(c + 1, ncols):
                    rj = R[j]
                    if rj is not None:
                        R[j] = [n0 * v for v in rj]
            if D == 1:
                e0 = e[0]
                for j, pj in tail:
                    rj = R[j]
                    v = -e0 * pj[0] if rj is None else rj[0] - e0 * pj[0]
                    R[j] = [v] if v else None
            else:
                for j, pj in tail:
                    t = _mul(e, pj, table, D)
                    rj = R[j]
                    if rj is None:
                        new = [-v for v in t]
                    else:
                        new = [a - b for a, b in zip(rj, t)]
                    R[j] = new if any(new) else None
            rows[r] = _make_primitive(R)
        rank += 1
    return rank


def rank(M) -> int:
    """Exact rank over the field of the entries (or over Q for RationalMatrix)."""
    if isinstance(M, RationalMatrix):
        M = M.to_field()
    if M.rows == 0 or M.cols == 0:
        return 0
    rows, primes, D = _integer_rows(M)
    return _eliminate(rows, M.cols, primes, D)


def rational_rref(M: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    rows = M.to_rows()
    pivots = []
    r = 0
    for c in range(M.cols):
        piv = next((i for i in range(r, M.rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(M.rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    return RationalMatrix.from_rows(rows) if rows else M, pivots


# ----------------------------------------------------------- other operations


def charpoly(M: FieldMatrix, cap: int = CHARPOLY_CAP) -> FieldPolynomial:
    """det(xI - M) via the Faddeev-LeVerrier recurrence.

    M_1 = I, c_{n-1} = -tr(M)
    M_k = M M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(M M_k) / k
    """
    if M.rows != M.cols:
        raise NotSquare(f"charpoly needs a square matrix, got {M.shape}")
    n = M.rows
    if n > cap:
        raise DimensionCapExceeded(f"charpoly capped at dimension {cap}, got {n}")
    basis = M.basis
    coeffs = [FieldElement.zero(basis)] * (n + 1)
    coeffs[n] = FieldElement.one(basis)
    if n == 0:
        return FieldPolynomial(basis, coeffs)
    ident = FieldMatrix.identity(basis, n)
    Mk = ident
    for k in range(1, n + 1):
        AM = matmul(M, Mk)
        tr = reduce(lambda a, b: a + b, AM.diagonal())
        ck = tr * Fraction(-1, k)
        coeffs[n - k] = ck
        Mk = AM + ident.scale(ck)
    return FieldPolynomial(basis, coeffs)


def entrywise_sqrt(W: RationalMatrix) -> tuple[FieldMatrix, PrimeBasis]:
    """Positive entrywise square roots over the smallest basis that holds them."""
    if any(x < 0 for x in W.entries):
        bad = next(i for i, x in enumerate(W.entries) if x < 0)
        raise NegativeEntry(f"entry {divmod(bad, W.cols)} = {W.entries[bad]} is negative")
    primes = set()
    cache = {}
    for x in W.entries:
        if x not in cache:
            cache[x] = squarefree_part(x.numerator * x.denominator) if x else 1
            primes.update(prime_factors(cache[x]))
    basis = PrimeBasis(tuple(sorted(primes)))
    roots = {x: sqrt_of_rational(basis, x) for x in cache}
    return FieldMatrix(basis, W.rows, W.cols, tuple(roots[x] for x in W.entries)), basis


def apply_signs(M: FieldMatrix, S: SignMatrix) -> FieldMatrix:
    if M.shape != S.shape:
        raise DimensionMismatch(f"{M.shape} vs signs {S.shape}")
    return FieldMatrix(
        M.basis, M.rows, M.cols, tuple(e if s > 0 else -e for e, s in zip(M.entries, S.entries))
    )


def kronecker(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    if A.basis != B.basis:
        raise BasisMismatch(f"{A.basis} vs {B.basis}; embed first")
    zero = FieldElement.zero(A.basis)
    out = []
    for i in range(A.rows):
        for k in range(B.rows):
            for j in range(A.cols):
                a = A[i, j]
                for l in range(B.cols):
                    b = B[k, l]
                    out.append(a * b if a and b else zero)
    return FieldMatrix(A.basis, A.rows * B.rows, A.cols * B.cols, tuple(out))


def diag_scale(M: FieldMatrix, d: Sequence[FieldElement], side: str = "left") -> FieldMatrix:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    need = M.rows if side == "left" else M.cols
    if len(d) != need:
        raise LengthMismatch(f"{len(d)} scalars for {need} {'rows' if side == 'left' else 'columns'}")
    d = [x if isinstance(x, FieldElement) else FieldElement.rational(M.basis, x) for x in d]
    out = []
    for i in range(M.rows):
        for j in range(M.cols):
            out.append(M[i, j] * (d[i] if side == "left" else d[j]))
    return FieldMatrix(M.basis, M.rows, M.cols, tuple(out))


def block_assemble(blocks) -> FieldMatrix:
    """Dense matrix from a grid (list of lists) of conformal FieldMatrix blocks."""
    grid = [list(r) for r in blocks]
    if not grid or not grid[0]:
        raise RaggedBlocks("empty block grid")
    ncb = len(grid[0])
    if any(len(r) != ncb for r in grid):
        raise RaggedBlocks("block rows have different lengths")
    basis = grid[0][0].basis
    heights = [r[0].rows for r in grid]
    widths = [b.cols for b in grid[0]]
    for bi, r in enumerate(grid):
        for bj, b in enumerate(r):
            if b.rows != heights[bi] or b.cols != widths[bj]:
                raise RaggedBlocks(f"block ({bi},{bj}) is {b.shape}, expected {(heights[bi], widths[bj])}")
            if b.basis != basis:
                raise BasisMismatch(f"block ({bi},{bj}) over {b.basis}, expected {basis}")
    out = []
    for bi, r in enumerate(grid):
        for i in range(heights[bi]):
            for b in r:
                out.extend(b.entries[i * b.cols:(i + 1) * b.cols])
    return FieldMatrix(basis, sum(heights), sum(widths), tuple(out))


def block_diagonal(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    basis = blocks[0].basis
    grid = [
        [b if i == j else FieldMatrix.zeros(basis, b.rows, blocks[j].cols) for j in range(len(blocks))]
        for i, b in enumerate(blocks)
    ]
    return block_assemble(grid)
