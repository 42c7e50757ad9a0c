"""Sign-independent lower bounds on square root rank.

For a nonnegative integer matrix W whose diagonal is constantly p(p-1) for
a prime p, any B with B o B = W has diagonal +-sqrt(p(p-1)). Scaling row i
by +-1/sqrt(p-1) turns B into C = sqrt(p) I + A where every entry of A is
+-sqrt(W(i,j)/(p-1)). If those square roots only involve primes below p, A
lives in a field F that does not contain sqrt(p), the eigenvalue -sqrt(p)
of A has multiplicity at most N/2, and rank(B) = rank(C) >= ceil(N/2)
whatever the signs were. The checks here are exactly those hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product

import numpy as np

from .errors import (
    BadDiagonal,
    CapExceeded,
    DecompositionInvalid,
    DiagonalBlockNotUnit,
    DiagonalNotConstant,
    DiagonalNotPrimeForm,
    DimensionMismatch,
    NegativeEntry,
    NotIntegerMatrix,
    NotSquare,
    OffdiagEscapesSubfield,
)
from .exactla import (
    FieldMatrix,
    RationalMatrix,
    SignMatrix,
    apply_signs,
    charpoly,
    diag_scale,
    entrywise_sqrt,
    kronecker,
    matmul,
    rank,
)
from .numfield import (
    FieldElement,
    PrimeBasis,
    is_in_subfield,
    is_prime,
    prime_factors,
    restrict,
    sqrt_of_integer,
    sqrt_root_multiplicity,
    squarefree_part,
)

SIGMA_CAP = 10


def ceil_half(n: int) -> int:
    return (n + 1) // 2


def prime_from_diagonal(v: int) -> int | None:
    """The prime p with p(p-1) = v, if any."""
    disc = 1 + 4 * v
    r = math.isqrt(disc)
    if r * r != disc or (1 + r) % 2:
        return None
    p = (1 + r) // 2
    return p if is_prime(p) else None


@dataclass(frozen=True)
class SqrtRankCertificate:
    N: int
    p: int
    subfield: PrimeBasis
    bound: int
    checks: dict = field(default_factory=dict)
    sign_independent: bool = True

    @property
    def row_scale(self) -> str:
        """The diagonal scaling used to reach sqrt(p) I + A, as text."""
        return f"+-1/sqrt({self.p - 1})"

    def fields(self) -> list[tuple[str, str]]:
        return [
            ("N", str(self.N)),
            ("p", str(self.p)),
            ("bound", str(self.bound)),
            ("subfield", " ".join(map(str, self.subfield.primes))),
            ("row_scale", self.row_scale),
        ] + [(f"check.{k}", "pass" if v else "FAIL") for k, v in self.checks.items()]

    def to_text(self) -> str:
        lines = [
            f"N = {self.N}",
            f"p = {self.p}",
            f"bound = ceil(N/2) = {self.bound}",
            f"subfield = {self.subfield}  (sqrt({self.p}) not in it)",
            f"row scaling = {self.row_scale}",
        ]
        lines += [f"check {k}: {'pass' if v else 'FAIL'}" for k, v in self.checks.items()]
        lines.append(f"CERTIFIED rootrank >= {self.bound} (all sign patterns)")
        return "\n".join(lines)

    def to_kv(self) -> str:
        kv = self.fields() + [("certified", "true"), ("sign_independent", "true")]
        return "\n".join(f"{k}: {v}" for k, v in kv)


def structural_certificate(W: RationalMatrix) -> SqrtRankCertificate:
    """Certify rootrank(W) >= ceil(N/2) for every sign choice at once.

    Raises a CertificateRefused subclass naming the first hypothesis that
    fails. Work is O(N^2) small-integer factorizations.
    """
    if W.rows != W.cols:
        raise NotSquare(f"certificate needs a square matrix, got {W.shape}")
    if not W.is_integral():
        raise NotIntegerMatrix("entries must be integers")
    if not W.is_nonnegative():
        raise NegativeEntry("entries must be nonnegative")
    N = W.rows
    diag = {W[i, i] for i in range(N)}
    if len(diag) != 1:
        raise DiagonalNotConstant(f"diagonal entries vary: {sorted(int(v) for v in diag)[:6]}")
    v = int(diag.pop())
    p = prime_from_diagonal(v)
    if p is None:
        raise DiagonalNotPrimeForm(f"diagonal value {v} is not p(p-1) for a prime p")
    needed = set()
    seen = {}
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            w = int(W[i, j])
            if w == 0:
                continue
            if w not in seen:
                seen[w] = prime_factors(squarefree_part(w * (p - 1)))
                if any(q >= p for q in seen[w]):
                    raise OffdiagEscapesSubfield((i, j), w, seen[w])
            needed.update(seen[w])
    checks = {
        "diag_constant": True,
        "diag_value": True,
        "offdiag_subfield_membership": True,
    }
    return SqrtRankCertificate(
        N=N, p=p, subfield=PrimeBasis(tuple(sorted(needed))), bound=ceil_half(N), checks=checks
    )


def scale_to_form(Bsigned: FieldMatrix, p: int) -> FieldMatrix:
    """Left-scale rows by +-1/sqrt(p-1) so the diagonal becomes +sqrt(p)."""
    basis = Bsigned.basis
    try:
        target = sqrt_of_integer(basis, p * (p - 1))
        inv = sqrt_of_integer(basis, p - 1).invert()
    except Exception as exc:
        raise BadDiagonal(f"field {basis} cannot hold sqrt({p * (p - 1)}): {exc}") from None
    d = []
    for i, e in enumerate(Bsigned.diagonal()):
        if e == target:
            d.append(inv)
        elif e == -target:
            d.append(-inv)
        else:
            raise BadDiagonal(f"diagonal entry {i} is {e}, expected +-sqrt({p * (p - 1)})")
    return diag_scale(Bsigned, d, "left")


def signed_root(W: RationalMatrix, S: SignMatrix | None = None) -> FieldMatrix:
    root, _ = entrywise_sqrt(W)
    return root if S is None else apply_signs(root, S)


def rank_crosscheck(W: RationalMatrix, S: SignMatrix, p: int) -> int:
    """Exact rank of the scaled form of S o sqrt(W)."""
    return rank(scale_to_form(signed_root(W, S), p))


def sample_crosscheck(W: RationalMatrix, p: int, samples: int, seed: int = 0) -> list[int]:
    """Ranks for ``samples`` uniformly random sign matrices."""
    rng = np.random.default_rng(seed)
    root = signed_root(W)
    out = []
    for _ in range(samples):
        S = SignMatrix.random(W.rows, W.cols, rng)
        out.append(rank(scale_to_form(apply_signs(root, S), p)))
    return out


def split_form(C: FieldMatrix, p: int) -> FieldMatrix:
    """A = C - sqrt(p) I, re-keyed over the basis without p."""
    basis = C.basis
    rp = sqrt_of_integer(basis, p)
    sub = basis.without(p)
    entries = []
    for i in range(C.rows):
        for j in range(C.cols):
            e = C[i, j] - rp if i == j else C[i, j]
            entries.append(restrict(e, sub))
    return FieldMatrix(sub, C.rows, C.cols, tuple(entries))


def charpoly_multiplicity_bound(A: FieldMatrix, p: int) -> int:
    """Multiplicity k of -sqrt(p) in charpoly(A); nullity(sqrt(p) I + A) <= k <= N/2."""
    k = sqrt_root_multiplicity(charpoly(A), p)
    if k > A.rows // 2:
        raise ArithmeticError(f"multiplicity {k} exceeds N/2 for N = {A.rows}")
    return k


def slack_verify(n: int) -> bool:
    """(x.y - 1)(x.y - 2) == Tr((x x^T - 3 diag(x)) y y^T) + 2 >= 0 for all x, y."""
    if n > 10:
        raise CapExceeded(f"slack_verify limited to n <= 10, got {n}")
    vecs = [np.array(v, dtype=np.int64) for v in product((0, 1), repeat=n)]
    for x in vecs:
        facet = np.outer(x, x) - 3 * np.diag(x)
        for y in vecs:
            s = int(x @ y)
            lhs = (s - 1) * (s - 2)
            rhs = int(np.trace(facet @ np.outer(y, y))) + 2
            if lhs != rhs or rhs < 0:
                return False
    return True


# --------------------------------------------------------------- sigma family

PAULI_X = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.int64)
PAULI_Y = np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=np.int64)
PAULI_Z = np.diag([1, 1, -1, -1]).astype(np.int64)
I4 = np.eye(4, dtype=np.int64)


@dataclass(frozen=True)
class SigmaFamily:
    ell: int
    m: int
    matrices: tuple

    @property
    def size(self) -> int:
        return 4 ** self.m

    def anticommute(self) -> bool:
        perms = [_signed_perm(s) for s in self.matrices]
        for i in range(self.ell):
            for j in range(i + 1, self.ell):
                if perms[i] is not None and perms[j] is not None:
                    ab = _perm_product(perms[i], perms[j])
                    ba = _perm_product(perms[j], perms[i])
                    if not (np.array_equal(ab[0], ba[0]) and np.array_equal(ab[1], -ba[1])):
                        return False
                    continue
                a, b = self.matrices[i], self.matrices[j]
                if not np.array_equal(a @ b, -(b @ a)):
                    return False
        return True

    def squares_identity(self) -> bool:
        eye = np.eye(self.size, dtype=np.int64)
        for s in self.matrices:
            sp = _signed_perm(s)
            if sp is None:
                if not np.array_equal(s @ s, eye):
                    return False
                continue
            perm, sign = _perm_product(sp, sp)
            if not (np.array_equal(perm, np.arange(self.size)) and (sign == 1).all()):
                return False
        return True

    def entries_ok(self) -> bool:
        return all(np.isin(s, (-1, 0, 1)).all() for s in self.matrices)

    def combination(self, coeffs) -> np.ndarray:
        """sum_j coeffs[j] * sigma_j as an object array of Fractions."""
        total = np.zeros((self.size, self.size), dtype=object)
        for c, s in zip(coeffs, self.matrices):
            total = total + Fraction(c) * s.astype(object)
        return total

    def clifford_identity(self, coeffs) -> bool:
        """(sum a_j sigma_j)^2 == (sum a_j^2) I exactly, for rational a_j.

        Denominators are cleared first so the product runs over integers.
        """
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != self.ell:
            raise DimensionMismatch(f"{len(coeffs)} coefficients for {self.ell} matrices")
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs), 1)
        ints = [int(c * den) for c in coeffs]
        total = np.zeros((self.size, self.size), dtype=object)
        for c, s in zip(ints, self.matrices):
            total = total + c * s.astype(object)
        lhs = total.dot(total)
        rhs = sum(c * c for c in ints) * np.eye(self.size, dtype=np.int64).astype(object)
        return bool((lhs == rhs).all())

    def as_field(self, j: int, basis: PrimeBasis) -> FieldMatrix:
        return FieldMatrix.from_rows(basis, self.matrices[j].tolist())


def _signed_perm(a: np.ndarray):
    """(perm, sign) with a[i, perm[i]] = sign[i] when a is a signed permutation, else None."""
    nz = a != 0
    if not (nz.sum(axis=1) == 1).all() or not (nz.sum(axis=0) == 1).all():
        return None
    perm = nz.argmax(axis=1)
    sign = a[np.arange(a.shape[0]), perm]
    if not np.isin(sign, (-1, 1)).all():
        return None
    return perm, sign


def _perm_product(a, b):
    """Signed-permutation form of the product A B."""
    pa, sa = a
    pb, sb = b
    return pb[pa], sa * sb[pa]


def _kron_all(factors) -> np.ndarray:
    return reduce(np.kron, factors, np.ones((1, 1), dtype=np.int64))


def build_sigma(ell: int) -> SigmaFamily:
    """ell pairwise anticommuting involutions of size 4^ceil(ell/2).

    sigma_{2j+1} = Z^(x j) (x) Y (x) I4^(x (m-j-1))
    sigma_{2j+2} = Z^(x j) (x) X (x) I4^(x (m-j-1))
    """
    if not 1 <= ell <= SIGMA_CAP:
        raise CapExceeded(f"ell must lie in 1..{SIGMA_CAP}, got {ell}")
    m = -(-ell // 2)
    mats = []
    for j in range(m):
        for middle in (PAULI_Y, PAULI_X):
            mats.append(_kron_all([PAULI_Z] * j + [middle] + [I4] * (m - j - 1)))
    return SigmaFamily(ell=ell, m=m, matrices=tuple(mats[:ell]))


# ------------------------------------------------------------ decompositions


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def decomposition_from_psd_vectors(alphas, betas) -> list[RationalMatrix]:
    """N_{k1,k2}(x, y) = <alpha_x^{k1}, beta_y^{k2}>, listed with k1 major.

    ``alphas[x]`` holds the d vectors of E_x = sum_k a a^T, ``betas[y]``
    those of F_y; every vector has length d.
    """
    d = len(alphas[0]) if alphas else 0
    for group in list(alphas) + list(betas):
        if len(group) != d or any(len(v) != d for v in group):
            raise DimensionMismatch(f"every row/column needs {d} vectors of length {d}")
    out = []
    for k1 in range(d):
        for k2 in range(d):
            out.append(RationalMatrix.from_rows([[_dot(a[k1], b[k2]) for b in betas] for a in alphas]))
    return out


def psd_trace_matrix(alphas, betas) -> RationalMatrix:
    """A(x, y) = Tr(E_x F_y) evaluated from explicitly formed E_x, F_y."""
    def gram(vectors):
        d = len(vectors[0])
        return [[sum((Fraction(v[i]) * Fraction(v[j]) for v in vectors), Fraction(0)) for j in range(d)] for i in range(d)]

    Es = [gram(a) for a in alphas]
    Fs = [gram(b) for b in betas]
    rows = []
    for E in Es:
        row = []
        for F in Fs:
            d = len(E)
            row.append(sum((E[i][k] * F[k][i] for i in range(d) for k in range(d)), Fraction(0)))
        rows.append(row)
    return RationalMatrix.from_rows(rows)


def sum_of_squares(Ns) -> RationalMatrix:
    total = Ns[0].hadamard(Ns[0])
    for N in Ns[1:]:
        sq = N.hadamard(N)
        total = RationalMatrix(total.rows, total.cols, tuple(a + b for a, b in zip(total.entries, sq.entries)))
    return total


# ------------------------------------------------------------------ extension


@dataclass
class ExtensionReport:
    p: int
    N: int
    d: int
    sigma_size: int
    k_max: int
    ranks_B: list
    rank_C: int
    rank_C_exact: int | None
    diag_blocks_ok: bool
    offdiag_in_subfield: bool
    n: int | None = None

    @property
    def bound(self) -> int:
        return ceil_half(self.N)

    @property
    def holds(self) -> bool:
        return self.k_max * self.d ** 2 >= self.bound

    @property
    def conclusion(self) -> str:
        return f"k*{self.d ** 2} >= {self.bound}"

    def to_text(self) -> str:
        lines = [
            f"N = {self.N}, p = {self.p}, d = {self.d}, sigma size = {self.sigma_size}",
            f"diagonal blocks of DC equal sqrt({self.p})*I_{self.sigma_size}: {'yes' if self.diag_blocks_ok else 'NO'}",
            f"off-diagonal blocks of DC in subfield: {'yes' if self.offdiag_in_subfield else 'NO'}",
        ]
        if self.rank_C_exact is not None:
            lines.append(f"exact rank(C) = {self.rank_C_exact}")
        lines.append(f"ranks of B_j o sqrt(W): {self.ranks_B} (k_max = {self.k_max})")
        lines.append(f"rank(C) >= {self.rank_C}, conclude {self.conclusion}")
        lines.append(f"k_max*d^2 = {self.k_max * self.d ** 2} >= {self.bound}: {'yes' if self.holds else 'NO'}")
        return "\n".join(lines)

    def to_kv(self) -> str:
        kv = [
            ("N", self.N), ("p", self.p), ("d", self.d), ("sigma_size", self.sigma_size),
            ("diag_blocks_ok", str(self.diag_blocks_ok).lower()),
            ("offdiag_in_subfield", str(self.offdiag_in_subfield).lower()),
            ("rank_C_lower", self.rank_C),
            ("rank_C_exact", "" if self.rank_C_exact is None else self.rank_C_exact),
            ("ranks_B", " ".join(map(str, self.ranks_B))), ("k_max", self.k_max),
            ("conclusion", self.conclusion), ("holds", str(self.holds).lower()),
        ]
        return "\n".join(f"{k}: {v}" for k, v in kv)


def canonical_decomposition(W: RationalMatrix, d: int) -> list[RationalMatrix]:
    """B_1 = all ones, the other d^2 - 1 matrices zero."""
    ones = RationalMatrix(W.rows, W.cols, (Fraction(1),) * (W.rows * W.cols))
    zeros = RationalMatrix.zeros(W.rows, W.cols)
    return [ones] + [zeros] * (d * d - 1)


def extension_certify(Bs, W: RationalMatrix, p: int | None = None, exact_rank: bool = True) -> ExtensionReport:
    """Check the block construction behind k*d^2 >= ceil(N/2) exactly.

    C = sum_j (B_j o sqrt(W)) (x) sigma_j and D is block diagonal with blocks
    (1/sqrt(p-1)) sum_j B_j(i,i) sigma_j. DC must have diagonal blocks
    sqrt(p) I and off-diagonal blocks over the field without sqrt(p).
    """
    cert = structural_certificate(W)
    if p is not None and p != cert.p:
        raise BadDiagonal(f"matrix certifies with p = {cert.p}, not {p}")
    p = cert.p
    L = len(Bs)
    d = math.isqrt(L)
    if d * d != L or L == 0:
        raise DimensionMismatch(f"need d^2 matrices, got {L}")
    N = W.rows
    for B in Bs:
        if B.shape != W.shape:
            raise DimensionMismatch(f"B is {B.shape}, W is {W.shape}")
    for x in range(N):
        for y in range(N):
            if W[x, y] != 0:
                s = sum(B[x, y] ** 2 for B in Bs)
                if s != 1:
                    raise DecompositionInvalid((x, y), f"sum_j B_j{(x, y)}^2 = {s}, need 1 where W is nonzero")
    for i in range(N):
        if sum(B[i, i] ** 2 for B in Bs) != 1:
            raise DiagonalBlockNotUnit(f"sum_j B_j({i},{i})^2 != 1")

    sigma = build_sigma(L)
    s = sigma.size
    root, basis = entrywise_sqrt(W)
    sub = basis.without(p)
    sig = [sigma.as_field(j, basis) for j in range(L)]

    Ns = [B.to_field(basis).hadamard(root) for B in Bs]
    ranks_B = [rank(Nj) for Nj in Ns]
    C = None
    for Nj, sj, B in zip(Ns, sig, Bs):
        if not any(B.entries):
            continue
        Aj = kronecker(Nj, sj)
        C = Aj if C is None else C + Aj
    if C is None:
        C = FieldMatrix.zeros(basis, N * s, N * s)

    inv = sqrt_of_integer(basis, p - 1).invert()
    D_blocks = []
    for i in range(N):
        blk = FieldMatrix.zeros(basis, s, s)
        for B, sj in zip(Bs, sig):
            if B[i, i]:
                blk = blk + sj.scale(B[i, i])
        D_blocks.append(blk.scale(inv))
    # D_i^2 = I/(p-1), so D is invertible and rank(DC) = rank(C)
    scaled_eye = FieldMatrix.identity(basis, s).scale(Fraction(1, p - 1))
    for i, blk in enumerate(D_blocks):
        if matmul(blk, blk) != scaled_eye:
            raise DiagonalBlockNotUnit(f"block {i} of D is not invertible as expected")

    DC_rows = []
    for i in range(N):
        band = FieldMatrix(basis, s, C.cols, C.entries[i * s * C.cols:(i + 1) * s * C.cols])
        DC_rows.append(matmul(D_blocks[i], band))
    DC = FieldMatrix(basis, N * s, N * s, tuple(e for band in DC_rows for e in band.entries))

    rp = sqrt_of_integer(basis, p)
    diag_ok, off_ok = True, True
    for i in range(N):
        for a in range(s):
            for bi in range(N):
                for b in range(s):
                    e = DC[i * s + a, bi * s + b]
                    if bi == i:
                        want = rp if a == b else FieldElement.zero(basis)
                        if e != want:
                            diag_ok = False
                    elif not is_in_subfield(e, sub):
                        off_ok = False
    if not diag_ok:
        raise DiagonalBlockNotUnit(f"a diagonal block of DC differs from sqrt({p})*I")
    if not off_ok:
        raise OffdiagEscapesSubfield(None, None, (p,))

    bound_C = ceil_half(N * s)
    exact = rank(DC) if exact_rank else None
    if exact is not None and exact < bound_C:
        raise ArithmeticError(f"exact rank {exact} contradicts the certified bound {bound_C}")
    return ExtensionReport(
        p=p, N=N, d=d, sigma_size=s, k_max=max(ranks_B), ranks_B=ranks_B, rank_C=bound_C,
        rank_C_exact=exact, diag_blocks_ok=diag_ok, offdiag_in_subfield=off_ok,
    )
