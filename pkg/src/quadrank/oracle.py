"""Brute-force and constructive cross-checks for the rank bounds."""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionCap,
    DimensionMismatch,
    InconsistentEvidence,
    NegativeEntry,
    NonRationalEntries,
)
from .exactla import (
    FieldMatrix,
    RationalMatrix,
    SignMatrix,
    _eliminate,
    _integer_rows,
    apply_signs,
    entrywise_sqrt,
    rank,
    rational_rref,
)

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class BruteForceResult:
    min_rank: int
    witness: SignMatrix
    classes_enumerated: int
    exhausted: bool
    free_signs: int = 0


def _free_positions(W: RationalMatrix, reduce_symmetry: bool) -> tuple[list, list]:
    """Split nonzero positions into (fixed, free).

    Row and column negations preserve rank, so the signs on a spanning
    forest of the bipartite row/column support graph can be fixed to +.
    """
    nonzero = [(i, j) for i in range(W.rows) for j in range(W.cols) if W[i, j] != 0]
    if not reduce_symmetry:
        return [], nonzero
    adj: dict = {}
    for i, j in nonzero:
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    seen = set()
    tree = set()
    for start in [("r", i) for i in range(W.rows)] + [("c", j) for j in range(W.cols)]:
        if start in seen or start not in adj:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
                    i, j = (u[1], v[1]) if u[0] == "r" else (v[1], u[1])
                    tree.add((i, j))
    fixed = [pos for pos in nonzero if pos in tree]
    free = [pos for pos in nonzero if pos not in tree]
    return fixed, free


def _search_chunk(rows, ncols, primes, D, free, start, stop):
    """Minimum rank over Gray-code indices [start, stop) and the least sign vector."""
    best_rank, best_key = None, None
    for k in range(start, stop):
        g = k ^ (k >> 1)
        work = [list(r) for r in rows]
        key = []
        for b, (i, j) in enumerate(free):
            neg = g >> b & 1
            key.append(-1 if neg else 1)
            if neg:
                work[i][j] = [-v for v in work[i][j]]
        r = _eliminate(work, ncols, primes, D)
        key = tuple(key)
        if best_rank is None or r < best_rank or (r == best_rank and key < best_key):
            best_rank, best_key = r, key
    return best_rank, best_key


def _workers(requested):
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("QUADRANK_THREADS")
    return max(1, int(env)) if env else 1


def sqrt_rank_bruteforce(
    W: RationalMatrix,
    budget: int = DEFAULT_BUDGET,
    reduce_symmetry: bool = True,
    workers: int | None = None,
) -> BruteForceResult:
    """Exhaustive minimum of rank(S o sqrt(W)) over sign patterns S."""
    if not W.is_nonnegative():
        raise NegativeEntry("square root rank needs a nonnegative matrix")
    _, free = _free_positions(W, reduce_symmetry)
    count = 1 << len(free)
    if count > budget:
        raise BudgetExceeded(count, budget)
    root, _ = entrywise_sqrt(W)
    rows, primes, D = _integer_rows(root)
    nw = min(_workers(workers), count)
    if nw == 1:
        best_rank, best_key = _search_chunk(rows, W.cols, primes, D, free, 0, count)
    else:
        bounds = [count * w // nw for w in range(nw + 1)]
        with ProcessPoolExecutor(nw) as pool:
            futs = [
                pool.submit(_search_chunk, rows, W.cols, primes, D, free, bounds[w], bounds[w + 1])
                for w in range(nw)
            ]
            results = [f.result() for f in futs]
        best_rank, best_key = min(results)
    signs = {pos: s for pos, s in zip(free, best_key)}
    witness = SignMatrix.from_rows(
        [[signs.get((i, j), 1) for j in range(W.cols)] for i in range(W.rows)]
    )
    return BruteForceResult(
        min_rank=best_rank, witness=witness, classes_enumerated=count, exhausted=True, free_signs=len(free)
    )


def witness_rank(W: RationalMatrix, S: SignMatrix) -> int:
    root, _ = entrywise_sqrt(W)
    return rank(apply_signs(root, S))


# -------------------------------------------------------- nonnegative factors


@dataclass
class NonnegFactorization:
    terms: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.terms)

    def product(self, rows: int, cols: int) -> np.ndarray:
        total = np.zeros((rows, cols), dtype=object)
        for u, v in self.terms:
            total = total + np.outer(np.array(u, dtype=object), np.array(v, dtype=object))
        return total


def nonneg_factorization_F(n: int) -> NonnegFactorization:
    """sum of C(n, 2) nonnegative rank-one terms equal to F_n(x, y) = s(s - 1).

    With the new bit leading, F_{m+1} = [[F_m, F_m], [F_m, F_m + D_m]] and
    D_m = [2 x.y] = sum_i (2 x_i)(y_i); old terms are stacked twice and the
    m terms of D_m are placed on the bottom-right block.
    """
    if not 1 <= n <= 10:
        raise DimensionCap(f"n must lie in 1..10, got {n}")
    terms: list = []
    for m in range(1, n):
        size = 1 << m
        terms = [(u + u, v + v) for u, v in terms]
        for i in range(m):
            bit = m - 1 - i
            ind = [x >> bit & 1 for x in range(size)]
            terms.append(([0] * size + [2 * b for b in ind], [0] * size + ind))
    return NonnegFactorization(terms)


def verify_nonneg_factorization(f: NonnegFactorization, target: RationalMatrix) -> bool:
    for u, v in f.terms:
        if len(u) != target.rows or len(v) != target.cols:
            return False
        if any(x < 0 for x in u) or any(x < 0 for x in v):
            return False
    got = f.product(target.rows, target.cols)
    want = np.array(target.to_rows(), dtype=object).reshape(target.rows, target.cols)
    return bool((got == want).all())


# --------------------------------------------------------- rank-one PSD facts


@dataclass
class RankOnePsdFactorization:
    row_vectors: list
    col_vectors: list
    r: int

    def target(self) -> RationalMatrix:
        return RationalMatrix.from_rows(
            [[sum((a * b for a, b in zip(u, v)), Fraction(0)) ** 2 for v in self.col_vectors] for u in self.row_vectors]
        )

    def psd_trace(self, i: int, j: int) -> Fraction:
        """Tr(E_i F_j) with E_i = u u^T, F_j = v v^T, formed explicitly."""
        u, v = self.row_vectors[i], self.col_vectors[j]
        E = [[a * b for b in u] for a in u]
        F = [[a * b for b in v] for a in v]
        return sum((E[a][b] * F[b][a] for a in range(self.r) for b in range(self.r)), Fraction(0))


def rank_one_psd_from_sqrt(Bsigned) -> RankOnePsdFactorization:
    """Rank factorization B = U V^T over Q turned into rank-one PSD factors of B o B."""
    if isinstance(Bsigned, FieldMatrix):
        if not Bsigned.is_rational():
            raise NonRationalEntries("rank factorization is implemented over Q only")
        Bsigned = Bsigned.to_rational()
    R, pivots = rational_rref(Bsigned)
    r = len(pivots)
    U = [[Bsigned[i, c] for c in pivots] for i in range(Bsigned.rows)]
    V = [[R[k, j] for k in range(r)] for j in range(Bsigned.cols)]
    f = RankOnePsdFactorization(U, V, r)
    for i in range(Bsigned.rows):
        for j in range(Bsigned.cols):
            if sum((a * b for a, b in zip(U[i], V[j])), Fraction(0)) != Bsigned[i, j]:
                raise ArithmeticError(f"rank factorization failed at {(i, j)}")
    return f


# ---------------------------------------------------------------- bounds table


@dataclass
class BoundsReport:
    rank: int
    prank_lower: int
    rootrank_upper: int | None = None
    rootrank_lower: int | None = None
    rank_plus_upper: int | None = None

    @property
    def prank_upper(self) -> int | None:
        vals = [v for v in (self.rootrank_upper, self.rank_plus_upper) if v is not None]
        return min(vals) if vals else None

    def rows(self) -> list[tuple[str, str, str]]:
        def fmt(v):
            return "-" if v is None else str(v)

        return [
            ("rank", fmt(self.rank), "exact over Q"),
            ("prank_lower", fmt(self.prank_lower), "ceil(sqrt(rank))"),
            ("prank_upper", fmt(self.prank_upper), "min(rootrank_upper, rank_plus_upper)"),
            ("rootrank_lower", fmt(self.rootrank_lower), "certificate / exhaustive search"),
            ("rootrank_upper", fmt(self.rootrank_upper), "rank of a sign witness"),
            ("rank_plus_upper", fmt(self.rank_plus_upper), "verified nonnegative factorization"),
        ]

    def to_text(self) -> str:
        return "\n".join(f"{k:<16} {v:>8}   {note}" for k, v, note in self.rows())

    def to_kv(self) -> str:
        return "\n".join(f"{k}: {'' if v == '-' else v}" for k, v, _ in self.rows())


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def bounds_report(
    W: RationalMatrix,
    certificate=None,
    witness=None,
    factorization: NonnegFactorization | None = None,
    trivial_witness: bool = True,
) -> BoundsReport:
    """Collect the known bounds for W and check that they are mutually consistent.

    ``witness`` may be a SignMatrix or a BruteForceResult; without one the
    all-plus pattern (always valid) is used unless ``trivial_witness`` is off.
    """
    if not W.is_nonnegative():
        raise NegativeEntry("bounds need a nonnegative matrix")
    r = rank(W)
    rep = BoundsReport(rank=r, prank_lower=ceil_sqrt(r))
    if isinstance(witness, BruteForceResult):
        rep.rootrank_upper = witness_rank(W, witness.witness)
        if witness.exhausted:
            rep.rootrank_lower = witness.min_rank
        if rep.rootrank_upper != witness.min_rank:
            raise InconsistentEvidence("brute-force witness does not reproduce its rank")
    elif isinstance(witness, SignMatrix):
        rep.rootrank_upper = witness_rank(W, witness)
    elif trivial_witness:
        rep.rootrank_upper = witness_rank(W, SignMatrix.ones(W.rows, W.cols))
    if certificate is not None:
        if certificate.N != W.rows:
            raise InconsistentEvidence("certificate was issued for a different size")
        rep.rootrank_lower = max(rep.rootrank_lower or 0, certificate.bound)
    if factorization is not None:
        if not verify_nonneg_factorization(factorization, W):
            raise InconsistentEvidence("supplied nonnegative factorization does not reproduce W")
        rep.rank_plus_upper = factorization.size
    if rep.rootrank_lower is not None and rep.rootrank_upper is not None and rep.rootrank_lower > rep.rootrank_upper:
        raise InconsistentEvidence(f"rootrank lower {rep.rootrank_lower} > upper {rep.rootrank_upper}")
    if rep.prank_upper is not None and rep.prank_lower > rep.prank_upper:
        raise InconsistentEvidence(f"prank lower {rep.prank_lower} > upper {rep.prank_upper}")
    if rep.rank_plus_upper is not None and r > rep.rank_plus_upper:
        raise InconsistentEvidence(f"rank {r} exceeds nonnegative rank bound {rep.rank_plus_upper}")
    return rep
