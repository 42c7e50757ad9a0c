"""Desk-scale acceptance checks, one function per criterion.

Each check returns a CriterionResult; ``run_all`` prints one PASS/FAIL line
per criterion. The same functions back ``quadrank selftest`` and
tests/test_acceptance.py.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .certify import (
    build_sigma,
    canonical_decomposition,
    ceil_half,
    decomposition_from_psd_vectors,
    extension_certify,
    psd_trace_matrix,
    sample_crosscheck,
    slack_verify,
    structural_certificate,
    sum_of_squares,
)
from .errors import CertificateRefused
from .exactla import FieldMatrix, RationalMatrix, entrywise_sqrt, rank
from .gen import cor_slack, fawzi_Q, ip_matrix, lowrank_A, matrix_P, size_bound_check
from .numfield import (
    FieldElement,
    FieldPolynomial,
    PrimeBasis,
    field_make,
    parse_element,
    poly_divmod,
    sqrt_of_integer,
    sqrt_root_multiplicity,
)
from .oracle import nonneg_factorization_F, sqrt_rank_bruteforce, verify_nonneg_factorization
from .sampling import (
    default_rng,
    random_field_matrix,
    random_nonzero_element,
    random_polynomial,
    random_small_element,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number, title):
    def wrap(fn):
        def run(**kw) -> CriterionResult:
            t0 = time.perf_counter()
            passed, detail = fn(**kw)
            return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - t0)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


CERT_CASES = {4: (2, 2), 6: (3, 8), 8: (3, 35), 10: (5, 105)}


@_timed(1, "structural certificates for P_n")
def criterion_1():
    parts, ok = [], True
    for n, (p_want, bound_want) in CERT_CASES.items():
        t0 = time.perf_counter()
        W, p = matrix_P(n)
        cert = structural_certificate(W)
        dt = time.perf_counter() - t0
        good = cert.p == p == p_want and cert.bound == bound_want and dt < 10 and cert.sign_independent
        ok &= good
        parts.append(f"n={n}: p={cert.p} bound={cert.bound}")
    return ok, "; ".join(parts)


@_timed(2, "sign-sampled rank cross-check")
def criterion_2(samples: int = 50):
    total, passed, parts = 0, 0, []
    ok = True
    for n in (6, 8):
        t0 = time.perf_counter()
        W, p = matrix_P(n)
        bound = structural_certificate(W).bound
        ranks = sample_crosscheck(W, p, samples, seed=n)
        dt = time.perf_counter() - t0
        total += len(ranks)
        passed += sum(r >= bound for r in ranks)
        if n == 8 and dt >= 300:
            ok = False
        parts.append(f"n={n}: min rank {min(ranks)} >= {bound} ({dt:.0f}s)")
    ok &= passed == total == 2 * samples
    return ok, f"{passed}/{total}; " + "; ".join(parts)


def _small_certifiable(rng, count=6):
    """Random 4x4 matrices with diagonal 6 (p = 3) and off-diagonal in {0,1,2,4,8}."""
    out = []
    for _ in range(count):
        rows = [[6 if i == j else int(rng.choice([0, 1, 2, 4, 8])) for j in range(4)] for i in range(4)]
        out.append(RationalMatrix.from_rows(rows))
    return out


@_timed(3, "brute-force oracle agreement")
def criterion_3():
    W4, _ = matrix_P(4)
    r4 = sqrt_rank_bruteforce(W4)
    Q = fawzi_Q([2, 3, 4])
    rq = sqrt_rank_bruteforce(Q)
    rank_q = rank(Q)
    ok = r4.exhausted and r4.min_rank == 4 and rq.exhausted and rq.min_rank == 3 and rank_q == 2
    pairs = [W4, RationalMatrix.from_rows([[6, 2], [2, 6]]),
             RationalMatrix.from_rows([[6, 2, 0], [2, 6, 2], [0, 2, 6]])]
    pairs += _small_certifiable(default_rng(3))
    agree = 0
    for W in pairs:
        cert = structural_certificate(W)
        res = sqrt_rank_bruteforce(W)
        agree += res.exhausted and res.min_rank >= cert.bound
    ok &= agree == len(pairs)
    return ok, (
        f"P_4 -> {r4.min_rank}, fawziQ(2,3,4) -> {rq.min_rank} with rank(Q) = {rank_q}; "
        f"oracle >= certificate on {agree}/{len(pairs)}"
    )


def linear_root_multiplicity(q: FieldPolynomial, root: FieldElement) -> int:
    """Multiplicity of ``root`` by repeated division by (x - root) over root's field."""
    q = q.embed(root.basis)
    lin = FieldPolynomial(root.basis, [-root, 1])
    k = 0
    while q.degree >= 1:
        quot, rem = poly_divmod(q, lin)
        if not rem.is_zero():
            break
        q, k = quot, k + 1
    return k


@_timed(4, "+-sqrt(p) multiplicity symmetry")
def criterion_4(count: int = 200):
    rng = default_rng(4)
    cases = [(PrimeBasis(()), (2, 3, 5)), (field_make([2]), (3, 5, 7))]
    bad = 0
    for trial in range(count):
        basis, primes = cases[trial % 2]
        p = primes[int(rng.integers(0, len(primes)))]
        ext = basis.union([p])
        rp = sqrt_of_integer(ext, p)
        while True:
            h = random_polynomial(basis, int(rng.integers(0, 4)), rng)
            if h(rp) and h(-rp):
                break
        k = int(rng.integers(0, 4))
        m = FieldPolynomial(basis, [-p, 0, 1])
        q = (m ** k) * h
        got = sqrt_root_multiplicity(q, p)
        plus = linear_root_multiplicity(q, rp)
        minus = linear_root_multiplicity(q, -rp)
        if not (got == plus == minus == k):
            bad += 1
    return bad == 0, f"{count} planted polynomials over Q and Q(sqrt2), {bad} counterexamples"


def _elementary_conjugate(A: FieldMatrix, rng, steps: int) -> FieldMatrix:
    """P A P^-1 for a product P of elementary matrices I + c e_ij."""
    rows = A.to_rows()
    n = A.rows
    for _ in range(steps):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        c = random_small_element(A.basis, rng, 2, density=0.6)
        # left: row_i += c row_j ; right (inverse): col_j -= c col_i
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        for r in rows:
            r[j] = r[j] - c * r[i]
    return FieldMatrix.from_rows(A.basis, rows)


@_timed(5, "rank(sqrt(3) I + A) >= ceil(N/2) over Q(sqrt2)")
def criterion_5(count: int = 100):
    rng = default_rng(5)
    basis = field_make([2])
    ext = field_make([2, 3])
    r3 = sqrt_of_integer(ext, 3)
    bad, tight = 0, 0
    for trial in range(count):
        N = int(rng.integers(2, 13))
        if trial % 2:
            A = random_field_matrix(basis, N, N, rng, span=2)
        else:
            # eigenvalue -sqrt(3) planted floor(N/2) times via [[0,3],[1,0]] blocks
            rows = [[0] * N for _ in range(N)]
            for b in range(N // 2):
                rows[2 * b][2 * b + 1] = 3
                rows[2 * b + 1][2 * b] = 1
            A = _elementary_conjugate(FieldMatrix.from_rows(basis, rows), rng, steps=2 * N)
        C = A.embed(ext) + FieldMatrix.identity(ext, N).scale(r3)
        r = rank(C)
        bad += r < ceil_half(N)
        tight += r == ceil_half(N)
    return bad == 0, f"{count} matrices (sizes 2-12), {bad} violations, {tight} attain the bound exactly"


@_timed(6, "anticommuting sigma family")
def criterion_6():
    rng = default_rng(6)
    ok, bad = True, []
    for ell in range(1, 9):
        fam = build_sigma(ell)
        coeffs = [Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20))) for _ in range(ell)]
        good = fam.anticommute() and fam.squares_identity() and fam.entries_ok() and fam.clifford_identity(coeffs)
        good &= fam.size == 4 ** math.ceil(ell / 2)
        if not good:
            bad.append(ell)
        ok &= good
    return ok, "ell = 1..8 exact" + (f", failures at {bad}" if bad else "")


@_timed(7, "extension certificate for P_6, d = 2")
def criterion_7():
    W, _ = matrix_P(6)
    rep = extension_certify(canonical_decomposition(W, 2), W)
    ok = (
        rep.diag_blocks_ok and rep.offdiag_in_subfield and rep.sigma_size == 16
        and rep.rank_C == 120 and rep.rank_C_exact >= 120 and rep.conclusion == "k*4 >= 8" and rep.holds
    )
    return ok, f"rank(C) >= {rep.rank_C} (exact {rep.rank_C_exact}), conclude {rep.conclusion}"


@_timed(8, "PSD factorization to d^2 entrywise squares")
def criterion_8(count: int = 100):
    rng = default_rng(8)

    def vec(d):
        return [Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for _ in range(d)]

    bad = 0
    for _ in range(count):
        d = int(rng.integers(1, 4))
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        alphas = [[vec(d) for _ in range(d)] for _ in range(m)]
        betas = [[vec(d) for _ in range(d)] for _ in range(n)]
        Ns = decomposition_from_psd_vectors(alphas, betas)
        good = len(Ns) == d * d and sum_of_squares(Ns) == psd_trace_matrix(alphas, betas)
        good &= all(rank(N) <= d for N in Ns)
        bad += not good
    return bad == 0, f"{count} random instances, {bad} failures"


@_timed(9, "nonnegative factorization of F_n")
def criterion_9():
    counts = []
    ok = True
    for n in range(1, 9):
        f = nonneg_factorization_F(n)
        counts.append(f.size)
        ok &= verify_nonneg_factorization(f, cor_slack("F", n))
    ok &= counts == [0, 1, 3, 6, 10, 15, 21, 28]
    return ok, f"term counts {counts}"


@_timed(10, "slack identity")
def criterion_10():
    res = {n: slack_verify(n) for n in range(1, 7)}
    return all(res.values()), f"n=1..6 all {'true' if all(res.values()) else res}"


@_timed(11, "A_n o A_n = B_n, rank(A_n) <= n+1, sqrt(IP_n) = IP_n")
def criterion_11():
    ok, ranks = True, []
    for n in range(1, 7):
        A = lowrank_A(n)
        ok &= A.hadamard(A) == cor_slack("B", n)
        r = rank(A)
        ranks.append(r)
        ok &= r <= n + 1
        IP = ip_matrix(n)
        root, basis = entrywise_sqrt(IP)
        ok &= basis == PrimeBasis(()) and root == IP.to_field()
    return ok, f"rank(A_n) for n=1..6: {ranks}"


@_timed(12, "ceil(C(n,p+1)/2) >= 3^(n/3-1)")
def criterion_12():
    bad = [n for n in range(4, 46) if not size_bound_check(n).exp_holds]
    return not bad, "4 <= n <= 45" + (f", failures {bad}" if bad else ", all hold")


@_timed(13, "field inversion and text round trip")
def criterion_13(count: int = 1000):
    rng = default_rng(13)
    bases = [PrimeBasis(()), field_make([2]), field_make([2, 3]), field_make([3, 5, 7]), field_make([2, 3, 5, 7])]
    inv_bad = trip_bad = 0
    for i in range(count):
        basis = bases[i % len(bases)]
        a = random_nonzero_element(basis, rng)
        if a * a.invert() != FieldElement.one(basis):
            inv_bad += 1
        text = a.to_text()
        if parse_element(text, basis).to_text() != text:
            trip_bad += 1
    return inv_bad == trip_bad == 0, f"{count} elements: {inv_bad} inversion and {trip_bad} round-trip failures"


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
    criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13,
]


def run_all(verbose: bool = True) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        try:
            res = crit()
        except (CertificateRefused, ArithmeticError, ValueError) as exc:
            res = CriterionResult(len(results) + 1, crit.__name__, False, f"raised {exc!r}", 0.0)
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    if verbose:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return results
