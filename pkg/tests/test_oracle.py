import itertools
import math
from fractions import Fraction

import pytest

from quadrank.certify import structural_certificate
from quadrank.errors import BudgetExceeded, DimensionCap, InconsistentEvidence, NonRationalEntries
from quadrank.exactla import FieldMatrix, RationalMatrix, SignMatrix, apply_signs, entrywise_sqrt, rank
from quadrank.gen import cor_slack, fawzi_Q, ip_matrix, lowrank_A, matrix_P
from quadrank.numfield import field_make, sqrt_of_integer
from quadrank.oracle import (
    NonnegFactorization,
    bounds_report,
    nonneg_factorization_F,
    rank_one_psd_from_sqrt,
    sqrt_rank_bruteforce,
    verify_nonneg_factorization,
    witness_rank,
)
from quadrank.sampling import default_rng


def naive_min_rank(W):
    """Every sign pattern, no reduction at all."""
    root, _ = entrywise_sqrt(W)
    best = None
    for signs in itertools.product((1, -1), repeat=W.rows * W.cols):
        S = SignMatrix.from_rows([list(signs[i * W.cols:(i + 1) * W.cols]) for i in range(W.rows)])
        r = rank(apply_signs(root, S))
        best = r if best is None else min(best, r)
    return best


def test_bruteforce_examples():
    res = sqrt_rank_bruteforce(RationalMatrix.from_rows([[4]]))
    assert (res.min_rank, res.classes_enumerated, res.exhausted) == (1, 1, True)
    res = sqrt_rank_bruteforce(matrix_P(4)[0])
    assert res.min_rank == 4 and res.exhausted
    res = sqrt_rank_bruteforce(fawzi_Q([2, 3, 4]))
    assert res.min_rank == 3
    assert witness_rank(fawzi_Q([2, 3, 4]), res.witness) == 3
    with pytest.raises(BudgetExceeded) as info:
        sqrt_rank_bruteforce(matrix_P(8)[0])
    assert info.value.required > info.value.budget


def test_symmetry_reduction_sound():
    rng = default_rng(21)
    for _ in range(12):
        r, c = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        W = RationalMatrix.from_rows([[int(rng.choice([0, 1, 2, 3, 4, 6])) for _ in range(c)] for _ in range(r)])
        red = sqrt_rank_bruteforce(W)
        full = sqrt_rank_bruteforce(W, reduce_symmetry=False)
        assert red.min_rank == full.min_rank == naive_min_rank(W)
        assert witness_rank(W, red.witness) == red.min_rank


def test_bruteforce_workers_deterministic():
    Q = fawzi_Q([2, 3, 4])
    one = sqrt_rank_bruteforce(Q, reduce_symmetry=False)
    two = sqrt_rank_bruteforce(Q, reduce_symmetry=False, workers=2)
    assert (one.min_rank, one.witness) == (two.min_rank, two.witness)


def test_bruteforce_at_least_certificate():
    for rows in ([[6, 2], [2, 6]], [[6, 2, 0], [2, 6, 2], [0, 2, 6]], [[20, 12], [3, 20]]):
        W = RationalMatrix.from_rows(rows)
        assert sqrt_rank_bruteforce(W).min_rank >= structural_certificate(W).bound


def test_nonneg_factorization_F():
    for n in range(1, 11):
        f = nonneg_factorization_F(n)
        assert f.size == math.comb(n, 2)
        if n <= 8:
            assert verify_nonneg_factorization(f, cor_slack("F", n))
    f2 = nonneg_factorization_F(2)
    assert f2.terms == [([0, 0, 0, 2], [0, 0, 0, 1])]
    with pytest.raises(DimensionCap):
        nonneg_factorization_F(11)


def test_verify_nonneg_factorization():
    f = nonneg_factorization_F(4)
    target = cor_slack("F", 4)
    assert verify_nonneg_factorization(f, target)
    u, v = f.terms[0]
    bad = NonnegFactorization([([-x for x in u], v)] + f.terms[1:])
    assert not verify_nonneg_factorization(bad, target)
    assert verify_nonneg_factorization(NonnegFactorization(), RationalMatrix.zeros(3, 3))


def test_rank_one_psd():
    A3 = lowrank_A(3)
    f = rank_one_psd_from_sqrt(A3)
    assert f.r <= 4 and f.target() == cor_slack("B", 3)
    for i in range(8):
        for j in range(8):
            assert f.psd_trace(i, j) == cor_slack("B", 3)[i, j]
    assert rank_one_psd_from_sqrt(RationalMatrix.identity(3)).r == 3
    assert rank_one_psd_from_sqrt(RationalMatrix.from_rows([[1, 1], [1, 1]])).r == 1
    B2 = field_make([2])
    with pytest.raises(NonRationalEntries):
        rank_one_psd_from_sqrt(FieldMatrix.from_rows(B2, [[sqrt_of_integer(B2, 2)]]))


def test_rank_one_psd_from_brute_witness():
    W = RationalMatrix.from_rows([[1, 4, 9], [4, 1, 0], [9, 0, 1]])
    res = sqrt_rank_bruteforce(W)
    root, _ = entrywise_sqrt(W)
    signed = apply_signs(root, res.witness)
    f = rank_one_psd_from_sqrt(signed)
    assert f.r == res.min_rank and f.target() == W


def test_bounds_examples():
    F5 = cor_slack("F", 5)
    rep = bounds_report(F5, factorization=nonneg_factorization_F(5))
    assert rep.rank_plus_upper == 10
    assert rep.prank_lower == math.isqrt(rep.rank - 1) + 1
    W6, _ = matrix_P(6)
    rep = bounds_report(W6, certificate=structural_certificate(W6))
    assert rep.rootrank_lower == 8 and rep.prank_lower == math.isqrt(rank(W6) - 1) + 1
    rep = bounds_report(ip_matrix(3))
    assert rep.rank == 7 and rep.prank_lower == 3 and rep.rootrank_upper == 7
    assert "prank_lower" in rep.to_text() and "rank: 7" in rep.to_kv()


def test_bounds_inconsistency():
    W4, _ = matrix_P(4)
    with pytest.raises(InconsistentEvidence):
        bounds_report(W4, factorization=NonnegFactorization([([1, 0, 0, 0], [1, 0, 0, 0])]))
    cert = structural_certificate(matrix_P(6)[0])
    with pytest.raises(InconsistentEvidence):
        bounds_report(W4, certificate=cert)


def test_half_entries_root():
    W = RationalMatrix.from_rows([[Fraction(1, 2), 2], [2, Fraction(1, 2)]])
    assert sqrt_rank_bruteforce(W).min_rank == 2
