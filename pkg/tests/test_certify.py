from fractions import Fraction

import numpy as np
import pytest

from quadrank.certify import (
    build_sigma,
    canonical_decomposition,
    ceil_half,
    charpoly_multiplicity_bound,
    decomposition_from_psd_vectors,
    extension_certify,
    psd_trace_matrix,
    rank_crosscheck,
    sample_crosscheck,
    scale_to_form,
    slack_verify,
    split_form,
    structural_certificate,
    sum_of_squares,
)
from quadrank.errors import (
    BadDiagonal,
    CapExceeded,
    DecompositionInvalid,
    DiagonalNotConstant,
    DiagonalNotPrimeForm,
    NotIntegerMatrix,
    OffdiagEscapesSubfield,
)
from quadrank.exactla import FieldMatrix, RationalMatrix, SignMatrix, rank
from quadrank.gen import cor_slack, fawzi_Q, matrix_P
from quadrank.numfield import QQ, field_make, sqrt_of_integer
from quadrank.sampling import default_rng, random_field_matrix

B2 = field_make([2])
B23 = field_make([2, 3])


def test_certificate_examples():
    cert = structural_certificate(matrix_P(6)[0])
    assert (cert.p, cert.bound, cert.N) == (3, 8, 15)
    assert cert.sign_independent and all(cert.checks.values())
    assert cert.to_text().endswith("CERTIFIED rootrank >= 8 (all sign patterns)")
    cert = structural_certificate(matrix_P(10)[0])
    assert (cert.p, cert.bound) == (5, 105) and cert.subfield == B23
    with pytest.raises(OffdiagEscapesSubfield) as info:
        structural_certificate(RationalMatrix.from_rows([[6, 5], [5, 6]]))
    assert 5 in info.value.primes and info.value.check == "offdiag_subfield_membership"


def test_certificate_refusals():
    with pytest.raises(DiagonalNotPrimeForm) as info:
        structural_certificate(cor_slack("B", 3))
    assert isinstance(info.value, DiagonalNotConstant)
    with pytest.raises(DiagonalNotPrimeForm) as info:
        structural_certificate(RationalMatrix.from_rows([[4, 0], [0, 4]]))
    assert info.value.check == "diag_value"
    with pytest.raises(DiagonalNotPrimeForm):
        structural_certificate(fawzi_Q([2, 3, 4]))
    with pytest.raises(NotIntegerMatrix):
        structural_certificate(RationalMatrix.from_rows([[Fraction(1, 2)]]))


def test_scale_to_form():
    r6 = sqrt_of_integer(B23, 6)
    r2 = sqrt_of_integer(B23, 2)
    r3 = sqrt_of_integer(B23, 3)
    M = FieldMatrix.from_rows(B23, [[r6, r2], [r2, -r6]])
    S = scale_to_form(M, 3)
    assert S.diagonal() == [r3, r3]
    assert S[0, 1] == 1 and S[1, 0] == -1
    with pytest.raises(BadDiagonal):
        scale_to_form(FieldMatrix.from_rows(B23, [[r2]]), 3)


def test_rank_crosscheck_examples():
    W4, p = matrix_P(4)
    rng = default_rng(0)
    for _ in range(5):
        assert rank_crosscheck(W4, SignMatrix.random(4, 4, rng), p) == 4
    W6, p = matrix_P(6)
    r = rank_crosscheck(W6, SignMatrix.ones(15, 15), p)
    assert 8 <= r <= 15
    assert min(sample_crosscheck(W6, p, 50, seed=1)) >= 8


def test_charpoly_multiplicity_bound_examples():
    assert charpoly_multiplicity_bound(FieldMatrix.zeros(QQ, 1, 1), 2) == 0
    assert charpoly_multiplicity_bound(FieldMatrix.from_rows(QQ, [[0, 2], [1, 0]]), 2) == 1
    rng = default_rng(3)
    for _ in range(5):
        A = random_field_matrix(QQ, 8, 8, rng)
        assert charpoly_multiplicity_bound(A, 3) <= 4


def test_two_proof_paths_agree():
    rng = default_rng(4)
    ext = field_make([2, 3])
    r3 = sqrt_of_integer(ext, 3)
    for N in range(2, 9):
        rows = [[0] * N for _ in range(N)]
        for b in range(N // 2):
            rows[2 * b][2 * b + 1], rows[2 * b + 1][2 * b] = 3, 1
        for A in (random_field_matrix(B2, N, N, rng, span=2), FieldMatrix.from_rows(B2, rows)):
            C = A.embed(ext) + FieldMatrix.identity(ext, N).scale(r3)
            assert split_form(C, 3) == A
            k = charpoly_multiplicity_bound(A, 3)
            r = rank(C)
            assert ceil_half(N) <= N - k <= r


def test_slack_verify():
    for n in range(1, 7):
        assert slack_verify(n)
    with pytest.raises(CapExceeded):
        slack_verify(11)
    x = y = np.array([1, 1])
    s = int(x @ y)
    facet = np.outer(x, x) - 3 * np.diag(x)
    assert (s - 1) * (s - 2) == int(np.trace(facet @ np.outer(y, y))) + 2 == 0


def test_sigma_examples():
    f1 = build_sigma(1)
    assert f1.size == 4 and (f1.matrices[0] @ f1.matrices[0] == np.eye(4, dtype=int)).all()
    f2 = build_sigma(2)
    Y, X = f2.matrices
    assert (X @ Y == -(Y @ X)).all()
    f3 = build_sigma(3)
    assert f3.size == 16
    combo = f3.combination([1, 2, 3])
    assert (combo @ combo == 14 * np.eye(16, dtype=int)).all()
    assert f3.clifford_identity([Fraction(1, 2), Fraction(-3, 7), 5])


@pytest.mark.parametrize("ell", range(1, 11))
def test_sigma_invariants(ell):
    fam = build_sigma(ell)
    assert len(fam.matrices) == ell
    assert fam.anticommute() and fam.squares_identity() and fam.entries_ok()


def test_decomposition_examples():
    ones = [[[Fraction(1)]] for _ in range(3)]
    Ns = decomposition_from_psd_vectors(ones, ones)
    assert len(Ns) == 1 and Ns[0] == RationalMatrix.from_rows([[1] * 3] * 3)
    primes = [[[p]] for p in (2, 3, 5)]
    ys = [[[y]] for y in (1, 2, 3, 4)]
    Ns = decomposition_from_psd_vectors(primes, ys)
    assert rank(Ns[0]) == 1 and Ns[0][2, 3] == 20
    rng = default_rng(5)

    def vec():
        return [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(2)]

    alphas = [[vec(), vec()] for _ in range(4)]
    betas = [[vec(), vec()] for _ in range(4)]
    Ns = decomposition_from_psd_vectors(alphas, betas)
    assert len(Ns) == 4
    assert sum_of_squares(Ns) == psd_trace_matrix(alphas, betas)
    assert all(rank(N) <= 2 for N in Ns)


def test_extension_P6():
    W, _ = matrix_P(6)
    rep = extension_certify(canonical_decomposition(W, 2), W)
    assert rep.diag_blocks_ok and rep.offdiag_in_subfield
    assert rep.sigma_size == 16 and rep.rank_C == 120 and rep.k_max >= 2
    assert "rank(C) >= 120, conclude k*4 >= 8" in rep.to_text()
    assert rep.holds


def test_extension_invalid_and_degenerate():
    W, _ = matrix_P(6)
    Bs = canonical_decomposition(W, 2)
    half = RationalMatrix(W.rows, W.cols, (Fraction(1, 2),) * (W.rows * W.cols))
    with pytest.raises(DecompositionInvalid):
        extension_certify([half] + Bs[1:], W)
    W4, _ = matrix_P(4)
    rep = extension_certify(canonical_decomposition(W4, 1), W4)
    assert rep.sigma_size == 4 and rep.conclusion == "k*1 >= 2" and rep.k_max == 4


def test_sigma_checks_reject_bad_families():
    from quadrank.certify import PAULI_X, PAULI_Y, SigmaFamily

    assert not SigmaFamily(ell=2, m=1, matrices=(PAULI_X, PAULI_X)).anticommute()
    dense = PAULI_X + PAULI_Y  # not a signed permutation, takes the dense path
    assert not SigmaFamily(ell=1, m=1, matrices=(2 * PAULI_X,)).entries_ok()
    fam = SigmaFamily(ell=2, m=1, matrices=(PAULI_Y, dense))
    assert not fam.squares_identity()
    assert not fam.anticommute()
