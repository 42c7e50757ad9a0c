import math

import pytest

from quadrank.errors import DimensionCap, DomainTooSmall, ParseError, QuadrankError, TwoNMinusOneComposite
from quadrank.exactla import RationalMatrix, rank
from quadrank.gen import (
    bitstrings,
    cor_slack,
    fawzi_Q,
    generate,
    ip_matrix,
    lowrank_A,
    matrix_P,
    nearest_prime,
    overlap,
    parse_spec,
    size_bound_check,
    weight_slice,
)
from quadrank.matrixio import emit_matrix


def rows(M):
    return [[int(v) for v in r] for r in M.to_rows()]


def test_cor_slack_examples():
    assert rows(cor_slack("M", 2)) == [[2, 2, 2, 2], [2, 0, 2, 0], [2, 2, 0, 0], [2, 0, 0, 0]]
    F2 = rows(cor_slack("F", 2))
    assert F2[3][3] == 2 and sum(map(sum, F2)) == 2
    assert rows(cor_slack("B", 1)) == [[1, 1], [1, 0]]
    with pytest.raises(DimensionCap):
        cor_slack("M", 20)


@pytest.mark.parametrize("variant,disjoint", [("B", 1), ("M", 2)])
def test_unique_disjointness(variant, disjoint):
    for n in range(1, 7):
        M = cor_slack(variant, n)
        for x in range(1 << n):
            for y in range(1 << n):
                s = overlap(x, y)
                if s == 0:
                    assert M[x, y] == disjoint
                elif s == 1:
                    assert M[x, y] == 0


def test_bitstring_order():
    bs = bitstrings(3)
    assert [str(b) for b in bs] == ["000", "001", "010", "011", "100", "101", "110", "111"]
    assert [b.weight for b in bs] == [0, 1, 1, 2, 1, 2, 2, 3]


def test_nearest_prime():
    assert nearest_prime(6) == 3
    assert nearest_prime(8) == 3
    assert nearest_prime(13) == 7
    assert nearest_prime(10) == 5


def test_matrix_P_examples():
    W, p = matrix_P(4)
    assert p == 2 and W == RationalMatrix.from_rows([[2 if i == j else 0 for j in range(4)] for i in range(4)])
    W, p = matrix_P(6)
    assert p == 3 and W.shape == (15, 15)
    assert {int(W[i, i]) for i in range(15)} == {6}
    assert {int(W[i, j]) for i in range(15) for j in range(15) if i != j} == {0, 2}
    W, p = matrix_P(10)
    assert p == 5 and W.shape == (210, 210)
    assert {int(W[i, j]) for i in range(210) for j in range(210) if i != j} == {0, 2, 6, 12}
    with pytest.raises(DomainTooSmall):
        matrix_P(3)


def test_matrix_P_properties():
    for n in range(4, 11):
        W, p = matrix_P(n)
        assert W.is_symmetric()
        assert {W[i, i] for i in range(W.rows)} == {p * (p - 1)}
        allowed = {(s - 1) * (s - 2) for s in range(2, p + 1)} | {0, 2}
        assert {int(W[i, j]) for i in range(W.rows) for j in range(W.cols) if i != j} <= allowed
        if n <= 8:
            idx = weight_slice(n, p + 1)
            assert cor_slack("M", n).submatrix(idx, idx) == W


def test_ip_matrix():
    assert rows(ip_matrix(1)) == [[0, 0], [0, 1]]
    assert ip_matrix(2)[3, 3] == 0
    # row 0 of IP_n is zero, so the 0/1 matrix has rank 2^n - 1
    assert rank(ip_matrix(3)) == 7


def test_fawzi_Q():
    assert rows(fawzi_Q([2, 3, 4])) == [[3, 4, 5], [4, 5, 6], [5, 6, 7]]
    assert rows(fawzi_Q([2, 3])) == [[3, 4], [4, 5]]
    with pytest.raises(TwoNMinusOneComposite) as info:
        fawzi_Q([1, 2])
    assert info.value.index == 0
    for ns in ([2, 3], [2, 3, 4], [3, 4, 6, 7], [2, 4, 6]):
        assert rank(fawzi_Q(ns)) == 2


def test_lowrank_A():
    assert rows(lowrank_A(1)) == [[-1, -1], [-1, 0]]
    for n in range(1, 7):
        A = lowrank_A(n)
        assert A.hadamard(A) == cor_slack("B", n)
        assert rank(A) <= n + 1


def test_size_bound_examples():
    b = size_bound_check(6)
    assert (b.size, b.bertrand_lower) == (15, 15) and math.ceil(b.size / 2) >= 3
    b = size_bound_check(10)
    assert b.size == 210 and b.bertrand_lower == 210
    b = size_bound_check(30)
    assert math.ceil(b.size / 2) >= 3 ** 9 and b.exp_holds


def test_size_bound_range():
    for n in range(4, 46):
        b = size_bound_check(n)
        assert b.exp_holds
        assert (-(-b.size // 2)) ** 3 >= 3 ** (n - 3)


def test_spec_parsing_and_determinism():
    for text in ("corM:5", "P:10", "fawziQ:2,3,4", "IP:3", "corB:4", "corF:6", "lowrankA:4"):
        spec = parse_spec(text)
        assert emit_matrix(generate(spec)) == emit_matrix(generate(text))
    assert parse_spec("fawziQ:2,3,4").aux == (2, 3, 4)
    for bad in ("nope:3", "P", "P:x", "corM:-1"):
        with pytest.raises(QuadrankError):
            parse_spec(bad) if bad != "corM:-1" else generate(bad)
    with pytest.raises(ParseError):
        parse_spec("P")
