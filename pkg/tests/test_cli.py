import pytest

from quadrank.cli import main
from quadrank.errors import ParseError
from quadrank.exactla import FieldMatrix, RationalMatrix
from quadrank.gen import fawzi_Q, matrix_P
from quadrank.matrixio import emit_matrix, parse_matrix, read_matrix, write_matrix
from quadrank.numfield import field_make, sqrt_of_integer
from quadrank.sampling import default_rng, random_field_matrix


def test_matrix_round_trip():
    B = field_make([2, 3])
    M = random_field_matrix(B, 3, 4, default_rng(0))
    text = emit_matrix(M)
    assert text.startswith("field: 2 3\nrows: 3\ncols: 4\n")
    assert parse_matrix(text) == M and emit_matrix(parse_matrix(text)) == text
    W = matrix_P(6)[0]
    text = emit_matrix(W)
    assert text.startswith("field:\n")
    back = parse_matrix(text)
    assert isinstance(back, RationalMatrix) and back == W


def test_matrix_file_example_layout():
    B = field_make([2, 3])
    r6, r2 = sqrt_of_integer(B, 6), sqrt_of_integer(B, 2)
    M = FieldMatrix.from_rows(B, [[r6, r2], [r2, r6]])
    assert emit_matrix(M).splitlines()[3] == "1*sqrt(6); 1*sqrt(2)"


@pytest.mark.parametrize("text", ["rows: 1\ncols: 1\n1", "field:\nrows: 2\ncols: 1\n1", "field:\nrows: 1\ncols: 2\n1"])
def test_matrix_parse_errors(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_gen_to_file(tmp_path, capsys):
    out = tmp_path / "p6.mat"
    assert main(["gen", "P:6", "-o", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "P_6: N=15 p=3"
    assert read_matrix(out) == matrix_P(6)[0]
    first = out.read_text()
    main(["gen", "P:6", "-o", str(out)])
    assert out.read_text() == first


def test_gen_stdout_and_errors(capsys):
    assert main(["gen", "fawziQ:2,3,4"]) == 0
    out = capsys.readouterr().out
    assert parse_matrix(out) == fawzi_Q([2, 3, 4])
    assert main(["gen", "corM:20"]) == 2
    assert "DimensionCap" in capsys.readouterr().err
    assert main(["gen", "bogus"]) == 2


def test_certify(tmp_path, capsys):
    p6 = tmp_path / "p6.mat"
    write_matrix(matrix_P(6)[0], p6)
    assert main(["certify", str(p6)]) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1] == "CERTIFIED rootrank >= 8 (all sign patterns)"
    assert main(["certify", "corB:3"]) == 1
    assert "DiagonalNotPrimeForm" in capsys.readouterr().out
    assert main(["certify", "--crosscheck", "50", str(p6)]) == 0
    assert "min rank" in capsys.readouterr().out
    assert main(["certify", "P:6", "--format", "kv"]) == 0
    kv = dict(line.split(": ", 1) for line in capsys.readouterr().out.strip().splitlines())
    assert kv["bound"] == "8" and kv["p"] == "3"
    assert main(["certify", str(tmp_path / "missing.mat")]) == 2


def test_certify_refusal_kv(capsys):
    assert main(["certify", "corB:3", "--format", "kv"]) == 1
    out = capsys.readouterr().out
    assert "certified: false" in out and "failed_check: diag_constant" in out


def test_brute(tmp_path, capsys):
    q = tmp_path / "q234.mat"
    write_matrix(fawzi_Q([2, 3, 4]), q)
    assert main(["brute", str(q)]) == 0
    assert "min sqrt-rank = 3 (exhausted)" in capsys.readouterr().out
    assert main(["brute", "P:4"]) == 0
    assert "min sqrt-rank = 4" in capsys.readouterr().out
    assert main(["brute", "P:8"]) == 3
    assert "required budget" in capsys.readouterr().out
    assert main(["brute", "P:4", "--budget", "0"]) == 2


def test_sigma(capsys):
    assert main(["sigma", "4"]) == 0
    out = capsys.readouterr().out
    assert "anticommutation OK, squares OK" in out
    assert out.count("sigma_") == 4 and "(16x16)" in out
    assert main(["sigma", "11"]) == 2


def test_extension(capsys):
    assert main(["extension", "P:6", "--d", "2"]) == 0
    assert "rank(C) >= 120, conclude k*4 >= 8" in capsys.readouterr().out


def test_extension_decomposition_file(tmp_path, capsys):
    ones = RationalMatrix.from_rows([[1] * 4] * 4)
    zero = RationalMatrix.zeros(4, 4)
    single = tmp_path / "d1.txt"
    single.write_text(emit_matrix(ones))
    assert main(["extension", "P:4", "--decomposition", str(single)]) == 0
    assert "conclude k*1 >= 2" in capsys.readouterr().out
    four = tmp_path / "d2.txt"
    four.write_text("---\n".join(emit_matrix(B) for B in (ones, zero, zero, zero)))
    assert main(["extension", "P:4", "--decomposition", str(four)]) == 0
    assert "conclude k*4 >= 2" in capsys.readouterr().out


def test_bounds(capsys):
    assert main(["bounds", "IP:3"]) == 0
    out = capsys.readouterr().out
    assert "prank_lower" in out and " 3 " in out
    assert main(["bounds", "corF:5", "--format", "kv"]) == 0
    assert "rank_plus_upper: 10" in capsys.readouterr().out


def test_usage_error():
    assert main([]) == 2
    assert main(["certify"]) == 2
