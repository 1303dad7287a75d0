import pytest

from quivergb.cli import main


KEY_Q = "vertices 2\narrow 1 2\nm 3 3\nrank 1 1\n"
TEX = "shape 2 2 2\n0 4 2 6 1 5 3 7\n"


@pytest.fixture()
def quiver_file(tmp_path):
    p = tmp_path / "key.q"
    p.write_text(KEY_Q)
    return str(p)


@pytest.fixture()
def tensor_file(tmp_path):
    p = tmp_path / "tex.t"
    p.write_text(TEX)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGens:
    def test_stdout(self, capsys, quiver_file):
        code, out, _ = run(capsys, "gens", "--quiver", quiver_file)
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 9
        assert lines[0] == "1:1,2;1,2 +x[1,1,1]*x[2,2,1]-x[1,2,1]*x[2,1,1]"

    def test_out_file(self, capsys, quiver_file, tmp_path):
        dest = tmp_path / "gens.txt"
        code, out, _ = run(capsys, "gens", "--quiver", quiver_file,
                           "--out", str(dest))
        assert code == 0 and out == ""
        assert len(dest.read_text().strip().splitlines()) == 9


class TestCheck:
    def test_pass(self, capsys, quiver_file):
        code, out, _ = run(capsys, "check", "--quiver", quiver_file)
        assert code == 0 and "verdict: GROEBNER" in out

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "--quiver", "missing.q")
        assert code == 2 and "error:" in err

    def test_threads_identical_output(self, capsys, quiver_file):
        _, out1, _ = run(capsys, "check", "--quiver", quiver_file, "--threads", "1")
        _, out4, _ = run(capsys, "check", "--quiver", quiver_file, "--threads", "4")
        assert out1 == out4

    def test_no_coprime_skip(self, capsys, quiver_file):
        code, out, _ = run(capsys, "check", "--quiver", quiver_file,
                           "--no-coprime-skip")
        assert code == 0 and "coprime-skipped: 0" in out


class TestDouble:
    def test_check(self, capsys):
        code, out, _ = run(capsys, "double", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "2", "--v", "2", "check")
        assert code == 0
        assert "pairs: 45" in out and "failures: 0" in out

    def test_gens_count(self, capsys):
        code, out, _ = run(capsys, "double", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "2", "--v", "2", "gens")
        assert code == 0 and len(out.strip().splitlines()) == 10

    def test_gf_field(self, capsys):
        code, out, _ = run(capsys, "double", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "2", "--v", "2", "check", "--field", "7")
        assert code == 0 and "verdict: GROEBNER" in out

    def test_bad_field(self, capsys):
        code, _, err = run(capsys, "double", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "2", "--v", "2", "check", "--field", "6")
        assert code == 2 and "not prime" in err


class TestSpair:
    def test_key_example(self, capsys, quiver_file):
        code, out, _ = run(capsys, "spair", "--quiver", quiver_file,
                           "--m1", "2:2,3;1,3", "--m2", "2:1,3;2,3",
                           "--decompose")
        assert code == 0
        assert "S -x[1,2,1]*x[2,3,1]*x[3,1,1]+x[1,3,1]*x[2,1,1]*x[3,2,1]" in out
        assert "rows: [- x[3,1,1] pm 2:1,2;2,3]" in out
        assert "cols: [- x[1,3,1] pm 2:2,3;1,2]" in out
        assert "identity true small-lts true" in out

    def test_bad_minor_spec(self, capsys, quiver_file):
        code, _, err = run(capsys, "spair", "--quiver", quiver_file,
                           "--m1", "nope", "--m2", "2:1,2;1,2")
        assert code == 2 and "bad minor spec" in err


class TestCertify:
    def test_all_pairs(self, capsys, quiver_file):
        code, out, _ = run(capsys, "certify", "--quiver", quiver_file)
        assert code == 0 and "certified: 36/36" in out

    def test_single_pair_prints_certificate(self, capsys, quiver_file):
        code, out, _ = run(capsys, "certify", "--quiver", quiver_file,
                           "--pairs", "0,5")
        assert code == 0 and "chain " in out and "step 0:" in out

    def test_bad_pair(self, capsys, quiver_file):
        code, _, err = run(capsys, "certify", "--quiver", quiver_file,
                           "--pairs", "0,99")
        assert code == 2


class TestInitIdeal:
    def test_squarefree(self, capsys, quiver_file):
        code, out, _ = run(capsys, "init-ideal", "--quiver", quiver_file)
        assert code == 0
        assert out.strip().splitlines()[-1] == "squarefree true"


class TestTensorVerbs:
    def test_contract(self, capsys, tensor_file):
        code, out, _ = run(capsys, "tensor", "contract", "--data", tensor_file,
                           "--axes", "2")
        assert code == 0 and out == "shape 2 2\n2 10 4 12\n"

    def test_contract_all(self, capsys, tensor_file):
        code, out, _ = run(capsys, "tensor", "contract", "--data", tensor_file,
                           "--axes", "1,2,3")
        assert code == 0 and out.strip() == "28"

    def test_scan(self, capsys, tensor_file):
        code, out, _ = run(capsys, "tensor", "scan", "--data", tensor_file,
                           "--axis", "3")
        assert code == 0
        assert "slice 1\nshape 2 2\n0 2 1 3\n" in out

    def test_flatten(self, capsys, tensor_file):
        code, out, _ = run(capsys, "tensor", "flatten", "--data", tensor_file,
                           "--axis", "1")
        assert code == 0 and out == "0 2 4 6\n1 3 5 7\n"

    def test_bad_axis(self, capsys, tensor_file):
        code, _, err = run(capsys, "tensor", "flatten", "--data", tensor_file,
                           "--axis", "9")
        assert code == 2


class TestTripleEq:
    def test_equal(self, capsys):
        code, out, _ = run(capsys, "triple-eq", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "2", "--v", "2", "--w", "2")
        assert code == 0
        assert "predicted equal" in out and "verified true" in out

    def test_different(self, capsys):
        code, out, _ = run(capsys, "triple-eq", "--m", "2", "--n", "3", "--r", "2",
                           "--u", "2", "--v", "3", "--w", "2")
        assert code == 0
        assert "predicted different" in out and "witness ranks 1 2 2" in out

    def test_bounds(self, capsys):
        code, _, err = run(capsys, "triple-eq", "--m", "2", "--n", "2", "--r", "2",
                           "--u", "9", "--v", "2", "--w", "2")
        assert code == 2


class TestIndep:
    def test_two_by_two(self, capsys):
        code, out, _ = run(capsys, "indep", "--shape", "2,2",
                           "--statements", "1_2")
        assert code == 0
        assert "+p[1,1]*p[2,2]-p[1,2]*p[2,1]" in out
        assert "generators 1" in out

    def test_bad_statement(self, capsys):
        code, _, err = run(capsys, "indep", "--shape", "2,2",
                           "--statements", "zzz")
        assert code == 2


class TestArgErrors:
    def test_unknown_verb(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_unknown_flag(self, capsys):
        assert main(["check", "--quiver", "x.q", "--bogus"]) == 2
