import json

import pytest

from cmnorms import cli, norms
from cmnorms.errors import PrecisionError


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_text_and_exit(capsys):
    code, out, _ = run(capsys, "norm", "--f", "gamma2", "--d1", "-7", "--d2", "-55")
    assert code == 0
    assert "3^14 * 5^2" in out and "match   : yes" in out


def test_norm_j_small(capsys):
    code, out, _ = run(capsys, "norm", "--f", "j", "--d1", "-4", "--d2", "-7", "--json", "--no-timing")
    payload = json.loads(out)
    assert code == 0 and payload["numeric"]["rounded"] == "5103"
    assert payload["formula"]["factors"] == [[3, 6], [7, 1]]


def test_json_is_byte_identical(capsys):
    argv = ("norm", "--f", "omega2", "--d1", "-7", "--d2", "-55", "--json", "--no-timing")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert list(json.loads(a)) == ["function", "d1", "d2", "D", "h1", "h2", "w1", "w2", "formula",
                                   "numeric", "match", "precision_bits", "elapsed_ms"]


@pytest.mark.parametrize("fmt", [(), ("--json",)])
def test_cache_hits_match_recomputation(capsys, tmp_path, fmt):
    cache = tmp_path / "cache.json"
    argv = ("norm", "--f", "j", "--d1", "-7", "--d2", "-55", "--no-timing", *fmt)
    _, fresh, _ = run(capsys, *argv)
    _, first, _ = run(capsys, *argv, "--cache", str(cache))
    _, hit, _ = run(capsys, *argv, "--cache", str(cache))
    assert fresh == first == hit
    assert len(json.loads(cache.read_text())) == 1


def test_env_precision_and_flag_precedence(capsys, monkeypatch):
    base = ("norm", "--f", "j", "--d1", "-4", "--d2", "-7", "--method", "numeric", "--json",
            "--no-timing")
    monkeypatch.setenv("CMNORMS_PREC_BITS", "300")
    _, out, _ = run(capsys, *base)
    assert json.loads(out)["precision_bits"] == 300
    _, out, _ = run(capsys, *base, "--prec-bits", "320")
    assert json.loads(out)["precision_bits"] == 320
    monkeypatch.setenv("CMNORMS_PREC_BITS", "lots")
    code, _, err = run(capsys, *base)
    assert code == 2 and "CMNORMS_PREC_BITS" in err


def test_invalid_input_exit_codes(capsys):
    assert run(capsys, "norm", "--f", "omega", "--d1", "-4", "--d2", "-7")[0] == 2
    assert run(capsys, "norm", "--f", "j", "--d1", "-5", "--d2", "-7")[0] == 2
    assert run(capsys, "norm", "--f", "sin", "--d1", "-4", "--d2", "-7")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "eval", "--f", "j")[0] == 2
    assert run(capsys, "count", "--d1", "-7", "--d2", "-55", "--n", "31", "--level", "3")[0] == 2


def test_precision_failure_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise PrecisionError("cap reached")

    monkeypatch.setattr(norms, "compare", boom)
    code, _, err = run(capsys, "norm", "--f", "j", "--d1", "-4", "--d2", "-7")
    assert code == 3 and "cap reached" in err


def test_count_with_oracle(capsys):
    code, out, _ = run(capsys, "count", "--d1", "-7", "--d2", "-55", "--n", "31", "--oracle")
    assert code == 0 and "formula 5, oracle 5, match" in out
    code, out, _ = run(capsys, "count", "--d1", "-7", "--d2", "-55", "--n", "31", "--level", "2",
                       "--oracle")
    assert code == 0 and "match" in out


def test_rho_forms_eval(capsys):
    code, out, _ = run(capsys, "rho", "--f", "gamma2", "--d1", "-7", "--d2", "-55", "--n", "31")
    assert code == 0 and out.strip().isdigit()
    code, out, _ = run(capsys, "forms", "--disc", "-55")
    assert code == 0 and "h = 4" in out
    code, out, _ = run(capsys, "eval", "--f", "j", "--a", "1", "--b", "1", "--disc", "-7")
    assert code == 0 and "-3375.0" in out
    code, out, _ = run(capsys, "eval", "--f", "gamma2", "--re", "0", "--im", "1")
    assert code == 0 and "12.0" in out


def test_analytic_checks(capsys):
    assert run(capsys, "analytic", "--check", "q")[0] == 0
    assert run(capsys, "analytic", "--check", "phi", "--cmax", "30")[0] == 0
    code, out, _ = run(capsys, "analytic", "--check", "prop15", "--disc", "-4", "--s", "2",
                       "--cutoff", "800", "--tol", "1e-3")
    assert code == 0 and "residual" in out


def test_table_json(capsys, monkeypatch):
    # restrict to the small pair so the test stays quick
    monkeypatch.setattr(norms, "TABLE_PAIRS", ((-7, -55),))
    code, out, _ = run(capsys, "table", "--json", "--no-timing")
    rows = json.loads(out)
    assert code == 0 and len(rows) >= 4
