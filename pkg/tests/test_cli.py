import io
import json

import pytest

from thompson_density import __version__
from thompson_density.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_rn(capsys):
    code, out, err = call(capsys, "verify", "--rn", "--max-n", "60")
    assert code == EXIT_OK
    assert out.strip() == "OK: 4 methods agree"
    assert f"thompson-density {__version__} seed=0" in err


def test_verify_several_suites(capsys):
    code, out, _ = call(capsys, "verify", "--oracles", "--algebra", "--constructions")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines and all(line.startswith("OK: ") for line in lines)


def test_verify_needs_a_suite(capsys):
    code, _, err = call(capsys, "verify")
    assert code == EXIT_USAGE and "suite" in err


def test_table_csv(capsys):
    code, out, _ = call(capsys, "table", "--rn", "--max-n", "5")
    assert code == EXIT_OK
    rows = out.strip().splitlines()
    assert rows[0] == "n,c_n,c_n^2,r_n,ratio,n^3r_n/mu^n"
    assert rows[1].startswith("1,1,1,1,,")
    assert rows[3].startswith("3,5,25,14,7.0,")


def test_table_json(capsys):
    code, out, _ = call(capsys, "table", "--max-n", "3", "--format", "json")
    data = json.loads(out)
    assert [row["r_n"] for row in data] == [1, 2, 14]


def test_sphere_exact(capsys):
    code, out, _ = call(capsys, "sphere", "--kind", "sum", "--k", "3", "--n", "11", "--exact")
    assert code == EXIT_OK and out.strip() == "15082083"
    code, out, _ = call(capsys, "sphere", "--kind", "max", "--k", "2", "--n", "3")
    assert json.loads(out)["size"] == "147"
    # n < k: the sum sphere is empty
    code, out, _ = call(capsys, "sphere", "--kind", "sum", "--k", "3", "--n", "2", "--exact")
    assert code == EXIT_OK and out.strip() == "0"


def test_sample_deterministic(capsys):
    _, a, _ = call(capsys, "--seed", "4", "sample", "--n", "6", "--samples", "5")
    _, b, _ = call(capsys, "sample", "--n", "6", "--samples", "5", "--seed", "4")
    _, c, _ = call(capsys, "sample", "--n", "6", "--samples", "5", "--seed", "5")
    assert a == b != c
    assert len(a.strip().splitlines()) == 5


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("THOMPSON_DENSITY_SEED", "4")
    _, a, err = call(capsys, "sample", "--what", "pair", "--n", "5", "--samples", "3")
    assert "seed=4" in err
    monkeypatch.delenv("THOMPSON_DENSITY_SEED")
    _, b, _ = call(capsys, "sample", "--what", "pair", "--n", "5", "--samples", "3", "--seed", "4")
    assert a == b
    monkeypatch.setenv("THOMPSON_DENSITY_SEED", "four")
    code, _, _ = call(capsys, "sample", "--n", "5")
    assert code == EXIT_USAGE


def test_construct(capsys):
    code, out, _ = call(capsys, "construct", "lemma_z", "--k", "3", "--n", "8")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["construction"] == "lemma_z"
    assert max(rep["sizes"]) == 8 and all(rep["checks"].values())
    code, out, _ = call(capsys, "construct", "clone", "--address", "011")
    assert json.loads(out)["params"] == {"address": "011"}


def test_classify(capsys, monkeypatch):

    code, out, _ = call(capsys, "classify", "11000|10100 1011000|1010100", "100|100 100|100")
    assert out.split() == ["NONABELIAN_UNCLASSIFIED", "TRIVIAL"]
    monkeypatch.setattr("sys.stdin", io.StringIO("11000|10100 10100|11000\n"))
    code, out, _ = call(capsys, "classify")
    assert out.strip() == "CYCLIC_Z"


def test_estimate(capsys):
    code, out, _ = call(capsys, "estimate", "--k", "1", "--n", "9")
    assert json.loads(out)["estimate"] == 1.0
    code, out, err = call(capsys, "estimate", "--k", "2", "--trend", "3,4", "--samples", "1e3")
    rows = out.strip().splitlines()
    assert rows[0] == "n,estimate,ci_low,ci_high,samples,exact" and len(rows) == 3


def test_bounds(capsys):
    code, out, _ = call(capsys, "bounds", "--name", "lemma_z", "--k", "2", "--n", "60")
    rep = json.loads(out)
    assert code == EXIT_OK and float(rep["bound"]) == pytest.approx(0.00224364905389)
    assert float(rep["mass_over_upper_bound"]) > float(rep["bound"])
    code, out, _ = call(capsys, "bounds", "--name", "wreath", "--k", "2")
    assert json.loads(out)["bound"].startswith("lambda_2")


@pytest.mark.parametrize("argv", [
    ["sphere", "--kind", "max", "--k", "0", "--n", "2"],
    ["sample", "--n", "0", "--what", "pair"],
    ["classify", "10"],
    ["estimate", "--k", "2"],
    ["estimate", "--k", "2", "--n", "5", "--samples", "1.5"],
    ["construct", "nope"],
    ["--threads", "0", "table"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = call(capsys, *argv)
    assert code == EXIT_USAGE


def test_verification_failure_exit(capsys, monkeypatch):
    import thompson_density.constructions as C
    monkeypatch.setattr(C, "commute", lambda a, b: False)
    code, _, err = call(capsys, "construct", "zn")
    assert code == EXIT_FAIL and "verification failed" in err
