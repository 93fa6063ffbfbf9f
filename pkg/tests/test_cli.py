import json

import pytest

from signlift import cli, shimura
from signlift.arith import BUDGET_ENV


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_coeffs_rows(tmp_path):
    code, text = run(tmp_path, "coeffs", "--weight", "12", "--t", "1", "--nmax", "10")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "# t=1 k=6 weight2k=12 N=10"
    assert lines[2] == "1,1,1"
    assert lines[3] == "2,-56,-1"


def test_coeffs_json(tmp_path):
    code, text = run(tmp_path, "coeffs", "--nmax", "5", "--format", "json")
    data = json.loads(text)["data"]
    assert code == 0 and data[1] == {"n": 2, "a_tn2": "-56", "sign": -1}


@pytest.mark.parametrize("args", [
    ["--t", "4"],
    ["--weight", "24"],
    ["--nmax", "100", "--checkpoints", "10,1000"],
    ["--checkpoints", "100,10"],
    ["--C", "0"],
    ["--bins", "1"],
])
def test_config_errors(tmp_path, capsys, args):
    code, _ = run(tmp_path, "equidist", "--nmax", "100", *args)
    assert code == cli.EXIT_CONFIG
    err = capsys.readouterr().err.strip()
    assert err.startswith("signlift: config error") and "\n" not in err


def test_squarefree_message(tmp_path, capsys):
    run(tmp_path, "coeffs", "--t", "4")
    assert "t must be squarefree" in capsys.readouterr().err


def test_sieve_budget_env(tmp_path, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "0.001")
    code, _ = run(tmp_path, "coeffs", "--nmax", "100000")
    assert code == cli.EXIT_CONFIG


def test_verification_failure(tmp_path, monkeypatch, capsys):
    real = shimura.lift_invert

    def corrupted(params, N, table=None):
        s = real(params, N, table)
        vals = list(s.values)
        vals[3] += 1
        return shimura.LiftedStream(s.params, tuple(vals), s.precision)

    monkeypatch.setattr(shimura, "lift_invert", corrupted)
    code, _ = run(tmp_path, "coeffs", "--nmax", "20")
    assert code == cli.EXIT_VERIFY
    assert "p=3" in capsys.readouterr().err


def test_equidist_rows(tmp_path):
    code, text = run(tmp_path, "equidist", "--nmax", "1000", "--checkpoints", "1,10,100,1000")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "# C=10.0 t=1 weight=12"
    assert [row.split(",")[0] for row in lines[2:]] == ["1", "10", "100", "1000"]
    assert lines[2].split(",")[5] == "1.0"


def test_primes_report(tmp_path):
    code, text = run(tmp_path, "primes", "--nmax", "10000", "--checkpoints", "100,10000")
    assert code == 0
    data = json.loads(text)["data"]
    part = data["prime_partition"]
    assert part["count_pos"] + part["count_neg"] + part["count_zero"] == part["pi_x"] == 1229
    assert data["exceptional_primes"]["hits"] == []
    assert data["exceptional_primes"]["ratio"] == 0.0
    assert data["reciprocal_sum_zero"] == {"100": 0.0, "10000": 0.0}
    assert len(data["sato_tate"]["counts"]) == 20


def test_primes_histogram_csv(tmp_path):
    code, text = run(tmp_path, "primes", "--nmax", "2000", "--bins", "8", "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "bin_lo,bin_hi,count,expected" and len(lines) == 9


def test_probe(tmp_path):
    code, text = run(tmp_path, "probe", "--nmax", "10000", "--set", "neg", "--zpoints", "5")
    assert code == 0
    rep = json.loads(text)
    assert rep["params"]["set"] == "neg"
    assert len(rep["data"]["partial_sums"]) == 5
    code, _ = run(tmp_path, "probe", "--nmax", "100", "--zmin", "0.9")
    assert code == cli.EXIT_CONFIG


def test_cache_reuse(tmp_path):
    cache = tmp_path / "w16.tsv"
    code, first = run(tmp_path, "coeffs", "--weight", "16", "--nmax", "200", "--cache", str(cache), name="a")
    assert code == 0 and cache.exists()
    code, second = run(tmp_path, "coeffs", "--weight", "16", "--nmax", "150", "--cache", str(cache), name="b")
    assert code == 0
    assert second.splitlines()[2:] == first.splitlines()[2:152]
    code, _ = run(tmp_path, "coeffs", "--weight", "18", "--nmax", "100", "--cache", str(cache), name="c")
    assert code == cli.EXIT_CONFIG


def test_deterministic_output(tmp_path):
    args = ("equidist", "--nmax", "5000", "--format", "json")
    _, a = run(tmp_path, *args, name="a")
    _, b = run(tmp_path, *args, name="b")
    assert a == b


def test_default_checkpoints():
    assert cli.ExperimentConfig().checkpoints == [10, 100, 1000, 10_000, 100_000]
    assert cli.ExperimentConfig(nmax=5).checkpoints == [5]
