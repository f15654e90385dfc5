import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import pytest

from kneser_mix import cli, engine
from kneser_mix.model import KneserParams
from kneser_mix.oracle import build_full_chain, oracle_tv

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    return meta, list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_profile_petersen(capsys):
    code, out, _ = run(capsys, "profile", "--n", "2", "--k", "1", "--t-max", "5")
    assert code == 0
    meta, rows = read_csv(out)
    assert len(rows) == 6
    assert float(rows[1]["d_exact"]) == pytest.approx(0.7, abs=1e-15)
    assert list(rows[0]) == cli.PROFILE_COLUMNS
    assert meta["tool_version"] and meta["note"] == cli.FLOOR_NOTE
    assert rows[0]["g_bound"] == ""


def test_profile_golden(capsys):
    code, out, _ = run(capsys, "profile", "--n", "2", "--k", "1", "--t-max", "20")
    golden = (DATA / "petersen_profile_t20.csv").read_text()
    assert code == 0 and out == golden
    _, rows = read_csv(golden)
    exact = oracle_tv(build_full_chain(KneserParams(2, 1)), 20)
    for r, d in zip(rows, exact):
        assert float(r["d_exact"]) == pytest.approx(float(d), abs=1e-15)


def test_profile_bounds_only(capsys):
    code, out, _ = run(capsys, "profile", "--n", "100", "--k", "1", "--t-max", "400", "--bounds-only")
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 401
    assert all(r["d_exact"] == "" for r in rows)
    assert all(r["spectral_upper"] != "" for r in rows)


def test_profile_json_nulls(capsys):
    code, out, _ = run(capsys, "profile", "--n", "3", "--k", "1", "--t-max", "3", "--format", "json", "--bounds-only")
    doc = json.loads(out)
    assert doc["columns"] == cli.PROFILE_COLUMNS
    assert doc["rows"][0]["d_exact"] is None and doc["rows"][0]["g_bound"] is None
    assert doc["schema_version"] == cli.SCHEMA_VERSION


@pytest.mark.parametrize("n,k,needle", [("0", "1", "n >= 1"), ("3", "0", "k >= 1")])
def test_profile_invalid(capsys, n, k, needle):
    code, _, err = run(capsys, "profile", "--n", n, "--k", k)
    assert code != 0 and needle in err


def test_profile_memory_guard(capsys, monkeypatch):
    monkeypatch.setattr(engine, "DENSE_MAX_N", 10)
    code, _, err = run(capsys, "profile", "--n", "11", "--k", "1", "--t-max", "2")
    assert code != 0 and "--stream-rows" in err
    code, out, _ = run(capsys, "profile", "--n", "11", "--k", "1", "--t-max", "30", "--stream-rows")
    assert code == 0
    _, rows = read_csv(out)
    dense = engine.exact_tv_profile(KneserParams(11, 1), 30, stream=False)
    assert [float(r["d_exact"]) for r in rows] == pytest.approx(list(dense), abs=1e-14)


def test_mix(capsys):
    code, out, _ = run(capsys, "mix", "--n", "2", "--k", "1", "--eps", "0.75")
    assert code == 0
    assert json.loads(out)["report"]["t_mix"] == {"0.75": 1}
    code, out, _ = run(capsys, "mix", "--n", "1", "--k", "3")
    assert json.loads(out)["report"]["t_mix"] == {"0.25": 1}


def test_mix_n100(capsys):
    code, out, _ = run(capsys, "mix", "--n", "100", "--k", "1", "--eps", "0.25", "--eps", "0.75", "--c-grid=-3:3:1")
    rep = json.loads(out)["report"]
    assert rep["t_star"] == pytest.approx(0.5 * math.log(201) / math.log(1.01))
    for t in rep["t_mix"].values():
        assert abs(t - rep["t_star"]) <= 300
    assert [r["c"] for r in rep["window_probe"]["rows"]] == [-3, -2, -1, 0, 1, 2, 3]


def test_window(capsys):
    code, out, _ = run(capsys, "window", "--n", "40", "--k", "1", "--c-grid=-1:1:0.5")
    _, rows = read_csv(out)
    assert [float(r["c"]) for r in rows] == [-1, -0.5, 0, 0.5, 1]
    code, out, _ = run(capsys, "window", "--n", "40", "--k", "1", "--bounds-only", "--format", "json")
    doc = json.loads(out)
    assert doc["columns"] == ["c", "t", "lower", "upper"] and len(doc["rows"]) == 13


def test_oracle_check(capsys):
    assert run(capsys, "oracle-check", "--n", "2", "--k", "1")[0] == 0
    code, out, _ = run(capsys, "oracle-check", "--n", "3", "--k", "2")
    assert code == 0 and json.loads(out)["passed"] is True
    code, _, err = run(capsys, "oracle-check", "--n", "10", "--k", "1")
    assert code != 0 and "5000" in err


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "2", "--k", "1")
    _, rows = read_csv(out)
    assert [(float(r["eigenvalue"]), int(r["multiplicity"])) for r in rows] == pytest.approx(
        [(1, 1), (-2 / 3, 4), (1 / 3, 5)]
    )


def test_simulate(capsys, tmp_path):
    argv = ["simulate", "--n", "2", "--k", "1", "--walks", "100000", "--horizon", "10", "--seed", "7"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    _, rows = read_csv(out)
    r1 = rows[1]
    assert abs(float(r1["emp_mean"]) - 4 / 3) <= 4 * float(r1["stderr"])
    assert float(r1["exact_mean"]) == pytest.approx(4 / 3)
    assert run(capsys, *argv)[1] == out
    target = tmp_path / "a.csv"
    run(capsys, *argv, "--out", str(target))
    # only the embedded config (which records --out) differs
    assert target.read_text().splitlines()[1:] == out.splitlines()[1:]


def test_simulate_modes_agree(capsys):
    base = ["simulate", "--n", "3", "--k", "1", "--walks", "20000", "--horizon", "6", "--seed", "3"]
    _, lumped = read_csv(run(capsys, *base, "--mode", "lumped")[1])
    _, explicit = read_csv(run(capsys, *base, "--mode", "explicit")[1])
    for a, b in zip(lumped[1:], explicit[1:]):
        se = math.hypot(float(a["stderr"]), float(b["stderr"]))
        assert abs(float(a["emp_mean"]) - float(b["emp_mean"])) <= 4 * se


def test_run_config_roundtrip(capsys):
    argv = ["simulate", "--n", "2", "--k", "1", "--walks", "500", "--horizon", "3", "--seed", "9", "--format", "json"]
    cfg = cli.RunConfig.from_namespace(cli.build_parser().parse_args(argv))
    _, out, _ = run(capsys, *argv)
    header = json.loads(out)["config"]
    assert cli.RunConfig.from_dict(json.loads(json.dumps(header))) == cfg


def test_c_grid_parser():
    assert cli.parse_c_grid("-3:3:1.5") == [-3, -1.5, 0, 1.5, 3]
    assert cli.parse_c_grid("0:1:0.1")[-1] == 1.0
    with pytest.raises(Exception):
        cli.parse_c_grid("1:0:1")


def test_fmt_real():
    assert cli.fmt_real(None) == ""
    assert cli.fmt_real(0.1) == "0.10000000000000001"
    assert float(cli.fmt_real(1 / 3)) == 1 / 3
    assert cli.fmt_real(-math.inf) == "-inf"
