import json
import subprocess
import sys

import pytest

from tracecode.cli import (
    JobConfig,
    RunReport,
    emit,
    main,
    parse_a,
    run,
    sweep,
    sweep_grid,
)
from tracecode.errors import ConfigError


def test_run_reports_match_for_small_code():
    rep = run(JobConfig(3, 5, a_spec={"exponent": 2}, tasks=["enumerate", "predict", "dual"]))
    assert rep.ok(), rep.mismatches
    assert (rep.n, rep.k, rep.d) == (27, 5, 15)
    assert rep.case == "T1_oddM"
    assert rep.dual["a3"] == 96 and rep.dual["methods_agree"]
    assert rep.dual["predicted"]["printed_a3"] == 3024


def test_report_json_roundtrip():
    rep = run(JobConfig(3, 4, a_spec={"coeffs": [0, 1]}, tasks=["enumerate", "predict", "verify-lemmas"]))
    back = RunReport.from_json(rep.to_json())
    assert back == rep
    assert json.loads(rep.to_json()) == json.loads(back.to_json())


def test_errors_are_captured_in_report():
    rep = run(JobConfig(3, 4, a_spec={"coeffs": [2]}, tasks=["enumerate"]))
    assert not rep.ok() and "ConfigError" in rep.error
    rep = run(JobConfig(3, 6, tasks=["enumerate"], max_field=100))
    assert "TooLarge" in rep.error


def test_config_validation():
    with pytest.raises(ConfigError):
        JobConfig(3, 4, tasks=["bogus"]).validate()
    with pytest.raises(ConfigError):
        JobConfig(3, 4, a_spec={"exponent": 1, "coeffs": [1]}).validate()
    with pytest.raises(ConfigError):
        parse_a("beta^3")
    assert parse_a("exp:7") == {"exponent": 7}
    assert parse_a("coeffs:0,1,2") == {"coeffs": [0, 1, 2]}


def test_sweep_isolates_failures():
    jobs = sweep_grid([3], [3, 4], 2, ["enumerate", "predict"])
    jobs.insert(1, JobConfig(4, 3, tasks=["enumerate"]))
    jobs.append(JobConfig(3, 4, tasks=["nope"]))
    reports = sweep(jobs, workers=2)
    assert [r.ok() for r in reports] == [True, False, True, True, True, False]
    assert [(r.p, r.m) for r in reports] == [(j.p, j.m) for j in jobs]
    assert sweep([]) == []


def test_sweep_grid_seeded_choice_is_reproducible():
    a = sweep_grid([3], [4], 5, ["enumerate"], seed=4)
    b = sweep_grid([3], [4], 5, ["enumerate"], seed=4)
    assert [j.a_spec for j in a] == [j.a_spec for j in b]
    assert len({j.a_spec["exponent"] for j in a}) == 5


def test_emit_formats():
    rep = run(JobConfig(3, 3, tasks=["enumerate"]))
    rows = emit(rep, "csv").splitlines()
    assert rows[0] == "weight,count"
    assert sum(int(r.split(",")[1]) for r in rows[1:]) == 27
    many = emit([rep, rep], "csv").splitlines()
    assert many[0] == "p,m,a,weight,count" and len(many) == 2 * (len(rows) - 1) + 1
    assert "status: ok" in emit(rep, "text")
    assert len(json.loads(emit([rep], "json"))) == 1


def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    dump = tmp_path / "words.txt"
    assert main(["code", "run", "--p", "3", "--m", "3", "--a", "exp:2", "--output", str(out),
                 "--dump", str(dump)]) == 0
    assert json.loads(out.read_text())["d"] == 1
    assert len(dump.read_text().splitlines()) == 27
    assert main(["code", "run", "--p", "3", "--m", "3", "--a", "coeffs:1"]) == 1
    assert main(["code", "run", "--p", "3", "--m", "3", "--tasks", "nope"]) == 2
    assert main(["code", "run", "--p", "3", "--m", "3", "--a", "nonsense"]) == 2
    capsys.readouterr()
    assert main(["field", "info", "--p", "3", "--m", "4"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["x_is_primitive"] and info["q"] == 81


def test_subcommands(capsys):
    assert main(["verify", "lemmas", "--p", "3", "--m", "4", "--a", "exp:10"]) == 0
    assert main(["verify", "dual", "--p", "3", "--m", "5"]) == 0
    assert main(["apps", "minimality", "--p", "3", "--m", "5", "--format", "text"]) == 0
    assert main(["apps", "sumset", "--p", "3", "--m", "5"]) == 0
    assert main(["code", "sweep", "--p", "3", "--m", "3,4", "--count", "2", "--format", "csv"]) == 0
    capsys.readouterr()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tracecode", "field", "info", "--p", "5", "--m", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["q"] == 25
