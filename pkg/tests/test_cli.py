import json
import math

import numpy as np
import pytest

from anisolp import GridSpec, cli, from_spectrum, read_field, write_field
from anisolp.anisotropy import Anisotropy
from anisolp.littlewood_paley import build_family, decompose, max_admissible_level
from anisolp.space_norms import SpaceParams, triebel_norm


@pytest.fixture
def field_file(tmp_path):
    f = from_spectrum(GridSpec([64, 64]), {(1, 2): 1.0, (3, -1): 0.5j, (0, 0): 2.0, (-3, 1): 0.25})
    path = tmp_path / "field.mnf1"
    write_field(f, path)
    return f, path


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_matches_library(field_file, capsys):
    f, path = field_file
    code, out, _ = run(["norm", "--family", "F", "--s", "1", "--q", "2", "--p", "2,2", "--input", str(path)], capsys)
    assert code == 0
    g = read_field(path)
    aniso = Anisotropy([1, 1])
    fam = build_family(g.spec, aniso, max_admissible_level(g.spec, aniso))
    expected = triebel_norm(decompose(g, fam), SpaceParams(1, aniso, (2, 2), 2, "F"))
    assert float(out) == expected


def test_decompose_writes_bands(field_file, tmp_path, capsys):
    f, path = field_file
    out_dir = tmp_path / "bands"
    out_dir.mkdir()
    code, out, _ = run(["decompose", "--input", str(path), "--out-dir", str(out_dir), "--jmax", "3"], capsys)
    assert code == 0
    files = sorted(out_dir.iterdir())
    assert len(files) == 4 == len(out.split())
    total = sum(read_field(p).values for p in files)
    assert np.abs(total - f.values).max() < 1e-12


def test_verify_npp(tmp_path, capsys):
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    argv = ["verify", "--ineq", "npp", "--n", "1", "--p", "1", "--r", "inf", "--R", "8", "--trials", "100",
            "--seed", "7", "--json", str(js), "--csv", str(cs)]
    code, out, _ = run(argv, capsys)
    assert code == 0
    report = json.loads(js.read_text())
    assert report["verdict"] == "pass" and math.isfinite(report["c_emp"])
    assert json.loads(out)["c_emp"] == report["c_emp"]
    assert len(cs.read_text().splitlines()) == 101


def test_csv_deterministic(tmp_path, capsys, monkeypatch):
    argv = ["verify", "--ineq", "mixed-npp", "--p", "1/2,1", "--r", "1,3", "--R", "8,4", "--trials", "10",
            "--seed", "3"]
    run(argv + ["--csv", str(tmp_path / "a.csv")], capsys)
    monkeypatch.setenv("MNL_THREADS", "4")
    run(argv + ["--csv", str(tmp_path / "b.csv")], capsys)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_balance_violation_exit_2(capsys):
    code, _, err = run(["verify", "--ineq", "sobolev", "--a", "1,2", "--s", "3.5", "--t", "1", "--p", "1,1",
                        "--r", "3,3"], capsys)
    assert code == 2
    assert "s - sum(a_k/p_k) = 0.5" in err and "t - sum(a_k/r_k) = 0.0" in err


def test_errors_aggregated(tmp_path, capsys):
    code, _, err = run(["verify", "--ineq", "npp", "--p", "4", "--r", "2", "--R", "-1", "--trials", "0",
                        "--json", str(tmp_path / "missing" / "r.json")], capsys)
    assert code == 2
    for field in ("p, r:", "R:", "trials:", "json:"):
        assert field in err


def test_nyquist_violation(capsys):
    code, _, err = run(["verify", "--ineq", "mixed-npp", "--p", "1,1", "--r", "2,2", "--R", "4,9", "--N", "16"],
                       capsys)
    assert code == 2 and "axis 2" in err and "R:" in err


def test_bad_input_file(tmp_path, capsys):
    bad = tmp_path / "bad.mnf1"
    bad.write_bytes(b"NOPE" + bytes(40))
    code, _, err = run(["norm", "--p", "2", "--input", str(bad)], capsys)
    assert code == 2 and "bad-magic" in err
    code, _, err = run(["norm", "--p", "2", "--input", str(tmp_path / "none.mnf1")], capsys)
    assert code == 2 and "input:" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "verify", "ineq": "npp", "p": "1/2", "r": "2", "R": 4, "trials": 3}))
    code, out, _ = run(["verify", "--config", str(cfg), "--trials", "5"], capsys)
    d = json.loads(out)
    assert code == 0 and d["config"]["trials"] == 5 and d["config"]["p"] == 0.5


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"ineq": "npp", "tirals": 3}))
    code, _, err = run(["verify", "--config", str(cfg)], capsys)
    assert code == 2 and "tirals" in err
    code, _, err = run(["verify", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_sweep(tmp_path, capsys):
    code, out, _ = run(["sweep", "--n", "1", "--p", "2", "--r", "2", "--R-list", "2,4,8", "--trials", "3"], capsys)
    assert code == 0 and json.loads(out)["fit"]["slope"] == pytest.approx(0.0, abs=1e-12)
    code, _, err = run(["sweep", "--R-list", "2,4"], capsys)
    assert code == 2 and "R-list" in err


def test_failing_verdict_exit_1(capsys):
    # random fields do not reach the predicted slope exactly
    code, out, _ = run(["sweep", "--n", "1", "--p", "1", "--r", "inf", "--R-list", "2,4,8", "--trials", "2",
                        "--kinds", "random-rect", "--slope-tol", "1e-9"], capsys)
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_verify_all(capsys):
    code, out, _ = run(["verify", "--ineq", "all", "--trials", "3", "--seed", "1"], capsys)
    d = json.loads(out)
    assert code == 0
    assert set(d["families"]) == {"npp", "mixed-npp", "seq-npp", "sobolev", "lemma1", "subadd"}
    assert all(v["verdict"] == "pass" for v in d["families"].values())


def test_schema_lists_cli_options():
    schema = json.loads((cli.Path(cli.__file__).parent / "schema" / "run_config.schema.json").read_text())
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.validate({"command": "verify", "ineq": "npp", "p": "1/2", "R": 4}, schema)
    parser_keys = set()
    for action in cli.build_parser()._subparsers._group_actions[0].choices.values():
        parser_keys |= {a.dest for a in action._actions if a.dest not in ("help", "config")}
    assert parser_keys <= set(schema["properties"])


def test_no_command(capsys):
    assert cli.main([]) == 2
