import json

import pytest

from robinpeaks.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_lambda1d(capsys, tmp_path):
    out = str(tmp_path / "lam.json")
    code, stdout, _ = run(capsys, "lambda1d", "--q", "1.5", "--d", "2",
                          "--j", "1", "--tol", "1e-3", "--out", out)
    assert code == 0
    payload = json.loads(stdout)
    assert payload["value"] < 0.0
    assert payload["converged"] is True
    assert len(payload["ladder"]) >= 3
    report = json.load(open(out))
    assert report["payload"]["value"] == payload["value"]
    assert "created" in report["meta"]


def test_xsection(capsys):
    code, stdout, _ = run(capsys, "xsection", "--length", "1.0",
                          "--alpha", "10.0", "--k", "2")
    assert code == 0
    vals = json.loads(stdout)["eigenvalues"]
    assert vals[0] == pytest.approx(-100.018, abs=1e-2)


def test_mesh(capsys, tmp_path):
    out = str(tmp_path / "mesh.txt")
    code, stdout, _ = run(capsys, "mesh", "--q", "1.5", "--length", "1.0",
                          "--a", "1.0", "--smin", "1e-3", "--ns", "8",
                          "--nt", "4", "--out", out)
    assert code == 0
    info = json.loads(stdout)
    assert info["num_vertices"] == 9 * 5
    assert open(out).readline().startswith("vertices 45 triangles 64")


def test_fit_synthetic(capsys, tmp_path):
    cfg = {"synthetic": {"alphas": [2, 3, 4.5, 6.75, 10.0],
                         "coefficient": 3.0, "power": 4.0}, "q": 1.5}
    cfg_path = tmp_path / "fit.json"
    cfg_path.write_text(json.dumps(cfg))
    out = str(tmp_path / "fit_out.json")
    csv_path = str(tmp_path / "fit.csv")
    code, stdout, _ = run(capsys, "fit", "--config", str(cfg_path),
                          "--out", out, "--csv", csv_path)
    assert code == 0
    payload = json.load(open(out))["payload"]
    assert payload["slope_raw"] == pytest.approx(4.0, abs=1e-9)
    assert payload["coeff_raw"] == pytest.approx(3.0, abs=1e-9)
    header = open(csv_path).readline().strip().split(",")
    assert header == ["alpha", "lambda"]


def test_fit_real_sweep(capsys, tmp_path):
    cfg = {"q": 1.5, "alpha_list": [2.0, 3.0, 4.5, 6.75], "mesh_budget": 8000,
           "j": 1, "lambda_L1": -2.6026, "seed": 0}
    cfg_path = tmp_path / "fit_real.json"
    cfg_path.write_text(json.dumps(cfg))
    out = str(tmp_path / "fit_real_out.json")
    code, stdout, _ = run(capsys, "fit", "--config", str(cfg_path), "--out", out)
    assert code == 0
    payload = json.load(open(out))["payload"]
    assert 3.0 < payload["slope_raw"] < 5.0
    assert payload["theory_coeff"] == pytest.approx(16 * 2.6026)


def test_payload_determinism(capsys, tmp_path):
    cfg = {"synthetic": {"alphas": [2, 3, 4.5, 6.75], "coefficient": 2.0,
                         "power": 4.0}, "q": 1.5, "seed": 0}
    cfg_path = tmp_path / "fit.json"
    cfg_path.write_text(json.dumps(cfg))
    payloads = []
    for name in ("a.json", "b.json"):
        out = str(tmp_path / name)
        assert run(capsys, "fit", "--config", str(cfg_path), "--out", out)[0] == 0
        payloads.append(json.dumps(json.load(open(out))["payload"],
                                   sort_keys=True))
    assert payloads[0] == payloads[1]


def test_compare(capsys, tmp_path):
    cfg = {"sections": [{"kind": "ball", "radius": 0.5641895835477563, "dim": 2},
                        {"kind": "polygon",
                         "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
           "q": 1.5, "j": 1, "lambda_L1": -2.6}
    cfg_path = tmp_path / "cmp.json"
    cfg_path.write_text(json.dumps(cfg))
    code, stdout, _ = run(capsys, "compare", "--config", str(cfg_path))
    assert code == 0
    assert "ball least negative: True" in stdout


def test_pullback_cli(capsys, tmp_path):
    cfg = {"trials": 1, "q_list": [1.5], "eps_list": [0.5]}
    cfg_path = tmp_path / "pb.json"
    cfg_path.write_text(json.dumps(cfg))
    out = str(tmp_path / "pb_out.json")
    code, stdout, _ = run(capsys, "pullback", "--config", str(cfg_path),
                          "--out", out)
    assert code == 0
    assert json.load(open(out))["payload"]["all_pass"] is True


def test_sweep_cli_small(capsys, tmp_path):
    cfg = {"q": 1.5, "alpha_list": [2.0, 3.0], "mesh_budget": 8000, "seed": 0}
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps(cfg))
    out = str(tmp_path / "sweep_out.json")
    csv_path = str(tmp_path / "sweep.csv")
    code, stdout, _ = run(capsys, "sweep", "--config", str(cfg_path),
                          "--out", out, "--csv", csv_path)
    assert code == 0
    payload = json.load(open(out))["payload"]
    assert len(payload["points"]) == 2
    assert payload["points"][0]["eigenvalues"][0] < 0.0
    rows = open(csv_path).read().splitlines()
    assert rows[0].split(",")[0] == "alpha"
    assert len(rows) == 3


def test_agmon_cli(capsys, tmp_path):
    cfg = {"q": 1.5, "alpha_list": [2.0, 3.0, 4.5], "mesh_budget": 8000,
           "b": 0.1}
    cfg_path = tmp_path / "agmon.json"
    cfg_path.write_text(json.dumps(cfg))
    out = str(tmp_path / "agmon_out.json")
    code, stdout, _ = run(capsys, "agmon", "--config", str(cfg_path),
                          "--out", out)
    assert code == 0
    ratios = json.load(open(out))["payload"]["ratios"]
    assert len(ratios) == 3 and all(r >= 1.0 for r in ratios)


def test_window_cli(capsys, tmp_path):
    cfg = {"q": 1.5, "eps_list": [0.2, 0.1]}
    cfg_path = tmp_path / "win.json"
    cfg_path.write_text(json.dumps(cfg))
    code, stdout, _ = run(capsys, "window", "--config", str(cfg_path))
    assert code == 0
    assert "spread" in stdout


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_invalid_config_is_machine_readable(capsys, tmp_path):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text("{not json")
    code, _, stderr = run(capsys, "sweep", "--config", str(cfg_path))
    assert code == 3
    err = json.loads(stderr)
    assert err["error"] == "ConfigError"


def test_missing_config_key(capsys, tmp_path):
    cfg_path = tmp_path / "empty.json"
    cfg_path.write_text("{}")
    code, _, stderr = run(capsys, "sweep", "--config", str(cfg_path))
    assert code == 3
    assert "error" in json.loads(stderr)


def test_reproduce_subset(capsys, tmp_path):
    out = str(tmp_path / "rep.json")
    code, stdout, _ = run(capsys, "reproduce", "--criteria", "2", "--out", out)
    assert code == 0
    assert "PASS" in stdout or "criterion" in stdout
    report = json.load(open(out))
    assert report["payload"]["all_passed"] is True
