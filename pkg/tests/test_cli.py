import json

import pytest
from click.testing import CliRunner

from dehnfloer import nocross
from dehnfloer.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_NUMERIC, EXIT_USAGE, RunConfig, load_config, main
from dehnfloer.errors import ShapeError


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return invoke


def test_homology(run):
    r = run("homology")
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["dims_by_degree"] == [1, 3, 0]
    assert out["surface"] == {"genus": 2, "boundary": 0}


def test_hf_dimension(run):
    out = json.loads(run("hf", "-m", "2").output)
    assert out["hf"]["power"] == 2 and out["hf"]["dim"] == len(out["hf"]["basis"])


def test_product_with_identity_checks(run):
    r = run("product", "-m", "1", "-n", "2", "-p", "1")
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["checks"] and all(c["pass"] for c in out["checks"])


def test_coproduct_twist_row(run):
    r = run("coproduct", "-m", "2", "-n", "3")
    assert r.exit_code == 0
    rows = json.loads(r.output)["twist_rows"]
    assert sorted(map(tuple, rows["e^5_2"])) == sorted([("pt@0", "e^3_2"), ("e^2_1", "e^3_1"), ("pt@0", "pt@0")])


def test_index(run):
    out = json.loads(run("index", "--genus", "3").output)
    assert out["twist_region_index"] == {"free": 1, "one_end_fixed": 0}
    assert out["monotonicity"]["satisfied"]
    assert out["wrapping"]["forced_zero"]


def test_ode_csv_and_json(run):
    r = run("ode", "--k", "3", "--samples", "5")
    lines = r.output.strip().splitlines()
    assert lines[0] == "s,x" and len(lines) == 6
    assert float(lines[1].split(",")[1]) == pytest.approx(4.8322657296, abs=1e-9)
    out = json.loads(run("ode", "--k", "3", "--format", "json").output)
    assert out["max_residual"] < 1e-9 and out["x_far"] == pytest.approx(0.6)


def test_cascades_match(run):
    r = run("cascades", "-m", "2", "-n", "2")
    assert r.exit_code == 0
    assert json.loads(r.output)["matches_coproduct"] is True


def test_verify_nocrossing_writes_certificate(run, tmp_path):
    cert = tmp_path / "cert.json"
    r = run("verify-nocrossing", "-m", "1", "-n", "1", "--bound", "3", "--certificate", str(cert))
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert all(x["empty"] for x in out["results"])
    data = json.loads(cert.read_text())
    assert {d["mode"] for d in data} == {"product", "coproduct"}
    assert all(sum(e["count"] for e in d["entries"]) == s["searched"] for d, s in zip(data, out["results"]))


def test_relaxed_control_run(run, tmp_path):
    cert = tmp_path / "cert.json"
    r = run("verify-nocrossing", "--mode", "product", "-m", "1", "-n", "1", "--bound", "2",
            "--relaxed", "--certificate", str(cert))
    assert r.exit_code == 0
    assert json.loads(r.output)["results"][0]["feasible"] > 0


def test_failed_check_exits_one(run, tmp_path, monkeypatch):
    real = nocross.verify_grid
    monkeypatch.setattr(nocross, "verify_grid", lambda modes, ms, ns, bound, strict, workers: real(
        modes, ms, ns, bound, False, workers))
    r = run("verify-nocrossing", "--mode", "product", "-m", "1", "-n", "1", "--bound", "2",
            "--certificate", str(tmp_path / "c.json"))
    assert r.exit_code == EXIT_FAIL


@pytest.mark.parametrize(
    "args,code",
    [
        (("hf", "--genus", "1"), EXIT_DOMAIN),
        (("product", "--genus", "0", "--boundary", "2"), EXIT_DOMAIN),
        (("hf", "--curve", "sep"), EXIT_USAGE),
        (("hf", "--curve", "sep", "--split", "1,x,1,0"), EXIT_USAGE),
        (("ode", "--k", "9"), EXIT_USAGE),
        (("homology", "--genus", "-1"), EXIT_USAGE),
        (("ode", "--k", "3", "--tolerance", "1e-30"), EXIT_NUMERIC),
    ],
)
def test_exit_codes(run, args, code):
    assert run(*args).exit_code == code


def test_output_is_deterministic(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("coproduct", "-m", "2", "-n", "2", "-o", str(a))
    run("coproduct", "-m", "2", "-n", "2", "-o", str(b))
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0
    assert run("ode", "--k", "2").output == run("ode", "--k", "2").output


def test_yaml_config_and_env(run, tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("surface:\n  genus: 4\n  boundary: 0\ncurve:\n  kind: separating\n  split: [2, 0, 2, 0]\n")
    out = json.loads(run("--config", str(cfg), "homology").output)
    assert out["curve"]["kind"] == "separating" and out["surface"]["genus"] == 4
    out = json.loads(run("homology", env={"DEHNFLOER_CONFIG": str(cfg)}).output)
    assert out["surface"]["genus"] == 4
    # flags beat the file
    out = json.loads(run("--config", str(cfg), "homology", "--genus", "2", "--curve", "nonsep").output)
    assert out["surface"]["genus"] == 2


def test_json_config_and_bad_keys(tmp_path):
    good = tmp_path / "c.json"
    good.write_text(json.dumps({"m": 3, "powers": {"n": 4}, "bound": 5}))
    assert load_config(str(good)) == RunConfig(m=3, n=4, bound=5)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ShapeError):
        load_config(str(bad))
    with pytest.raises(ShapeError):
        load_config(str(tmp_path / "missing.yaml"))


def test_bad_config_file_exit_code(run, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("surface:\n  colour: 3\n")
    assert run("--config", str(bad), "homology").exit_code == EXIT_USAGE
