import importlib
import io
import json

import pytest

from painlab import cli

P5 = {"theta0": [0.3, 0.0], "theta1": [0.2, 0.0], "thetainf": [0.4, 0.0]}
ONES6 = [[1.0, 0.0]] * 6


def _run(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(str(path), out, err)
    return code, out.getvalue(), err.getvalue()


def _integrate_cfg(tmp_path):
    return {"scenario": "integrate", "kind": "P5", "parameters": P5, "initial": ONES6,
            "t0": [1.0, 0.0], "t1": [2.0, 0.0],
            "output": {"path": str(tmp_path / "rep.json"), "trajectory": str(tmp_path / "traj.csv")}}


def test_integrate_writes_monotone_csv(tmp_path):
    code, _, err = _run(tmp_path, _integrate_cfg(tmp_path))
    assert code == 0, err
    lines = (tmp_path / "traj.csv").read_text().splitlines()
    assert lines[0].startswith("re(t),im(t),re(")
    ts = [float(r.split(",")[0]) for r in lines[1:]]
    assert ts[0] == 1.0 and ts[-1] == 2.0 and all(a < b for a, b in zip(ts, ts[1:]))
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert rep["spec_version"] == 1 and rep["summary"]["pass"]
    assert all(r["label"].startswith("drift:") for r in rep["rows"])


def test_csv_round_trip_is_bit_identical(tmp_path):
    cfg = _integrate_cfg(tmp_path)
    _run(tmp_path, cfg)
    text = (tmp_path / "traj.csv").read_text()
    samples = cli.read_trajectory_csv(text)
    assert cli.trajectory_csv(samples) == text
    rc = cli.RunConfig(cfg)
    assert cli.report_from_samples(rc, samples) == json.loads((tmp_path / "rep.json").read_text())


def test_report_subcommand(tmp_path, capsys):
    cfg = _integrate_cfg(tmp_path)
    _run(tmp_path, cfg)
    code = cli.main(["report", "--config", str(tmp_path / "cfg.json"),
                     "--trajectory", str(tmp_path / "traj.csv")])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == json.loads((tmp_path / "rep.json").read_text())


def test_ny_zero_state(tmp_path):
    cfg = {"scenario": "zero-curvature", "kind": "NY",
           "parameters": {"v1": [0.2, 0.0], "v2": [0.1, 0.0], "v3": [0.5, 0.0]},
           "state": [[0.0, 0.0]] * 3, "t": [0.0, 0.0]}
    code, out, _ = _run(tmp_path, cfg)
    rep = json.loads(out)
    assert code == 0 and rep["rows"] and all(r["value"] < 1e-15 for r in rep["rows"])


def test_csv_report_format(tmp_path):
    cfg = {"scenario": "zero-curvature", "kind": "NY",
           "parameters": {"v1": [0.2, 0.0], "v2": [0.1, 0.0], "v3": [0.5, 0.0]},
           "state": [[0.0, 0.0]] * 3, "t": [0.0, 0.0], "output": {"format": "csv"}}
    code, out, _ = _run(tmp_path, cfg)
    assert code == 0 and out.splitlines()[0] == "label,value,tolerance,pass"


def test_residual_failure_exits_1(tmp_path):
    cfg = {"scenario": "zero-curvature", "kind": "P4-JM-printed",
           "parameters": {"theta0": [0.3, 0.0], "thetainf": [0.4, 0.0]},
           "state": [[0.3, 0.1], [0.2, 0.0], [0.5, 0.2], [0.1, 0.0], [0.7, 0.0], [0.2, 0.3]],
           "t": [0.4, 0.0]}
    code, out, _ = _run(tmp_path, cfg)
    assert code == 1 and not json.loads(out)["summary"]["pass"]


def test_malformed_json_exits_2(tmp_path):
    code, _, err = _run(tmp_path, '{"scenario": ')
    assert code == 2 and "field '<root>'" in err


@pytest.mark.parametrize("patch,field", [
    ({"parameters": {"theta0": [0.3, 0.0], "theta1": 0.2, "thetainf": [0.4, 0.0]}}, "parameters.theta1"),
    ({"scenario": "dance"}, "scenario"),
    ({"kind": "P9"}, "kind"),
    ({"tolerances": {"rel_tol": -1}}, "tolerances.rel_tol"),
    ({"tolerances": {"bogus": 1}}, "tolerances.bogus"),
    ({"spec_version": 2}, "spec_version"),
    ({"output": {"format": "xml"}}, "output.format"),
])
def test_config_errors_name_the_field(tmp_path, patch, field):
    cfg = {"scenario": "integrate", "kind": "P5", "parameters": P5, "initial": ONES6,
           "t0": [1.0, 0.0], "t1": [2.0, 0.0]}
    cfg.update(patch)
    code, _, err = _run(tmp_path, cfg)
    assert code == 2 and f"field '{field}'" in err


def test_missing_scenario_field_exits_2(tmp_path):
    cfg = {"scenario": "zero-curvature", "kind": "NY",
           "parameters": {"v1": [0.2, 0.0], "v2": [0.1, 0.0], "v3": [0.5, 0.0]}}
    code, _, err = _run(tmp_path, cfg)
    assert code == 2 and "field 'state'" in err


def test_numerical_failure_exits_3(tmp_path):
    cfg = {"scenario": "zero-curvature", "kind": "P5-3x3", "parameters": P5,
           "state": ONES6, "t": [0.0, 0.0]}
    code, _, err = _run(tmp_path, cfg)
    assert code == 3 and err.startswith("numerical failure")


def test_defaults_are_documented():
    assert set(cli.DEFAULTS["residual"]) == set(cli.SCENARIOS)


@pytest.mark.parametrize("name", ["bk", "mono", "ok", "par", "red", "res", "sim"])
def test_other_scenarios_pass(tmp_path, name):
    cfgs = {
        "bk": {"scenario": "backlund", "kind": "P5", "parameters": P5,
               "initial": [[0.7, 0.1], [0.3, 0.0]], "t": [1.2, 0.0]},
        "mono": {"scenario": "monodromy", "kind": "JM-P5", "parameters": P5,
                 "state": [[0.7, 0.1], [0.3, 0.0], [1.0, 0.0]], "t": [1.0, 0.0], "t1": [1.1, 0.0],
                 "loops": [{"center": [0.0, 0.0], "radius": 0.4, "base_point": [0.0, -0.4]},
                           {"center": [1.0, 0.0], "radius": 0.4, "base_point": [1.0, -0.4]}],
                 "base": [0.5, -0.8]},
        "ok": {"scenario": "okamoto", "kind": "C40-P5", "parameters": P5,
               "initial": [[0.7, 0.1], [0.3, 0.0], [1.0, 0.0]], "t0": [1.0, 0.0], "t1": [1.5, 0.0],
               "transforms": ["OKAMOTO", "R0", "IDENTITY"]},
        "par": {"scenario": "parametrize", "kind": "P5", "parameters": P5,
                "initial": [[0.7, 0.1], [0.3, 0.0], [1.0, 0.0], [1.0, 0.0]],
                "t0": [1.0, 0.0], "t1": [1.3, 0.0]},
        "red": {"scenario": "reduce", "kind": "P5", "parameters": P5, "state": ONES6, "t": [1.0, 0.0]},
        "res": {"scenario": "residuals", "kind": "C40-P5", "parameters": P5,
                "initial": [[0.7, 0.1], [0.3, 0.0], [1.0, 0.0]], "t0": [1.0, 0.0], "t1": [1.5, 0.0]},
        "sim": {"scenario": "similarity", "kind": "P5", "parameters": P5, "initial": ONES6,
                "t0": [1.0, 0.0], "points": [[[1.0, 0.0], [0.2, 0.0], [0.9, 0.1]]]},
    }
    code, out, err = _run(tmp_path, cfgs[name])
    assert code == 0, err
    assert json.loads(out)["summary"]["pass"]


# ------------------------------------------------------------ concordance

def _resolve(op):
    mod, *attrs = op.split(".")
    obj = importlib.import_module(f"painlab.{mod}")
    for a in attrs:
        obj = getattr(obj, a)
    return obj


def test_concordance_contents():
    data = cli.export_concordance()
    table = {e["label"]: e["operation"] for e in data["entries"]}
    assert len(table) >= 60
    assert table["(P5sys)"] == "systems.reduced_rhs"
    assert table["(eq:P5Okamoto-transformations-yzu)"] == "transforms.okamoto_p5"


def test_concordance_operations_resolve():
    for e in cli.export_concordance()["entries"]:
        assert _resolve(e["operation"]) is not None


def test_concordance_command(capsys):
    assert cli.main(["concordance"]) == 0
    assert json.loads(capsys.readouterr().out) == cli.export_concordance()
