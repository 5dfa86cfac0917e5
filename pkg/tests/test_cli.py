import io
import json
import shutil
import subprocess
from pathlib import Path

import pytest

from fsets.cli import run
from fsets.scenario import example_scenario, load_scenario

ROOT = Path(__file__).resolve().parent.parent


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


def test_charpoly_text():
    assert call("charpoly", "--a4", "1", "--a6", "0") == (0, "[5, -2, 1]\n", "")
    assert call("charpoly", "--a4", "0", "--a6", "1")[1] == "[5, 0, 1]\n"


def test_charpoly_from_scenario(tmp_path):
    code, out, _ = call("charpoly", write(tmp_path, example_scenario(2)))
    assert code == 0 and out == "E: [5, -2, 1]\n"


def test_example1_report():
    code, out, _ = call("example1", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert [w["coefficients"] for w in rep["intersection"]["witnesses"]] == [[1], [5], [25], [125]]
    assert rep["certificate"]["verdict"] == "PASS"
    assert all(r["holds"] for r in rep["pointwise_identity"])


def test_example3_report():
    code, out, _ = call("example3", "--n", "5", "--format", "json")
    rep = json.loads(out)["recurrence"]
    assert code == 0 and rep["verified"]
    assert rep["coefficients"][2:4] == [[-5, 2], [-10, -1]]


def test_reports_are_deterministic(tmp_path):
    path = write(tmp_path, example_scenario(1))
    a = call("certify", path, "--bound", "30", "--format", "json")
    b = call("certify", path, "--bound", "30", "--format", "json", "--threads", "3")
    assert a == b and a[0] == 0


def test_scenario_roundtrip_matches_builtin(ex2):
    st = load_scenario(example_scenario(2))
    assert str(st.points["Q"]) == str(ex2.points["Q"])
    assert st.points["Q"].materialize() == ex2.points["Q"].materialize()
    assert [str(g) for g in st.gamma.generators] == [str(g) for g in ex2.gamma.generators]


def test_full_group_gives_three_to_the_rank(tmp_path):
    data = {
        "schema": "fsets-scenario/1",
        "p": 5,
        "tower": "t^3 + 1",
        "torus_dim": 1,
        "points": {n: {"torus": [c], "elliptic": []} for n, c in (("A", "t"), ("B", "t + 1"), ("C", "t + 2"))},
        "gamma": ["A", "B", "C"],
    }
    code, out, _ = call("intersect", write(tmp_path, data), "--bound", "1", "--format", "json")
    assert code == 0 and len(json.loads(out)["intersection"]["witnesses"]) == 27
    code, _, err = call("intersect", write(tmp_path, data), "--bound", "100")
    assert code == 69 and "budget" in err


def test_fail_verdict_exit_code(tmp_path):
    data = example_scenario(1)
    data["certificate"] = {"groupless": [data["certificate"]["groupless"][0]]}
    code, out, _ = call("certify", write(tmp_path, data), "--bound", "30")
    assert code == 2 and "completeness failure" in out


def test_bounded_verdict_exit_code(tmp_path):
    code, out, _ = call("certify", write(tmp_path, example_scenario(1)), "--cap", "0")
    assert code == 3 and "PASS-BOUNDED" in out


@pytest.mark.parametrize(
    "mutate,code",
    [
        (lambda d: "{not json", 64),
        (lambda d: {**d, "schema": "other/9"}, 65),
        (lambda d: {**d, "tower": "t^2"}, 65),
        (lambda d: {**d, "tower": "t^3 + +"}, 64),
        (lambda d: {**d, "gamma": ["Nope"]}, 65),
        (lambda d: {**d, "curves": [{"name": "E", "a4": 0, "a6": 0}]}, 65),
        (lambda d: {**d, "points": {**d["points"], "P": {"curve": "E", "x": "t", "y": "t"}}}, 65),
        (lambda d: {**d, "variety": {"torus": ["x3 - 1"]}}, 64),
    ],
)
def test_error_exit_codes(tmp_path, mutate, code):
    path = write(tmp_path, mutate(example_scenario(1)))
    got, out, err = call("intersect", path, "--bound", "2")
    assert got == code and out == "" and err


def test_bad_flags_exit_64():
    assert call("example1", "--threads", "0")[0] == 64
    assert call("nonsense")[0] == 64
    assert call("charpoly")[0] == 64


def test_selftest_small():
    code, out, _ = call("selftest", "--samples", "10")
    assert code == 0 and out.strip().endswith("verdict: PASS")


def test_shipped_scenarios_load():
    for path in sorted((ROOT / "scenarios").glob("*.json")):
        load_scenario(json.loads(path.read_text()))


@pytest.mark.skipif(shutil.which("fsets") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["fsets", "charpoly", "--a4", "1", "--a6", "0"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "[5, -2, 1]\n"
