import json
import os

import pytest

from hornlab.cli import main
from hornlab.multipath import m_map
from hornlab.samples import WORKED_EXAMPLE_M, worked_example

DATA = os.path.join(os.path.dirname(__file__), "..", "data", "worked_example.json")


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None, out


def _m_file(tmp_path, m):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(m.to_json()))
    return str(p)


def test_m_map_example(capsys):
    code, rep, _ = run(capsys, "--cmd", "m_map", "--input", DATA)
    assert code == 0 and rep["status"] == "pass"
    got = {tuple(v["alpha"]): v["m"] for v in rep["m"]["values"]}
    assert got == {a: int(v) for a, v in WORKED_EXAMPLE_M.items()}
    assert rep["singular_values"]["23"] == [3, -1]
    assert rep["singular_values"]["1"] == [2, 1]


def test_m_map_single_network(capsys, tmp_path):
    obj = json.load(open(DATA))
    obj["networks"] = obj["networks"][:1]
    p = tmp_path / "one.json"
    p.write_text(json.dumps(obj))
    code, rep, _ = run(capsys, "--cmd", "m_map", "--input", str(p))
    assert code == 0 and list(rep["singular_values"]) == ["1"]


def test_malformed_and_empty_input(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"networks": [\n  {"rank": 2,}\n]}')
    code, rep, _ = run(capsys, "--cmd", "m_map", "--input", str(p))
    assert code == 2 and rep["error"]["type"] == "parse" and rep["error"]["line"] == 2
    p.write_text("")
    code, rep, _ = run(capsys, "--cmd", "check", "--input", str(p))
    assert code == 2 and rep["status"] == "error"
    code, _, _ = run(capsys, "--cmd", "nope")
    assert code == 2


def test_cap_exit_code(capsys):
    code, rep, _ = run(capsys, "--cmd", "m_map", "--input", DATA, "--cap", "3")
    assert code == 3 and rep["error"]["type"] == "numeric"


def test_check(capsys, tmp_path):
    m = m_map(worked_example())
    code, rep, _ = run(capsys, "--cmd", "check", "--input", _m_file(tmp_path, m))
    assert code == 0 and all(rep["verdicts"].values())
    obj = m.to_json()
    for v in obj["values"]:
        if v["alpha"] == [0, 2, 0]:
            v["m"] = 6
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(obj))
    code, rep, _ = run(capsys, "--cmd", "check", "--input", str(p))
    assert code == 1 and rep["status"] == "fail"
    assert not rep["verdicts"]["rhombus"]
    assert {"long": [[0, 2, 0], [1, 0, 0]], "short": [[0, 1, 0], [1, 1, 0]]} in rep["violations"]["rhombus"]


def test_reconstruct(capsys, tmp_path):
    m = m_map(worked_example())
    code, rep, _ = run(capsys, "--cmd", "reconstruct", "--input", _m_file(tmp_path, m))
    assert code == 0 and all(rep["verdicts"].values())
    code, rep, _ = run(capsys, "--cmd", "reconstruct", "--n", "3", "--seed", "4")
    assert code == 0 and rep["n"] == 3


def test_minors_summary(capsys):
    code, rep, _ = run(capsys, "--cmd", "minors", "--n", "3", "--k", "3", "--seed", "1",
                       "--trials", "100")
    assert code == 0
    assert "octahedron residual: 100/100 exactly zero" in rep["summary"]


def test_scaling_experiments(capsys, tmp_path):
    csv_path = tmp_path / "conv.csv"
    code, rep, _ = run(capsys, "--cmd", "scaling", "--experiment", "convergence",
                       "--csv", str(csv_path))
    assert code == 0 and rep["verdicts"]["monotone"]
    assert csv_path.read_text().splitlines()[0] == "s,error,s_times_error,closed_form"
    code, rep, _ = run(capsys, "--cmd", "scaling", "--experiment", "appendix_a",
                       "--trials", "2000")
    assert code == 0 and all(rep["verdicts"].values())
    code, rep, _ = run(capsys, "--cmd", "scaling", "--experiment", "concentration",
                       "--trials", "40")
    assert code == 0 and rep["verdicts"]["median_decreasing"]
    code, rep, _ = run(capsys, "--cmd", "scaling", "--experiment", "convergence",
                       "--s", "400")
    assert code == 3


def test_reports_are_byte_identical(capsys, tmp_path):
    outs = []
    for _ in range(2):
        _, _, text = run(capsys, "--cmd", "reconstruct", "--n", "2", "--seed", "9")
        outs.append(text)
    assert outs[0] == outs[1]
    out = tmp_path / "r.json"
    assert main(["--cmd", "m_map", "--input", DATA, "--output", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"
