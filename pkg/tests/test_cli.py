import json
import subprocess
import sys
from pathlib import Path

import pytest

from quiverstab import cli
from quiverstab.exact import Field, Matrix
from quiverstab.io import SchemaError, build_problem_json, load_problem, parse_problem, representation_to_json
from quiverstab.quiver import Arrow, Quiver, Representation

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)["body"]


def test_check_stable_and_unstable(capsys):
    code, body = report(capsys, "check", CORPUS / "line_f2_stable.json", "--exhaustive")
    assert code == 0 and body["result"]["status"] == "stable"
    code, body = report(capsys, "check", CORPUS / "line_f2_zero.json")
    assert code == 1 and body["result"]["status"] == "unstable"
    assert body["result"]["witness"]["dims"] == {"v1": 1, "v2": 0}
    assert body["result"]["pairing"] == "1"


def test_kronecker_files(capsys):
    for p in (2, 3):
        assert run(capsys, "check", CORPUS / f"kronecker_f{p}_stable.json")[0] == 0
        assert run(capsys, "check", CORPUS / f"kronecker_f{p}_zero.json")[0] == 1


def test_bad_sigma_exits_2(capsys, tmp_path):
    obj = json.loads((CORPUS / "line_f2_stable.json").read_text())
    obj["parameters"]["sigma"]["v1"] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, _, err = run(capsys, "check", path)
    assert code == 2
    assert json.loads(err)["error"]["field"] == "parameters.sigma.v1"


def test_malformed_json_reports_position(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"quiver": {\n  "vertices": [}\n')
    code, _, err = run(capsys, "check", path)
    assert code == 2
    assert "line 2" in json.loads(err)["error"]["field"]


def test_schema_errors_name_the_field():
    obj = json.loads((CORPUS / "line_f2_stable.json").read_text())
    obj["representation"]["maps"]["a"] = [[[1, 0]]]
    with pytest.raises(SchemaError) as e:
        parse_problem(obj)
    assert e.value.path.startswith("representation.maps.a")
    obj = json.loads((CORPUS / "line_f2_stable.json").read_text())
    obj["field"]["p"] = 4
    with pytest.raises(SchemaError) as e:
        parse_problem(obj)
    assert e.value.path == "field.p"


def test_normalization_error(capsys, tmp_path):
    obj = json.loads((CORPUS / "line_f2_stable.json").read_text())
    obj["parameters"]["eta"] = {"v1": "1", "v2": "1"}
    path = tmp_path / "unnormalized.json"
    path.write_text(json.dumps(obj))
    code, _, err = run(capsys, "check", path)
    assert code == 2 and json.loads(err)["error"]["code"] == "normalization"


def test_identities(capsys):
    code, body = report(capsys, "identities", "--which", "weighti", "--trials", 200, "--seed", 7)
    assert code == 0
    suite = body["result"]["suites"][0]
    assert (suite["passed"], suite["trials"]) == (200, 200)


def test_weights_e12(capsys):
    code, body = report(capsys, "weights", CORPUS / "loop_e12.json", "--lambda", CORPUS / "lambdas" / "e12.json")
    assert code == 0
    assert body["result"]["mu"] == -2 and body["result"]["mu_tensor"] == -2
    assert body["result"]["flag_characterization"] is True


def test_hn_and_destabilize(capsys):
    code, body = report(capsys, "hn", CORPUS / "line_f2_zero.json")
    assert code == 0 and body["result"]["slopes"] == ["1", "-1"] and body["result"]["verified"]
    code, body = report(capsys, "destabilize", CORPUS / "loop_e12.json")
    assert body["result"]["exhausting"] and body["result"]["mu"] == -2
    code, body = report(capsys, "destabilize", CORPUS / "loop_diag12.json")
    assert not body["result"]["exhausting"]


def test_invariants_veronese(capsys):
    code, body = report(capsys, "invariants", CORPUS / "loop_augmented.json", "--veronese", 2)
    coords = body["result"]["veronese"]["coordinates"]
    assert coords == ["4", "6", "9", "9"]
    code, body = report(capsys, "invariants", CORPUS / "loop_augmented.json", "--veronese", "auto")
    assert body["result"]["veronese"]["degree"] == 2
    code, _, err = run(capsys, "invariants", CORPUS / "loop_diag12.json", "--veronese", "auto")
    assert code == 2 and "monomials" in json.loads(err)["error"]["message"]


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "line_f3_zero.json"],
        ["check", "kronecker_f2_stable.json"],
        ["hn", "random_03.json"],
        ["destabilize", "loop_e12.json"],
        ["destabilize", "two_cycle.json"],
        ["invariants", "two_cycle.json"],
        ["weights", "loop_e12.json"],
    ],
)
def test_verify_roundtrip(capsys, tmp_path, argv):
    out = tmp_path / "report.json"
    run(capsys, argv[0], CORPUS / argv[1], "--out", out)
    code, body = report(capsys, "verify", out)
    assert code == 0 and body["result"]["passed"]


def test_verify_catches_tampering(capsys, tmp_path):
    out = tmp_path / "report.json"
    run(capsys, "check", CORPUS / "line_f2_zero.json", "--out", out)
    rep = json.loads(out.read_text())
    rep["body"]["result"]["pairing"] = "2"
    out.write_text(json.dumps(rep))
    code, body = report(capsys, "verify", out)
    assert code == 1 and not body["result"]["passed"]


def test_single_file_determinism(capsys):
    bodies = [report(capsys, "check", CORPUS / "random_05.json")[1] for _ in range(2)]
    assert json.dumps(bodies[0], sort_keys=True) == json.dumps(bodies[1], sort_keys=True)


def test_text_output(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "line_f2_zero.json", "--text")
    assert code == 1 and out.splitlines()[0].startswith("command")


def test_candidate_mode(capsys, tmp_path):
    line = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"),))
    rep = Representation(line, {"v1": 1, "v2": 1}, {"a": (Matrix.zeros(1, 1),)})
    # columns span the subspace; [[]] is the zero subspace of a line
    obj = build_problem_json(rep, {"v1": 1, "v2": 1}, {"v1": -1, "v2": 1}, candidates=[{"spaces": {"v1": [[1]], "v2": [[]]}}])
    path = tmp_path / "cand.json"
    path.write_text(json.dumps(obj))
    code, body = report(capsys, "check", path, "--candidates")
    assert code == 1 and body["result"]["certificate"] == "candidate_relative"


def test_representation_roundtrip():
    f = Field(3)
    loop = Quiver(("v",), (Arrow("a", "v", "v", 2),))
    rep = Representation(loop, {"v": 2}, {"a": (Matrix.from_rows([[1, 2], [0, 1]], f), Matrix.identity(2, f))}, epsilon=0, field=f)
    back = parse_problem(build_problem_json(rep)).rep
    assert representation_to_json(back) == representation_to_json(rep)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "quiverstab", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "0.1.0"
