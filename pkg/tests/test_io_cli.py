import json
import subprocess
import sys
from pathlib import Path

import pytest

from pckit import GF, Zmod, dual_numbers, load_problem
from pckit.cli import EXIT_LOAD, EXIT_OK, EXIT_ORACLE, EXIT_TASK, main
from pckit.errors import InvalidRingSpec, NotAHomomorphism, ParseError, SchemaError
from pckit.io import build_session, parse_kind, parse_ring
from pckit.matgroups import GroupKind

DEMOS = Path(__file__).resolve().parent.parent / "demos" / "problems"

Z2_SIGN = {
    "schema": 1,
    "ring": "GF(3)",
    "group": "Z2",
    "representations": {
        "sgn": {"kind": "GL_1", "generators": [[[2]]]},
        "one": {"kind": "GL_1", "generators": [[[1]]]},
    },
}


def write(tmp_path, data, name="p.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing --------------------------------------------------------------------------


@pytest.mark.parametrize("text,ring", [("GF(9)", GF(3, 2)), ("F(5)", GF(5)), ("Z/3^2", Zmod(3, 2)),
                                       ("Z/25", Zmod(5, 2)), ("GF(5)[eps]", dual_numbers(5)),
                                       ("GF(3^2)", GF(3, 2))])
def test_parse_ring(text, ring):
    assert parse_ring(text) == ring
    assert parse_ring(ring.to_json()) == ring


@pytest.mark.parametrize("bad,err", [("GF(6)", InvalidRingSpec), ("Z/12", InvalidRingSpec),
                                     ("ring", SchemaError), (7, SchemaError)])
def test_parse_ring_rejects(bad, err):
    with pytest.raises(err):
        parse_ring(bad)


def test_parse_kind():
    assert parse_kind("Sp_4") == GroupKind("Sp", 2)
    assert parse_kind("GL2") == GroupKind("GL", 2)
    assert parse_kind({"flavor": "SO", "n": 3}) == GroupKind("SO", 3)
    for bad in ("Sp_3", "XY_2", "GL"):
        with pytest.raises(SchemaError):
            parse_kind(bad)


# -- loading --------------------------------------------------------------------------


def test_load_sign_rep(tmp_path):
    data = dict(Z2_SIGN)
    data["representations"] = {"sgn": Z2_SIGN["representations"]["sgn"]}
    s = load_problem(write(tmp_path, data))
    assert s.group.order == 2 and list(s.representations) == ["sgn"]
    assert s.summary()["representations"]["sgn"]["kind"] == "GL_1"


def test_load_permutations():
    s = load_problem(DEMOS / "s3_f3.json")
    assert s.group.order == 6
    assert s.element(0) == 0 and s.element(s.group.labels[3]) == 3
    with pytest.raises(SchemaError):
        s.element(6)


def test_load_relation_violation(tmp_path):
    data = dict(Z2_SIGN, representations={"bad": {"kind": "GL_1", "generators": [[[2]]]}},
                ring="GF(7)")
    with pytest.raises(NotAHomomorphism, match="bad"):
        load_problem(write(tmp_path, data))


def test_load_list_form_and_local_ring(tmp_path):
    data = dict(Z2_SIGN, representations=[{"name": "a", "kind": "GL_1", "ring": "GF(5)",
                                           "generators": [[[4]]]}])
    s = load_problem(write(tmp_path, data))
    assert s.rep("a").ring == GF(5)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(schema=2),
    lambda d: d.update(extra=1),
    lambda d: d.pop("group"),
    lambda d: d.update(ring="GF(6)"),
    lambda d: d.update(tasks=[{"task": "pc-eq", "reps": ["sgn", "nope"]}]),
    lambda d: d.update(tasks=[{"reps": []}]),
    lambda d: d["representations"].update(x={"kind": "GL_2", "generators": [[[1]]]}),
    lambda d: d["representations"].update(x={"generators": [[[1]]]}),
])
def test_schema_errors(tmp_path, mutate):
    data = json.loads(json.dumps(Z2_SIGN))
    mutate(data)
    with pytest.raises(SchemaError):
        build_session(data)


def test_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_problem(tmp_path / "missing.json")
    with pytest.raises(ParseError):
        load_problem(write(tmp_path, "{not json"))


# -- the command line -----------------------------------------------------------------


def test_pc_eq_example(capsys):
    code, out, _ = run_cli(capsys, ["pc-eq", "-i", str(DEMOS / "z3_unipotent.json")])
    assert code == EXIT_OK
    (rep,) = json.loads(out)["reports"]
    assert rep["result"] == {"equal": True}
    assert rep["oracle"]["agrees"] is True


def test_conj_test_example(tmp_path, capsys):
    data = dict(Z2_SIGN, tasks=[{"task": "conj-test", "reps": ["sgn", "one"]}])
    code, out, _ = run_cli(capsys, ["conj-test", "-i", write(tmp_path, data)])
    assert code == EXIT_OK
    res = json.loads(out)["reports"][0]["result"]
    assert res["conjugate"] is False and res["searched_ext_degree"] == 2


def test_cohomology_example(capsys):
    code, out, _ = run_cli(capsys, ["cohomology", "-i", str(DEMOS / "z3_unipotent.json")])
    assert code == EXIT_OK
    res = json.loads(out)["reports"][0]["result"]
    assert (res["h0"], res["h1"], res["h2"]) == (1, 1, 1)


def test_flags_build_record(tmp_path, capsys):
    code, out, _ = run_cli(capsys, ["ops", "-i", write(tmp_path, Z2_SIGN), "--op", "tensor",
                                    "--rep", "sgn", "--rep", "sgn"])
    assert code == EXIT_OK
    rep = json.loads(out)["reports"][0]
    assert rep["inputs"]["op"] == "tensor" and rep["status"] == "ok"


@pytest.mark.parametrize("name", ["s3_f3.json", "z3_unipotent.json", "q8_sp.json"])
def test_demo_files_run_clean(name, capsys):
    code, out, _ = run_cli(capsys, ["run", "-i", str(DEMOS / name)])
    assert code == EXIT_OK
    reports = json.loads(out)["reports"]
    assert all(r["status"] == "ok" for r in reports)
    assert all(r["oracle"]["agrees"] is not False for r in reports if "oracle" in r)


def test_exit_codes(tmp_path, capsys):
    code, _, err = run_cli(capsys, ["pc-eq", "-i", str(tmp_path / "missing.json")])
    assert code == EXIT_LOAD and "ParseError" in err
    bad = dict(Z2_SIGN, ring="GF(7)")
    code, _, _ = run_cli(capsys, ["pc-eq", "-i", write(tmp_path, bad)])
    assert code == EXIT_LOAD
    data = dict(Z2_SIGN, tasks=[{"task": "pc-eq", "reps": ["sgn"]}])
    code, out, _ = run_cli(capsys, ["run", "-i", write(tmp_path, data)])
    assert code == EXIT_TASK
    err = json.loads(out)["reports"][0]["error"]
    assert "pc-eq" in err["message"]
    assert EXIT_ORACLE == 3


def test_text_output(capsys):
    code, out, _ = run_cli(capsys, ["run", "-i", str(DEMOS / "z3_unipotent.json"), "--text"])
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("pc-eq")
    assert "oracle" in out


def test_reports_are_deterministic(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.json"
        main(["run", "-i", str(DEMOS / "s3_f3.json"), "--seed", "7", "-o", str(path)])
        outs.append(path.read_text())
    assert outs[0] == outs[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pckit.cli", "teichmuller", "-i",
                           str(DEMOS / "z3_unipotent.json")], capture_output=True, text=True)
    assert proc.returncode == 0
    res = json.loads(proc.stdout)["reports"][0]["result"]
    assert res["lifts"]["2"] == 8
