import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from metricext import Flag, Geometric, HalfLine, SchemaError, ExplicitList
from metricext.cli import run
from metricext.serialize import encode, parse_space, space_to_json, valueset_from_json, valueset_to_json

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
FOUR = DATA / "four_point.json"
EVENS = DATA / "lazy_evens.json"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    report = json.loads(out.getvalue()) if out.getvalue() else None
    return code, report, err.getvalue()


def write(tmp_path, obj, name="space.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


# --- value set and space files ---------------------------------------------------------------


@pytest.mark.parametrize("S", [HalfLine(), Geometric(2, 1), Geometric("3/2", "1/3"), ExplicitList(["0", "1", "5/2"])])
def test_valueset_round_trip(S):
    assert valueset_from_json(json.dumps(valueset_to_json(S))) == S


def test_valueset_wire_format():
    assert valueset_to_json(Geometric(2, 1)) == {"kind": "geometric", "base": "2", "scale": "1"}
    assert valueset_to_json(ExplicitList(["0", "1", "5/2"])) == {"kind": "list", "values": ["0", "1", "5/2"]}


@pytest.mark.parametrize("text, field", [
    ('{"kind": "weird"}', "valueset.kind"),
    ('{"kind": "geometric", "base": 1.5}', "valueset.base"),
    ('{"kind": "geometric", "base": "1"}', "valueset"),
    ('{"kind": "list", "values": ["1"]}', "valueset"),
])
def test_valueset_schema_errors(text, field):
    with pytest.raises(SchemaError) as exc:
        valueset_from_json(text)
    assert exc.value.field == field


def test_four_point_file_parses_as_ultrametric():
    sf = parse_space(FOUR.read_bytes())
    assert sf.metric.flag is Flag.ULTRAMETRIC and sf.report.ok
    assert sf.subset.members() == ["a", "b"] and sf.space.basepoint == "a"


def test_space_round_trip():
    sf = parse_space(FOUR.read_bytes())
    again = parse_space(json.dumps(space_to_json(sf.space, sf.metric, sf.subset)))
    assert again.metric.matrix() == sf.metric.matrix()


@pytest.mark.parametrize("metric, field, word", [
    ([["0", "1"], ["2", "0"]], "metric[0][1]", "symmetry"),
    ([["1", "1"], ["1", "0"]], "metric[0][0]", "diagonal"),
    ([["0", "-1"], ["-1", "0"]], "metric[0][1]", "negative"),
    ([["0", "1"]], "metric", "rows"),
    ([["0", 0.5], [0.5, "0"]], "metric[0][1]", "rational"),
])
def test_matrix_schema_errors(metric, field, word):
    with pytest.raises(SchemaError) as exc:
        parse_space(json.dumps({"points": ["u", "v"], "metric": metric}))
    assert exc.value.field == field and word in str(exc.value)


def test_json_syntax_errors_carry_line_and_column():
    with pytest.raises(SchemaError) as exc:
        parse_space('{"points": ["a",\n  ]}')
    assert "line 2" in str(exc.value)


def test_other_schema_errors():
    base = {"points": ["u", "v"], "metric": [["0", "1"], ["1", "0"]]}
    for patch, field in [({"points": ["u", "u"]}, "points"), ({"basepoint": "w"}, "basepoint"),
                         ({"subset": ["w"]}, "subset[0]"), ({"flag": "banana"}, "flag")]:
        with pytest.raises(SchemaError) as exc:
            parse_space(json.dumps({**base, **patch}))
        assert exc.value.field == field
    with pytest.raises(SchemaError):
        parse_space(json.dumps({"generator": "primes"}))


def test_lazy_file_parses():
    sf = parse_space(EVENS.read_bytes(), depth=8)
    assert sf.lazy and sf.report.ok
    assert sf.subset.members(6) == [0, 2, 4]


def test_encode_turns_fractions_into_strings():
    from fractions import Fraction
    assert encode({"a": [Fraction(1, 3), (2, Fraction(4))]}) == {"a": ["1/3", [2, "4"]]}


# --- commands --------------------------------------------------------------------------------


def test_retract_four_point_example():
    code, rep, _ = cli("retract", FOUR, "--tau", "2")
    assert code == 0 and rep["ok"]
    assert rep["result"]["map"] == {"a": "a", "b": "b", "x": "a", "y": "a"}
    from fractions import Fraction
    assert Fraction(rep["result"]["ratio"]) <= 4 and rep["result"]["bound"] == "4"


def test_retract_with_permutations_is_deterministic():
    a = cli("retract", FOUR, "--permutations", "10", "--seed", "7")
    b = cli("retract", FOUR, "--permutations", "10", "--seed", "7")
    assert a == b and a[0] == 0
    assert a[1]["checks"]["permuted_lipschitz"]["ok"]


def test_check_reports_the_violating_triple(tmp_path):
    p = write(tmp_path, {"points": ["a", "b", "c"], "metric": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]]})
    code, rep, err = cli("check", p)
    assert code == 1 and not rep["ok"]
    assert rep["checks"]["axioms"]["violations"] == [["triangle", ["a", "b", "c"]]]
    assert "contract violation" in err


def test_check_with_another_claim():
    code, rep, _ = cli("check", FOUR, "--claim", "metric")
    assert code == 0 and rep["result"]["claim"] == "metric"


def test_false_claims_fail_on_load(tmp_path):
    p = write(tmp_path, {"points": ["a", "b", "c"], "flag": "ultrametric",
                         "metric": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]})
    code, rep, err = cli("isosceles", p)
    assert code == 1 and not rep["checks"]["load"]["ok"]
    code, rep, _ = cli("isosceles", p, "--no-verify")
    assert "load" not in rep["checks"]


def test_ball_commands():
    code, rep, _ = cli("ball", FOUR, "--center", "x", "--radius", "1")
    assert code == 0 and rep["result"]["ball"] == ["a", "x"]
    code, rep, _ = cli("ball", EVENS, "--center", "0", "--radius", "4")
    assert rep["result"]["ball"] == ["0", "1", "2"]


def test_extend_dense_ultrametric_on_evens():
    code, rep, _ = cli("extend", EVENS, "--mode", "ultrametric", "--dense", "--eta", "1", "--prefix", "8")
    assert code == 0
    checks = rep["checks"]
    assert checks["restriction"]["ok"] and checks["density"]["ok"]
    assert rep["result"]["theta"] == "1"
    assert len(rep["result"]["witness"]["table"]) == 64


@pytest.mark.parametrize("argv", [
    ["extend", FOUR],
    ["extend", FOUR, "--mode", "ultrametric", "--valueset", '{"kind": "geometric", "base": "2"}'],
    ["extend", FOUR, "--dense", "--eta", "1/2"],
    ["quantize", FOUR],
    ["properize", FOUR],
    ["properize", FOUR, "--mode", "ultrametric"],
    ["isosceles", FOUR],
    ["retract", EVENS, "--prefix", "6"],
    ["properize", EVENS, "--prefix", "6", "--depth", "16"],
])
def test_commands_succeed(argv):
    code, rep, _ = cli(*argv)
    assert code == 0 and rep["ok"], rep


@pytest.mark.parametrize("argv, message", [
    (["retract", FOUR, "--tau", "1"], "--tau"),
    (["extend", FOUR, "--dense"], "--eta"),
    (["extend", FOUR, "--dense", "--eta", "0"], "--eta"),
    (["extend", FOUR, "--mode", "ultrametric", "--dense", "--eta", "1"], "infinite"),
    (["ball", FOUR, "--center", "zz", "--radius", "1"], "--center"),
    (["check", "/nonexistent/space.json"], "No such file"),
    (["quantize", FOUR, "--depth", "0"], "--depth"),
    (["retract", EVENS, "--order", "ascending"], "descending"),
])
def test_usage_errors_exit_two(argv, message):
    code, rep, err = cli(*argv)
    assert code == 2 and rep is None and message in err


def test_argparse_errors_exit_two():
    assert cli("frobnicate", FOUR)[0] == 2
    assert cli("retract", FOUR, "--tau", "abc")[0] == 2


def test_quantize_rejects_plain_metrics(tmp_path):
    p = write(tmp_path, {"points": ["u", "v"], "metric": [["0", "3"], ["3", "0"]]})
    code, _, err = cli("quantize", p)
    assert code == 2 and "ultrametric" in err


def test_depth_from_environment(monkeypatch):
    monkeypatch.setenv("METRICEXT_DEPTH", "10")
    code, rep, _ = cli("properize", EVENS, "--prefix", "4")
    assert code == 0 and len(rep["result"]["witness"]["table"]) == 10
    monkeypatch.setenv("METRICEXT_DEPTH", "ten")
    assert cli("properize", EVENS)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "metricext", "retract", str(FOUR)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["map"]["y"] == "a"
