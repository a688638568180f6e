import json
from pathlib import Path

import pytest

from flatascent import catalog
from flatascent.cli import main
from flatascent.errors import InstanceSyntaxError, SchemaError, ValidationError
from flatascent.instance import emit, load_instance, parse_instance

DATA = Path(__file__).parent / "data"
FIXTURES = sorted(catalog.FIXTURE_DIR.glob("*.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    inst = load_instance(path)
    raw = path.read_bytes()
    assert emit(inst) == raw
    assert emit(parse_instance(emit(inst))) == raw


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_shipped_fixtures_match_catalog(name):
    assert (catalog.FIXTURE_DIR / f"{name}.json").read_bytes() == emit(catalog.build(name))


def test_remark_fixture_shape():
    inst = load_instance(catalog.FIXTURE_DIR / "remark38.json")
    assert len(inst.maps) == 1 and len(inst.algebras) == 2


def test_parse_errors():
    with pytest.raises(SchemaError):
        parse_instance(b"{}")
    with pytest.raises(InstanceSyntaxError):
        parse_instance(b"{not json")
    with pytest.raises(ValidationError) as exc:
        parse_instance((DATA / "noncommutative.json").read_bytes())
    assert exc.value.path == "algebras.S.mul[1][0]"
    assert exc.value.cause.code == "NotCommutative"


def test_unknown_reference_is_schema_error():
    doc = json.loads((catalog.FIXTURE_DIR / "i1.json").read_text())
    doc["maps"]["phi"]["to"] = "T"
    with pytest.raises(SchemaError) as exc:
        parse_instance(json.dumps(doc))
    assert exc.value.path == "maps.phi.to"


def test_fp_scalars_must_be_reduced_ints():
    doc = json.loads((catalog.FIXTURE_DIR / "i3.json").read_text())
    doc["algebras"]["S"]["unit"] = [6, 0]
    with pytest.raises(SchemaError):
        parse_instance(json.dumps(doc))


def test_remark38_command(capsys):
    code, out, _ = run(capsys, "remark38")
    rep = json.loads(out)
    assert code == 0
    assert rep["usual"] == "(1+3√2, 6+√2)"
    assert rep["induced"] == "(1+6√2, 3+√2)"
    assert rep["structure_verdict"] == "structures unequal"
    assert rep["coordinates"] == {"1+3√2": ["1", "3"], "6+√2": ["6", "1"]}


def test_analyze_i2(capsys):
    code, out, _ = run(capsys, "analyze", "fixtures/i2.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["maps"]["phi"]["m"] == 2
    assert rep["maps"]["phi"]["epsilons"] == ["1", "√2"]
    assert rep["maps"]["phi"]["t0"] == 3


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", str(DATA / "noncommutative.json"))[0] == 2
    (tmp_path / "e.json").write_text("{}")
    assert run(capsys, "validate", str(tmp_path / "e.json"))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "validate", "i4")[0] == 0


def test_thm37_and_nonflat(capsys):
    code, out, _ = run(capsys, "thm37", "i6")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "PASS"
    checks = [c["check"] for c in rep["checks"]]
    assert len(checks) == len(set(checks))
    code, out, _ = run(capsys, "thm37", "nonflat")
    rep = json.loads(out)
    assert code == 0
    assert {c["check"] for c in rep["checks"]} == {"not_free_detected", "ext_detects_nonflat"}


def test_failed_verification_exits_one(capsys, tmp_path):
    doc = json.loads((catalog.FIXTURE_DIR / "nonflat.json").read_text())
    del doc["verify"]["thm37"]["expect"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "thm37", str(p))
    assert code == 1 and json.loads(out)["verdict"] == "FAIL"


def test_tensor_command(capsys, tmp_path):
    doc = json.loads((catalog.FIXTURE_DIR / "i4.json").read_text())
    doc["modules"] = {"k": {"algebra": "R", "dim": 1, "actions": [[["1"]], [["0"]]]}}
    p = tmp_path / "i4k.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "tensor", str(p), "--map", "phi", "--module", "k")
    rep = json.loads(out)
    assert code == 0
    assert rep["tensor"]["dim"] == 2 and rep["tensor"]["algebra"] == "S"
    assert rep["unit_injective"] is True
    assert run(capsys, "tensor", str(p), "--map", "phi", "--module", "nope")[0] == 2


def test_suite_deterministic_and_atomic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "suite", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "suite", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.json", "b.json"]
    rep = json.loads(a.read_text())
    for inst in rep["instances"]:
        names = [c["check"] for c in inst["checks"]]
        assert len(names) == len(set(names))
    assert rep["seed"] == 7


def test_suite_single_failure_forces_exit_one(capsys, tmp_path):
    for name in ("i1", "i6"):
        (tmp_path / f"{name}.json").write_bytes((catalog.FIXTURE_DIR / f"{name}.json").read_bytes())
    doc = json.loads((catalog.FIXTURE_DIR / "nonflat.json").read_text())
    del doc["verify"]["thm37"]["expect"]
    (tmp_path / "zz.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "suite", str(tmp_path))
    rep = json.loads(out)
    assert code == 1 and rep["checks_failed"] == 1


def test_text_format(capsys):
    code, out, _ = run(capsys, "remark38", "--format", "text")
    assert code == 0
    assert "usual: (1+3√2, 6+√2)" in out and out.rstrip().endswith("verdict: PASS")
