import json
import subprocess
import sys
from pathlib import Path

import pytest

from lazardkit.cli import algebra_to_document, main, parse_input, run_command, strict_loads
from lazardkit.config import RunConfig
from lazardkit.errors import ParseError, SchemaError
from lazardkit.lie_core import FiniteLieAlgebra

INPUTS = Path(__file__).resolve().parent.parent / "inputs"

HEIS = """{
  "kind": "algebra",
  "version": 1,
  "p": 5,
  "orders": [1, 1, 1],
  "brackets": [{"i": 1, "j": 2, "coeffs": [[3, 1]]}]
}"""


def _run(tmp_path, *args):
    out = tmp_path / "summary.json"
    code = main([*args, "--summary-out", str(out)])
    return code, json.loads(out.read_text())


def test_minimal_document():
    doc = parse_input(HEIS)
    assert doc.kind == "algebra" and doc.version == 1


def test_prime_is_validated():
    with pytest.raises(SchemaError, match="p must be prime") as err:
        parse_input(HEIS.replace('"p": 5', '"p": 4'))
    assert err.value.line == 4


def test_truncated_file_has_location():
    with pytest.raises(ParseError) as err:
        parse_input(HEIS[:60])
    assert err.value.line is not None and err.value.column is not None


@pytest.mark.parametrize("text,needle", [
    ('{"kind": "algebra", "kind": "algebra"}', "duplicate"),
    ('{"kind": "algebra", "p": 5, "orders": [1], "extra": 0}', "unknown key"),
    ('{"kind": "algebra", "p": 5, "orders": [1.5]}', "non-integer"),
    ('{"kind": "algebra", "p": 5, "orders": [-1]}', "at least 1"),
    ('{"kind": "algebra", "p": 5, "orders": [1, 1], "brackets": [{"i": 2, "j": 1, "coeffs": []}]}', "i < j"),
    ('{"kind": "algebra", "p": 5, "orders": [1], "brackets": [{"i": 1, "j": 2, "coeffs": [], "x": 1}]}', "unknown key"),
    ('{"kind": "group"}', "kind must be"),
    ('{"kind": "algebra", "version": 2, "p": 5, "orders": [1]}', "version"),
    ('{"kind": "free_ideal", "p": 5, "d": 2, "c": 2, "generators": [[1, 0]]}', "length 3"),
    ('[1, 2]', "top level"),
    ('{"kind": "algebra", "p": NaN, "orders": [1]}', "constant"),
])
def test_strict_rejections(text, needle):
    with pytest.raises((ParseError, SchemaError), match=needle) as err:
        parse_input(text)
    assert err.value.line is not None


def test_nested_duplicate_is_located():
    text = '{"kind": "algebra",\n "p": 5, "orders": [1, 1],\n "brackets": [{"i": 1, "j": 2, "i": 1, "coeffs": []}]}'
    with pytest.raises(ParseError) as err:
        parse_input(text)
    assert (err.value.line, err.value.column) == (3, 32)


def test_check_heisenberg(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(HEIS)
    code, s = _run(tmp_path, "check", str(path))
    assert code == 0
    assert s["verdicts"] == {"antisymmetry": True, "jacobi": True, "well-defined": True, "nilpotent": True}
    assert set(s) == {"command", "verdicts", "quantities", "failures"}


def test_check_reports_jacobi_failure(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "algebra", "p": 5, "orders": [1, 1, 1], "brackets": [
        {"i": 1, "j": 2, "coeffs": [[2, 1]]}, {"i": 1, "j": 3, "coeffs": [[2, 1]]}, {"i": 2, "j": 3, "coeffs": [[1, 1]]}]}))
    code, s = _run(tmp_path, "check", str(path))
    assert code == 2
    assert s["verdicts"]["jacobi"] is False
    assert any(f.get("axiom") == "jacobi" for f in s["failures"])


def test_bch_output(capsys):
    assert main(["bch", "--class", "3", "--prime", "5"]) == 0
    out = capsys.readouterr().out
    assert "1/12 · [[b,a],a]" in out
    assert "-1/12 · [[b,a],b]" in out
    assert "[PASS] p-integrality" in out


def test_bch_integrality_fails_for_small_prime():
    rep = run_command("bch", None, RunConfig(prime=3, nilpotency_class=4))
    assert rep.verdicts["p-integrality"] is False
    assert rep.status() == 2


def test_structure_on_ideal_example(tmp_path):
    code, s = _run(tmp_path, "structure", str(INPUTS / "free_ideal_d2_c2_p5.json"))
    assert code == 0
    q, v = s["quantities"], s["verdicts"]
    assert q["|J|"] == 5 and q["embedding index"] == 5
    for name in ("bound-kernel-order", "bound-image-index", "bound-hat-rank"):
        assert v[name] is True


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "algebra", "p": 4, "orders": [1]}')
    assert main(["check", str(bad)]) == 3
    assert main(["lazard", str(INPUTS / "heisenberg_p5.json"), "--max-order", "100"]) == 4
    assert main(["cohomology", str(INPUTS / "heisenberg_p5.json")]) == 2
    assert main(["hat", str(INPUTS / "heisenberg_p5.json")]) == 3


@pytest.mark.parametrize("cmd,doc", [
    ("check", "heisenberg_p5.json"),
    ("lazard", "heisenberg_p5.json"),
    ("structure", "heisenberg_p5.json"),
    ("hat", "free_ideal_d2_c2_p5.json"),
    ("carlson", "extension_p5.json"),
    ("cohomology", "abelian_p5.json"),
    ("census", "census_cyclic_p5.json"),
])
def test_summaries_round_trip_and_are_deterministic(tmp_path, cmd, doc):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a = main([cmd, str(INPUTS / doc), "--summary-out", str(a)])
    code_b = main([cmd, str(INPUTS / doc), "--summary-out", str(b), "--timestamps"])
    assert code_a == code_b == 0
    assert a.read_bytes() == b.read_bytes()
    rep = run_command(cmd, parse_input((INPUTS / doc).read_text()))
    assert json.loads(a.read_text())["verdicts"] == rep.summary()["verdicts"]


def test_algebra_document_round_trip():
    L = FiniteLieAlgebra.free_nilpotent(2, 3, 5, 2)
    text = json.dumps(algebra_to_document(L))
    from lazardkit.cli import algebra_from_body

    M = algebra_from_body(parse_input(text).body)
    assert M.orders == L.orders
    assert (M.C == L.C).all()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lazardkit", "check", str(INPUTS / "heisenberg_p5.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[PASS] jacobi" in proc.stdout
