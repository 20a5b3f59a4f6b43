import io as stdio
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from milnor_recon import io
from milnor_recon.cli import main
from milnor_recon.exact import Polynomial
from milnor_recon.forms import hesse_cubic
from milnor_recon.milnor import build_milnor_table, gradient_map

from e6 import e6_table
from oracles import monomial_algebra

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def cli(*args):
    """Run the CLI in process; returns (exit code, parsed output)."""
    out = stdio.StringIO()
    old = sys.stdout
    sys.stdout = out
    try:
        try:
            code = main([str(a) for a in args])
        except SystemExit as exc:
            code = exc.code
    finally:
        sys.stdout = old
    text = out.getvalue()
    return code, (json.loads(text) if text else None)


def write(path, obj):
    path.write_text(io.dumps(obj), encoding="utf-8")
    return path


def test_shipped_e6_fixture_matches_transcription():
    T = io.algebra_from_json(json.loads((FIXTURES / "e6_t6.json").read_text()))
    assert T == e6_table(6)


def test_milnor_explicit_basis_reproduces_fixture(tmp_path):
    out = tmp_path / "t.json"
    code, _ = cli("milnor", "--qt", 6, "--explicit-basis", FIXTURES / "e6_basis.json", "--output", out)
    assert code == 0
    assert out.read_bytes() == (FIXTURES / "e6_t6.json").read_bytes()


def test_milnor_from_form_file():
    code, obj = cli("milnor", "--input", FIXTURES / "q6.json")
    assert code == 0
    assert io.algebra_from_json(obj) == build_milnor_table(gradient_map(hesse_cubic(6))).table


def test_reconstruct_fixture_span():
    code, obj = cli("reconstruct", "--input", FIXTURES / "e6_t6.json")
    assert code == 0 and obj["status"] == "success"
    phi = io.map_from_json(obj["phi"])
    assert phi == (
        Polynomial(3, {(2, 0, 0): 1, (0, 1, 1): 2}),
        Polynomial(3, {(1, 1, 0): 1, (0, 0, 2): Fraction(1, 2)}),
        Polynomial(3, {(1, 0, 1): 1, (0, 2, 0): Fraction(1, 2)}),
    )
    assert (obj["n"], obj["m"], obj["nu"]) == (3, 2, 3)


def test_scramble_and_recognize(tmp_path):
    scrambled = tmp_path / "s.json"
    assert cli("scramble", "--input", FIXTURES / "e6_t6.json", "--seed", 4, "--output", scrambled)[0] == 0
    code, obj = cli("recognize", "--input", scrambled)
    assert code == 0 and obj["status"] == "candidate"
    assert obj["certificate"]["input"]["loewy"] == [1, 3, 3, 1]
    # seed 0 leaves the table alone
    code, obj = cli("scramble", "--input", FIXTURES / "e6_t6.json", "--seed", 0)
    assert io.algebra_from_json(obj) == e6_table(6)


def test_recognize_non_gorenstein_fixture():
    code, obj = cli("recognize", "--input", FIXTURES / "non_gorenstein.json")
    assert code == 2
    assert obj["reason"] == "NotGorenstein"


@pytest.mark.parametrize(
    "gens,reason",
    [([(3, 0), (0, 2)], "NuNotDivisible"), ([(2, 0), (0, 4)], "NotFiniteAtOrigin")],
)
def test_recognize_reasons_surface_verbatim(tmp_path, gens, reason):
    T, _ = monomial_algebra(2, gens)
    path = write(tmp_path / "a.json", io.algebra_to_json(T))
    code, obj = cli("recognize", "--input", path)
    assert code == 2 and obj["reason"] == reason
    code, obj = cli("reconstruct", "--input", path)
    assert code == 2 and obj["reason"] == reason


def test_recover_from_report(tmp_path):
    report = tmp_path / "r.json"
    assert cli("reconstruct", "--input", FIXTURES / "e6_t6.json", "--output", report)[0] == 0
    code, obj = cli("recover", "--input", report)
    assert code == 0
    Q = io.poly_from_json(obj["form"])
    assert Q.is_homogeneous(3)
    code, obj = cli("recover", "--input", report, "--search-bound", 0)
    assert code == 2 and obj["reason"] == "NoNondegenerateSolution"


def test_invariant():
    code, obj = cli("invariant", "--qt", 1)
    assert code == 0
    assert obj["J"] == obj["J_formula"] == io.q2s(Fraction(215**3, 2**18 * 3**3 * 7**3))
    code, obj = cli("invariant", "--qt", -3)
    assert code == 2 and obj["reason"] == "DegenerateCubic"
    code, obj = cli("invariant", "--input", FIXTURES / "q6.json")
    assert obj["J"] == "0"


def test_roundtrip_qt6_seed7():
    code, obj = cli("roundtrip", "--qt", 6, "--seed", 7)
    assert code == 0 and obj["status"] == "success"
    assert obj["original"]["J"] == obj["recovered"]["J"] == "0"
    assert obj["original"]["hilbert"] == [1, 3, 3, 1]


def test_roundtrip_directory(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    write(corpus / "a.json", io.poly_to_json(hesse_cubic(Fraction(1, 2))))
    write(corpus / "b.json", io.poly_to_json(Polynomial(2, {(4, 0): 1, (0, 4): 1, (2, 2): 1})))
    code, obj = cli("roundtrip", "--input", corpus, "--seed", 3)
    assert code == 0
    assert sorted(obj["cases"]) == ["a.json", "b.json"]
    # a singular cubic is reported per case and fails the run
    write(corpus / "c.json", io.poly_to_json(hesse_cubic(-3)))
    code, obj = cli("roundtrip", "--input", corpus, "--seed", 3)
    assert code == 2
    assert obj["cases"]["c.json"]["status"] == "rejected"


@pytest.mark.parametrize(
    "args",
    [
        ("reconstruct",),
        ("reconstruct", "--input", "/nonexistent/file.json"),
        ("milnor", "--qt", "abc"),
        ("frobnicate",),
    ],
)
def test_malformed_input_exit_3(args):
    assert cli(*args)[0] == 3


def test_malformed_json_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("reconstruct", "--input", bad)[0] == 3
    write(bad, {"dim": 2, "table": [[0, 5, [[0, "1"]]]]})
    assert cli("reconstruct", "--input", bad)[0] == 3
    write(bad, {"dim": 2, "table": [[0, 0, [[0, "1/0"]]]]})
    assert cli("reconstruct", "--input", bad)[0] == 3
    # non-associative table
    write(bad, {"dim": 2, "table": [[1, 1, [[0, "1"]]], [0, 1, [[0, "1"]]]]})
    assert cli("reconstruct", "--input", bad)[0] == 3


def test_outputs_round_trip_through_parser(tmp_path):
    out = tmp_path / "o.json"
    cli("milnor", "--qt", 2, "--output", out)
    obj = json.loads(out.read_text())
    assert io.algebra_to_json(io.algebra_from_json(obj)) == obj
    cli("reconstruct", "--input", out, "--output", out)
    obj = json.loads(out.read_text())
    assert io.map_to_json(io.map_from_json(obj["phi"])) == obj["phi"]
    assert io.matrix_to_json(io.matrix_from_json(obj["gamma"])) == obj["gamma"]
    cli("recover", "--input", out, "--output", out)
    obj = json.loads(out.read_text())
    assert io.poly_to_json(io.poly_from_json(obj["form"])) == obj["form"]


def test_byte_identical_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        cli("roundtrip", "--qt", Fraction(7, 2), "--seed", 19, "--output", path)
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "milnor_recon", "invariant", "--qt", "6"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["J"] == "0"
