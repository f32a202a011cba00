from __future__ import annotations

import json

import pytest

from markedres.cli import InputError, main, matrix_json, parse_input, resolution_from_payload
from markedres.corpus import G_K
from markedres.syzres import u_resolution

F_TEXT = """# one-parameter family
x2^2 | -x2*x1 - x2*x0 + x1*x0
x1^2 | a*x2*x1
x2*x1^2 | -2*x2*x1*x0 + 2*x1*x0^2
"""

K_TEXT = """x2^2 | -1/2*x2*x1 - x2*x0
x1^2 | -1/2*x2*x1 - x1*x0
x2*x1^2 | -2*x2*x1*x0
"""


@pytest.fixture
def files(tmp_path):
    f = tmp_path / "F.txt"
    f.write_text(F_TEXT)
    k = tmp_path / "K.txt"
    k.write_text(K_TEXT)
    return str(f), str(k)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_input_counts_variables():
    job = parse_input(["pommaret", "--ring", "3", "ideal[x2^2, x1^2]"])
    assert job.command == "pommaret" and job.ring == 2


def test_parse_input_rejects_bad_ring():
    with pytest.raises(InputError):
        parse_input(["pommaret", "--ring", "1", "ideal[x0]"])


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "pommaret", "--ring", "3", "ideal[x2^^2]")
    assert code == 2
    assert "column 4" in err


def test_unknown_command_exit_code(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_pommaret(capsys):
    code, out, _ = run(capsys, "pommaret", "--ring", "3", "ideal[x2^2, x1^2]")
    assert code == 0
    assert "Pommaret basis: x2^2, x1^2, x2*x1^2" in out
    assert "stable: no" in out


def test_not_quasi_stable_exit_code(capsys):
    code, out, _ = run(capsys, "check-quasistable", "--ring", "3", "ideal[x2*x0, x1^2]")
    assert code == 1
    assert out.startswith("not quasi-stable")


def test_marked_check(capsys, files):
    f, _ = files
    assert run(capsys, "marked-check", "--basis-file", f, "--set", "a=-1")[:2] == (0, "marked basis\n")
    code, out, _ = run(capsys, "marked-check", "--basis-file", f, "--set", "a=0")
    assert code == 1
    assert "x2*f_{x1^2} has remainder 2*x2*x1*x0 - 2*x1*x0^2" in out


def test_marked_check_json_witness(capsys, files):
    f, _ = files
    code, out, _ = run(capsys, "marked-check", "--basis-file", f, "--set", "a=0", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["exit_code"] == 1
    assert doc["witness"]["head"] == "x1^2*e1" and doc["witness"]["variable"] == 2


def test_bad_set_value(capsys, files):
    f, _ = files
    assert run(capsys, "marked-check", "--basis-file", f, "--set", "a")[0] == 2


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "marked-check", "--basis-file", str(tmp_path / "nope.txt"))[0] == 2


def test_syzygies(capsys, files):
    f, _ = files
    code, out, _ = run(capsys, "syzygies", "--basis-file", f, "--set", "a=-1")
    assert code == 0
    assert out.splitlines() == ["x2*e2 | x1*e1 - x0*e2", "x2*e3 | -x1^2*e1 + 2*x1*x0*e1 + x1*x0*e2 - x1*e3"]


def test_minimality_witness(capsys, files):
    _, k = files
    code, out, _ = run(capsys, "minimality", "--basis-file", k)
    assert code == 1
    assert out.strip() == "not minimal: ∂_1[3,1] = -3/4"


def test_betti(capsys, files):
    _, k = files
    code, out, _ = run(capsys, "betti", "--basis-file", k)
    assert code == 0
    assert "beta" in out and "r |" in out


def test_empty_marked_scheme_message(capsys):
    code, out, _ = run(capsys, "scheme-ideal", "--style", "small", "--ring", "3", "ideal[x2, x1^2]")
    assert code == 0
    assert out.strip() == "Mf(U) = affine space of dimension 4"


def test_resolution_json_round_trip(capsys, files):
    _, k = files
    code, out, _ = run(capsys, "resolution", "--basis-file", k, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "mbv1"
    mats = resolution_from_payload(doc["result"])
    res = u_resolution(G_K())
    assert mats == res.matrices
    assert [matrix_json(M) for M in mats] == [matrix_json(M) for M in res.matrices]


def test_output_is_deterministic(capsys, files):
    _, k = files
    a = run(capsys, "resolution", "--basis-file", k, "--json")
    b = run(capsys, "resolution", "--basis-file", k, "--json", "--threads", "2")
    assert a == b


def test_appendix_repro(capsys):
    code, out, _ = run(capsys, "appendix-repro")
    assert code == 0
    assert "parameter counts: C=38, B=52, A=15" in out
    assert "U: 53 generators" in out
