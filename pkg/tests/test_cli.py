import io
import json

import pytest

from periodic_ar.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, main

from conftest import fixture_path


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("name,value", [("chain3", "2"), ("chain4", "3")])
def test_sgldim(name, value):
    assert run("sgldim", fixture_path(name)) == (EXIT_OK, value + "\n")


def test_oriented_cycle_is_rejected():
    code, _ = run("sgldim", fixture_path("loop"))
    assert code == EXIT_INPUT


def test_missing_file_and_bad_vertex(tmp_path):
    assert run("sgldim", tmp_path / "nope.toml")[0] == EXIT_INPUT
    assert run("compress", fixture_path("chain3"), "0,7,2", "--m", 4)[0] == EXIT_INPUT


def test_compress():
    code, text = run("compress", fixture_path("chain3"), "0,3,2", "--m", 4)
    assert code == EXIT_OK and text.strip() == "(0,3,2,0,0)"


def test_hom():
    assert run("hom", fixture_path("chain3"), "0,3,2", "0,3,2") == (EXIT_OK, "1\n")
    code, text = run("hom", fixture_path("chain3"), "0,3,2", "0,3,2", "--m", 4)
    assert code == EXIT_OK and int(text) >= 1


def test_arq_fixed():
    code, text = run("arq", fixture_path("chain3"), "--fixed", 3, "--format", "json")
    assert code == EXIT_OK
    d = json.loads(text)
    assert len(d["vertices"]) == 20


def test_arq_periodic_both_methods(capsys):
    code, text = run("arq", fixture_path("chain3"), "--periodic", 4, "--method", "both")
    assert code == EXIT_OK
    assert "methods agree" in text
    assert text.count("\nvertex ") + text.startswith("vertex ") == 36


def test_arq_periodic_json_keeps_stdout_clean(capsys):
    code, text = run("arq", fixture_path("chain3"), "--periodic", 4, "--method", "both",
                     "--format", "json")
    assert code == EXIT_OK
    assert len(json.loads(text)["vertices"]) == 36
    assert "methods agree" in capsys.readouterr().err


def test_caps_exceeded():
    code, _ = run("arq", fixture_path("chain3"), "--fixed", 3, "--caps", "vertices=5")
    assert code == EXIT_CAP


def test_bad_section():
    code, _ = run("arq", fixture_path("chain3"), "--periodic", 4, "--section", "1,0,0")
    assert code == EXIT_CAP


def test_verify():
    code, text = run("verify", fixture_path("chain3"), "--m", 4)
    assert code == EXIT_OK
    assert "FAIL" not in text and "all checks pass" in text


def test_sectional_table():
    code, text = run("sectional", fixture_path("chain3"), "--m", 4, "--max-len", 3)
    assert code == EXIT_OK
    lines = text.strip().splitlines()
    assert lines[0].split("\t") == ["path", "sectional", "zero", "depth", "case"]
    assert all(len(line.split("\t")) == 5 for line in lines)


def test_output_is_deterministic():
    a = run("arq", fixture_path("chain4"), "--periodic", 2, "--format", "json", "--seed", 3)
    b = run("arq", fixture_path("chain4"), "--periodic", 2, "--format", "json", "--seed", 3)
    assert a == b and a[0] == EXIT_OK


def test_dot_output():
    code, text = run("arq", fixture_path("chain3"), "--fixed", 3, "--format", "dot")
    assert code == EXIT_OK and text.startswith("digraph")
