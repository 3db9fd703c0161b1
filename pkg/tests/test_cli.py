import json
import subprocess
import sys

import pytest

from enriques.cli import main


def make(tmp_path, spec, capsys):
    assert main(["make", spec]) == 0
    text = capsys.readouterr().out
    path = tmp_path / (spec.replace(":", "_") + ".txt")
    path.write_text(text)
    return str(path)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_make_emits_canonical_file(capsys):
    code, out, _ = run(capsys, "make", "A:2")
    assert code == 0
    assert out == "# A2\nv v1 - m=2\nv v2 v1 m=1\nv v3 v2 +v1 m=1\n"
    assert run(capsys, "make", "Q:1")[0] == 2


def test_validate(tmp_path, capsys):
    good = write(tmp_path, "good.txt", "v r -\nv a r\nv b a +r\n")
    assert run(capsys, "validate", good)[0] == 0
    bad = write(tmp_path, "bad.txt", "v r -\nv a r\nv x r\nv b a +x\n")
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1 and "axiom 4" in out
    assert run(capsys, "validate", str(tmp_path / "missing.txt"))[0] == 2
    junk = write(tmp_path, "junk.txt", "hello\n")
    assert run(capsys, "validate", junk)[0] == 2


def test_info(tmp_path, capsys):
    code, out, _ = run(capsys, "info", make(tmp_path, "E:6", capsys))
    assert code == 0
    assert "milnor: 6" in out and "delta: 3" in out and "branches: 1" in out
    assert "type: true" in out and "consistent: true" in out
    bad = write(tmp_path, "inc.txt", "v r - m=1\nv a r m=2\n")
    code, out, _ = run(capsys, "info", bad)
    assert code == 0 and "consistent: false" in out and "milnor: n/a" in out
    unweighted = write(tmp_path, "u.txt", "v r -\n")
    assert run(capsys, "info", unweighted)[0] == 2


def test_values_and_ordering(tmp_path, capsys):
    f = write(tmp_path, "fork.txt", "v r - m=3\nv a r m=1\nv b r m=1\n")
    code, out, _ = run(capsys, "values", f, "--ordering", "r,b,a")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert rows == [["r", "3", "3", "1"], ["b", "1", "4", "1"], ["a", "1", "4", "1"]]
    assert run(capsys, "values", f, "--ordering", "a,r,b")[0] == 2


def test_unload(tmp_path, capsys):
    f = write(tmp_path, "u.txt", "v r - m=1\nv a r m=2\n")
    code, out, _ = run(capsys, "unload", f)
    assert code == 0
    assert out.startswith("v v1 - m=2\nv v2 v1 m=1\n")
    assert "# tame: true" in out and "# unload r excess -1 raise 1" in out
    f = write(tmp_path, "u3.txt", "v r - m=0\nv a r m=0\nv b a m=4\n")
    assert run(capsys, "unload", f, "--max-steps", "1")[0] == 3


def test_dominates(tmp_path, capsys):
    a3, a2 = make(tmp_path, "A:3", capsys), make(tmp_path, "A:2", capsys)
    out_json = tmp_path / "dom.json"
    code, out, _ = run(capsys, "dominates", a3, a2, "--json", str(out_json))
    assert code == 0 and out.startswith("DOMINATES")
    assert json.loads(out_json.read_text())["verdict"] == "DOMINATES"
    assert run(capsys, "verify", str(out_json))[0] == 0
    assert run(capsys, "dominates", a2, a3)[0] == 1
    assert run(capsys, "dominates", a3, a2, "--max-nodes", "1")[0] == 3


def test_linear_adj_and_verify(tmp_path, capsys):
    d4, a3 = make(tmp_path, "D:4", capsys), make(tmp_path, "A:3", capsys)
    cert = tmp_path / "lin.json"
    code, out, _ = run(capsys, "linear-adj", d4, a3, "--json", str(cert))
    assert code == 0 and out.startswith("LINEAR")
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 0 and "certificate verified" in out
    doc = json.loads(cert.read_text())
    doc["values_transported"]["p1"] = 1
    cert.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 1 and "FAILED" in out
    code, out, _ = run(capsys, "linear-adj", a3, d4)
    assert code == 1 and out.startswith("NOT_LINEAR")
    assert run(capsys, "linear-adj", d4, a3, "--budget", "0")[0] == 1
    assert run(capsys, "linear-adj", d4, a3, "--max-nodes", "1")[0] == 3


def test_adj_cascade(tmp_path, capsys):
    a2, a3 = make(tmp_path, "A:2", capsys), make(tmp_path, "A:3", capsys)
    d5, a4 = make(tmp_path, "D:5", capsys), make(tmp_path, "A:4", capsys)
    code, out, _ = run(capsys, "adj", a2, a3)
    assert code == 1 and out.startswith("NOT_ADJACENT (two-free-vertices)")
    cert = tmp_path / "adj.json"
    code, out, _ = run(capsys, "adj", d5, a4, "--json", str(cert), "--caps", "nodes=1000000,pairs=10000")
    assert code == 0 and out.startswith("ADJACENT (sufficient-condition)")
    assert run(capsys, "verify", str(cert))[0] == 0
    assert run(capsys, "adj", d5, a4, "--caps", "bogus=3")[0] == 2
    code, out, _ = run(capsys, "adj", d5, a4, "--caps", "nodes=1,pairs=1")
    assert code == 3 and out.startswith("UNKNOWN")


def test_enumerate(capsys):
    assert run(capsys, "enumerate", "--vertices", "4", "--count") == (0, "10\n", "")
    code, out, _ = run(capsys, "enumerate", "--max-degree", "6", "--types")
    assert code == 0 and out.count("v v1 -") == 4
    assert run(capsys, "enumerate", "--max-degree", "6", "--count")[1] == "4\n"
    assert run(capsys, "enumerate", "--max-degree", "12", "--vertices", "1", "--count")[1] == "3\n"
    assert run(capsys, "enumerate")[0] == 2
    assert run(capsys, "enumerate", "--vertices", "30")[0] == 3


def test_render(tmp_path, capsys):
    a2 = make(tmp_path, "A:2", capsys)
    code, out, _ = run(capsys, "render", a2, "--format", "dot")
    assert code == 0 and "kind=satellite" in out
    svg = tmp_path / "a2.svg"
    assert run(capsys, "render", a2, "--format", "svg", "-o", str(svg))[0] == 0
    assert svg.read_text().startswith("<svg")
    assert run(capsys, "render", a2, "--format", "png")[0] == 2


def test_verify_input_errors(tmp_path, capsys):
    assert run(capsys, "verify", str(tmp_path / "none.json"))[0] == 2
    junk = write(tmp_path, "junk.json", "{not json")
    assert run(capsys, "verify", junk)[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "enriques", "make", "D:4"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout == "# D4\nv v1 - m=3\n"
