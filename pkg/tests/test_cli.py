import json
import os
import subprocess
import sys

import pytest

from ainfcat.cli import main
from conftest import CORPUS, corpus_argv


@pytest.mark.parametrize("name,argv,code", CORPUS, ids=[c[0] for c in CORPUS])
def test_corpus_exit_codes(name, argv, code, tmp_path):
    rep = tmp_path / "r.json"
    assert main(corpus_argv(argv) + ["--report", str(rep)]) == code
    doc = json.loads(rep.read_text())
    assert doc["command"] == argv[0]
    assert set(doc) == {"tool", "version", "command", "parameters", "inputs", "verdict", "result"}


def test_report_names_inputs_by_basename(tmp_path, data_dir):
    rep = tmp_path / "r.json"
    main(["hom", os.path.join(data_dir, "kronecker.acat"), "O", "O1", "--report", str(rep)])
    doc = json.loads(rep.read_text())
    assert list(doc["inputs"]) == ["kronecker.acat"]
    assert doc["parameters"]["path"] == "kronecker.acat"
    assert doc["result"]["cohomology"] == {"0": {"rank": 2, "torsion": []}}


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["hom", "{D}/kronecker.acat", "O", "Q"],
    ["hom", "{D}/kronecker.acat", "O", "O1", "--field", "4"],
    ["validate", "{D}/missing.acat"],
    ["cone", "{D}/kronecker.acat", "O", "O1", "z"],
    ["cofinal-check", "sigmaX", "--subset", "1"],
    ["cofinal-check", "sigma2", "--subset", "1", "--labels", "1=mid"],
    ["localize-colimit", "no-such-sequence"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(corpus_argv(argv)) == 2


def test_field_changes_the_answer(capsys, data_dir):
    main(["hom", os.path.join(data_dir, "torsion.acat"), "0", "1"])
    over_z = capsys.readouterr().out
    main(["hom", os.path.join(data_dir, "torsion.acat"), "0", "1", "--field", "2"])
    over_f2 = capsys.readouterr().out
    assert "Z/2" in over_z and "F2" in over_f2


def test_ring_from_environment(monkeypatch, capsys, data_dir, tmp_path):
    monkeypatch.setenv("AINFCAT_RING", "GF(2)")
    tors = os.path.join(data_dir, "torsion.acat")
    src = open(tors).read().replace("ring Z\n", "")
    p = tmp_path / "t.acat"
    p.write_text(src)
    main(["hom", str(p), "0", "1"])
    assert "GF(2)" in capsys.readouterr().out
    # a ring written in the document wins over the environment
    main(["hom", tors, "0", "1"])
    assert "over Z" in capsys.readouterr().out
    monkeypatch.setenv("AINFCAT_RING", "banana")
    assert main(["hom", tors, "0", "1"]) == 2


def test_figures_are_pngs(tmp_path, data_dir):
    figs = tmp_path / "figs"
    assert main(["surface", "disk:5", "--figures", str(figs)]) == 0
    out = sorted(os.listdir(figs))
    assert out
    for f in out:
        assert (figs / f).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_canonicalize_writes_and_checks(tmp_path, data_dir):
    out = tmp_path / "a3-disk.diag"
    assert main(["canonicalize", os.path.join(data_dir, "a3-disk.diag"), "-o", str(out)]) == 0
    for f in ("a3.acat",):
        (tmp_path / f).write_text(open(os.path.join(data_dir, f)).read())
    assert main(["canonicalize", str(out), "--check"]) == 0
    assert main(["canonicalize", os.path.join(data_dir, "a3-disk.diag"), "--check"]) == 1


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "ainfcat.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("ainfcat ")
