import os
import sys

import pytest

from ainfcat.cli import main

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src", "ainfcat", "data")

# (report name, argv, expected exit code)
CORPUS = [
    ("validate-kronecker", ["validate", "{D}/kronecker.acat"], 0),
    ("validate-massey", ["validate", "{D}/massey.acat"], 0),
    ("validate-corrupt", ["validate", "{D}/a4-corrupt.acat"], 1),
    ("hom-kronecker", ["hom", "{D}/kronecker.acat", "O", "O1"], 0),
    ("hom-torsion", ["hom", "{D}/torsion.acat", "0", "1"], 0),
    ("hom-torsion-gf2", ["hom", "{D}/torsion.acat", "0", "1", "--field", "2"], 0),
    ("cone-x", ["cone", "{D}/kronecker.acat", "O", "O1", "x"], 0),
    ("zero-cone-id", ["zero", "{D}/kronecker.acat", "O", "O", "eO"], 0),
    ("zero-O", ["zero", "{D}/kronecker.acat", "O"], 1),
    ("quotient-a3", ["quotient-hom", "{D}/a3.acat", "1", "3", "--kill", "2"], 0),
    ("wrap", ["localize-colimit", "kronecker-wrap", "--prefix", "6"], 0),
    ("wrap-d1", ["localize-colimit", "kronecker-wrap", "--prefix", "4", "--target", "D1"], 0),
    ("groth-disk", ["groth", "{D}/a3-disk.diag"], 0),
    ("certify-square", ["hocolim-certify", "{D}/semiorth-square.diag"], 0),
    ("certify-corrupt", ["hocolim-certify", "{D}/semiorth-square-corrupt.diag"], 1),
    ("certify-disk", ["hocolim-certify", "{D}/a3-disk.diag"], 0),
    ("cofinal", ["cofinal-check", "sigma3", "--within", "123,12,13,23,1,2", "--subset", "12,1,2"], 0),
    ("cofinal-bad", ["cofinal-check", "sigma3", "--subset", "1,2"], 1),
    ("decompose", ["cofinal-check", "sigma3", "--labels", "123=mid,13=mid,23=mid,3=left,12=right,1=right,2=right"], 0),
    ("surface-disk4", ["surface", "{D}/disk4.ribbon"], 0),
    ("surface-disk6", ["surface", "disk:6"], 0),
    ("catalog", ["catalog"], 0),
    ("canonical-kronecker", ["canonicalize", "{D}/kronecker.acat", "--check"], 0),
]


def corpus_argv(argv):
    return [a.replace("{D}", DATA) for a in argv]


def run_corpus(outdir, figures=False):
    """Run every corpus entry with a report; returns {name: exit code}."""
    codes = {}
    for name, argv, _ in CORPUS:
        extra = ["--report", os.path.join(outdir, name + ".json")]
        if figures:
            extra += ["--figures", os.path.join(outdir, "fig")]
        codes[name] = main(corpus_argv(argv) + extra)
    return codes


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
