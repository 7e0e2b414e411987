import os

import pytest

from ainfcat.catalog import builtin_categories, kronecker, massey
from ainfcat.category import category_fingerprint, check_ainf_relations
from ainfcat.formats import (ParseError, canonicalize, parse, parse_acat, parse_diag, parse_ribbon, parse_ring,
                             ring_name, serialize_acat, serialize_ribbon)
from ainfcat.surface import chain_disk

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "ainfcat", "data")


def data(name):
    return os.path.join(DATA, name)


@pytest.mark.parametrize("name", sorted(builtin_categories()))
def test_acat_round_trip(name):
    cat = builtin_categories()[name]
    text = serialize_acat(cat)
    doc = parse_acat(text)
    assert serialize_acat(doc.category) == text
    assert category_fingerprint(doc.category) == category_fingerprint(cat)


def test_shipped_kronecker_matches_builtin():
    doc = parse(data("kronecker.acat"))
    assert category_fingerprint(doc.category) == category_fingerprint(kronecker())
    assert doc.ring is None
    assert doc.ring_given


def test_massey_file_keeps_higher_products():
    doc = parse(data("massey.acat"))
    assert doc.category.max_arity == 3
    assert category_fingerprint(doc.category) == category_fingerprint(massey())


def test_truncated_file_reports_position():
    text = serialize_acat(kronecker())
    cut = text[:text.index("basis x") + len("basis x O")]
    with pytest.raises(ParseError) as e:
        parse_acat(cut, "cut.acat")
    assert e.value.line == cut.count("\n") + 1
    assert e.value.col > 0
    assert str(e.value).startswith("cut.acat:")


@pytest.mark.parametrize("text", ["", "# only a comment\n", "diag 1\n", "acat 2\n"])
def test_bad_headers(text):
    with pytest.raises(ParseError):
        parse_acat(text)


def test_unknown_names_rejected():
    base = "acat 1\nobject A\nbasis e A A 0\nunit A e\n"
    for extra in ["basis f A B 0\n", "mu e g = 1 e\n", "unit B e\n", "frobnicate\n"]:
        with pytest.raises(ParseError):
            parse_acat(base + extra)


def test_file_with_broken_relations_still_parses():
    doc = parse(data("a4-corrupt.acat"))
    assert not check_ainf_relations(doc.category, 4).passed


def test_rings():
    assert parse_ring("Z") is None
    assert parse_ring("GF(7)") == 7
    assert ring_name(7) == "GF(7)"
    with pytest.raises(ValueError):
        parse_ring("GF(6)")


def test_diagram_file():
    doc = parse(data("a3-disk.diag"))
    d = doc.diagram()
    assert doc.apex == "top"
    assert d.functor("e1", "top").obj_map == {"1": "2"}
    with pytest.raises(ParseError):
        parse_diag("diag 1\nelement a builtin:NOPE\n")
    with pytest.raises(ParseError):
        parse_diag("diag 1\nelement a builtin:A1\nrelation a b\n")


def test_ribbon_round_trip():
    g = chain_disk(5)
    h = parse_ribbon(serialize_ribbon(g))
    assert h.as_json() == g.as_json()
    with pytest.raises(ParseError):
        parse_ribbon("ribbon 1\nvertex v a b\nleg a\n")


@pytest.mark.parametrize("name", sorted(os.listdir(DATA)))
def test_canonicalize_is_idempotent(name, tmp_path):
    once = canonicalize(data(name))
    p = tmp_path / name
    p.write_text(once)
    for f in os.listdir(DATA):  # diagrams refer to sibling files
        if f != name:
            (tmp_path / f).write_text(open(data(f)).read())
    assert canonicalize(str(p)) == once
