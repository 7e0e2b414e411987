import pytest

from ainfcat.catalog import a_n, semiorth_square, two_chain
from ainfcat.category import AInfFunctor, check_ainf_relations
from ainfcat.hocolim import (DiagramOverPoset, FinitePoset, HocolimError, adjacent_morphisms, check_cofinality,
                             certify_equivalence, composite_pushout_transfer, decompose_pushout, grothendieck,
                             hocolim_presentation, local_commute_check, maximal_element_certificate,
                             subsets_poset)
from ainfcat.surface import auto_certify


def test_subsets_poset_shape():
    s3 = subsets_poset(3)
    assert len(s3.elements) == 7
    assert s3.minimal() == ["123"]
    assert s3.maximal() == ["1", "2", "3"]
    assert s3.lt("12", "1") and not s3.comparable("12", "3")


def test_poset_rejects_cycles():
    with pytest.raises(HocolimError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(HocolimError):
        FinitePoset(["a"], [("a", "z")])


def test_grothendieck_construction_is_an_ainf_category():
    d, _ = two_chain()
    g = grothendieck(d)
    assert len(g.objects) == 5
    assert check_ainf_relations(g, 4).passed
    sq, _ = semiorth_square()
    g2 = grothendieck(sq.restrict(["r", "p", "q"]))
    assert check_ainf_relations(g2, 4).passed
    adj = adjacent_morphisms(sq.restrict(["r", "p", "q"]), g2)
    assert {(a.source, a.target) for a in adj} == {("c@r", "c@p"), ("c@r", "c@q")}


def test_semiorthogonal_square_is_a_homotopy_colimit():
    d, new = semiorth_square()
    pres = hocolim_presentation(d, "*")
    cert = certify_equivalence(pres, new, {})
    assert cert.verdict == "HOCOLIM", cert.as_json()


def test_corrupted_square_names_orthogonality():
    d, new = semiorth_square(corrupt=True)
    cert = certify_equivalence(hocolim_presentation(d, "*"), new, {})
    assert cert.verdict == "FAIL"
    assert cert.failing == "c:incomparable-orthogonal"


def test_missing_witness_gives_almost():
    d, new = semiorth_square()
    # forget the right-new object of q: d2 in the apex is then not generated
    cert = certify_equivalence(hocolim_presentation(d, "*"), {"r": new["r"], "p": new["p"]}, {})
    assert cert.verdict in ("ALMOST-HOCOLIM", "FAIL")
    assert cert.failing.startswith("d:generation")


def test_certificates_are_deterministic():
    d, new = semiorth_square()
    a = certify_equivalence(hocolim_presentation(d, "*"), new, {}).as_json()
    b = certify_equivalence(hocolim_presentation(semiorth_square()[0], "*"), new, {}).as_json()
    assert a["digests"]["diagram"] == b["digests"]["diagram"]


def test_auto_certify_finds_the_same_answer():
    d, _ = semiorth_square()
    _, cert = auto_certify(d, "*")
    assert cert.verdict == "HOCOLIM"


def test_sigma3_decomposition():
    s3 = subsets_poset(3)
    good = {"123": "mid", "13": "mid", "23": "mid", "3": "left", "12": "right", "1": "right", "2": "right"}
    assert decompose_pushout(s3, good).check.passed
    crossed = dict(good, **{"1": "left"})
    bad = decompose_pushout(s3, crossed).check
    assert not bad.passed and bad.condition == "incomparable"
    low = {"123": "left", "12": "mid", "13": "mid", "1": "left", "23": "left", "2": "left", "3": "left"}
    bad = decompose_pushout(s3, low).check
    assert not bad.passed and bad.condition == "below-R" and bad.witness == ("123", "12")
    with pytest.raises(HocolimError):
        decompose_pushout(s3, {"123": "mid"})


def test_sigma3_cofinality():
    s3 = subsets_poset(3)
    assert check_cofinality(s3, s3.elements).passed
    q = s3.restrict(["123", "12", "13", "23", "1", "2"])
    assert check_cofinality(q, ["12", "1", "2"]).passed
    two = check_cofinality(s3, ["1", "2"])
    assert not two.passed and two.condition == "unique-minimal"
    up = check_cofinality(q, ["123", "12", "1", "2"])
    assert not up.passed and up.condition == "upward-closed" and up.witness == ("123", "13")
    chain = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    gap = check_cofinality(chain, ["a", "c"])
    assert not gap.passed and gap.condition == "upward-closed" and gap.witness == ("a", "b")


def test_pasting_transfer():
    d, new = semiorth_square()
    left = certify_equivalence(hocolim_presentation(d, "*"), new, {})
    top = maximal_element_certificate(d, "*")
    out = composite_pushout_transfer(left, composite=top)
    assert out.verdict == "HOCOLIM"
    bad = certify_equivalence(hocolim_presentation(semiorth_square(True)[0], "*"), semiorth_square(True)[1], {})
    with pytest.raises(HocolimError):
        composite_pushout_transfer(bad, right=top)
    with pytest.raises(HocolimError):
        composite_pushout_transfer(left)


def test_maximal_element_certificate_needs_a_top():
    d, _ = semiorth_square()
    assert maximal_element_certificate(d, "*").verdict == "HOCOLIM"
    assert maximal_element_certificate(d, "p").verdict == "FAIL"


def test_non_commuting_diagram_rejected():
    a1, a2, a2b = a_n(1), a_n(2), a_n(2)
    P = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    one = AInfFunctor.strict(a1, a2, {"1": "1"}, {a1.index("e1"): {a2.index("e1"): 1}})
    ident = AInfFunctor.strict(a2, a2b, {"1": "1", "2": "2"}, {i: {i: 1} for i in range(len(a2.basis))})
    two = AInfFunctor.strict(a1, a2b, {"1": "2"}, {a1.index("e1"): {a2b.index("e2"): 1}})
    with pytest.raises(HocolimError):
        DiagramOverPoset(P, {"a": a1, "b": a2, "c": a2b}, {("a", "b"): one, ("b", "c"): ident, ("a", "c"): two})


def test_local_commute_on_two_chain():
    d, zero = two_chain()
    ok, rows = local_commute_check(d, zero, 4)
    assert ok
    assert any(r["compared_degrees"] for r in rows)
    with pytest.raises(HocolimError):
        local_commute_check(d, {"0": ["1"], "1": ["2"]}, 4)


def _discrete(objs):
    from ainfcat.category import Basis, ExplicitCategory
    return ExplicitCategory(objs, [Basis(f"e{x}", x, x, 0) for x in objs], {}, {x: i for i, x in enumerate(objs)})


def _collapse(src, tgt, y):
    return AInfFunctor.strict(src, tgt, {x: y for x in src.objects}, {i: {tgt.unit(y): 1} for i in range(len(src.basis))})


def test_grothendieck_small_cases():
    from ainfcat.category import hom_rank_table
    a3 = a_n(3)
    one = grothendieck(DiagramOverPoset(FinitePoset(["s"]), {"s": a3}, {}))
    assert hom_rank_table(one) == hom_rank_table(a3)
    p, q = a_n(1), a_n(1)
    chain = grothendieck(DiagramOverPoset(FinitePoset(["a", "b"], [("a", "b")]), {"a": p, "b": q},
                                          {("a", "b"): AInfFunctor.inclusion(p, q)}))
    assert hom_rank_table(chain) == hom_rank_table(a_n(2))
    from ainfcat.catalog import kronecker
    ks = {s: kronecker() for s in "rpq"}
    span = DiagramOverPoset(FinitePoset("rpq", [("r", "p"), ("r", "q")]), ks,
                            {("r", "p"): AInfFunctor.inclusion(ks["r"], ks["p"]),
                             ("r", "q"): AInfFunctor.inclusion(ks["r"], ks["q"])})
    g = grothendieck(span)
    assert all(not g.hom(a, b) for a in ("O@p", "O1@p") for b in ("O@q", "O1@q"))
    assert check_ainf_relations(g, 3).passed


def test_adjacent_morphism_counts():
    disc = DiagramOverPoset(FinitePoset(["a", "b"]), {"a": a_n(1), "b": a_n(1)}, {})
    assert adjacent_morphisms(disc) == []
    p, q = a_n(1), a_n(1)
    chain = DiagramOverPoset(FinitePoset(["a", "b"], [("a", "b")]), {"a": p, "b": q},
                             {("a", "b"): AInfFunctor.inclusion(p, q)})
    assert len(adjacent_morphisms(chain)) == 1
    # nonempty subsets of {1, 2}; the piece over a subset has one object per member
    s2 = subsets_poset(2)
    cats = {s: _discrete(list(s)) for s in s2.elements}
    funcs = {("12", s): _collapse(cats["12"], cats[s], s) for s in ("1", "2")}
    d = DiagramOverPoset(s2, cats, funcs)
    adj = adjacent_morphisms(d)
    assert len(adj) == 4
    g = grothendieck(d)
    for m in adj:
        assert g.basis[m.basis].degree == 0 and not g.mu((m.basis,))


def test_presentation_over_a_single_piece():
    from ainfcat.category import is_fully_faithful
    a3 = a_n(3)
    top = a_n(3)
    d = DiagramOverPoset(FinitePoset(["s", "*"], [("s", "*")]), {"s": a3, "*": top},
                         {("s", "*"): AInfFunctor.inclusion(a3, top)})
    pres = hocolim_presentation(d, "*")
    assert is_fully_faithful(pres.comparison)
    assert sorted(pres.comparison.obj_map.values()) == list(top.objects)
    assert maximal_element_certificate(d, "*").verdict == "HOCOLIM"


def test_more_poset_checks():
    chain = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert check_cofinality(chain, ["c"]).passed
    s2 = subsets_poset(2)
    assert decompose_pushout(s2, {"12": "mid", "1": "left", "2": "right"}).check.passed
    bad = decompose_pushout(chain, {"a": "left", "b": "mid", "c": "right"}).check
    assert not bad.passed and bad.witness is not None


def test_pasting_right_derived_from_left_and_right():
    d, new = semiorth_square()
    left = certify_equivalence(hocolim_presentation(d, "*"), new, {})
    out = composite_pushout_transfer(left, right=maximal_element_certificate(d, "*"))
    assert out.verdict == "HOCOLIM" and "composite" in out.notes[0]


def test_grothendieck_map_of_fully_faithful_pieces():
    from ainfcat.category import ExplicitCategory, check_functor, is_fully_faithful
    from ainfcat.hocolim import grothendieck_map
    tgt, _ = two_chain()
    s0, s1 = a_n(1), a_n(2)
    src = DiagramOverPoset(tgt.poset, {"0": s0, "1": s1}, {("0", "1"): AInfFunctor.inclusion(s0, s1)})
    maps = {"0": AInfFunctor.inclusion(s0, tgt.cats["0"]), "1": AInfFunctor.inclusion(s1, tgt.cats["1"])}
    gm = grothendieck_map(grothendieck(src), grothendieck(tgt), maps)
    assert check_functor(gm).passed and is_fully_faithful(gm)
    # dropping the arrow of the upper piece breaks full faithfulness upstairs too
    a2 = a_n(2)
    thin = ExplicitCategory(["1", "2"], [b for b in a2.basis if b.name != "p1_2"], {}, {"1": 0, "2": 1})
    src2 = DiagramOverPoset(tgt.poset, {"0": s0, "1": thin}, {("0", "1"): AInfFunctor.inclusion(s0, thin)})
    gm2 = grothendieck_map(grothendieck(src2), grothendieck(tgt),
                           {"0": maps["0"], "1": AInfFunctor.inclusion(thin, tgt.cats["1"])})
    assert not is_fully_faithful(gm2)
    with pytest.raises(HocolimError):
        grothendieck_map(grothendieck(src), grothendieck(tgt), {"0": maps["0"]})
