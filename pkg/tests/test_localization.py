import pytest

from ainfcat.catalog import a3_subcategory, a_n, kronecker, kronecker_cones, kronecker_wrapping, twist_object
from ainfcat.category import AInfFunctor, Basis, ExplicitCategory
from ainfcat.localization import (LocalizationError, LocalizationSpec, QuotientSpec, WrappingSequence,
                                  composition_rank, localize, localized_hom_colimit, quotient_bar_complex,
                                  quotient_full_faithfulness_check, quotient_hom, validate_sequence)
from ainfcat.twisted import trivial, tw_morphism


@pytest.fixture(scope="module")
def kr():
    return kronecker()


def test_killing_the_middle_of_a3():
    a3 = a_n(3)
    spec = QuotientSpec(a3, ["2"], 4)
    q = quotient_hom(spec, "1", "3")
    assert q.exact and q.cohomology.is_zero()
    q11 = quotient_hom(spec, "1", "1")
    assert q11.cohomology.as_json() == {"0": {"rank": 1, "torsion": []}}


def test_quotient_bar_differential_squares_to_zero(kr):
    d1, d2 = kronecker_cones(kr)
    from ainfcat.twisted import TwCategory
    o = trivial(kr, "O", 0, "O")
    tw = TwCategory(kr, [o, d1, d2])
    cx, basis, exact, stable = quotient_bar_complex(tw, ["D1", "D2"], "O", "O", 3)
    cx.check()
    assert not exact


def test_truncation_is_flagged(kr):
    d1, _ = kronecker_cones(kr)
    q = quotient_hom(QuotientSpec(kr, [d1], 3), trivial(kr, "O", 0, "O"), trivial(kr, "O", 0, "O"))
    assert not q.exact
    assert q.as_json()["p_max"] == 3


def test_localize_at_morphisms(kr):
    o, o1 = trivial(kr, "O"), trivial(kr, "O1")
    spec = localize(LocalizationSpec(kr, [tw_morphism(kr, o, o1, {(0, 0, "x"): 1})]), 3)
    assert len(spec.A) == 1
    with pytest.raises(LocalizationError):
        localize(LocalizationSpec(kr, [tw_morphism(kr, o, o, {(0, 0, "eO"): 1}, degree=0).__class__(
            o, o1, (((0, 0, kr.index("x")), 1),), 1)]))


def test_wrapping_colimit(kr):
    seq = kronecker_wrapping(6, kr)
    d1, d2 = kronecker_cones(kr)
    rep = localized_hom_colimit(QuotientSpec(kr, [d1, d2]), seq, twist_object(kr, 0), 6)
    assert [r.rank(0) for r in rep.reports] == [1, 2, 3, 4, 5, 6, 7]
    assert all(rep.injective)
    assert rep.verdict == "LEFT-LOCAL-VERIFIED"
    assert not rep.stabilized


def test_transitions_into_cones_alternate(kr):
    seq = kronecker_wrapping(4, kr)
    d1, d2 = kronecker_cones(kr)
    rep = localized_hom_colimit(QuotientSpec(kr, [d1, d2]), seq, d1, 4, validate=False)
    assert rep.transitions == [[[0]], [[1]], [[0]], [[1]]]


def test_sequence_with_wrong_cones_rejected(kr):
    seq = kronecker_wrapping(2, kr)
    d1, d2 = kronecker_cones(kr)
    bad = WrappingSequence(seq.objects, seq.maps, [1, 0], 2)
    with pytest.raises(LocalizationError):
        validate_sequence(kr, bad, [d1, d2])


def test_composition_rank(kr):
    assert composition_rank(kr, twist_object(kr, 3), twist_object(kr, 1), twist_object(kr, 0)) == 4


def test_quotient_functor_full_faithfulness():
    func, A = a3_subcategory()
    rep = quotient_full_faithfulness_check(func, A, 4)
    assert rep.passed
    assert any(p["compared_degrees"] for p in rep.pairs)
    assert all(p["match"] for p in rep.pairs)


def test_non_full_functor_reported():
    k = kronecker()
    only_x = ExplicitCategory(["O", "O1"], [k.basis[0], k.basis[1], k.basis[2]], {}, {"O": 0, "O1": 1})
    rep = quotient_full_faithfulness_check(AInfFunctor.inclusion(only_x, k), ["O1"], 3)
    assert not rep.passed and "fully faithful" in rep.reason


def test_quotient_by_a_zero_object_changes_nothing(kr):
    from ainfcat.category import hom_cohomology
    from ainfcat.twisted import cone, tw_unit
    z = cone(kr, tw_unit(kr, trivial(kr, "O")), "Z")
    q = quotient_hom(QuotientSpec(kr, [z], 4), "O", "O1")
    assert q.cohomology.as_json() == hom_cohomology(kr, "O", "O1").as_json()


def test_a2_quotient_by_target():
    q = quotient_hom(QuotientSpec(a_n(2), ["2"], 4), "1", "1")
    assert q.exact and q.cohomology.as_json() == {"0": {"rank": 1, "torsion": []}}


def test_quotient_by_everything_kills_everything():
    a3 = a_n(3)
    spec = QuotientSpec(a3, list(a3.objects), 4)
    for x in a3.objects:
        for y in a3.objects:
            q = quotient_hom(spec, x, y)
            assert q.exact and q.cohomology.is_zero()


def test_localize_examples(kr):
    from ainfcat.twisted import are_quasi_isomorphic, is_zero_object, tw_unit
    o, o1 = trivial(kr, "O"), trivial(kr, "O1")
    assert is_zero_object(kr, localize(LocalizationSpec(kr, [tw_unit(kr, o)])).A[0]).is_zero
    assert localize(LocalizationSpec(kr, [])).A == []
    spec = localize(LocalizationSpec(kr, [tw_morphism(kr, o, o1, {(0, 0, b): 1}) for b in "xy"]))
    assert [are_quasi_isomorphic(kr, a, d).verdict for a, d in zip(spec.A, kronecker_cones(kr))] == ["yes", "yes"]


def test_constant_sequence_without_quotient(kr):
    from ainfcat.twisted import tw_unit
    o = trivial(kr, "O")
    seq = WrappingSequence([o, o, o], [tw_unit(kr, o)] * 2, [0, 0], 1)
    rep = localized_hom_colimit(QuotientSpec(kr, []), seq, trivial(kr, "O1"), 2, validate=False)
    assert rep.as_json()["ranks"] == [2, 2, 2]
    assert rep.transitions == [[[1, 0], [0, 1]]] * 2
    assert rep.stabilized


def test_identity_functor_quotient():
    a3 = a_n(3)
    rep = quotient_full_faithfulness_check(AInfFunctor.identity(a3), ["2"], 3)
    assert rep.passed


def test_corrupted_functor_fails():
    a3 = a_n(3)
    bad = AInfFunctor.strict(a3, a3, {x: x for x in a3.objects},
                             {i: ({} if b.name == "p1_3" else {i: 1}) for i, b in enumerate(a3.basis)})
    assert not quotient_full_faithfulness_check(bad, ["2"], 3).passed
