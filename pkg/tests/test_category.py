import pytest

from ainfcat.catalog import (a_n, builtin_categories, corrupted_associativity, corrupted_degree, kronecker, massey,
                             torsion_example)
from ainfcat.category import (AInfFunctor, Basis, CategoryError, ExplicitCategory, check_ainf_relations,
                              check_functor, compose, compose_functors, differential, direct_sum, explicit_from,
                              full_subcategory, hom_cohomology, hom_rank_table, is_directed, is_fully_faithful,
                              morphism, opposite, unit_morphism)


@pytest.mark.parametrize("name", sorted(builtin_categories()))
def test_builtins_satisfy_relations(name):
    cat = builtin_categories()[name]
    rep = check_ainf_relations(cat, 4)
    assert rep.passed, rep.as_json()


def test_corrupted_associativity_is_pinpointed():
    rep = check_ainf_relations(corrupted_associativity(), 4)
    assert not rep.passed
    kind, names, residual = rep.failure
    assert kind == "relation"
    assert names == ["p1_2", "p2_3", "p3_4"]
    assert residual == {"p1_4": -1}


def test_wrong_degree_is_pinpointed():
    rep = check_ainf_relations(corrupted_degree(), 4)
    assert not rep.passed
    assert rep.failure[0] == "degree" and rep.failure[1] == ["x"]


def test_units_act_with_the_recorded_signs():
    cat = massey(graded=True)
    a = cat.index("a")  # degree 1
    e0, e1 = cat.unit("0"), cat.unit("1")
    assert cat.mu((e0, a)) == {a: 1}
    assert cat.mu((a, e1)) == {a: -1}
    assert cat.mu((e0, a, cat.index("b"))) == {}


def test_kronecker_hom_table():
    k = kronecker()
    h = hom_cohomology(k, "O", "O1")
    assert h.as_json() == {"0": {"rank": 2, "torsion": []}}
    assert hom_cohomology(k, "O1", "O").is_zero()
    assert hom_rank_table(k) == [[1, 2], [0, 1]]
    assert is_directed(k)


def test_torsion_example_has_z2():
    h = hom_cohomology(torsion_example(), "0", "1")
    assert h.rank(0) == 0 and list(h.torsion(1)) == [2]


def test_massey_product_hom():
    h = hom_cohomology(massey(), "0", "3")
    assert h.as_json() == {"-1": {"rank": 1, "torsion": []}}


def test_morphism_helpers():
    k = kronecker()
    f = morphism(k, "O", "O1", {"x": 2, "y": -1})
    assert f.degree == 0
    assert differential(k, f).is_zero()
    g = compose(k, unit_morphism(k, "O"), f)
    assert g.vec == f.vec
    with pytest.raises(CategoryError):
        morphism(k, "O1", "O", {"x": 1})


def test_opposite_and_sums_satisfy_relations():
    for cat in (massey(), massey(True), torsion_example()):
        assert check_ainf_relations(opposite(cat), 4).passed
    s = direct_sum(kronecker(), a_n(2))
    assert check_ainf_relations(s, 3).passed
    assert len(s.objects) == 4


def test_functors():
    a3 = a_n(3)
    sub = full_subcategory(a3, ["1", "3"])
    inc = AInfFunctor.inclusion(sub, a3)
    assert check_functor(inc).passed
    assert is_fully_faithful(inc)
    ident = AInfFunctor.identity(a3)
    assert compose_functors(inc, ident).obj_map == inc.obj_map
    # killing the composite is not a functor
    bad = AInfFunctor.strict(a3, a3, {x: x for x in a3.objects},
                             {i: ({} if b.name == "p1_3" else {i: 1}) for i, b in enumerate(a3.basis)})
    assert not check_functor(bad).passed


def test_non_full_inclusion_is_detected():
    k = kronecker()
    only_x = ExplicitCategory(["O", "O1"], [k.basis[0], k.basis[1], k.basis[2]], {}, {"O": 0, "O1": 1})
    assert not is_fully_faithful(AInfFunctor.inclusion(only_x, k))


def test_explicit_from_roundtrip():
    cat = opposite(massey())
    ex = explicit_from(cat)
    assert ex.max_arity == 3
    assert check_ainf_relations(ex, 4).passed


def test_bad_units_rejected():
    with pytest.raises(CategoryError):
        ExplicitCategory(["A"], [Basis("f", "A", "A", 1)], {}, {"A": 0})
    with pytest.raises(CategoryError):
        ExplicitCategory(["A"], [Basis("f", "A", "B", 0)], {}, {})
