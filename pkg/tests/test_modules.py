import pytest

from ainfcat.catalog import a_n, kronecker, massey, torsion_example
from ainfcat.modules import (ModuleError, check_module_relations, check_yoneda_full_faithfulness, identity_map,
                             map_differential, module_hom_cohomology, module_hom_complex, pointwise_qiso,
                             yoneda_map, yoneda_module, zero_module)


@pytest.mark.parametrize("make", [kronecker, torsion_example, massey, lambda: massey(True), lambda: a_n(4)])
def test_yoneda_modules_are_modules(make):
    cat = make()
    for x in cat.objects:
        ok, fail = check_module_relations(yoneda_module(cat, x), 4)
        assert ok, fail


@pytest.mark.parametrize("make", [kronecker, torsion_example, massey, lambda: massey(True), lambda: a_n(4)])
def test_yoneda_is_fully_faithful(make):
    rep = check_yoneda_full_faithfulness(make())
    assert rep.passed, [p for p in rep.pairs if not p[4]]


def test_torsion_survives_in_module_homs():
    cat = torsion_example()
    h, exact = module_hom_cohomology(yoneda_module(cat, "0"), yoneda_module(cat, "1"), 3)
    assert exact
    assert list(h.torsion(1)) == [2]


def test_truncated_bar_complex_is_a_complex():
    cat = kronecker()
    h = module_hom_complex(yoneda_module(cat, "O1"), yoneda_module(cat, "O1"), 2)
    h.complex.check()


def test_zero_module_homs_vanish():
    cat = kronecker()
    h, _ = module_hom_cohomology(zero_module(cat), yoneda_module(cat, "O"), 3)
    assert h.is_zero()


def test_yoneda_maps_are_closed_and_detect_isos():
    cat = massey()
    f = {cat.index("a"): 1}
    assert not map_differential(yoneda_map(cat, f, "0", "1"))
    k = kronecker()
    yx = yoneda_map(k, {k.index("x"): 1}, "O", "O1")
    assert not map_differential(yx)
    assert not pointwise_qiso(yx)
    assert pointwise_qiso(identity_map(yoneda_module(k, "O")))


def test_non_directed_rejected():
    from ainfcat.category import Basis, ExplicitCategory
    c = ExplicitCategory(["A"], [Basis("e", "A", "A", 0), Basis("t", "A", "A", 1)], {}, {"A": 0})
    with pytest.raises(ModuleError):
        check_yoneda_full_faithfulness(c)
