"""Built-in categories, diagrams and wrapping sequences."""

from __future__ import annotations

from .category import AInfFunctor, Basis, ExplicitCategory, full_subcategory
from .twisted import cone, trivial, tw_morphism, twisted_complex

B = Basis


def _units(objects):
    return {x: i for i, x in enumerate(objects)}


def point(name="point"):
    """One object with End = Z (the generator category of a cotangent fibre)."""
    return ExplicitCategory(["pt"], [B("e", "pt", "pt", 0)], {}, {"pt": 0}, order=set(), name=name)


def zero_category():
    return ExplicitCategory([], [], {}, {}, order=set(), name="zero")


def a_n(n, prefix="", name=None):
    """Directed A_n category: objects 1..n, hom(i, j) = Z in degree 0 for i <= j."""
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    objs = [f"{prefix}{i}" for i in range(1, n + 1)]
    basis = [B(f"e{prefix}{i}", objs[i - 1], objs[i - 1], 0) for i in range(1, n + 1)]
    idx = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            idx[i, j] = len(basis)
            basis.append(B(f"p{prefix}{i}_{j}", objs[i - 1], objs[j - 1], 0))
    structure = {}
    for (i, j), a in idx.items():
        for k in range(j + 1, n + 1):
            structure[a, idx[j, k]] = {idx[i, k]: 1}
    order = {(objs[i], objs[i + 1]) for i in range(n - 1)}
    return ExplicitCategory(objs, basis, structure, _units(objs), order=order, name=name or f"A{n}")


def kronecker():
    """Two objects O, O1 and two degree-0 arrows x, y from O to O1."""
    objs = ["O", "O1"]
    basis = [B("eO", "O", "O", 0), B("eO1", "O1", "O1", 0), B("x", "O", "O1", 0), B("y", "O", "O1", 0)]
    return ExplicitCategory(objs, basis, {}, _units(objs), order={("O", "O1")}, name="kronecker")


def torsion_example():
    """Directed graded category with mu^1(u) = 2v, so H(0, 1) has Z/2 in degree 1."""
    objs = ["0", "1", "2"]
    basis = [B("e0", "0", "0", 0), B("e1", "1", "1", 0), B("e2", "2", "2", 0),
             B("u", "0", "1", 0), B("v", "0", "1", 1), B("w", "1", "2", 1),
             B("p", "0", "2", 1), B("q", "0", "2", 2)]
    st = {(3,): {4: 2}, (3, 5): {6: 1}, (4, 5): {7: 1}, (6,): {7: -2}}
    return ExplicitCategory(objs, basis, st, _units(objs), order={("0", "1"), ("1", "2")}, name="torsion")


def massey(graded=False):
    """A_4-shaped directed category with mu^2 = 0 on the chain and mu^3(a, b, c) = z."""
    objs = ["0", "1", "2", "3"]
    da, dc = (1, 1) if graded else (0, 0)
    dz = da + dc - 1
    basis = [B(f"e{o}", o, o, 0) for o in objs] + [B("a", "0", "1", da), B("b", "1", "2", 0),
                                                   B("c", "2", "3", dc), B("z", "0", "3", dz)]
    return ExplicitCategory(objs, basis, {(4, 5, 6): {7: 1}}, _units(objs), max_arity=3,
                            order={("0", "1"), ("1", "2"), ("2", "3")},
                            name="massey-graded" if graded else "massey")


def kronecker_cones(cat=None):
    """The two generator cones D1 = cone(x), D2 = cone(y) of the Kronecker category."""
    cat = cat or kronecker()
    o, o1 = trivial(cat, "O"), trivial(cat, "O1")
    d1 = cone(cat, tw_morphism(cat, o, o1, {(0, 0, "x"): 1}), "D1")
    d2 = cone(cat, tw_morphism(cat, o, o1, {(0, 0, "y"): 1}), "D2")
    return d1, d2


def twist_object(cat, i):
    """O(-i): i + 1 copies of O followed by i copies of O1[-1], with x on the
    diagonal and y on the superdiagonal of the connecting matrix."""
    entries = [("O", 0)] * (i + 1) + [("O1", -1)] * i
    delta = {}
    for r in range(i):
        delta[r, i + 1 + r] = {"x": 1}
        delta[r + 1, i + 1 + r] = {"y": 1}
    return twisted_complex(cat, entries, delta, "O" if i == 0 else f"O(-{i})")


def twist_map(cat, i, drop_last, objs=None):
    """Connecting map O(-i-1) -> O(-i) forgetting the last (cone D2) or the first (cone D1) copy."""
    s = objs[i + 1] if objs else twist_object(cat, i + 1)
    t = objs[i] if objs else twist_object(cat, i)
    off = 0 if drop_last else 1
    terms = {(r + off, r, "eO"): 1 for r in range(i + 1)}
    terms.update({(i + 2 + r + off, i + 1 + r, "eO1"): 1 for r in range(i)})
    return tw_morphism(cat, s, t, terms)


def kronecker_wrapping(n=6, cat=None):
    """Wrapping sequence O(0) <- O(-1) <- ... <- O(-n); cones alternate D1, D2."""
    from .localization import WrappingSequence
    cat = cat or kronecker()
    objs = [twist_object(cat, i) for i in range(n + 1)]
    maps = [twist_map(cat, i, drop_last=(i % 2 == 1), objs=objs) for i in range(n)]
    return WrappingSequence(objs, maps, [i % 2 for i in range(n)], period=2, name="kronecker-wrap")


# ---------------------------------------------------------------------------
# diagrams


def semiorth_square(corrupt=False):
    """<C, D1> <- C -> <C, D2> with apex <C, D1 + D2>; C, D1, D2 one object each.

    With ``corrupt`` the apex gets a morphism d1 -> d2, breaking orthogonality
    of the two new objects.
    """
    from .hocolim import DiagramOverPoset, FinitePoset
    c = ExplicitCategory(["c"], [B("ec", "c", "c", 0)], {}, {"c": 0}, order=set(), name="C")
    g1 = ExplicitCategory(["c", "d1"], [B("ec", "c", "c", 0), B("ed1", "d1", "d1", 0), B("b1", "c", "d1", 0)],
                          {}, {"c": 0, "d1": 1}, order={("c", "d1")}, name="<C,D1>")
    g2 = ExplicitCategory(["c", "d2"], [B("ec", "c", "c", 0), B("ed2", "d2", "d2", 0), B("b2", "c", "d2", 0)],
                          {}, {"c": 0, "d2": 1}, order={("c", "d2")}, name="<C,D2>")
    objs = ["c", "d1", "d2"]
    basis = [B("ec", "c", "c", 0), B("ed1", "d1", "d1", 0), B("ed2", "d2", "d2", 0),
             B("b1", "c", "d1", 0), B("b2", "c", "d2", 0)]
    st, order = {}, {("c", "d1"), ("c", "d2")}
    if corrupt:
        basis.append(B("t", "d1", "d2", 0))
        st = {(3, 5): {4: 1}}
        order.add(("d1", "d2"))
    top = ExplicitCategory(objs, basis, st, _units(objs), order=order, name="<C,D1+D2>" + ("!" if corrupt else ""))
    P = FinitePoset(["r", "p", "q", "*"], [("r", "p"), ("r", "q"), ("p", "*"), ("q", "*")])
    F = {("r", "p"): AInfFunctor.inclusion(c, g1), ("r", "q"): AInfFunctor.inclusion(c, g2),
         ("p", "*"): AInfFunctor.inclusion(g1, top), ("q", "*"): AInfFunctor.inclusion(g2, top)}
    d = DiagramOverPoset(P, {"r": c, "p": g1, "q": g2, "*": top}, F, "semiorth-square" + ("-corrupt" if corrupt else ""))
    right_new = {"r": [trivial(c, "c")], "p": [trivial(g1, "d1")], "q": [trivial(g2, "d2")]}
    return d, right_new


def two_chain():
    """A2 -> A3 (i -> i) over the poset 0 < 1, with declared zero objects {2} and {2}."""
    from .hocolim import DiagramOverPoset, FinitePoset
    c0, c1 = a_n(2), a_n(3)
    f = AInfFunctor.inclusion(c0, c1)
    d = DiagramOverPoset(FinitePoset(["0", "1"], [("0", "1")]), {"0": c0, "1": c1}, {("0", "1"): f}, "two-chain")
    return d, {"0": ["2"], "1": ["2"]}


def a3_subcategory():
    """Inclusion of the full subcategory {1, 3} of A3, with A = {3}."""
    c = a_n(3)
    sub = full_subcategory(c, ["1", "3"])
    return AInfFunctor.inclusion(sub, c, "A3-sub"), ["3"]


def corrupted_associativity():
    """A4 with the composite p1_3 . p3_4 dropped: (ab)c = 0 but a(bc) = p1_4."""
    good = a_n(4)
    st = dict(good.structure)
    st.pop((good.index("p1_3"), good.index("p3_4")))
    return ExplicitCategory(good.objects, good.basis, st, good.units, order=good.order, name="A4-corrupt")


def corrupted_degree():
    """Kronecker with a structure constant of the wrong degree."""
    k = kronecker()
    return ExplicitCategory(k.objects, k.basis, {(2,): {3: 1}}, k.units, order=k.order, name="kronecker-bad-degree")


def builtin_categories():
    """Named categories shipped with the package."""
    from .surface import vertex_sector_category
    return {
        "point": point(),
        "zero": zero_category(),
        "A1": a_n(1),
        "A2": a_n(2),
        "A3": a_n(3),
        "A4": a_n(4),
        "A5": a_n(5),
        "kronecker": kronecker(),
        "torsion": torsion_example(),
        "massey": massey(),
        "massey-graded": massey(True),
        "sector4": vertex_sector_category(4),
    }


def builtin_examples():
    """Catalog: categories, diagrams, wrapping sequences and expected facts."""
    from .hocolim import subsets_poset
    cats = builtin_categories()
    kr = cats["kronecker"]
    return {
        "categories": cats,
        "cones": {"kronecker": list(kronecker_cones(kr))},
        "sequences": {"kronecker-wrap": kronecker_wrapping(6, kr)},
        "diagrams": {"semiorth-square": semiorth_square()[0], "two-chain": two_chain()[0]},
        "posets": {"Sigma2": subsets_poset(2), "Sigma3": subsets_poset(3)},
        "expected": {
            "kronecker": {"hom(O,O1)": {"0": 2}},
            "kronecker-wrap": {"ranks": [i + 1 for i in range(7)]},
        },
    }
