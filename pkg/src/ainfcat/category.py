"""Finite A-infinity categories with chosen bases.

Conventions
-----------
Operations take their inputs in *path order*: ``mu((a1, ..., ak))`` with
``a1: X0 -> X1``, ``a2: X1 -> X2`` and so on; this is the operation usually
written mu^k(a_k, ..., a_1).  The A-infinity relations are

    sum_{n, m} (-1)^{s_n} mu(a1..an, mu(a_{n+1}..a_{n+m}), ..., ak) = 0,
    s_n = sum_{i <= n} (|a_i| - 1).

A strict unit e_X satisfies mu((e_X, a)) = a, mu((a, e_Y)) = (-1)^{|a|} a and
vanishes under every other insertion (the only choice compatible with the
signs above).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .linalg import FiniteComplex, IntMatrix, complex_cohomology, is_acyclic, mapping_cone


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    name: str
    source: str
    target: str
    degree: int


def add_into(acc, vec, c=1):
    if not c:
        return acc
    for k, v in vec.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


class AInfCategory:
    """Base class. Subclasses provide ``_mu_raw`` for non-unit inputs."""

    name = ""

    def __init__(self, objects, basis, units=None, max_arity=2, order=None, name=""):
        self.objects = tuple(objects)
        self.basis = tuple(basis)
        self.units = dict(units or {})
        self.max_arity = max_arity
        self.order = frozenset(order) if order is not None else None
        self.name = name
        self._obj_set = set(self.objects)
        self._hom = {}
        for i, b in enumerate(self.basis):
            if b.source not in self._obj_set or b.target not in self._obj_set:
                raise CategoryError(f"basis element {b.name} refers to unknown object")
            self._hom.setdefault((b.source, b.target), []).append(i)
        self._unit_set = {v: k for k, v in self.units.items()}
        for x, u in self.units.items():
            b = self.basis[u]
            if b.source != x or b.target != x or b.degree != 0:
                raise CategoryError(f"unit of {x} must be a degree-0 endomorphism")
        self._by_name = {b.name: i for i, b in enumerate(self.basis)}
        self._cache = {}

    # -- structure -----------------------------------------------------------
    def hom(self, x, y):
        return self._hom.get((x, y), [])

    def degree(self, i):
        return self.basis[i].degree

    def index(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise CategoryError(f"unknown basis element {name!r}") from None

    def unit(self, x):
        return self.units.get(x)

    def unit_vector(self, x):
        u = self.units.get(x)
        return None if u is None else {u: 1}

    def is_strictly_unital(self):
        return all(x in self.units for x in self.objects)

    def composable(self, inputs):
        return all(self.basis[a].target == self.basis[b].source for a, b in zip(inputs, inputs[1:]))

    def mu(self, inputs):
        """Structure map on basis elements; returns {basis index: coefficient}."""
        inputs = tuple(inputs)
        if not inputs:
            raise CategoryError("mu^0 is zero by convention; empty input")
        hit = self._cache.get(inputs)
        if hit is not None:
            return hit
        if not self.composable(inputs):
            raise CategoryError("non-composable inputs " + ", ".join(self.basis[i].name for i in inputs))
        units = [i in self._unit_set for i in inputs]
        if any(units):
            if len(inputs) != 2:
                out = {}
            elif units[0]:
                out = {inputs[1]: 1}
            else:
                a = inputs[0]
                out = {a: -1 if self.basis[a].degree % 2 else 1}
        elif len(inputs) > self.max_arity:
            out = {}
        else:
            out = self._mu_raw(inputs)
        self._cache[inputs] = out
        return out

    def _mu_raw(self, inputs):
        raise NotImplementedError

    def mu_vectors(self, vectors):
        """Multilinear extension: each vector is {basis index: coeff}."""
        out = {}
        for combo in itertools.product(*(sorted(v.items()) for v in vectors)):
            c = 1
            for _, x in combo:
                c *= x
            idx = tuple(i for i, _ in combo)
            if not self.composable(idx):
                continue
            add_into(out, self.mu(idx), c)
        return out

    # -- complexes -----------------------------------------------------------
    def hom_degrees(self, x, y):
        degs = {}
        for i in self.hom(x, y):
            degs.setdefault(self.basis[i].degree, []).append(i)
        return degs

    def hom_complex(self, x, y):
        """(FiniteComplex, {degree: [basis indices]}) for (C(x, y), mu^1)."""
        degs = self.hom_degrees(x, y)
        pos = {}
        for k, idx in degs.items():
            for n, i in enumerate(idx):
                pos[i] = n
        diffs = {}
        for k, idx in degs.items():
            tgt = degs.get(k + 1)
            ent = {}
            for j, i in enumerate(idx):
                for o, v in self.mu((i,)).items():
                    if self.basis[o].degree != k + 1:
                        raise CategoryError(f"mu^1 of {self.basis[i].name} has wrong degree")
                    ent[pos[o], j] = v
            if ent:
                diffs[k] = IntMatrix.from_dict(len(tgt), len(idx), ent)
        return FiniteComplex({k: len(v) for k, v in degs.items()}, diffs), degs

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} objects={list(self.objects)}>"


class ExplicitCategory(AInfCategory):
    """Category with explicitly stored structure constants (non-unit inputs)."""

    def __init__(self, objects, basis, structure=None, units=None, max_arity=2, order=None, name=""):
        super().__init__(objects, basis, units, max_arity, order, name)
        self.structure = {}
        for key, val in (structure or {}).items():
            key = tuple(key)
            val = {k: v for k, v in val.items() if v}
            if any(k in self._unit_set for k in key):
                raise CategoryError("structure constants may not have unit inputs; units are implicit")
            if val:
                self.structure[key] = val
        if self.structure:
            self.max_arity = max(max_arity, max(len(k) for k in self.structure))

    def _mu_raw(self, inputs):
        return dict(self.structure.get(inputs, {}))

    def check_degrees(self):
        """Return the first degree-inconsistent structure constant, or None."""
        for key, val in sorted(self.structure.items()):
            deg = sum(self.basis[i].degree for i in key) + 2 - len(key)
            src, tgt = self.basis[key[0]].source, self.basis[key[-1]].target
            for o in val:
                b = self.basis[o]
                if b.degree != deg or b.source != src or b.target != tgt:
                    return key, o
        return None

    def signature(self):
        """Hashable structural description used for equality tests."""
        return (self.objects, self.basis, tuple(sorted((k, tuple(sorted(v.items())))
                                                       for k, v in self.structure.items())),
                tuple(sorted(self.units.items())))

    def __eq__(self, other):
        return isinstance(other, ExplicitCategory) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())


class DerivedCategory(AInfCategory):
    """Category whose operations are computed by a callback."""

    def __init__(self, objects, basis, fn, units=None, max_arity=2, order=None, name=""):
        super().__init__(objects, basis, units, max_arity, order, name)
        self._fn = fn

    def _mu_raw(self, inputs):
        return self._fn(inputs)


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class Morphism:
    source: str
    target: str
    coeffs: tuple  # ((basis index, coeff), ...)
    degree: int

    @classmethod
    def make(cls, cat, source, target, vec, degree=None):
        vec = {k: v for k, v in vec.items() if v}
        for k in vec:
            b = cat.basis[k]
            if b.source != source or b.target != target:
                raise CategoryError(f"{b.name} is not in hom({source}, {target})")
        degs = {cat.basis[k].degree for k in vec}
        if degree is None:
            degree = degs.pop() if len(degs) == 1 else 0
            if degs:
                raise CategoryError("inhomogeneous morphism")
        elif degs - {degree}:
            raise CategoryError("inhomogeneous morphism")
        return cls(source, target, tuple(sorted(vec.items())), degree)

    @property
    def vec(self):
        return dict(self.coeffs)

    def is_zero(self):
        return not self.coeffs


def morphism(cat, source, target, terms, degree=None):
    """Build a morphism from {basis name: coeff} or [(name, coeff)]."""
    if isinstance(terms, dict):
        terms = terms.items()
    vec = {}
    for name, c in terms:
        add_into(vec, {cat.index(name): c})
    return Morphism.make(cat, source, target, vec, degree)


def unit_morphism(cat, x):
    u = cat.unit_vector(x)
    if u is None:
        raise CategoryError(f"{x} has no strict unit")
    return Morphism(x, x, tuple(sorted(u.items())), 0)


def differential(cat, f: Morphism) -> Morphism:
    out = {}
    for i, c in f.coeffs:
        add_into(out, cat.mu((i,)), c)
    return Morphism(f.source, f.target, tuple(sorted(out.items())), f.degree + 1)


def compose(cat, f: Morphism, g: Morphism) -> Morphism:
    """mu^2 applied in path order: f then g."""
    out = cat.mu_vectors([f.vec, g.vec])
    return Morphism(f.source, g.target, tuple(sorted(out.items())), f.degree + g.degree)


# ---------------------------------------------------------------------------
# Relation checking


@dataclass
class RelationReport:
    passed: bool
    arity: int
    tuples_checked: int
    failure: tuple | None = None  # (kind, basis names, residual)

    def __bool__(self):
        return self.passed

    def as_json(self):
        out = {"passed": self.passed, "arity": self.arity, "tuples_checked": self.tuples_checked}
        if self.failure:
            kind, names, residual = self.failure
            out["failure"] = {"kind": kind, "tuple": list(names), "residual": residual}
        return out


def composable_tuples(cat, length, objects=None):
    """All composable basis tuples of the given length, in lexicographic order."""
    outgoing = {}
    for i, b in enumerate(cat.basis):
        outgoing.setdefault(b.source, []).append(i)
    starts = cat.objects if objects is None else objects

    def rec(prefix, obj):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for i in outgoing.get(obj, ()):
            prefix.append(i)
            yield from rec(prefix, cat.basis[i].target)
            prefix.pop()

    for x in starts:
        yield from rec([], x)


def relation_residual(cat, inputs):
    d = len(inputs)
    out = {}
    sign_prefix = [0]
    for i in inputs:
        sign_prefix.append(sign_prefix[-1] + cat.basis[i].degree - 1)
    for n in range(d):
        for m in range(1, d - n + 1):
            inner = cat.mu(inputs[n:n + m])
            if not inner:
                continue
            s = -1 if sign_prefix[n] % 2 else 1
            for o, c in inner.items():
                add_into(out, cat.mu(inputs[:n] + (o,) + inputs[n + m:]), s * c)
    return out


def check_ainf_relations(cat, up_to=None) -> RelationReport:
    up_to = up_to if up_to is not None else max(cat.max_arity + 1, 3)
    if isinstance(cat, ExplicitCategory):
        bad = cat.check_degrees()
        if bad:
            key, o = bad
            return RelationReport(False, 0, 0, ("degree", [cat.basis[i].name for i in key],
                                                {cat.basis[o].name: cat.structure[key][o]}))
    count = 0
    for d in range(1, up_to + 1):
        for t in composable_tuples(cat, d):
            count += 1
            if d <= cat.max_arity:
                out = cat.mu(t)
                deg = sum(cat.basis[i].degree for i in t) + 2 - d
                for o in out:
                    b = cat.basis[o]
                    if b.degree != deg or b.source != cat.basis[t[0]].source or b.target != cat.basis[t[-1]].target:
                        return RelationReport(False, d, count, ("degree", [cat.basis[i].name for i in t],
                                                                {b.name: out[o]}))
            res = relation_residual(cat, t)
            if res:
                return RelationReport(False, d, count, ("relation", [cat.basis[i].name for i in t],
                                                        {cat.basis[k].name: v for k, v in sorted(res.items())}))
    return RelationReport(True, up_to, count)


# ---------------------------------------------------------------------------
# Cohomology of hom spaces


def hom_cohomology(cat, x, y, field=None):
    if x not in cat._obj_set or y not in cat._obj_set:
        raise CategoryError(f"unknown object in ({x}, {y})")
    cx, _ = cat.hom_complex(x, y)
    return complex_cohomology(cx, field)


def hom_rank_table(cat, degree=0, field=None):
    return [[hom_cohomology(cat, x, y, field).rank(degree) for y in cat.objects] for x in cat.objects]


def is_directed(cat) -> bool:
    if cat.order is None or not cat.is_strictly_unital():
        return False
    less = transitive_closure(cat.order)
    for x in cat.objects:
        for y in cat.objects:
            h = cat.hom(x, y)
            if x == y:
                if h != [cat.unit(x)]:
                    return False
            elif h and (x, y) not in less:
                return False
    return True


def transitive_closure(pairs):
    rel = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


# ---------------------------------------------------------------------------
# Constructions


def explicit_from(cat, up_to=None, name=None):
    """Materialize all structure constants of ``cat`` up to its max arity."""
    if isinstance(cat, ExplicitCategory) and name is None:
        return cat
    up_to = up_to or cat.max_arity
    structure = {}
    for d in range(1, up_to + 1):
        for t in composable_tuples(cat, d):
            if any(i in cat._unit_set for i in t):
                continue
            v = cat.mu(t)
            if v:
                structure[t] = v
    return ExplicitCategory(cat.objects, cat.basis, structure, cat.units, cat.max_arity, cat.order,
                            name if name is not None else cat.name)


def _opposite_sign(cat, inputs):
    # Koszul sign of reversing the reduced-degree inputs, plus the arity correction
    red = [cat.basis[i].degree - 1 for i in inputs]
    s = sum(red[i] * red[j] for i in range(len(red)) for j in range(i + 1, len(red)))
    s += len(inputs) - 1
    return -1 if s % 2 else 1


def opposite(cat):
    basis = [Basis(b.name, b.target, b.source, b.degree) for b in cat.basis]
    order = {(b, a) for a, b in cat.order} if cat.order is not None else None
    if isinstance(cat, ExplicitCategory):
        structure = {}
        for key, val in cat.structure.items():
            s = _opposite_sign(cat, key)
            structure[key[::-1]] = {k: s * v for k, v in val.items()}
        return ExplicitCategory(cat.objects, basis, structure, cat.units, cat.max_arity, order,
                                (cat.name + "^op") if cat.name else "")

    def fn(inputs):
        s = _opposite_sign(cat, inputs)
        return {k: s * v for k, v in cat.mu(inputs[::-1]).items()}

    return DerivedCategory(cat.objects, basis, fn, cat.units, cat.max_arity, order, cat.name + "^op")


def full_subcategory(cat, objects):
    objects = list(objects)
    for x in objects:
        if x not in cat._obj_set:
            raise CategoryError(f"unknown object {x!r}")
    keep = set(objects)
    idx = [i for i, b in enumerate(cat.basis) if b.source in keep and b.target in keep]
    new = {i: n for n, i in enumerate(idx)}
    basis = [cat.basis[i] for i in idx]
    units = {x: new[cat.units[x]] for x in objects if x in cat.units}
    order = {(a, b) for a, b in cat.order if a in keep and b in keep} if cat.order is not None else None
    if isinstance(cat, ExplicitCategory):
        structure = {tuple(new[i] for i in k): {new[o]: c for o, c in v.items()}
                     for k, v in cat.structure.items() if all(i in new for i in k)}
        return ExplicitCategory(objects, basis, structure, units, cat.max_arity, order, cat.name)

    def fn(inputs):
        return {new[o]: c for o, c in cat.mu(tuple(idx[i] for i in inputs)).items()}

    return DerivedCategory(objects, basis, fn, units, cat.max_arity, order, cat.name)


def direct_sum(c, d, tags=("1", "2")):
    cats = [explicit_from(c), explicit_from(d)]
    objects, basis, structure, units, order = [], [], {}, {}, set()
    for tag, cat in zip(tags, cats):
        off = len(basis)
        ren = {x: f"{x}@{tag}" for x in cat.objects}
        objects += [ren[x] for x in cat.objects]
        basis += [Basis(f"{b.name}@{tag}", ren[b.source], ren[b.target], b.degree) for b in cat.basis]
        for k, v in cat.structure.items():
            structure[tuple(i + off for i in k)] = {o + off: x for o, x in v.items()}
        units.update({ren[x]: u + off for x, u in cat.units.items()})
        if cat.order is not None:
            order |= {(ren[a], ren[b]) for a, b in cat.order}
    has_order = c.order is not None and d.order is not None
    return ExplicitCategory(objects, basis, structure, units, max(c.max_arity, d.max_arity),
                            order if has_order else None, f"{c.name}+{d.name}")


# ---------------------------------------------------------------------------
# Functors


class AInfFunctor:
    """A-infinity functor given by object assignment and components F^k.

    ``components[k]`` maps a path-ordered tuple of k source basis indices to
    a target vector.  F^1 defaults to zero on basis elements not listed.
    """

    def __init__(self, source, target, obj_map, components, name=""):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.components = {k: dict(v) for k, v in components.items()}
        self.name = name
        for x in source.objects:
            if x not in self.obj_map:
                raise CategoryError(f"functor {name} does not map object {x}")
            if self.obj_map[x] not in target._obj_set:
                raise CategoryError(f"functor {name} maps {x} to unknown object")

    @classmethod
    def strict(cls, source, target, obj_map, basis_map, name=""):
        """Functor with only F^1; basis_map sends source basis index -> target vector."""
        return cls(source, target, obj_map, {1: {(i,): v for i, v in basis_map.items()}}, name)

    @classmethod
    def identity(cls, cat):
        return cls.strict(cat, cat, {x: x for x in cat.objects}, {i: {i: 1} for i in range(len(cat.basis))}, "id")

    @classmethod
    def inclusion(cls, sub, cat, name="incl"):
        """Inclusion of a category whose basis names are a subset of ``cat``'s."""
        return cls.strict(sub, cat, {x: x for x in sub.objects},
                          {i: {cat.index(b.name): 1} for i, b in enumerate(sub.basis)}, name)

    def f(self, inputs):
        return self.components.get(len(inputs), {}).get(tuple(inputs), {})

    def f1(self, i):
        return self.f((i,))

    @property
    def max_arity(self):
        return max([k for k, v in self.components.items() if v] or [1])

    def is_strict(self):
        return self.max_arity == 1

    def chain_map(self, x, y):
        """F^1 as a map of hom complexes C(x, y) -> D(Fx, Fy), per degree."""
        cs, cdeg = self.source.hom_complex(x, y)
        ds, ddeg = self.target.hom_complex(self.obj_map[x], self.obj_map[y])
        dpos = {i: n for k, idx in ddeg.items() for n, i in enumerate(idx)}
        maps = {}
        for k, idx in cdeg.items():
            ent = {}
            for j, i in enumerate(idx):
                for o, v in self.f1(i).items():
                    if self.target.basis[o].degree != k:
                        raise CategoryError("F^1 does not preserve degree")
                    ent[dpos[o], j] = v
            maps[k] = IntMatrix.from_dict(len(ddeg.get(k, ())), len(idx), ent)
        return cs, ds, maps


def check_functor(func, up_to=None) -> RelationReport:
    src, tgt = func.source, func.target
    up_to = up_to or max(src.max_arity, tgt.max_arity, func.max_arity) + 1
    for k, comp in func.components.items():
        for key, val in comp.items():
            deg = sum(src.basis[i].degree for i in key) + 1 - k
            for o in val:
                b = tgt.basis[o]
                if (b.degree != deg or b.source != func.obj_map[src.basis[key[0]].source]
                        or b.target != func.obj_map[src.basis[key[-1]].target]):
                    return RelationReport(False, k, 0, ("degree", [src.basis[i].name for i in key],
                                                        {b.name: val[o]}))
    count = 0
    for x, u in src.units.items():
        tu = tgt.unit_vector(func.obj_map[x])
        if tu is not None and func.f1(u) != tu:
            return RelationReport(False, 1, count, ("unit", [src.basis[u].name],
                                                    {tgt.basis[o].name: v for o, v in func.f1(u).items()}))
    for d in range(1, up_to + 1):
        for t in composable_tuples(src, d):
            count += 1
            res = _functor_residual(func, t)
            if res:
                return RelationReport(False, d, count, ("relation", [src.basis[i].name for i in t],
                                                        {tgt.basis[k].name: v for k, v in sorted(res.items())}))
    return RelationReport(True, up_to, count)


def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _functor_residual(func, inputs):
    src, tgt = func.source, func.target
    d = len(inputs)
    out = {}
    # sum over splittings: mu_D(F(..), ..., F(..))
    for parts in _compositions(d):
        if len(parts) > tgt.max_arity and len(parts) > 2:
            continue
        vecs, pos = [], 0
        ok = True
        for p in parts:
            v = func.f(inputs[pos:pos + p])
            if not v:
                ok = False
                break
            vecs.append(v)
            pos += p
        if ok:
            add_into(out, tgt.mu_vectors(vecs))
    # minus sum F(.., mu(..), ..)
    prefix = [0]
    for i in inputs:
        prefix.append(prefix[-1] + src.basis[i].degree - 1)
    for n in range(d):
        for m in range(1, d - n + 1):
            inner = src.mu(inputs[n:n + m])
            s = -1 if prefix[n] % 2 else 1
            for o, c in inner.items():
                add_into(out, func.f(inputs[:n] + (o,) + inputs[n + m:]), -s * c)
    return out


def is_fully_faithful(func, field=None, pairs=None) -> bool:
    src = func.source
    pairs = pairs or [(x, y) for x in src.objects for y in src.objects]
    for x, y in pairs:
        cs, ds, maps = func.chain_map(x, y)
        if not is_acyclic(mapping_cone(cs, ds, maps), field):
            return False
    return True


def compose_functors(f, g, name=""):
    """g o f for strict functors."""
    if not (f.is_strict() and g.is_strict()):
        raise CategoryError("composition implemented for strict functors only")
    bm = {}
    for (i,), v in f.components.get(1, {}).items():
        out = {}
        for o, c in v.items():
            add_into(out, g.f1(o), c)
        bm[i] = out
    return AInfFunctor.strict(f.source, g.target, {x: g.obj_map[f.obj_map[x]] for x in f.source.objects}, bm, name)


def category_fingerprint(cat, up_to=None):
    """Canonical JSON-ready description (by names) used for digests."""
    ex = explicit_from(cat, up_to)
    names = [b.name for b in ex.basis]
    return {
        "name": ex.name,
        "objects": list(ex.objects),
        "basis": [[b.name, b.source, b.target, b.degree] for b in ex.basis],
        "units": {x: names[u] for x, u in sorted(ex.units.items())},
        "max_arity": ex.max_arity,
        "structure": sorted([[names[i] for i in k], sorted([names[o], c] for o, c in v.items())]
                            for k, v in ex.structure.items()),
    }


def functor_fingerprint(func):
    s, t = func.source, func.target
    return {
        "objects": dict(sorted(func.obj_map.items())),
        "components": sorted([[s.basis[i].name for i in k], sorted([t.basis[o].name, c] for o, c in v.items())]
                             for comp in func.components.values() for k, v in comp.items()),
    }
