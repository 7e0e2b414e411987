"""Left modules (functors C^op -> complexes) and the normalized bar Hom complex.

A module M assigns a graded free group M(X) to each object and has actions
act((a1, ..., ak), m) for a path a1: X_k -> ... -> X_0 (path order) and
m in M(X_0), landing in M(X_k); k = 0 is the differential.  Relations are
those of the category obtained by adjoining M as a terminal object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import CategoryError, add_into, hom_cohomology, is_directed
from .linalg import FiniteComplex, IntMatrix, complex_cohomology, is_acyclic, mapping_cone


class ModuleError(CategoryError):
    pass


@dataclass(frozen=True)
class ModElem:
    name: str
    obj: str
    degree: int


class LeftModule:
    """Module given by a finite basis per object and an action function.

    ``action(chain, m)`` receives non-unit C basis indices in path order and a
    module basis index, and returns {module basis index: coeff}.  Units act
    strictly and are handled here.
    """

    def __init__(self, cat, elems, action, name="", max_arity=None):
        self.cat = cat
        self.elems = tuple(elems)
        self.name = name
        self._action = action
        self.max_arity = cat.max_arity if max_arity is None else max_arity
        self.at = {}
        for i, e in enumerate(self.elems):
            if e.obj not in cat._obj_set:
                raise ModuleError(f"module element {e.name} sits over unknown object")
            self.at.setdefault(e.obj, []).append(i)
        self._cache = {}

    def over(self, x):
        return self.at.get(x, [])

    def act(self, chain, m):
        chain = tuple(chain)
        key = (chain, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        units = [c in self.cat._unit_set for c in chain]
        if any(units):
            out = {m: 1} if len(chain) == 1 else {}
        elif len(chain) + 1 > self.max_arity:
            out = {}
        else:
            out = {k: v for k, v in self._action(chain, m).items() if v}
        self._cache[key] = out
        return out


def yoneda_module(cat, x, name=None):
    """M(Y) = C(Y, x) with the action given by mu of C."""
    elems, index = [], {}
    for i, b in enumerate(cat.basis):
        if b.target == x:
            index[i] = len(elems)
            elems.append(ModElem(b.name, b.source, b.degree))
    back = {v: k for k, v in index.items()}

    def action(chain, m):
        return {index[o]: c for o, c in cat.mu(chain + (back[m],)).items()}

    return LeftModule(cat, elems, action, name or f"y({x})", cat.max_arity + 1)


def zero_module(cat, name="0"):
    return LeftModule(cat, [], lambda chain, m: {}, name)


def module_relation_residual(mod, chain, m):
    cat = mod.cat
    k = len(chain)
    prefix = [0]
    for a in chain:
        prefix.append(prefix[-1] + cat.basis[a].degree - 1)
    out = {}
    for n in range(k + 1):
        s = -1 if prefix[n] % 2 else 1
        for l in range(1, k - n + 1):
            for o, c in cat.mu(chain[n:n + l]).items():
                add_into(out, mod.act(chain[:n] + (o,) + chain[n + l:], m), s * c)
        for o, c in mod.act(chain[n:], m).items():
            add_into(out, mod.act(chain[:n], o), s * c)
    return out


def check_module_relations(mod, up_to=4):
    """Return (passed, failure) over all chains of length < up_to."""
    cat = mod.cat
    for k in range(0, up_to):
        for m, e in enumerate(mod.elems):
            for chain in _chains_into(cat, e.obj, k):
                res = module_relation_residual(mod, chain, m)
                if res:
                    return False, ([cat.basis[a].name for a in chain], e.name, res)
    return True, None


def _chains_into(cat, x, k, skip_units=False):
    """Composable tuples of length k ending at object x (path order)."""
    incoming = {}
    for i, b in enumerate(cat.basis):
        if skip_units and i in cat._unit_set:
            continue
        incoming.setdefault(b.target, []).append(i)

    def rec(obj, suffix):
        if len(suffix) == k:
            yield tuple(suffix)
            return
        for i in incoming.get(obj, ()):
            yield from rec(cat.basis[i].source, [i] + suffix)

    yield from rec(x, [])


# ---------------------------------------------------------------------------
# Bar Hom complex

@dataclass
class ModuleHomComplex:
    source: LeftModule
    target: LeftModule
    p_max: int
    complex: FiniteComplex
    basis: dict  # degree -> [(chain, m, n)]
    exact: bool
    stable_degrees: frozenset = field(default_factory=frozenset)


def _sgn(x):
    return -1 if x % 2 else 1


def _bar_basis(src, tgt, p_max):
    cat = src.cat
    basis, longer = {}, set()
    nonunit_in = {}
    for i, b in enumerate(cat.basis):
        if i not in cat._unit_set:
            nonunit_in.setdefault(b.target, []).append(i)
    for m, e in enumerate(src.elems):
        # chains a1..ap with a_p ending at e.obj
        stack = [((), e.obj)]
        while stack:
            chain, start = stack.pop()
            red = sum(cat.basis[a].degree - 1 for a in chain)
            for n in tgt.over(start):
                deg = tgt.elems[n].degree - e.degree - red
                basis.setdefault(deg, []).append((chain, m, n))
            for a in nonunit_in.get(start, ()):
                if len(chain) < p_max:
                    stack.append(((a,) + chain, cat.basis[a].source))
                else:
                    for n in tgt.over(cat.basis[a].source):
                        longer.add(tgt.elems[n].degree - e.degree - red - cat.basis[a].degree + 1)
    for k in basis:
        basis[k].sort(key=lambda t: (len(t[0]), t))
    return basis, longer


def module_hom_complex(src, tgt, p_max=4):
    """Normalized bar complex Hom(M, N) truncated to chains of length <= p_max.

    A basis functional (chain, m, n) of degree g sends (chain, m) to n.  The
    differential on phi of degree g evaluated on (a1..ar, m) is

        sum_j (-1)^(g s_j) act_N(a1..aj, phi(a_{j+1}..ar, m))
      + sum (-1)^(s_i + g + 1) phi(a1..ai, mu(a_{i+1}..a_{i+l}), .., m)
      + sum (-1)^(s_i + g + 1) phi(a1..ai, act_M(a_{i+1}..ar, m))

    with s_i = sum_{q <= i} (|a_q| - 1).  Chains containing units are dropped
    (normalization); the truncation is a quotient complex.
    """
    if p_max < 0:
        raise ModuleError("p_max must be non-negative")
    if src.cat is not tgt.cat:
        raise ModuleError("modules over different categories")
    cat = src.cat
    basis, longer = _bar_basis(src, tgt, p_max)
    diffs = {}
    for k, rows in basis.items():
        cols = basis.get(k - 1)
        if not cols:
            continue
        g = k - 1
        pos = {t: n for n, t in enumerate(cols)}
        ent = {}
        for row, (chain, m, n) in enumerate(rows):
            for key, c in _d_row(src, tgt, cat, chain, m, n, g).items():
                if c:
                    if key not in pos:
                        raise ModuleError("internal: bar differential leaves its degree")
                    ent[row, pos[key]] = c
        if ent:
            diffs[g] = IntMatrix.from_dict(len(rows), len(cols), ent)
    cx = FiniteComplex({k: len(v) for k, v in basis.items()}, diffs)
    cx.check()
    return ModuleHomComplex(src, tgt, p_max, cx, basis, not longer,
                            frozenset(k for k in basis if not ({k - 1, k, k + 1} & longer)))


def _d_row(src, tgt, cat, chain, m, n, g):
    """(d phi)(chain, m)[n] as a linear form in the degree-g functionals phi."""
    r = len(chain)
    prefix = [0]
    for a in chain:
        prefix.append(prefix[-1] + cat.basis[a].degree - 1)
    out = {}
    for j in range(r + 1):
        sign = _sgn(g * prefix[j])
        obj = cat.basis[chain[j]].source if j < r else src.elems[m].obj
        for n2 in tgt.over(obj):
            c = tgt.act(chain[:j], n2).get(n, 0)
            if c:
                key = (chain[j:], m, n2)
                out[key] = out.get(key, 0) + sign * c
    for i in range(r + 1):
        sign = _sgn(prefix[i] + g + 1)
        for l in range(1, r - i + 1):
            for o, c in cat.mu(chain[i:i + l]).items():
                if o in cat._unit_set:
                    continue
                key = (chain[:i] + (o,) + chain[i + l:], m, n)
                out[key] = out.get(key, 0) + sign * c
        for m2, c in src.act(chain[i:], m).items():
            key = (chain[:i], m2, n)
            out[key] = out.get(key, 0) + sign * c
    return out


def module_hom_cohomology(src, tgt, p_max=4, field=None):
    h = module_hom_complex(src, tgt, p_max)
    return complex_cohomology(h.complex, field, check=False), h.exact


def module_complex(mod, x):
    """(M(x), act(())) as a FiniteComplex, with the basis indices per degree."""
    degs = {}
    for i in mod.over(x):
        degs.setdefault(mod.elems[i].degree, []).append(i)
    pos = {i: n for lst in degs.values() for n, i in enumerate(lst)}
    diffs = {}
    for k, lst in degs.items():
        ent = {}
        for j, i in enumerate(lst):
            for o, c in mod.act((), i).items():
                ent[pos[o], j] = c
        if ent:
            diffs[k] = IntMatrix.from_dict(len(degs.get(k + 1, ())), len(lst), ent)
    return FiniteComplex({k: len(v) for k, v in degs.items()}, diffs), degs


@dataclass
class YonedaReport:
    passed: bool
    pairs: list  # (x, y, bar cohomology json, direct json, match)

    def __bool__(self):
        return self.passed

    def as_json(self):
        return {"passed": self.passed,
                "pairs": [{"source": x, "target": y, "module_hom": a, "hom": b, "match": ok}
                          for x, y, a, b, ok in self.pairs]}


def check_yoneda_full_faithfulness(cat, field=None):
    if not is_directed(cat):
        raise ModuleError("Yoneda comparison needs a strictly unital directed category; "
                          "a truncated bar complex would not certify anything")
    ys = {x: yoneda_module(cat, x) for x in cat.objects}
    p_max = len(cat.objects)
    pairs, ok = [], True
    for x in cat.objects:
        for y in cat.objects:
            h = module_hom_complex(ys[x], ys[y], p_max)
            if not h.exact:
                raise ModuleError("internal: bar complex of a directed category did not saturate")
            a = complex_cohomology(h.complex, field, check=False).as_json()
            b = hom_cohomology(cat, x, y, field).as_json()
            pairs.append((x, y, a, b, a == b))
            ok = ok and a == b
    return YonedaReport(ok, pairs)


@dataclass
class ModuleMap:
    source: LeftModule
    target: LeftModule
    components: dict  # (chain, m, n) -> coeff
    degree: int = 0


def identity_map(mod):
    return ModuleMap(mod, mod, {((), i, i): 1 for i in range(len(mod.elems))}, 0)


def yoneda_map(cat, f, x, y):
    """Image of f in C(x, y) (a {basis index: coeff} vector) under Yoneda.

    Component on (a1..ak, m) is (-1)^(k (r + 1)) mu(a1..ak, m, f), r the
    reduced degree of (a1..ak, m); this makes f -> y(f) a chain map.
    """
    mx, my = yoneda_module(cat, x), yoneda_module(cat, y)
    back = {n: cat.index(e.name) for n, e in enumerate(mx.elems)}
    index = {cat.index(e.name): n for n, e in enumerate(my.elems)}
    comps = {}
    deg = None
    for fi, fc in f.items():
        deg = cat.basis[fi].degree
        for m, e in enumerate(mx.elems):
            for k in range(0, cat.max_arity):
                for chain in _chains_into(cat, e.obj, k, skip_units=True):
                    red = sum(cat.basis[a].degree - 1 for a in chain) + e.degree - 1
                    sign = _sgn((red + 1) * k)
                    for o, c in cat.mu(chain + (back[m], fi)).items():
                        key = (chain, m, index[o])
                        comps[key] = comps.get(key, 0) + sign * c * fc
    return ModuleMap(mx, my, {k: v for k, v in comps.items() if v}, deg or 0)


def map_differential(fm, p_max=None):
    """d(f) in the bar complex, as {(chain, m, n): coeff}."""
    cat = fm.source.cat
    p_max = p_max if p_max is not None else max([len(k[0]) for k in fm.components] + [0]) + 1
    h = module_hom_complex(fm.source, fm.target, p_max)
    rows = h.basis.get(fm.degree + 1, [])
    out = {}
    for chain, m, n in rows:
        tot = sum(c * fm.components.get(key, 0)
                  for key, c in _d_row(fm.source, fm.target, cat, chain, m, n, fm.degree).items())
        if tot:
            out[chain, m, n] = tot
    return out


def pointwise_qiso(fm, field=None):
    """True iff the chain-level component M(x) -> N(x) is a quasi-isomorphism at every x."""
    if fm.degree != 0:
        raise ModuleError("pointwise_qiso needs a degree-0 module map")
    for x in fm.source.cat.objects:
        cm, dm = module_complex(fm.source, x)
        cn, dn = module_complex(fm.target, x)
        pm = {i: n for lst in dm.values() for n, i in enumerate(lst)}
        pn = {i: n for lst in dn.values() for n, i in enumerate(lst)}
        maps = {}
        for k, lst in dm.items():
            ent = {}
            for (chain, m, n), c in fm.components.items():
                if not chain and m in pm and fm.source.elems[m].degree == k and n in pn:
                    ent[pn[n], pm[m]] = ent.get((pn[n], pm[m]), 0) + c
            maps[k] = IntMatrix.from_dict(len(dn.get(k, ())), len(lst), ent)
        if not is_acyclic(mapping_cone(cm, cn, maps), field):
            return False
    return True
