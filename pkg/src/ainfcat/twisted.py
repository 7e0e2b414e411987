"""Twisted complexes over a finite A-infinity category.

An entry (X, s) stands for the shifted object X[s].  A morphism of C from X
to Y read in hom(X[s], Y[t]) has degree |b| + s - t, and the shifted
operations are mu'(a1..ad) = (-1)^(s_0 + ... + s_{d-1}) mu(a1..ad), where
s_p is the shift of the p-th object along the path (the last one is left
out).  With this sign the shifted category keeps the relations and the
strict units.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .category import AInfCategory, Basis, CategoryError, add_into
from .linalg import (IntMatrix, cohomology_representatives, complex_cohomology, is_acyclic,
                     solve_integer)


class TwistedError(CategoryError):
    pass


@dataclass(frozen=True)
class TwistedComplex:
    entries: tuple  # ((object, shift), ...)
    delta: tuple = ()  # (((i, k), ((basis index, coeff), ...)), ...) with i < k
    name: str = ""

    def delta_dict(self):
        return {ik: dict(v) for ik, v in self.delta}

    def __len__(self):
        return len(self.entries)

    def renamed(self, name):
        return TwistedComplex(self.entries, self.delta, name)


@dataclass(frozen=True)
class TwMorphism:
    source: TwistedComplex
    target: TwistedComplex
    components: tuple  # (((i, j, basis index), coeff), ...)
    degree: int

    def is_zero(self):
        return not self.components

    def as_dict(self):
        return dict(self.components)


def _freeze_delta(d):
    return tuple(sorted((ik, tuple(sorted((b, c) for b, c in v.items() if c))) for ik, v in d.items()
                        if any(v.values())))


def _resolve(cat, b):
    return cat.index(b) if isinstance(b, str) else b


def twisted_complex(cat, entries, delta=None, name="", check=True):
    """Build and validate a twisted complex; delta maps (i, k) -> {basis: coeff}."""
    entries = tuple((x, int(s)) for x, s in entries)
    for x, _ in entries:
        if x not in cat._obj_set:
            raise TwistedError(f"unknown object {x!r} in twisted complex {name}")
    clean = {}
    for (i, k), vec in (delta or {}).items():
        if not (0 <= i < k < len(entries)):
            raise TwistedError(f"delta component ({i}, {k}) is not strictly lower-triangular")
        (x, s), (y, t) = entries[i], entries[k]
        v = {}
        for b, c in vec.items():
            b = _resolve(cat, b)
            bb = cat.basis[b]
            if bb.source != x or bb.target != y:
                raise TwistedError(f"delta component {bb.name} does not go {x} -> {y}")
            if bb.degree + s - t != 1:
                raise TwistedError(f"delta component {bb.name} has shifted degree {bb.degree + s - t}, expected 1")
            if c:
                v[b] = v.get(b, 0) + c
        clean[i, k] = v
    t = TwistedComplex(entries, _freeze_delta(clean), name)
    if check:
        res = mc_residual(cat, t)
        if res:
            raise TwistedError(f"Maurer-Cartan equation fails for {name or 'twisted complex'}: {res}")
    return t


def trivial(cat, x, shift=0, name=None):
    return twisted_complex(cat, [(x, shift)], {}, name if name is not None else (x if not shift else f"{x}[{shift}]"))


def _shift_sign(shifts):
    return -1 if sum(shifts[:-1]) % 2 else 1


class _Paths:
    """All delta-paths inside one twisted complex, bounded in length."""

    def __init__(self, t: TwistedComplex, max_len):
        self.t = t
        self.max_len = max_len
        self.out = {}
        for (i, k), v in t.delta:
            self.out.setdefault(i, []).append((k, dict(v)))
        self._cache = {}

    def between(self, u, v):
        """List of (entry sequence, [vectors]) from u to v, including the empty path when u == v."""
        key = (u, v)
        if key in self._cache:
            return self._cache[key]
        res = []

        def rec(cur, seq, vecs):
            if cur == v:
                res.append((tuple(seq), list(vecs)))
                return
            if len(vecs) >= self.max_len:
                return
            for k, vec in self.out.get(cur, ()):
                if k <= v:
                    seq.append(k)
                    vecs.append(vec)
                    rec(k, seq, vecs)
                    seq.pop()
                    vecs.pop()

        if u <= v:
            rec(u, [u], [])
        self._cache[key] = res
        return res


def mc_residual(cat, t: TwistedComplex):
    """sum_k mu'(delta, ..., delta) as {(i, k, basis name): coeff}; empty when MC holds."""
    paths = _Paths(t, cat.max_arity)
    out = {}
    n = len(t.entries)
    for u in range(n):
        for v in range(u + 1, n):
            acc = {}
            for seq, vecs in paths.between(u, v):
                if not vecs:
                    continue
                s = _shift_sign([t.entries[e][1] for e in seq])
                add_into(acc, cat.mu_vectors(vecs), s)
            for b, c in acc.items():
                out[u, v, cat.basis[b].name] = c
    return out


class TwCategory(AInfCategory):
    """Full subcategory of Tw C on a finite list of twisted complexes."""

    def __init__(self, base, complexes, name=""):
        complexes = list(complexes)
        names, seen = [], {}
        self.complexes = {}
        for n, t in enumerate(complexes):
            nm = t.name or f"T{n}"
            if nm in self.complexes:
                if self.complexes[nm] == t:
                    continue
                nm = f"{nm}#{n}"
            self.complexes[nm] = t
            names.append(nm)
            seen[t] = nm
        self._name_of = seen
        self.base = base
        basis, keys = [], []
        for a in names:
            ta = self.complexes[a]
            for b in names:
                tb = self.complexes[b]
                for i, (x, s) in enumerate(ta.entries):
                    for j, (y, t) in enumerate(tb.entries):
                        for e in base.hom(x, y):
                            bb = base.basis[e]
                            basis.append(Basis(f"{a}:{i}>{b}:{j}:{bb.name}", a, b, bb.degree + s - t))
                            keys.append((a, b, i, j, e))
        super().__init__(names, basis, {}, base.max_arity, None, name or f"Tw({base.name})")
        self.keys = keys
        self._key_index = {k: n for n, k in enumerate(keys)}
        self._paths = {a: _Paths(self.complexes[a], base.max_arity) for a in names}

    def name_of(self, t: TwistedComplex):
        try:
            return self._name_of[t]
        except KeyError:
            raise TwistedError("twisted complex is not an object of this category") from None

    def unit_vector(self, a):
        t = self.complexes[a]
        out = {}
        for i, (x, _) in enumerate(t.entries):
            u = self.base.unit(x)
            if u is None:
                return None
            out[self._key_index[a, a, i, i, u]] = 1
        return out

    def is_strictly_unital(self):
        return self.base.is_strictly_unital()

    def _mu_raw(self, inputs):
        keys = [self.keys[i] for i in inputs]
        d = len(keys)
        budget = self.base.max_arity - d
        objs = [keys[0][0]] + [k[1] for k in keys]
        t0, td = self.complexes[objs[0]], self.complexes[objs[-1]]
        heads = [p for s in range(keys[0][2] + 1) for p in self._paths[objs[0]].between(s, keys[0][2])]
        tails = [p for t in range(keys[-1][3], len(td.entries)) for p in self._paths[objs[-1]].between(keys[-1][3], t)]
        mids = [self._paths[objs[p + 1]].between(keys[p][3], keys[p + 1][2]) for p in range(d - 1)]
        out = {}
        for head in heads:
            for tail in tails:
                for mid in itertools.product(*mids):
                    chains = [head] + list(mid) + [tail]
                    extra = sum(len(c[1]) for c in chains)
                    if extra > budget:
                        continue
                    vecs, shifts = [], []
                    for p, (seq, dv) in enumerate(chains):
                        ent = self.complexes[objs[p]].entries
                        shifts += [ent[e][1] for e in seq]
                        vecs += dv
                        if p < d:
                            vecs.append({keys[p][4]: 1})
                    sign = _shift_sign(shifts)
                    res = self.base.mu_vectors(vecs)
                    s, t = head[0][0], tail[0][-1]
                    for b, c in res.items():
                        add_into(out, {self._key_index[objs[0], objs[-1], s, t, b]: 1}, sign * c)
        return out

    # conversions ------------------------------------------------------------
    def vec_of(self, m: TwMorphism):
        a, b = self.name_of(m.source), self.name_of(m.target)
        return {self._key_index[a, b, i, j, e]: c for (i, j, e), c in m.components}

    def morphism_of(self, a, b, vec, degree=None):
        comps = []
        for k, c in sorted(vec.items()):
            if not c:
                continue
            ka = self.keys[k]
            if ka[0] != a or ka[1] != b:
                raise TwistedError("vector does not live in the requested hom space")
            comps.append(((ka[2], ka[3], ka[4]), c))
            deg = self.basis[k].degree
            if degree is None:
                degree = deg
            elif degree != deg:
                raise TwistedError("inhomogeneous morphism")
        return TwMorphism(self.complexes[a], self.complexes[b], tuple(comps), degree if degree is not None else 0)

    def hom_cohomology(self, s, t, field=None):
        cx, _ = self.hom_complex(self.name_of(s), self.name_of(t))
        return complex_cohomology(cx, field)


def tw_morphism(cat, source, target, terms, degree=None):
    """terms: {(i, j, basis name or index): coeff}."""
    comps = {}
    for (i, j, b), c in terms.items():
        b = _resolve(cat, b)
        bb = cat.basis[b]
        if bb.source != source.entries[i][0] or bb.target != target.entries[j][0]:
            raise TwistedError(f"{bb.name} does not fit entries ({i}, {j})")
        d = bb.degree + source.entries[i][1] - target.entries[j][1]
        if degree is None:
            degree = d
        elif d != degree:
            raise TwistedError("inhomogeneous twisted morphism")
        if c:
            comps[i, j, b] = comps.get((i, j, b), 0) + c
    return TwMorphism(source, target, tuple(sorted((k, v) for k, v in comps.items() if v)),
                      degree if degree is not None else 0)


def tw_unit(cat, t: TwistedComplex):
    return tw_morphism(cat, t, t, {(i, i, cat.unit(x)): 1 for i, (x, _) in enumerate(t.entries)})


def tw_structure_maps(cat, inputs):
    """mu^k in Tw C of a composable list of TwMorphisms (path order)."""
    inputs = list(inputs)
    if not inputs:
        raise TwistedError("empty input")
    for f, g in zip(inputs, inputs[1:]):
        if f.target != g.source:
            raise TwistedError("non-composable chain of twisted morphisms")
    objs = [inputs[0].source] + [f.target for f in inputs]
    tw = TwCategory(cat, _distinct(objs))
    vec = tw.mu_vectors([tw.vec_of(f) for f in inputs])
    deg = sum(f.degree for f in inputs) + 2 - len(inputs)
    return tw.morphism_of(tw.name_of(objs[0]), tw.name_of(objs[-1]), vec, deg)


def _distinct(objs):
    out = []
    for o in objs:
        if o not in out:
            out.append(o)
    return out


def tw_differential(cat, f):
    return tw_structure_maps(cat, [f])


def shift(t: TwistedComplex, n: int, name=None) -> TwistedComplex:
    if n == 0 and name is None:
        return t
    sign = -1 if n % 2 else 1
    delta = tuple((ik, tuple((b, sign * c) for b, c in v)) for ik, v in t.delta)
    nm = name if name is not None else (f"{t.name}[{n}]" if t.name and n else t.name)
    return TwistedComplex(tuple((x, s + n) for x, s in t.entries), delta, nm)


def cone(cat, f: TwMorphism, name=None) -> TwistedComplex:
    """cone(f) = [source[1] -> target]; f must be closed of degree 0."""
    if f.degree != 0:
        raise TwistedError(f"cone needs a degree-0 morphism, got degree {f.degree}")
    if not tw_differential(cat, f).is_zero():
        raise TwistedError("cone needs a closed morphism (mu^1(f) != 0)")
    src, tgt = f.source, f.target
    n = len(src.entries)
    entries = [(x, s + 1) for x, s in src.entries] + list(tgt.entries)
    delta = {}
    for (i, k), v in src.delta:
        delta[i, k] = {b: -c for b, c in v}
    for (i, k), v in tgt.delta:
        delta[n + i, n + k] = dict(v)
    for (i, j, b), c in f.components:
        delta.setdefault((i, n + j), {})
        delta[i, n + j][b] = delta[i, n + j].get(b, 0) + c
    nm = name if name is not None else f"cone({src.name or '?'}->{tgt.name or '?'})"
    return twisted_complex(cat, entries, delta, nm)


def direct_sum_tw(cat, parts, name=""):
    entries, delta = [], {}
    for t in parts:
        off = len(entries)
        entries += list(t.entries)
        for (i, k), v in t.delta:
            delta[off + i, off + k] = dict(v)
    return twisted_complex(cat, entries, delta, name)


def tw_hom_cohomology(cat, s, t, field=None):
    return TwCategory(cat, _distinct([s, t])).hom_cohomology(s, t, field)


# ---------------------------------------------------------------------------
# Zero objects and quasi-isomorphisms


@dataclass
class ZeroResult:
    is_zero: bool
    witness: TwMorphism | None
    method: str

    def __bool__(self):
        return self.is_zero


WITNESS_LIMIT = 600


def _acyclic_against_generators(cat, t, field=None):
    tw = TwCategory(cat, [trivial(cat, x, 0, f"<{x}>") for x in cat.objects] + [t])
    name = tw.name_of(t)
    for x in cat.objects:
        cx, _ = tw.hom_complex(f"<{x}>", name)
        if not is_acyclic(cx, field):
            return False
    return True


def is_zero_object(cat, t: TwistedComplex, witness=True, field=None) -> ZeroResult:
    """Zero test.  Hom(X, T) acyclic for every object X of C forces End(T)
    acyclic (T is an iterated cone of objects of C), so the identity is a
    coboundary; a primitive is produced when the End complex is small."""
    if not t.entries:
        return ZeroResult(True, None, "empty")
    if not _acyclic_against_generators(cat, t, field):
        return ZeroResult(False, None, "generator-hom")
    if not witness:
        return ZeroResult(True, None, "generator-hom")
    tw = TwCategory(cat, [t])
    a = tw.name_of(t)
    degs = tw.hom_degrees(a, a)
    if len(degs.get(-1, ())) * len(degs.get(0, ())) > WITNESS_LIMIT ** 2 // 4:
        return ZeroResult(True, None, "generator-hom")
    cx, idx = tw.hom_complex(a, a)
    unit = tw.unit_vector(a)
    target = [unit.get(i, 0) for i in idx.get(0, [])]
    d = cx.d(-1)
    sol = solve_integer(d, target) if d.cols else None
    if sol is None:
        raise TwistedError("internal: acyclic End(T) without a primitive of the identity")
    vec = {i: c for i, c in zip(idx.get(-1, []), sol) if c}
    return ZeroResult(True, tw.morphism_of(a, a, vec, -1), "primitive")


def cohomology_fingerprint(cat, s, t, field=None):
    tw = TwCategory(cat, _distinct([s, t]))
    out = {}
    for label, (a, b) in (("End1", (s, s)), ("End2", (t, t)), ("Hom12", (s, t)), ("Hom21", (t, s))):
        out[label] = tw.hom_cohomology(a, b, field)
    return out


@dataclass
class QisoResult:
    verdict: str  # "yes" / "no" / "unknown"
    witness: TwMorphism | None = None
    certificate: dict | None = None
    tried: int = 0

    def __bool__(self):
        return self.verdict == "yes"


def _coefficient_vectors(r, bound, limit):
    """Nonzero integer vectors with |c_i| <= bound ordered by (sum |c_i|, lex)."""
    count = 0
    for total in range(1, r * bound + 1):
        for combo in _with_l1(r, total, bound):
            yield combo
            count += 1
            if count >= limit:
                return


def _with_l1(r, total, bound):
    if r == 0:
        if total == 0:
            yield ()
        return
    for first in range(-min(bound, total), min(bound, total) + 1):
        for rest in _with_l1(r - 1, total - abs(first), bound):
            yield (first,) + rest


def are_quasi_isomorphic(cat, s, t, bound=3, field=None, limit=20000) -> QisoResult:
    if s == t:
        return QisoResult("yes", tw_unit(cat, s), None, 1)
    fp = cohomology_fingerprint(cat, s, t, field)
    keys = [v.as_json() for v in fp.values()]
    if any(k != keys[0] for k in keys[1:]):
        return QisoResult("no", None, {k: v.as_json() for k, v in fp.items()})
    if fp["End1"].is_zero():
        return QisoResult("yes", TwMorphism(s, t, (), 0), {"both_zero": True}, 0)
    tw = TwCategory(cat, _distinct([s, t]))
    a, b = tw.name_of(s), tw.name_of(t)
    cx, idx = tw.hom_complex(a, b)
    free, tors = cohomology_representatives(cx, 0)
    reps = list(free) + [v for _, v in tors]
    tried = 0
    for coeffs in _coefficient_vectors(len(reps), bound, limit):
        tried += 1
        vec = {}
        for c, rep in zip(coeffs, reps):
            if c:
                for i, x in zip(idx.get(0, []), rep):
                    if x:
                        vec[i] = vec.get(i, 0) + c * x
        g = tw.morphism_of(a, b, {k: v for k, v in vec.items() if v}, 0)
        if is_zero_object(cat, cone(cat, g, "cone(g)"), witness=False, field=field):
            return QisoResult("yes", g, {"coefficients": list(coeffs)}, tried)
    return QisoResult("unknown", None, {"searched": tried, "bound": bound,
                                         "fingerprint": {k: v.as_json() for k, v in fp.items()}}, tried)


@dataclass
class TriangleResult:
    ok: bool
    verdict: str
    explanation: str

    def __bool__(self):
        return self.ok


def exact_triangle_check(cat, f: TwMorphism, z: TwistedComplex, bound=3, field=None) -> TriangleResult:
    c = cone(cat, f)
    res = are_quasi_isomorphic(cat, c, z, bound, field)
    if res.verdict == "yes":
        return TriangleResult(True, "yes", "cone(f) is quasi-isomorphic to Z")
    if res.verdict == "no":
        return TriangleResult(False, "no", "cohomology fingerprints of cone(f) and Z differ")
    return TriangleResult(False, "unknown", f"no quasi-isomorphism found with coefficients bounded by {bound}")
