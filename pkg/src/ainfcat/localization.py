"""Quotients C/A, localizations, and hom colimits along wrapping sequences.

The quotient hom from X to Z is the bar complex of tensors
b0 (x) b1 (x) ... (x) bp along X -> Y1 -> ... -> Yp -> Z with every Yi in A,
in degree sum|bi| - p.  The differential applies one mu of C to a
contiguous block of factors with sign (-1)^(sum over earlier factors of
(|b| - 1)).  Units in interior slots are divided out and the complex is
truncated at p <= p_max, which is a subcomplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import AInfCategory, CategoryError, add_into, is_fully_faithful
from .linalg import FiniteComplex, IntMatrix, cohomology_representatives, complex_cohomology, rank, solve_integer
from .twisted import (TwCategory, TwistedComplex, TwMorphism, are_quasi_isomorphic, cone, trivial,
                      tw_differential)


class LocalizationError(CategoryError):
    pass


PREFIX_NOTE = ("verified along a finite prefix of the wrapping sequence; left-locality of the "
               "whole pro-object is not checked")


# ---------------------------------------------------------------------------
# quotient bar complex over an arbitrary finite category


class _Reducer:
    """Interior-slot normalization: drop one pivot per End(Y) with Y in A."""

    def __init__(self, cat, a_objects):
        self.pivot, self.rewrite, self.reduced = {}, {}, {}
        for y in a_objects:
            u = cat.unit_vector(y)
            if u is None:
                raise LocalizationError(f"object {y} has no strict unit")
            piv = min((i for i, c in u.items() if abs(c) == 1), default=None)
            if piv is None:
                raise LocalizationError(f"unit of {y} has no +-1 coefficient")
            c0 = u[piv]
            self.pivot[y] = piv
            self.rewrite[piv] = {i: -c0 * c for i, c in u.items() if i != piv}
        self.cat = cat

    def interior(self, y1, y2):
        h = self.cat.hom(y1, y2)
        if y1 == y2 and y1 in self.pivot:
            return [i for i in h if i != self.pivot[y1]]
        return h

    def reduce_slot(self, i, interior):
        if interior and i in self.rewrite:
            return self.rewrite[i]
        return {i: 1}


@dataclass
class QuotientHom:
    cohomology: object
    exact: bool
    stable_degrees: frozenset
    p_max: int
    dims: dict = field(default_factory=dict)

    def as_json(self):
        return {"cohomology": self.cohomology.as_json(), "exact": self.exact, "p_max": self.p_max,
                "stable_degrees": sorted(self.stable_degrees)}


def _tensor_basis(cat, red, a_objects, x, z, p_max):
    """Basis tensors by degree, degrees of tensors one step longer, and saturation."""
    basis, longer = {}, set()
    for i in cat.hom(x, z):
        basis.setdefault(cat.basis[i].degree, []).append((i,))
    # partial tensors b0..b_{p-1} ending at an object of A
    layer = [((i,), y, cat.basis[i].degree) for y in a_objects for i in cat.hom(x, y)]
    p = 1
    while layer:
        for t, y, deg in layer:
            for i in cat.hom(y, z):
                d = deg + cat.basis[i].degree - p
                if p <= p_max:
                    basis.setdefault(d, []).append(t + (i,))
                else:
                    longer.add(d)
        if p > p_max:
            break
        layer = [(t + (i,), y2, deg + cat.basis[i].degree)
                 for t, y, deg in layer for y2 in a_objects for i in red.interior(y, y2)]
        p += 1
    for k in basis:
        basis[k].sort(key=lambda t: (len(t), t))
    return basis, longer, not layer


def quotient_bar_complex(cat, a_objects, x, z, p_max=4):
    """(FiniteComplex, basis, exact, stable degrees) for the truncated quotient hom."""
    if p_max < 0:
        raise LocalizationError("p_max must be non-negative")
    a_objects = [y for y in dict.fromkeys(a_objects)]
    red = _Reducer(cat, a_objects)
    basis, longer, saturated = _tensor_basis(cat, red, a_objects, x, z, p_max)
    diffs = {}
    for k, cols in basis.items():
        rows = basis.get(k + 1, [])
        pos = {t: n for n, t in enumerate(rows)}
        ent = {}
        for col, t in enumerate(cols):
            for key, c in _bar_d(cat, red, t).items():
                if c:
                    if key not in pos:
                        raise LocalizationError("internal: quotient differential leaves its degree")
                    ent[pos[key], col] = ent.get((pos[key], col), 0) + c
        ent = {kk: v for kk, v in ent.items() if v}
        if ent:
            diffs[k] = IntMatrix.from_dict(len(rows), len(cols), ent)
    cx = FiniteComplex({k: len(v) for k, v in basis.items()}, diffs)
    cx.check()
    stable = frozenset(k for k in basis if not ({k - 1, k, k + 1} & longer))
    return cx, basis, saturated, stable


def _bar_d(cat, red, t):
    out = {}
    p = len(t)
    prefix = 0
    for i in range(p):
        s = -1 if prefix % 2 else 1
        for j in range(i, p):
            inner = cat.mu(t[i:j + 1])
            if not inner:
                continue
            n_len = p - (j - i)
            is_interior = 0 < i < n_len - 1
            for o, c in inner.items():
                for o2, c2 in red.reduce_slot(o, is_interior).items():
                    key = t[:i] + (o2,) + t[j + 1:]
                    out[key] = out.get(key, 0) + s * c * c2
        prefix += cat.basis[t[i]].degree - 1
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# specs


@dataclass
class QuotientSpec:
    cat: AInfCategory
    A: list  # TwistedComplex or object names
    p_max: int = 4


@dataclass
class LocalizationSpec:
    cat: AInfCategory
    W: list  # TwMorphism


def _as_tw(cat, obj):
    if isinstance(obj, TwistedComplex):
        return obj
    return trivial(cat, obj, 0, obj)


def _plain(cat, objs):
    return all(isinstance(o, str) or (len(o.entries) == 1 and o.entries[0][1] == 0 and o.name == o.entries[0][0])
               for o in objs)


def quotient_hom(spec: QuotientSpec, x, z, field=None, p_max=None) -> QuotientHom:
    cat = spec.cat
    p_max = spec.p_max if p_max is None else p_max
    objs = [x, z] + list(spec.A)
    if _plain(cat, objs):
        names = [o if isinstance(o, str) else o.name for o in objs]
        work, xa, za, an = cat, names[0], names[1], names[2:]
    else:
        tws = [_as_tw(cat, o) for o in objs]
        work = TwCategory(cat, tws)
        xa, za = work.name_of(tws[0]), work.name_of(tws[1])
        an = [work.name_of(t) for t in tws[2:]]
    cx, basis, exact, stable = quotient_bar_complex(work, an, xa, za, p_max)
    return QuotientHom(complex_cohomology(cx, field, check=False), exact, stable, p_max,
                       {k: len(v) for k, v in basis.items()})


def localize(spec: LocalizationSpec, p_max=4) -> QuotientSpec:
    cones = []
    for n, w in enumerate(spec.W):
        if w.degree != 0:
            raise LocalizationError(f"morphism {n} of W has degree {w.degree}")
        if not tw_differential(spec.cat, w).is_zero():
            raise LocalizationError(f"morphism {n} of W is not closed")
        cones.append(cone(spec.cat, w, f"cone(w{n})"))
    return QuotientSpec(spec.cat, cones, p_max)


# ---------------------------------------------------------------------------
# wrapping sequences and hom colimits


@dataclass
class WrappingSequence:
    objects: list  # TwistedComplex L(0), L(1), ...
    maps: list  # TwMorphism L(i+1) -> L(i)
    cones: list  # index into the quotient's A for cone(maps[i])
    period: int = 1
    name: str = ""


def validate_sequence(cat, seq: WrappingSequence, a_list, bound=3):
    if len(seq.maps) != len(seq.objects) - 1 or len(seq.cones) != len(seq.maps):
        raise LocalizationError("wrapping sequence needs one map and one designated cone per step")
    for i, (f, d) in enumerate(zip(seq.maps, seq.cones)):
        if f.source != seq.objects[i + 1] or f.target != seq.objects[i]:
            raise LocalizationError(f"connecting map {i} does not go L({i + 1}) -> L({i})")
        res = are_quasi_isomorphic(cat, cone(cat, f), a_list[d], bound)
        if res.verdict != "yes":
            raise LocalizationError(f"cone mismatch at step {i}: cone of the connecting map is not "
                                    f"identified with A[{d}] ({res.verdict})")
    return True


class _HomData:
    def __init__(self, tw, s, t, degree):
        self.tw, self.s, self.t = tw, s, t
        self.cx, self.idx = tw.hom_complex(s, t)
        self.degree = degree
        free, tors = cohomology_representatives(self.cx, degree)
        self.free = free
        self.tors = tors
        self.report = complex_cohomology(self.cx, check=False)
        self.bmat = self.cx.d(degree - 1) if self.cx.dims.get(degree - 1) else None

    def vecs(self):
        """Cocycle representatives as {basis index: coeff}."""
        ids = self.idx.get(self.degree, [])
        out = [{i: c for i, c in zip(ids, v) if c} for v in self.free]
        out += [{i: c for i, c in zip(ids, v) if c} for _, v in self.tors]
        return out

    def coords(self, vec):
        """Coordinates of a cocycle in the free representatives; None if not in their span mod boundaries."""
        ids = self.idx.get(self.degree, [])
        n = len(ids)
        if n == 0:
            return []
        pos = {i: k for k, i in enumerate(ids)}
        b = [0] * n
        for i, c in vec.items():
            b[pos[i]] += c
        cols = [v for v in self.free] + [v for _, v in self.tors]
        ent = {(r, j): col[r] for j, col in enumerate(cols) for r in range(n) if col[r]}
        m0 = len(cols)
        if self.bmat is not None:
            for (r, c), v in ((rc[:2], rc[2]) for rc in self.bmat.entries):
                ent[r, m0 + c] = v
            width = m0 + self.bmat.cols
        else:
            width = m0
        if width == 0:
            return [] if not any(b) else None
        sol = solve_integer(IntMatrix.from_dict(n, width, ent), b)
        return None if sol is None else sol[:len(self.free)]

    def is_boundary(self, vec):
        ids = self.idx.get(self.degree, [])
        if not any(vec.values()):
            return True
        if self.bmat is None:
            return False
        pos = {i: k for k, i in enumerate(ids)}
        b = [0] * len(ids)
        for i, c in vec.items():
            b[pos[i]] += c
        return solve_integer(self.bmat, b) is not None


@dataclass
class ColimitReport:
    reports: list  # CohomologyReport per i
    transitions: list  # free-part matrices H(L(i), K) -> H(L(i+1), K) in `degree`
    injective: list
    a_vanishing: dict  # A-index -> list of bools per starting step
    verdict: str
    stabilized: bool
    note: str = PREFIX_NOTE
    degree: int = 0

    def as_json(self):
        return {"degree": self.degree,
                "reports": [r.as_json() for r in self.reports],
                "ranks": [r.rank(self.degree) for r in self.reports],
                "transitions": [m for m in self.transitions],
                "injective": self.injective,
                "a_vanishing": {str(k): v for k, v in sorted(self.a_vanishing.items())},
                "verdict": self.verdict, "stabilized": self.stabilized, "note": self.note}


def _transition_data(cat, seq, k_obj, n, degree):
    tws = list(seq.objects[:n + 1]) + [k_obj]
    tw = TwCategory(cat, tws)
    names = [tw.name_of(t) for t in seq.objects[:n + 1]]
    kn = tw.name_of(k_obj)
    data = [_HomData(tw, a, kn, degree) for a in names]
    fvecs = [tw.vec_of(f) for f in seq.maps[:n]]
    return tw, data, fvecs


def localized_hom_colimit(spec: QuotientSpec, seq: WrappingSequence, k_obj, n=None, degree=0,
                          validate=True, bound=3):
    cat = spec.cat
    n = len(seq.objects) - 1 if n is None else min(n, len(seq.objects) - 1)
    a_list = [_as_tw(cat, a) for a in spec.A]
    k_obj = _as_tw(cat, k_obj)
    if validate:
        validate_sequence(cat, WrappingSequence(seq.objects[:n + 1], seq.maps[:n], seq.cones[:n], seq.period),
                          a_list, bound)
    tw, data, fvecs = _transition_data(cat, seq, k_obj, n, degree)
    reports = [d.report for d in data]
    transitions, injective = [], []
    for i in range(n):
        cols = []
        for v in data[i].vecs()[:len(data[i].free)]:
            img = tw.mu_vectors([fvecs[i], v])
            c = data[i + 1].coords(img)
            if c is None:
                raise LocalizationError("internal: image of a cocycle is not a cocycle")
            cols.append(c)
        mat = [[cols[j][r] for j in range(len(cols))] for r in range(len(data[i + 1].free))]
        transitions.append(mat)
        r = rank(IntMatrix.from_dense(mat, len(cols))) if mat and cols else 0
        injective.append(r == len(cols))
    # vanishing of period composites into every object of A
    a_vanish = {}
    per = max(1, seq.period)
    for ai, a in enumerate(a_list):
        atw, adata, afv = _transition_data(cat, seq, a, n, degree)
        flags = []
        for i in range(0, n - per + 1):
            ok = True
            for v in adata[i].vecs():
                img = v
                for step in range(i, i + per):
                    img = atw.mu_vectors([afv[step], img])
                if not adata[i + per].is_boundary(img):
                    ok = False
                    break
            flags.append(ok)
        a_vanish[ai] = flags
    verified = all(flags and all(flags) for flags in a_vanish.values()) if a_list else True
    # ranks stop growing: last two reports agree and the last transition is injective
    stabilized = n >= 1 and reports[n - 1].as_json() == reports[n].as_json() and injective[-1]
    return ColimitReport(reports, transitions, injective, a_vanish,
                         "LEFT-LOCAL-VERIFIED" if verified else "INCONCLUSIVE", bool(stabilized), PREFIX_NOTE, degree)


def composition_rank(cat, s, t, u, degree=0):
    """Rank of the span of products H^0(s, t) x H^degree(t, u) inside H^degree(s, u), free parts."""
    tw = TwCategory(cat, [s, t, u])
    a, b, c = tw.name_of(s), tw.name_of(t), tw.name_of(u)
    st, tu, su = _HomData(tw, a, b, 0), _HomData(tw, b, c, degree), _HomData(tw, a, c, degree)
    cols = []
    for v in st.vecs()[:len(st.free)]:
        for w in tu.vecs()[:len(tu.free)]:
            c0 = su.coords(tw.mu_vectors([v, w]))
            if c0 is not None:
                cols.append(c0)
    if not cols or not su.free:
        return 0
    mat = [[col[r] for col in cols] for r in range(len(su.free))]
    return rank(IntMatrix.from_dense(mat, len(cols)))


# ---------------------------------------------------------------------------
# functoriality of quotients


@dataclass
class QuotientFFReport:
    passed: bool
    reason: str
    pairs: list

    def __bool__(self):
        return self.passed

    def as_json(self):
        return {"passed": self.passed, "reason": self.reason, "pairs": self.pairs}


def quotient_full_faithfulness_check(func, a_objects, p_max=4, field=None):
    """Compare truncation-stable quotient homs of C/A and D/F(A) for every pair of source objects."""
    if not func.is_strict():
        raise LocalizationError("quotient comparison implemented for strict functors")
    if not is_fully_faithful(func, field):
        return QuotientFFReport(False, "functor is not fully faithful", [])
    src, tgt = func.source, func.target
    fa = [func.obj_map[a] for a in a_objects]
    pairs, ok = [], True
    for x in src.objects:
        for z in src.objects:
            left = quotient_hom(QuotientSpec(src, list(a_objects), p_max), x, z, field)
            right = quotient_hom(QuotientSpec(tgt, fa, p_max), func.obj_map[x], func.obj_map[z], field)
            degs = sorted(left.stable_degrees & right.stable_degrees)
            lj, rj = left.cohomology, right.cohomology
            match = all(lj.rank(k) == rj.rank(k) and lj.torsion(k) == rj.torsion(k) for k in degs)
            pairs.append({"source": x, "target": z, "left": left.as_json(), "right": right.as_json(),
                          "compared_degrees": degs, "match": match})
            ok = ok and match
    return QuotientFFReport(ok, "ranks agree in all stable degrees" if ok else "quotient homs differ", pairs)
