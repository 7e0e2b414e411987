"""Exact linear algebra over the integers and prime fields.

Matrices are stored as sparse triplets and densified for Smith normal form.
Python integers are arbitrary precision, so no overflow handling is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class ComplexError(ValueError):
    """Raised when a cochain complex violates d o d = 0 or is malformed."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple = ()  # sorted ((i, j, v), ...) with v != 0

    def __post_init__(self):
        seen = set()
        for i, j, v in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def from_dict(cls, rows, cols, d):
        ents = tuple(sorted((i, j, v) for (i, j), v in d.items() if v))
        return cls(rows, cols, ents)

    @classmethod
    def from_dense(cls, dense, cols=None):
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        ents = tuple((i, j, v) for i, row in enumerate(dense) for j, v in enumerate(row) if v)
        return cls(rows, cols, ents)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, ())

    def to_dense(self):
        m = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self.entries:
            m[i][j] = v
        return m

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for i, j, v in other.entries:
            by_row.setdefault(i, []).append((j, v))
        out = {}
        for i, k, a in self.entries:
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return IntMatrix.from_dict(self.rows, other.cols, out)

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return IntMatrix.from_dict(self.cols, self.rows, {(j, i): v for i, j, v in self.entries})

    def apply(self, vec):
        """Multiply by a column vector given as a list."""
        out = [0] * self.rows
        for i, j, v in self.entries:
            out[i] += v * vec[j]
        return out


def _mod(v, p):
    return v % p if p else v


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: IntMatrix):
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D in Smith form.

    The diagonal entries of D are non-negative and each divides the next.
    """
    rows, cols = m.rows, m.cols
    a = m.to_dense()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row dst += c * row src
        if c:
            ra, rs = a[dst], a[src]
            for k in range(cols):
                if rs[k]:
                    ra[k] += c * rs[k]
            ua, us = u[dst], u[src]
            for k in range(rows):
                if us[k]:
                    ua[k] += c * us[k]

    def add_col(dst, src, c):
        if c:
            for row in a:
                if row[src]:
                    row[dst] += c * row[src]
            for row in v:
                if row[src]:
                    row[dst] += c * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move a smaller remainder into the pivot slot
            best = None
            for i in range(t, rows):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), i, t)
            for j in range(t, cols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix.from_dense(u, rows), IntMatrix.from_dense(a, cols), IntMatrix.from_dense(v, cols)


def invariant_factors(m: IntMatrix):
    _, d, _ = smith_normal_form(m)
    return [v for i, j, v in d.entries if i == j]


def _sparse_rows(m: IntMatrix):
    rows = {}
    for i, j, v in m.entries:
        rows.setdefault(i, {})[j] = v
    return rows


def elementary_divisors(m: IntMatrix, p: int | None = None):
    """Nonzero invariant factors of ``m`` (over F_p when ``p`` is given, all ones).

    Unit pivots are eliminated sparsely first; only the leftover block goes
    through dense Smith normal form.
    """
    rows = _sparse_rows(m)
    if p:
        rows = {i: {j: v % p for j, v in r.items() if v % p} for i, r in rows.items()}
        rows = {i: r for i, r in rows.items() if r}
        return [1] * _rank_mod_p(rows, p)
    ones = 0
    by_col = {}
    for i, r in rows.items():
        for j in r:
            by_col.setdefault(j, set()).add(i)
    changed = True
    while changed:
        changed = False
        for i in sorted(rows):
            r = rows.get(i)
            if not r:
                rows.pop(i, None)
                continue
            piv = next((j for j in sorted(r) if abs(r[j]) == 1), None)
            if piv is None:
                continue
            pv = r[piv]
            for k in sorted(by_col.get(piv, ())):
                if k == i:
                    continue
                rk = rows[k]
                c = rk[piv] * pv  # pv = +-1 so pv^-1 = pv
                for j, x in r.items():
                    nv = rk.get(j, 0) - c * x
                    if nv:
                        if j not in rk:
                            by_col.setdefault(j, set()).add(k)
                        rk[j] = nv
                    else:
                        rk.pop(j, None)
                        by_col[j].discard(k)
                if not rk:
                    del rows[k]
            for j in r:
                by_col[j].discard(i)
            del rows[i]
            ones += 1
            changed = True
    if not rows:
        return [1] * ones
    rem_rows = sorted(rows)
    rem_cols = sorted({j for r in rows.values() for j in r})
    ri = {x: n for n, x in enumerate(rem_rows)}
    ci = {x: n for n, x in enumerate(rem_cols)}
    sub = IntMatrix.from_dict(len(rem_rows), len(rem_cols),
                              {(ri[i], ci[j]): v for i, r in rows.items() for j, v in r.items()})
    return [1] * ones + [d for d in invariant_factors(sub) if d]


def _rank_mod_p(rows, p):
    rows = {i: dict(r) for i, r in rows.items()}
    rank = 0
    while rows:
        i = min(rows)
        r = rows.pop(i)
        r = {j: v % p for j, v in r.items() if v % p}
        if not r:
            continue
        piv = min(r)
        inv = pow(r[piv], -1, p)
        rank += 1
        for k in list(rows):
            rk = rows[k]
            if rk.get(piv, 0) % p:
                c = rk[piv] * inv % p
                for j, x in r.items():
                    nv = (rk.get(j, 0) - c * x) % p
                    if nv:
                        rk[j] = nv
                    else:
                        rk.pop(j, None)
                if not rk:
                    del rows[k]
    return rank


def rank(m: IntMatrix, p: int | None = None) -> int:
    return len(elementary_divisors(m, p))


# ---------------------------------------------------------------------------
# Cochain complexes


@dataclass(frozen=True)
class FiniteComplex:
    """Cochain complex of free modules; ``differentials[k]`` maps degree k to k+1."""

    dims: dict  # degree -> rank
    differentials: dict = field(default_factory=dict)  # degree -> IntMatrix (dims[k+1] x dims[k])

    def __post_init__(self):
        for k, d in self.differentials.items():
            if d.cols != self.dims.get(k, 0) or d.rows != self.dims.get(k + 1, 0):
                raise ComplexError(f"differential in degree {k} has wrong shape")

    def d(self, k):
        dk = self.differentials.get(k)
        if dk is None:
            return IntMatrix.zero(self.dims.get(k + 1, 0), self.dims.get(k, 0))
        return dk

    def check(self):
        for k in self.differentials:
            if not (self.d(k + 1) @ self.d(k)).is_zero():
                raise ComplexError(f"d o d != 0 starting in degree {k}")

    def degrees(self):
        return sorted(k for k, n in self.dims.items() if n)


@dataclass(frozen=True)
class DegreeGroup:
    rank: int
    torsion: tuple = ()

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def as_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class CohomologyReport:
    """Per-degree free rank and torsion; degrees with zero cohomology are omitted."""

    groups: tuple = ()  # ((degree, DegreeGroup), ...) sorted
    field: int | None = None

    @classmethod
    def from_dict(cls, d, field=None):
        return cls(tuple(sorted((k, g) for k, g in d.items() if not g.is_zero())), field)

    def as_dict(self):
        return dict(self.groups)

    def rank(self, degree):
        return self.as_dict().get(degree, DegreeGroup(0)).rank

    def torsion(self, degree):
        return self.as_dict().get(degree, DegreeGroup(0)).torsion

    def is_zero(self):
        return not self.groups

    def ranks(self):
        return {k: g.rank for k, g in self.groups}

    def shifted(self, n):
        """Report of the complex shifted by [n] (degree k moves to k - n)."""
        return CohomologyReport(tuple((k - n, g) for k, g in self.groups), self.field)

    def as_json(self):
        return {str(k): g.as_json() for k, g in self.groups}

    def __str__(self):
        if not self.groups:
            return "0"
        parts = []
        for k, g in self.groups:
            s = "Z" if not self.field else f"F{self.field}"
            term = f"{s}^{g.rank}" if g.rank != 1 else s
            tors = [f"Z/{t}" for t in g.torsion]
            body = " + ".join(([term] if g.rank else []) + tors)
            parts.append(f"H^{k} = {body}")
        return ", ".join(parts)


def complex_cohomology(c: FiniteComplex, field: int | None = None, check=True) -> CohomologyReport:
    if check:
        c.check()
    degs = set(c.dims) | {k + 1 for k in c.differentials}
    divisors = {k: elementary_divisors(c.d(k), field) for k in sorted(degs | {k - 1 for k in degs})}
    out = {}
    for k in sorted(degs):
        n = c.dims.get(k, 0)
        if not n:
            continue
        r_out = len(divisors.get(k, ()))
        r_in = divisors.get(k - 1, ())
        free = n - r_out - len(r_in)
        tors = tuple(sorted(d for d in r_in if d > 1))
        out[k] = DegreeGroup(free, tors)
    return CohomologyReport.from_dict(out, field)


# ---------------------------------------------------------------------------
# Integer kernels, images and solving


def kernel_basis(m: IntMatrix):
    """Z-basis of the kernel of ``m`` as a list of column vectors."""
    _, d, v = smith_normal_form(m)
    r = sum(1 for i, j, x in d.entries if i == j and x)
    vd = v.to_dense()
    return [[vd[i][j] for i in range(m.cols)] for j in range(r, m.cols)]


def solve_integer(m: IntMatrix, b):
    """Return an integer vector x with m x = b, or None if none exists."""
    u, d, v = smith_normal_form(m)
    ub = u.apply(list(b))
    diag = {i: x for i, j, x in d.entries if i == j}
    y = [0] * m.cols
    for i, val in enumerate(ub):
        di = diag.get(i, 0)
        if di == 0:
            if val:
                return None
        else:
            if val % di:
                return None
            y[i] = val // di
    return v.apply(y)


def cohomology_representatives(c: FiniteComplex, degree: int):
    """Cocycles spanning the free part of H^degree, and torsion generators.

    Returns (free, torsion) where each entry is a cocycle vector; torsion
    entries are pairs (order, vector).
    """
    n = c.dims.get(degree, 0)
    if n == 0:
        return [], []
    kb = kernel_basis(c.d(degree))
    if not kb:
        return [], []
    kmat = IntMatrix.from_dict(n, len(kb), {(i, j): vec[i] for j, vec in enumerate(kb) for i in range(n) if vec[i]})
    dprev = c.d(degree - 1)
    # image generators expressed in kernel coordinates
    coords = []
    for col in range(dprev.cols):
        vec = [0] * dprev.cols
        vec[col] = 1
        img = dprev.apply(vec)
        if any(img):
            x = solve_integer(kmat, img)
            if x is None:
                raise ComplexError("image not contained in kernel")
            coords.append(x)
    k = len(kb)
    bmat = IntMatrix.from_dict(k, len(coords), {(i, j): x[i] for j, x in enumerate(coords) for i in range(k) if x[i]})
    u, d, _ = smith_normal_form(bmat)
    diag = {i: x for i, j, x in d.entries if i == j}
    uinv = _unimodular_inverse(u)
    basis = kmat @ uinv  # columns: adapted cocycle basis
    bd = basis.to_dense()
    free, tors = [], []
    for j in range(k):
        vec = [bd[i][j] for i in range(n)]
        dj = diag.get(j, 0)
        if dj == 0:
            free.append(vec)
        elif dj > 1:
            tors.append((dj, vec))
    return free, tors


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    n = u.rows
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve_integer(u, e)
        cols.append(x)
    return IntMatrix.from_dict(n, n, {(i, j): cols[j][i] for j in range(n) for i in range(n) if cols[j][i]})


def mapping_cone(c: FiniteComplex, d: FiniteComplex, maps: dict) -> FiniteComplex:
    """Cone of a chain map f: C -> D, with cone^k = C^{k+1} + D^k.

    ``maps[k]`` is the matrix of f in degree k (dims D^k x C^k).
    Differential: (c, x) -> (-d_C c, f(c) + d_D x).
    """
    degs = set(c.dims) | set(d.dims)
    cdeg = {k - 1 for k in c.dims} | set(d.dims)
    dims = {k: c.dims.get(k + 1, 0) + d.dims.get(k, 0) for k in cdeg}
    diffs = {}
    for k in sorted(cdeg):
        nc, nd = c.dims.get(k + 1, 0), d.dims.get(k, 0)
        mc, md = c.dims.get(k + 2, 0), d.dims.get(k + 1, 0)
        if not (nc + nd) or not (mc + md):
            continue
        ent = {}
        for i, j, v in c.d(k + 1).entries:
            ent[i, j] = -v
        f = maps.get(k + 1)
        if f is not None:
            for i, j, v in f.entries:
                ent[mc + i, j] = v
        for i, j, v in d.d(k).entries:
            ent[mc + i, nc + j] = v
        diffs[k] = IntMatrix.from_dict(mc + md, nc + nd, ent)
    del degs
    return FiniteComplex({k: n for k, n in dims.items() if n}, diffs)


def is_acyclic(c: FiniteComplex, field: int | None = None) -> bool:
    return complex_cohomology(c, field, check=False).is_zero()


def direct_sum_complex(parts: Iterable[FiniteComplex]) -> FiniteComplex:
    parts = list(parts)
    dims, offs = {}, []
    for p in parts:
        off = {}
        for k, n in p.dims.items():
            off[k] = dims.get(k, 0)
            dims[k] = dims.get(k, 0) + n
        offs.append(off)
    diffs = {}
    for p, off in zip(parts, offs):
        for k, m in p.differentials.items():
            ent = diffs.setdefault(k, {})
            for i, j, v in m.entries:
                ent[off.get(k + 1, 0) + i, off.get(k, 0) + j] = v
    return FiniteComplex(dims, {k: IntMatrix.from_dict(dims.get(k + 1, 0), dims.get(k, 0), e)
                                for k, e in diffs.items()})
