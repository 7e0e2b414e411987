"""Line-based text formats: ``.acat`` categories, ``.diag`` diagrams, ``.ribbon`` graphs.

Every document starts with a header line ``<kind> <version>``.  Blank lines
and ``#`` comments are ignored.  Records are whitespace-separated tokens:

.acat::

    acat 1
    ring Z                      # or GF(p)
    name kronecker
    object O
    basis x O O1 0              # name source target degree
    mu x w = 1 p -2 q           # inputs in path order = coefficient/basis pairs
    unit O eO
    order O O1
    max-arity 3                 # optional

.diag::

    diag 1
    name a3-disk
    element v1 builtin:A2       # or a path relative to this file
    relation e1 v1
    fobj e1 v1 1 2              # functor e1 -> v1 sends object 1 to 2
    fmap e1 v1 e1 = 1 e2        # optional when the image is unambiguous
    apex *

.ribbon::

    ribbon 1
    name disk4
    vertex v1 l1a l1b h1-       # half-edges in cyclic order
    edge e1 h1- h1+
    leg l1a
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .category import AInfFunctor, Basis, CategoryError, ExplicitCategory, explicit_from
from .surface import RibbonGraph

FORMAT_VERSION = 1
_TOKEN = re.compile(r"\S+")


class ParseError(CategoryError):
    def __init__(self, msg, path="<string>", line=0, col=0):
        self.path, self.line, self.col, self.msg = path, line, col, msg
        super().__init__(f"{path}:{line}:{col}: {msg}")


@dataclass
class _Line:
    no: int
    tokens: list  # (text, column)

    def words(self):
        return [t for t, _ in self.tokens]


def _lines(text, path):
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            out.append(_Line(no, toks))
    return out


def _header(lines, kind, path):
    if not lines:
        raise ParseError(f"empty document; expected header '{kind} {FORMAT_VERSION}'", path, 1, 1)
    first = lines[0]
    w = first.words()
    if w[0] != kind:
        raise ParseError(f"expected header '{kind}', found {w[0]!r}", path, first.no, 1)
    if len(w) != 2 or w[1] != str(FORMAT_VERSION):
        col = first.tokens[1][1] if len(w) > 1 else len(w[0]) + 1
        raise ParseError(f"unsupported or missing format version (expected {FORMAT_VERSION})", path, first.no, col)
    return lines[1:]


def _int(tok, path, line):
    text, col = tok
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, found {text!r}", path, line, col) from None


def _arity(ln, n, path, kw):
    if len(ln.tokens) != n:
        last = ln.tokens[-1]
        col = ln.tokens[n][1] if len(ln.tokens) > n else last[1] + len(last[0])
        raise ParseError(f"'{kw}' takes {n - 1} fields, got {len(ln.tokens) - 1}", path, ln.no, col)


def _combination(ln, start, path):
    """Parse 'c1 b1 c2 b2 ...' from token index ``start``."""
    toks = ln.tokens[start:]
    if len(toks) % 2:
        end = toks[-1][1] + len(toks[-1][0])
        raise ParseError("output combination must be coefficient/basis pairs", path, ln.no, end)
    return [(_int(toks[i], path, ln.no), toks[i + 1]) for i in range(0, len(toks), 2)]


def parse_ring(text):
    """'Z' -> None, 'GF(p)' or a prime p -> p."""
    t = text.strip()
    if t in ("Z", "ZZ", "0", ""):
        return None
    m = re.fullmatch(r"(?:GF\()?(\d+)\)?", t)
    if not m:
        raise ValueError(f"unknown coefficient ring {text!r}")
    p = int(m.group(1))
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"field characteristic {p} is not prime")
    return p


def ring_name(field):
    return "Z" if field is None else f"GF({field})"


# ---------------------------------------------------------------------------
# .acat


@dataclass
class CategoryDocument:
    category: ExplicitCategory
    ring: int | None = None
    ring_given: bool = False


def parse_acat(text, path="<string>") -> CategoryDocument:
    lines = _header(_lines(text, path), "acat", path)
    ring, ring_given, name, max_arity = None, False, "", 2
    objects, obj_pos, basis, bpos = [], {}, [], {}
    structure, units, order = {}, {}, set()
    seen_order = False
    for ln in lines:
        kw = ln.tokens[0][0]
        w = ln.words()
        if kw == "ring":
            _arity(ln, 2, path, kw)
            try:
                ring, ring_given = parse_ring(w[1]), True
            except ValueError as e:
                raise ParseError(str(e), path, ln.no, ln.tokens[1][1]) from None
        elif kw == "name":
            _arity(ln, 2, path, kw)
            name = w[1]
        elif kw == "object":
            _arity(ln, 2, path, kw)
            if w[1] in obj_pos:
                raise ParseError(f"object {w[1]} declared twice", path, ln.no, ln.tokens[1][1])
            obj_pos[w[1]] = len(objects)
            objects.append(w[1])
        elif kw == "basis":
            _arity(ln, 5, path, kw)
            if w[1] in bpos:
                raise ParseError(f"basis element {w[1]} declared twice", path, ln.no, ln.tokens[1][1])
            for k in (2, 3):
                if w[k] not in obj_pos:
                    raise ParseError(f"unknown object {w[k]}", path, ln.no, ln.tokens[k][1])
            bpos[w[1]] = len(basis)
            basis.append(Basis(w[1], w[2], w[3], _int(ln.tokens[4], path, ln.no)))
        elif kw == "mu":
            if "=" not in w:
                raise ParseError("structure record needs '='", path, ln.no, ln.tokens[-1][1])
            eq = w.index("=")
            if eq == 1:
                raise ParseError("structure record needs at least one input", path, ln.no, ln.tokens[1][1])
            key = []
            for tok in ln.tokens[1:eq]:
                if tok[0] not in bpos:
                    raise ParseError(f"unknown basis element {tok[0]}", path, ln.no, tok[1])
                key.append(bpos[tok[0]])
            key = tuple(key)
            if key in structure:
                raise ParseError("structure constants for these inputs given twice", path, ln.no, 1)
            val = {}
            for c, tok in _combination(ln, eq + 1, path):
                if tok[0] not in bpos:
                    raise ParseError(f"unknown basis element {tok[0]}", path, ln.no, tok[1])
                val[bpos[tok[0]]] = val.get(bpos[tok[0]], 0) + c
            structure[key] = val
        elif kw == "unit":
            _arity(ln, 3, path, kw)
            if w[1] not in obj_pos:
                raise ParseError(f"unknown object {w[1]}", path, ln.no, ln.tokens[1][1])
            if w[2] not in bpos:
                raise ParseError(f"unknown basis element {w[2]}", path, ln.no, ln.tokens[2][1])
            units[w[1]] = bpos[w[2]]
        elif kw == "order":
            seen_order = True
            if len(w) == 1:
                continue
            _arity(ln, 3, path, kw)
            for k in (1, 2):
                if w[k] not in obj_pos:
                    raise ParseError(f"unknown object {w[k]}", path, ln.no, ln.tokens[k][1])
            order.add((w[1], w[2]))
        elif kw == "max-arity":
            _arity(ln, 2, path, kw)
            max_arity = _int(ln.tokens[1], path, ln.no)
        else:
            raise ParseError(f"unknown record {kw!r}", path, ln.no, ln.tokens[0][1])
    try:
        cat = ExplicitCategory(objects, basis, structure, units, max_arity,
                               order if seen_order else None, name)
    except CategoryError as e:
        raise ParseError(str(e), path, 0, 0) from None
    return CategoryDocument(cat, ring, ring_given)


def serialize_acat(cat, ring=None, ring_given=True) -> str:
    """Canonical text of a category (explicit structure constants up to its max arity)."""
    if not isinstance(cat, ExplicitCategory):
        cat = explicit_from(cat)
    out = [f"acat {FORMAT_VERSION}"] + ([f"ring {ring_name(ring)}"] if ring_given else [])
    if cat.name:
        out.append(f"name {cat.name}")
    out += [f"object {x}" for x in cat.objects]
    out += [f"basis {b.name} {b.source} {b.target} {b.degree}" for b in cat.basis]
    names = [b.name for b in cat.basis]
    for key, val in sorted(cat.structure.items()):
        rhs = " ".join(f"{c} {names[o]}" for o, c in sorted(val.items()))
        out.append(f"mu {' '.join(names[i] for i in key)} = {rhs}")
    out += [f"unit {x} {names[cat.units[x]]}" for x in cat.objects if x in cat.units]
    if cat.order is not None:
        out += [f"order {a} {b}" for a, b in sorted(cat.order)] or ["order"]
    if cat.max_arity != 2:
        out.append(f"max-arity {cat.max_arity}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# .diag


@dataclass
class DiagramDocument:
    name: str
    elements: list  # (element, reference)
    relations: list
    fobj: dict  # (a, b) -> {x: y}
    fmap: dict  # (a, b) -> {basis name: [(coeff, basis name)]}
    apex: str | None = None
    ring: int | None = None
    ring_given: bool = False
    base_dir: str = "."
    cats: dict = field(default_factory=dict)

    def diagram(self):
        from .hocolim import DiagramOverPoset, FinitePoset
        P = FinitePoset([e for e, _ in self.elements], self.relations)
        funcs = {}
        for (a, b), om in sorted(self.fobj.items()):
            funcs[a, b] = _functor_from_tables(self.cats[a], self.cats[b], om, self.fmap.get((a, b), {}), f"{a}->{b}")
        return DiagramOverPoset(P, self.cats, funcs, self.name)


def _functor_from_tables(src, tgt, om, fmap, name):
    bm = {}
    for i, b in enumerate(src.basis):
        if b.name in fmap:
            bm[i] = {tgt.index(n): c for c, n in fmap[b.name]}
            continue
        x, y = om[b.source], om[b.target]
        if src.unit(b.source) == i:
            bm[i] = {tgt.unit(x): 1}
            continue
        cands = [j for j in tgt.hom(x, y) if tgt.basis[j].degree == b.degree and j != tgt.unit(x)]
        if len(cands) != 1:
            raise CategoryError(f"functor {name}: image of {b.name} is ambiguous; give an fmap record")
        bm[i] = {cands[0]: 1}
    return AInfFunctor.strict(src, tgt, om, bm, name)


def _load_ref(ref, base_dir, path, ln, col):
    from .catalog import builtin_categories
    if ref.startswith("builtin:"):
        key = ref[len("builtin:"):]
        cats = builtin_categories()
        if key not in cats:
            raise ParseError(f"unknown built-in category {key}", path, ln, col)
        return cats[key]
    full = os.path.join(base_dir, ref)
    if not os.path.exists(full):
        raise ParseError(f"referenced file {ref} not found", path, ln, col)
    with open(full, encoding="utf-8") as fh:
        return parse_acat(fh.read(), full).category


def parse_diag(text, path="<string>", base_dir=None) -> DiagramDocument:
    base_dir = base_dir if base_dir is not None else (os.path.dirname(path) or ".")
    lines = _header(_lines(text, path), "diag", path)
    doc = DiagramDocument("", [], [], {}, {}, base_dir=base_dir)
    known = {}
    for ln in lines:
        kw, w = ln.tokens[0][0], ln.words()
        if kw == "name":
            _arity(ln, 2, path, kw)
            doc.name = w[1]
        elif kw == "ring":
            _arity(ln, 2, path, kw)
            try:
                doc.ring, doc.ring_given = parse_ring(w[1]), True
            except ValueError as e:
                raise ParseError(str(e), path, ln.no, ln.tokens[1][1]) from None
        elif kw == "element":
            _arity(ln, 3, path, kw)
            if w[1] in known:
                raise ParseError(f"element {w[1]} declared twice", path, ln.no, ln.tokens[1][1])
            known[w[1]] = w[2]
            doc.elements.append((w[1], w[2]))
            doc.cats[w[1]] = _load_ref(w[2], base_dir, path, ln.no, ln.tokens[2][1])
        elif kw in ("relation", "fobj", "fmap"):
            if len(w) < 3:
                raise ParseError(f"'{kw}' needs two elements", path, ln.no, ln.tokens[-1][1])
            for k in (1, 2):
                if w[k] not in known:
                    raise ParseError(f"unknown element {w[k]}", path, ln.no, ln.tokens[k][1])
            pair = (w[1], w[2])
            if kw == "relation":
                _arity(ln, 3, path, kw)
                doc.relations.append(pair)
            elif kw == "fobj":
                _arity(ln, 5, path, kw)
                src, tgt = doc.cats[w[1]], doc.cats[w[2]]
                if w[3] not in src.objects:
                    raise ParseError(f"unknown object {w[3]} of {w[1]}", path, ln.no, ln.tokens[3][1])
                if w[4] not in tgt.objects:
                    raise ParseError(f"unknown object {w[4]} of {w[2]}", path, ln.no, ln.tokens[4][1])
                doc.fobj.setdefault(pair, {})[w[3]] = w[4]
            else:
                if len(w) < 6 or w[4] != "=":
                    raise ParseError("fmap needs 'fmap A B basis = coeff basis ...'", path, ln.no, ln.tokens[0][1])
                src, tgt = doc.cats[w[1]], doc.cats[w[2]]
                if w[3] not in src._by_name:
                    raise ParseError(f"unknown basis element {w[3]} of {w[1]}", path, ln.no, ln.tokens[3][1])
                comb = _combination(ln, 5, path)
                for _, tok in comb:
                    if tok[0] not in tgt._by_name:
                        raise ParseError(f"unknown basis element {tok[0]} of {w[2]}", path, ln.no, tok[1])
                doc.fmap.setdefault(pair, {})[w[3]] = [(c, t[0]) for c, t in comb]
        elif kw == "apex":
            _arity(ln, 2, path, kw)
            if w[1] not in known:
                raise ParseError(f"unknown element {w[1]}", path, ln.no, ln.tokens[1][1])
            doc.apex = w[1]
        else:
            raise ParseError(f"unknown record {kw!r}", path, ln.no, ln.tokens[0][1])
    for pair, om in doc.fobj.items():
        if pair not in doc.relations:
            raise ParseError(f"functor table for {pair[0]} -> {pair[1]} without a relation", path, 0, 0)
        missing = [x for x in doc.cats[pair[0]].objects if x not in om]
        if missing:
            raise ParseError(f"functor {pair[0]} -> {pair[1]} does not map object {missing[0]}", path, 0, 0)
    return doc


def serialize_diag(doc: DiagramDocument) -> str:
    out = [f"diag {FORMAT_VERSION}"] + ([f"ring {ring_name(doc.ring)}"] if doc.ring_given else [])
    if doc.name:
        out.append(f"name {doc.name}")
    out += [f"element {e} {ref}" for e, ref in doc.elements]
    out += [f"relation {a} {b}" for a, b in sorted(doc.relations)]
    for (a, b), om in sorted(doc.fobj.items()):
        src = doc.cats[a]
        out += [f"fobj {a} {b} {x} {om[x]}" for x in src.objects]
        fm = doc.fmap.get((a, b), {})
        for bb in src.basis:
            if bb.name in fm:
                rhs = " ".join(f"{c} {n}" for c, n in sorted(fm[bb.name], key=lambda t: t[1]))
                out.append(f"fmap {a} {b} {bb.name} = {rhs}")
    if doc.apex:
        out.append(f"apex {doc.apex}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# .ribbon


def parse_ribbon(text, path="<string>") -> RibbonGraph:
    from .surface import RibbonError
    lines = _header(_lines(text, path), "ribbon", path)
    name, verts, edges, legs = "", {}, {}, []
    for ln in lines:
        kw, w = ln.tokens[0][0], ln.words()
        if kw == "name":
            _arity(ln, 2, path, kw)
            name = w[1]
        elif kw == "vertex":
            if len(w) < 3:
                raise ParseError("vertex needs at least one half-edge", path, ln.no, ln.tokens[-1][1])
            if w[1] in verts:
                raise ParseError(f"vertex {w[1]} declared twice", path, ln.no, ln.tokens[1][1])
            verts[w[1]] = w[2:]
        elif kw == "edge":
            _arity(ln, 4, path, kw)
            if w[1] in edges:
                raise ParseError(f"edge {w[1]} declared twice", path, ln.no, ln.tokens[1][1])
            edges[w[1]] = (w[2], w[3])
        elif kw == "leg":
            _arity(ln, 2, path, kw)
            legs.append(w[1])
        else:
            raise ParseError(f"unknown record {kw!r}", path, ln.no, ln.tokens[0][1])
    try:
        return RibbonGraph(verts, edges, legs, name)
    except RibbonError as e:
        raise ParseError(str(e), path, 0, 0) from None


def serialize_ribbon(g: RibbonGraph) -> str:
    out = [f"ribbon {FORMAT_VERSION}"]
    if g.name:
        out.append(f"name {g.name}")
    out += [f"vertex {v} {' '.join(hs)}" for v, hs in g.vertices.items()]
    out += [f"edge {e} {a} {b}" for e, (a, b) in g.edges.items()]
    out += [f"leg {h}" for h in sorted(g.legs)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# dispatch


def read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def kind_of(path):
    ext = os.path.splitext(path)[1]
    if ext not in (".acat", ".diag", ".ribbon"):
        raise ParseError(f"unknown document type {ext or '(none)'}", path, 0, 0)
    return ext[1:]


def parse(path):
    text = read_text(path)
    k = kind_of(path)
    if k == "acat":
        return parse_acat(text, path)
    if k == "diag":
        return parse_diag(text, path)
    return parse_ribbon(text, path)


def canonicalize(path) -> str:
    val = parse(path)
    if isinstance(val, CategoryDocument):
        return serialize_acat(val.category, val.ring, val.ring_given)
    if isinstance(val, DiagramDocument):
        return serialize_diag(val)
    return serialize_ribbon(val)
