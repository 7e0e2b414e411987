"""Ribbon graphs, A_{n-1} sector categories and certified descent for disk covers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .catalog import a_n
from .category import AInfFunctor, CategoryError, hom_cohomology
from .hocolim import (DiagramOverPoset, EquivalenceCertificate, FinitePoset, GenerationWitness, Hypothesis,
                      _image_objects, _tw_acyclic, certify_equivalence, check_cofinality, decompose_pushout, digest,
                      hocolim_presentation, maximal_element_certificate)
from .linalg import cohomology_representatives
from .twisted import TwCategory, are_quasi_isomorphic, cone, shift, trivial


class RibbonError(CategoryError):
    pass


# ---------------------------------------------------------------------------
# ribbon graphs


@dataclass
class RibbonGraph:
    """Vertices with cyclically ordered half-edges.

    ``edges`` pairs half-edges of internal edges; ``legs`` are half-edges running
    out to the boundary (the non-compact ends of the surface).
    """
    vertices: dict  # vertex -> [half-edge, ...] in cyclic order
    edges: dict  # edge name -> (half-edge, half-edge)
    legs: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.vertices = {v: list(hs) for v, hs in self.vertices.items()}
        self.edges = {e: tuple(p) for e, p in self.edges.items()}
        self.legs = list(self.legs)
        self.validate()

    def validate(self):
        owner = {}
        for v, hs in self.vertices.items():
            if not hs:
                raise RibbonError(f"vertex {v} has degree 0")
            for h in hs:
                if h in owner:
                    raise RibbonError(f"half-edge {h} appears twice")
                owner[h] = v
        if set(self.vertices) & set(self.edges):
            raise RibbonError("vertex and edge names must be distinct")
        used = set()
        for e, pair in self.edges.items():
            if len(pair) != 2:
                raise RibbonError(f"edge {e} must pair exactly two half-edges")
            for h in pair:
                if h not in owner:
                    raise RibbonError(f"edge {e} uses unknown half-edge {h}")
                if h in used:
                    raise RibbonError(f"half-edge {h} is paired twice")
                used.add(h)
            if owner[pair[0]] == owner[pair[1]]:
                raise RibbonError(f"edge {e} is a loop at {owner[pair[0]]}; loops are not supported")
        for h in self.legs:
            if h not in owner:
                raise RibbonError(f"unknown leg {h}")
            if h in used:
                raise RibbonError(f"half-edge {h} is both a leg and part of an edge")
            used.add(h)
        dangling = sorted(set(owner) - used)
        if dangling:
            raise RibbonError(f"dangling half-edge {dangling[0]} (neither paired nor a leg)")
        for v, hs in self.vertices.items():
            if not any(h in self.legs for h in hs):
                raise RibbonError(f"vertex {v} has no leg: its arcs do not all correspond to sector generators")
        self.owner = owner

    def degree(self, v):
        return len(self.vertices[v])

    def rotated(self, v):
        """Half-edges at v rotated so the first one is the first leg."""
        hs = self.vertices[v]
        k = next(i for i, h in enumerate(hs) if h in self.legs)
        return hs[k:] + hs[:k]

    def arc_object(self, h):
        """Sector object of the arc at half-edge h: position in the rotated order."""
        v = self.owner[h]
        return str(self.rotated(v).index(h))

    def endpoints(self, e):
        a, b = self.edges[e]
        return self.owner[a], self.owner[b]

    def as_json(self):
        return {"name": self.name, "vertices": {v: hs for v, hs in sorted(self.vertices.items())},
                "edges": {e: list(p) for e, p in sorted(self.edges.items())}, "legs": sorted(self.legs)}


def chain_disk(n) -> RibbonGraph:
    """Trivalent chain ribbon graph of the disk with n >= 3 boundary punctures."""
    if n < 3:
        raise RibbonError("a chain disk needs n >= 3 punctures")
    m = n - 2
    verts, edges, legs = {}, {}, []
    for k in range(1, m + 1):
        hs = [f"l{k}a"]
        legs.append(f"l{k}a")
        if k == 1:
            hs.append(f"l{k}b")
            legs.append(f"l{k}b")
        else:
            hs.append(f"h{k - 1}+")
        if k == m:
            hs.append(f"l{k}c")
            legs.append(f"l{k}c")
        else:
            hs.append(f"h{k}-")
        verts[f"v{k}"] = hs
    for k in range(1, m):
        edges[f"e{k}"] = (f"h{k}-", f"h{k}+")
    return RibbonGraph(verts, edges, legs, f"disk{n}")


# ---------------------------------------------------------------------------
# categories and diagrams


def vertex_sector_category(n):
    """Directed A_{n-1} category of a degree-n vertex: objects 1..n-1."""
    if n < 2:
        raise RibbonError("a sector category needs n >= 2")
    return a_n(n - 1, name=f"sector{n}")


def cover_diagram(g: RibbonGraph) -> DiagramOverPoset:
    """Vertex sectors (maximal) over edge sectors (minimal); arcs go to arcs."""
    cats = {v: vertex_sector_category(g.degree(v)) for v in g.vertices}
    edge_cat = vertex_sector_category(2)
    rel, funcs = [], {}
    for e in g.edges:
        cats[e] = edge_cat
        for h in g.edges[e]:
            v = g.owner[h]
            obj = g.arc_object(h)
            tgt = cats[v]
            funcs[e, v] = AInfFunctor.strict(edge_cat, tgt, {"1": obj}, {0: {tgt.unit(obj): 1}}, f"{e}->{v}")
            rel.append((e, v))
    return DiagramOverPoset(FinitePoset(list(g.vertices) + list(g.edges), rel), cats, funcs, g.name)


def _chain_order(g: RibbonGraph):
    """Vertices v_1..v_m with edges e_k (v_k -> v_{k+1}) sending the arc to the
    top object of v_k and the bottom object of v_{k+1}; None if not of that form."""
    verts = list(g.vertices)
    if len(g.edges) != len(verts) - 1:
        return None
    nbr = {v: [] for v in verts}
    for e in g.edges:
        a, b = g.endpoints(e)
        nbr[a].append((b, e))
        nbr[b].append((a, e))
    if len(verts) == 1:
        return verts, []
    ends = [v for v in verts if len(nbr[v]) == 1]
    if len(ends) != 2 or any(len(nbr[v]) > 2 for v in verts):
        return None
    for start in ends:
        order, es, prev, cur = [start], [], None, start
        while True:
            nxt = [(w, e) for w, e in nbr[cur] if w != prev]
            if not nxt:
                break
            prev, (cur, e) = cur, nxt[0]
            order.append(cur)
            es.append(e)
        if len(order) != len(verts):
            return None
        ok = True
        for k, e in enumerate(es):
            ha, hb = g.edges[e]
            if g.owner[ha] != order[k]:
                ha, hb = hb, ha
            if g.arc_object(ha) != str(g.degree(order[k]) - 1) or g.arc_object(hb) != "1":
                ok = False
                break
        if ok:
            return order, es
    return None


# ---------------------------------------------------------------------------
# witnesses


def auto_right_new(cat, images):
    """Objects and single-arrow cones left-orthogonal to every image object."""
    out = []
    imgs = [trivial(cat, y, 0, y) for y in images]
    cands = [trivial(cat, x, 0, x) for x in cat.objects if x not in images]
    for x in cat.objects:
        if x in images:
            continue
        for y in images:
            for b in cat.hom(x, y):
                if b != cat.unit(x) and cat.basis[b].degree == 0 and not cat.mu((b,)):
                    cands.append(cone(cat, _arrow(cat, x, y, b), f"cone({x}>{y})"))
    for t in cands:
        if all(_tw_acyclic(cat, t, y) for y in imgs):
            out.append(t)
    return out


def _arrow(cat, x, y, b):
    from .twisted import tw_morphism
    return tw_morphism(cat, trivial(cat, x, 0, x), trivial(cat, y, 0, y), {(0, 0, b): 1})


def _closed_maps(cat, s, t, limit=3):
    """Degree-0 cocycle representatives of the free part of H^0 Hom(s, t) with
    coefficient vectors in {-1, 0, 1}."""
    tw = TwCategory(cat, [s, t] if s != t else [s])
    a, b = tw.name_of(s), tw.name_of(t)
    cx, idx = tw.hom_complex(a, b)
    free, _ = cohomology_representatives(cx, 0)
    free = free[:limit]
    for coeffs in itertools.product((-1, 0, 1), repeat=len(free)):
        if not any(coeffs):
            continue
        vec = {}
        for c, rep in zip(coeffs, free):
            for i, x in zip(idx.get(0, []), rep):
                if c * x:
                    vec[i] = vec.get(i, 0) + c * x
        vec = {k: v for k, v in vec.items() if v}
        if vec:
            m = tw.morphism_of(a, b, vec, 0)
            yield {(i, j, cat.basis[e].name): c for (i, j, e), c in m.components}


def find_generation_witness(cat, target, images, right_new, bound=3):
    """Search target ~ cone(A -> B) with A, B shifted generators; None if not found."""
    gens = [(("image", y), trivial(cat, y, 0, y)) for y in images]
    gens += [(("new", n), t) for n, t in enumerate(right_new)]
    goal = trivial(cat, target, 0, target)
    for key, t in gens:
        for sh in (0, -1, 1):
            if are_quasi_isomorphic(cat, shift(t, sh, "g"), goal, bound).verdict == "yes":
                return GenerationWitness(target, [("gen", "g", key, sh)], "g")
    for (ka, ta), (kb, tb) in itertools.product(gens, repeat=2):
        if ka == kb:
            continue
        for sa, sb in itertools.product((-1, 0, 1), repeat=2):
            a, b = shift(ta, sa, "a"), shift(tb, sb, "b")
            for terms in _closed_maps(cat, a, b):
                c = cone(cat, _tw_map(cat, a, b, terms), "w")
                if are_quasi_isomorphic(cat, c, goal, bound).verdict == "yes":
                    return GenerationWitness(target, [("gen", "a", ka, sa), ("gen", "b", kb, sb),
                                                      ("cone", "w", "a", "b", terms)], "w")
    return None


def _tw_map(cat, a, b, terms):
    from .twisted import tw_morphism
    return tw_morphism(cat, a, b, terms)


def auto_certify(full: DiagramOverPoset, apex, right_new=None, bound=3):
    """certify_equivalence with right-new objects and witnesses found automatically."""
    pres = hocolim_presentation(full, apex)
    if right_new is None:
        right_new = {}
        for s in pres.diagram.poset.elements:
            cat = full.cats[s]
            imgs = _image_objects(full, s)
            right_new[s] = auto_right_new(cat, imgs) if imgs else [trivial(cat, x, 0, x) for x in cat.objects]
    gen = {}
    for s in list(pres.diagram.poset.elements) + [apex]:
        cat = full.cats[s]
        imgs = _image_objects(full, s)
        new = right_new.get(s, []) if s != apex else []
        plain = {t.entries[0][0] for t in new if len(t.entries) == 1 and t.entries[0][1] == 0}
        ws = []
        for x in cat.objects:
            if x in imgs or x in plain:
                continue
            w = find_generation_witness(cat, x, imgs, new, bound)
            if w is not None:
                ws.append(w)
        gen[s] = ws
    return pres, certify_equivalence(pres, right_new, gen, bound)


# ---------------------------------------------------------------------------
# surface categories


@dataclass
class SurfaceResult:
    graph: RibbonGraph
    diagram: DiagramOverPoset
    presentation: object
    target: object | None
    certificate: EquivalenceCertificate | None
    rank_check: dict | None

    def as_json(self):
        return {"graph": self.graph.as_json(), "poset": self.diagram.poset.as_json(),
                "target": self.target.name if self.target is not None else None,
                "certificate": self.certificate.as_json() if self.certificate else None,
                "rank_check": self.rank_check,
                "note": None if self.certificate else "no built-in target for this graph; presentation only"}


def path_count_matrix(n):
    """Number of paths i -> j in the linear A_n quiver."""
    return [[1 if i <= j else 0 for j in range(n)] for i in range(n)]


def _rank_check(cat):
    objs = list(cat.objects)
    hs = {(a, b): hom_cohomology(cat, a, b) for a in objs for b in objs}
    got = [[hs[a, b].rank(0) for b in objs] for a in objs]
    others = sorted({k for h in hs.values() for k, _ in h.groups if k != 0})
    want = path_count_matrix(len(objs))
    return {"matrix": got, "expected": want, "other_degrees": others, "passed": got == want and not others}


def _apex_diagram(diagram, order, name=""):
    """Adjoin the apex A_N: vertex v_k occupies a block of consecutive objects,
    overlapping the next block in the object of their common edge."""
    offsets, pos = {}, 0
    for v in order:
        offsets[v] = pos
        pos += len(diagram.cats[v].objects) - 1
    N = pos + 1
    apex = a_n(N, name=f"A{N}")
    cats = dict(diagram.cats)
    cats["*"] = apex
    funcs = dict(diagram.F)
    for v in order:
        src = diagram.cats[v]
        funcs[v, "*"] = _obj_functor(src, apex, {x: str(offsets[v] + int(x)) for x in src.objects}, f"{v}->*")
    P = diagram.poset
    rel = list(P.pairs()) + [(s, "*") for s in P.elements]
    return DiagramOverPoset(FinitePoset(list(P.elements) + ["*"], rel), cats, funcs, name or diagram.name), apex


def _obj_functor(src, tgt, om, name):
    """Strict functor between A_n categories given by an order-preserving object map."""
    bm = {}
    for i, b in enumerate(src.basis):
        x, y = om[b.source], om[b.target]
        bm[i] = {tgt.unit(x) if x == y else tgt.hom(x, y)[0]: 1}
    return AInfFunctor.strict(src, tgt, om, bm, name)


def _square(top_n, side_n, name):
    """[A_1 -> A_top (top object); A_1 -> A_side (object 1)] with apex A_{top + side - 1}."""
    c0, cp, cq = a_n(1, name="A1"), a_n(top_n, name=f"A{top_n}"), a_n(side_n, name=f"A{side_n}")
    N = top_n + side_n - 1
    apex = a_n(N, name=f"A{N}")
    F = {("r", "p"): _obj_functor(c0, cp, {"1": str(top_n)}, "r->p"),
         ("r", "q"): _obj_functor(c0, cq, {"1": "1"}, "r->q"),
         ("p", "*"): _obj_functor(cp, apex, {x: x for x in cp.objects}, "p->*"),
         ("q", "*"): _obj_functor(cq, apex, {x: str(top_n - 1 + int(x)) for x in cq.objects}, "q->*")}
    P = FinitePoset(["r", "p", "q", "*"], [("r", "p"), ("r", "q"), ("p", "*"), ("q", "*")])
    return DiagramOverPoset(P, {"r": c0, "p": cp, "q": cq, "*": apex}, F, name)


def _chain_certificate(full, order, es, bound):
    """Certificate for a chain cover: direct for at most two vertices, else by
    splitting off the last vertex and pasting squares."""
    if len(order) == 1:
        return maximal_element_certificate(full.restrict([order[0], "*"]), "*")
    if len(order) == 2:
        return auto_certify(full, "*", bound=bound)[1]
    # P = all but the last vertex, Q = {last edge, last vertex}, R = {last edge}
    last, le = order[-1], es[-1]
    sigma = full.restrict([s for s in full.poset.elements if s != "*"])
    label = {s: "left" for s in sigma.poset.elements}
    label[last], label[le] = "right", "mid"
    dec = decompose_pushout(sigma.poset, label)
    hyps = [Hypothesis("decomposition", dec.check.passed, dec.check.detail)]
    # the last edge hangs below one vertex of P only, so dropping it is cofinal
    keep = [x for x in dec.P if x != le]
    cof = check_cofinality(sigma.restrict(dec.P).poset, keep)
    hyps.append(Hypothesis("P-cofinal", cof.passed, cof.detail))
    sub = sigma.restrict(keep)
    sub_full, sub_apex = _apex_diagram(sub, order[:-1], f"{full.name}-P")
    rec = _chain_certificate(sub_full, order[:-1], es[:-1], bound)
    hyps.append(Hypothesis("P-hocolim", rec.verdict == "HOCOLIM",
                           f"recursive certificate for {len(order) - 1} vertices: {rec.verdict}"))
    q_cert = maximal_element_certificate(sigma.restrict(dec.Q), last)
    r_cert = maximal_element_certificate(sigma.restrict(dec.R), le)
    hyps.append(Hypothesis("Q-hocolim", q_cert.verdict == "HOCOLIM", q_cert.hypotheses[0].detail))
    hyps.append(Hypothesis("R-hocolim", r_cert.verdict == "HOCOLIM", r_cert.hypotheses[0].detail))
    top_n, side_n = len(sub_apex.objects), len(full.cats[last].objects)
    _, sq_cert = auto_certify(_square(top_n, side_n, f"{full.name}-square"), "*", bound=bound)
    hyps.append(Hypothesis("square", sq_cert.verdict == "HOCOLIM",
                           f"A{top_n} <- A1 -> A{side_n} into A{top_n + side_n - 1}: {sq_cert.verdict}"))
    failing = next((h.key for h in hyps if not h.passed), None)
    return EquivalenceCertificate(
        "HOCOLIM" if failing is None else "FAIL", hyps,
        {"P": rec.as_json(), "square": sq_cert.as_json(), "decomposition": dec.as_json()},
        {"diagram": digest(full.fingerprint())}, failing,
        ["hocolim over the cover computed as an iterated pushout along the last edge"])


def surface_category(g: RibbonGraph, bound=3) -> SurfaceResult:
    diagram = cover_diagram(g)
    chain = _chain_order(g)
    if chain is None:
        return SurfaceResult(g, diagram, hocolim_presentation(diagram), None, None, None)
    order, es = chain
    full, apex = _apex_diagram(diagram, order)
    pres = hocolim_presentation(full, "*")
    cert = _chain_certificate(full, order, es, bound)
    check = _rank_check(apex)
    check["arcs"] = _arc_check(full, order, apex, bound)
    check["passed"] = check["passed"] and check["arcs"]["passed"]
    return SurfaceResult(g, diagram, pres, apex, cert, check)


def _arc_check(full, order, apex, bound):
    """Arc generators land on the target generators, one iso class each."""
    hit = sorted({full.functor(v, "*").obj_map[x] for v in order for x in full.cats[v].objects}, key=int)
    objs = [trivial(apex, x, 0, x) for x in apex.objects]
    clash = [(a.name, b.name) for a, b in itertools.combinations(objs, 2)
             if are_quasi_isomorphic(apex, a, b, bound).verdict != "no"]
    return {"images": hit, "pairwise_distinct": not clash,
            "passed": hit == list(apex.objects) and not clash}
