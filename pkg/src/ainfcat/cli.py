"""Command line interface: ``ainfcat <command> ...``.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .category import (CategoryError, check_ainf_relations, check_functor, hom_cohomology, is_directed)
from .formats import CategoryDocument, DiagramDocument, canonicalize, kind_of, parse, parse_ring, read_text, ring_name
from .report import build_report, write_report

RING_ENV = "AINFCAT_RING"


class UsageError(Exception):
    pass


class Outcome:
    def __init__(self, result, verdict, ok, lines, inputs=(), figures=None):
        self.result, self.verdict, self.ok = result, verdict, ok
        self.lines, self.inputs, self.figures = lines, list(inputs), figures


# ---------------------------------------------------------------------------
# helpers


def _field(args, doc=None):
    if args.field is not None:
        return parse_ring(args.field)
    if doc is not None and getattr(doc, "ring_given", False):
        return doc.ring
    return parse_ring(os.environ.get(RING_ENV, "Z"))


def _load(path, kinds):
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    if kind_of(path) not in kinds:
        raise UsageError(f"{path}: expected a {' or '.join('.' + k for k in kinds)} document")
    return parse(path)


def _object(cat, name):
    if name not in cat.objects:
        raise UsageError(f"unknown object {name}; objects are {', '.join(cat.objects)}")
    return name


def _terms(cat, x, y, specs):
    """'b', 'c*b' -> {(0, 0, b): c}, checked against hom(x, y)."""
    out = {}
    for s in specs:
        c, _, b = s.rpartition("*")
        try:
            coeff = int(c) if c else 1
        except ValueError:
            raise UsageError(f"bad coefficient in {s!r}") from None
        try:
            i = cat.index(b)
        except CategoryError as e:
            raise UsageError(str(e)) from None
        if i not in cat.hom(x, y):
            raise UsageError(f"{b} is not a morphism {x} -> {y}")
        out[0, 0, b] = out.get((0, 0, b), 0) + coeff
    return out


def _cone_of(cat, x, y, specs):
    from .twisted import cone, trivial, tw_morphism
    f = tw_morphism(cat, trivial(cat, x, 0, x), trivial(cat, y, 0, y), _terms(cat, x, y, specs))
    return f, cone(cat, f, f"cone({'+'.join(specs)})")


def _rank_matrix(cat, field, degree=0):
    return [[hom_cohomology(cat, a, b, field).rank(degree) for b in cat.objects] for a in cat.objects]


def _fig(args, name):
    return os.path.join(args.figures, name)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    val = _load(args.path, ["acat", "diag", "ribbon"])
    if isinstance(val, CategoryDocument):
        cat = val.category
        rep = check_ainf_relations(cat, args.arity)
        res = {"kind": "acat", "name": cat.name, "objects": len(cat.objects), "basis": len(cat.basis),
               "relations": rep.as_json(), "strictly_unital": cat.is_strictly_unital(), "directed": is_directed(cat)}
        ok = rep.passed
        lines = [f"{cat.name or args.path}: relations up to arity {rep.arity}: {'pass' if ok else 'FAIL'}"]
        if rep.failure:
            lines.append(f"  {rep.failure[0]} failure at ({', '.join(rep.failure[1])}): {rep.failure[2]}")
    elif isinstance(val, DiagramDocument):
        d = val.diagram()
        cats = {}
        ok = True
        for s, c in sorted(d.cats.items()):
            r = check_ainf_relations(c, args.arity)
            cats[s] = r.as_json()
            ok = ok and r.passed
        funcs = {}
        for (a, b), f in sorted(d.F.items()):
            r = check_functor(f, args.arity)
            funcs[f"{a}<{b}"] = r.as_json()
            ok = ok and r.passed
        res = {"kind": "diag", "name": d.name, "poset": d.poset.as_json(), "categories": cats, "functors": funcs,
               "apex": val.apex, "commutes": True}
        lines = [f"{d.name or args.path}: {len(cats)} categories, {len(funcs)} functors: {'pass' if ok else 'FAIL'}"]
    else:
        from .surface import cover_diagram
        d = cover_diagram(val)
        res = {"kind": "ribbon", "graph": val.as_json(), "cover_poset": d.poset.as_json()}
        ok = True
        lines = [f"{val.name or args.path}: valid ribbon graph, cover poset with {len(d.poset.elements)} elements"]
    return Outcome(res, "PASS" if ok else "FAIL", ok, lines, [args.path])


def cmd_hom(args):
    doc = _load(args.path, ["acat"])
    cat, field = doc.category, _field(args, doc)
    x, y = _object(cat, args.x), _object(cat, args.y)
    h = hom_cohomology(cat, x, y, field)
    res = {"source": x, "target": y, "ring": ring_name(field), "cohomology": h.as_json()}
    lines = [f"H Hom({x}, {y}) over {ring_name(field)}: {h}"]

    def figs():
        tag = "" if field is None else f"-gf{field}"
        return [_heat(args, cat, field, f"{cat.name or 'category'}-h0{tag}.png")]
    return Outcome(res, "PASS", True, lines, [args.path], figs)


def _heat(args, cat, field, name):
    from .plotting import rank_heatmap
    return rank_heatmap(_rank_matrix(cat, field), list(cat.objects), f"rank H^0 Hom in {cat.name} over {ring_name(field)}", _fig(args, name))


def cmd_cone(args):
    from .twisted import TwCategory, exact_triangle_check, trivial
    doc = _load(args.path, ["acat"])
    cat, field = doc.category, _field(args, doc)
    x, y = _object(cat, args.x), _object(cat, args.y)
    f, c = _cone_of(cat, x, y, args.terms)
    tw = TwCategory(cat, [c] + [trivial(cat, o, 0, o) for o in cat.objects])
    cn = tw.name_of(c)
    end = tw.hom_cohomology(c, c, field)
    into = {o: tw.hom_cohomology(trivial(cat, o, 0, o), c, field).as_json() for o in cat.objects}
    out = {o: tw.hom_cohomology(c, trivial(cat, o, 0, o), field).as_json() for o in cat.objects}
    tri = exact_triangle_check(cat, f, c, args.coeff_bound, field)
    res = {"cone": cn, "entries": [list(e) for e in c.entries], "end": end.as_json(),
           "hom_from_objects": into, "hom_to_objects": out, "triangle": tri.verdict}
    lines = [f"{cn}: H End = {end}", f"exact triangle {x} -> {y} -> cone: {tri.verdict}"]
    return Outcome(res, "PASS" if tri.ok else "FAIL", tri.ok, lines, [args.path])


def cmd_zero(args):
    from .twisted import is_zero_object, trivial
    doc = _load(args.path, ["acat"])
    cat, field = doc.category, _field(args, doc)
    x = _object(cat, args.x)
    if args.terms:
        if len(args.terms) < 2:
            raise UsageError("zero X Y TERM...: give a target object and at least one term")
        y = _object(cat, args.terms[0])
        _, t = _cone_of(cat, x, y, args.terms[1:])
    else:
        t = trivial(cat, x, 0, x)
    z = is_zero_object(cat, t, witness=True, field=field)
    wit = None if z.witness is None else sorted([i, j, cat.basis[e].name, c] for (i, j, e), c in z.witness.components)
    res = {"object": t.name, "zero": z.is_zero, "method": z.method, "primitive": wit}
    lines = [f"{t.name}: {'zero' if z.is_zero else 'nonzero'} ({z.method})"]
    return Outcome(res, "ZERO" if z.is_zero else "NONZERO", z.is_zero, lines, [args.path])


def cmd_quotient_hom(args):
    from .localization import QuotientSpec, quotient_hom
    doc = _load(args.path, ["acat"])
    cat, field = doc.category, _field(args, doc)
    x, z = _object(cat, args.x), _object(cat, args.z)
    kill = [_object(cat, a) for a in args.kill]
    q = quotient_hom(QuotientSpec(cat, kill, args.p_max), x, z, field)
    res = {"source": x, "target": z, "quotient_by": kill, **q.as_json(),
           "dims": {str(k): v for k, v in sorted(q.dims.items())}}
    tag = "exact" if q.exact else f"truncated at p_max={args.p_max}, stable degrees {sorted(q.stable_degrees)}"
    lines = [f"H Hom_{{C/A}}({x}, {z}) = {q.cohomology} ({tag})"]
    return Outcome(res, "EXACT" if q.exact else "TRUNCATED", True, lines, [args.path])


def cmd_localize_colimit(args):
    from .catalog import kronecker, kronecker_cones, kronecker_wrapping, twist_object
    from .localization import QuotientSpec, localized_hom_colimit
    if args.sequence != "kronecker-wrap":
        raise UsageError("known sequences: kronecker-wrap")
    cat = kronecker()
    n = args.prefix
    seq = kronecker_wrapping(n, cat)
    d1, d2 = kronecker_cones(cat)
    targets = {"O": twist_object(cat, 0), "O1": "O1", "D1": d1, "D2": d2}
    if args.target not in targets:
        raise UsageError(f"unknown target {args.target}; choose from {', '.join(targets)}")
    rep = localized_hom_colimit(QuotientSpec(cat, [d1, d2], args.p_max), seq, targets[args.target], n,
                                args.degree, bound=args.coeff_bound)
    res = {"sequence": seq.name, "target": args.target, **rep.as_json()}
    ranks = res["ranks"]
    lines = [f"ranks H^{args.degree} Hom(O(-i), {args.target}), i <= {n}: {ranks}",
             f"injective transitions: {all(rep.injective)}; verdict {rep.verdict}"]

    def figs():
        from .plotting import rank_growth
        return [rank_growth(ranks, f"H^{args.degree} Hom(O(-i), {args.target})",
                            _fig(args, f"{seq.name}-{args.target}-ranks.png"))]
    ok = rep.verdict == "LEFT-LOCAL-VERIFIED"
    return Outcome(res, rep.verdict, ok, lines, [], figs)


def cmd_groth(args):
    from .hocolim import adjacent_morphisms, grothendieck
    doc = _load(args.path, ["diag"])
    field = _field(args, doc)
    d = doc.diagram()
    if doc.apex:
        d = d.restrict([s for s in d.poset.elements if s != doc.apex])
    g = grothendieck(d)
    rel = check_ainf_relations(g, args.arity)
    mat = _rank_matrix(g, field)
    adj = adjacent_morphisms(d, g)
    res = {"objects": list(g.objects), "basis": len(g.basis), "relations": rel.as_json(), "h0_ranks": mat,
           "adjacent": [[a.source, a.target, g.basis[a.basis].name] for a in adj]}
    lines = [f"Groth: {len(g.objects)} objects, {len(g.basis)} basis elements, relations {'pass' if rel else 'FAIL'}",
             f"{len(adj)} adjacent morphisms"]

    def figs():
        from .plotting import rank_heatmap
        return [rank_heatmap(mat, list(g.objects), "rank H^0 Hom in Groth", _fig(args, f"{d.name or 'diagram'}-groth.png"))]
    return Outcome(res, "PASS" if rel else "FAIL", rel.passed, lines, [args.path], figs)


def cmd_hocolim_certify(args):
    from .surface import auto_certify
    doc = _load(args.path, ["diag"])
    apex = args.apex or doc.apex
    if not apex:
        raise UsageError("diagram has no apex; give --apex")
    _, cert = auto_certify(doc.diagram(), apex, bound=args.coeff_bound)
    lines = [f"verdict {cert.verdict}"] + [f"  {'ok ' if h.passed else 'BAD'} {h.key}: {h.detail}"
                                           for h in cert.hypotheses]
    return Outcome(cert.as_json(), cert.verdict, cert.verdict == "HOCOLIM", lines, [args.path])


def cmd_cofinal_check(args):
    from .hocolim import check_cofinality, decompose_pushout, subsets_poset
    inputs = []
    if args.poset.startswith("sigma"):
        try:
            poset = subsets_poset(int(args.poset[5:]))
        except ValueError:
            raise UsageError("built-in posets are sigma1, sigma2, ...") from None
    else:
        poset = _load(args.poset, ["diag"]).diagram().poset
        inputs.append(args.poset)
    if args.within:
        keep = [s for s in args.within.split(",") if s]
        bad = [s for s in keep if s not in poset.elements]
        if bad:
            raise UsageError(f"unknown poset element {bad[0]}")
        poset = poset.restrict(keep)
    if (args.subset is None) == (args.labels is None):
        raise UsageError("give exactly one of --subset or --labels")
    if args.subset is not None:
        sub = [s for s in args.subset.split(",") if s]
        chk = check_cofinality(poset, sub)
        res = {"poset": poset.as_json(), "subset": sub, **chk.as_json()}
    else:
        label = {}
        for part in args.labels.split(","):
            k, _, v = part.partition("=")
            label[k] = v
        dec = decompose_pushout(poset, label)
        chk = dec.check
        res = {"poset": poset.as_json(), **dec.as_json()}
    lines = [f"{'pass' if chk.passed else 'FAIL'}: {chk.detail}"]
    return Outcome(res, "PASS" if chk.passed else "FAIL", chk.passed, lines, inputs)


def cmd_surface(args):
    from .surface import chain_disk, surface_category
    if args.path.startswith("disk:"):
        try:
            g = chain_disk(int(args.path[5:]))
        except ValueError as e:
            raise UsageError(str(e)) from None
        inputs = []
    else:
        g = _load(args.path, ["ribbon"])
        inputs = [args.path]
    r = surface_category(g, args.coeff_bound)
    res = r.as_json()
    if r.certificate is None:
        lines = [f"{g.name}: presentation over {len(r.diagram.poset.elements)} pieces; no built-in target"]
        return Outcome(res, "PRESENTATION-ONLY", True, lines, inputs)
    ok = r.certificate.verdict == "HOCOLIM" and r.rank_check["passed"]
    lines = [f"{g.name}: target {r.target.name}, verdict {r.certificate.verdict}",
             f"hom-rank matrix equals path counts: {r.rank_check['passed']}"]

    def figs():
        from .plotting import rank_heatmap
        return [rank_heatmap(r.rank_check["matrix"], list(r.target.objects), f"rank H^0 Hom in {r.target.name}",
                             _fig(args, f"{g.name or 'surface'}-target.png"))]
    return Outcome(res, r.certificate.verdict, ok, lines, inputs, figs)


def cmd_catalog(args):
    from .catalog import builtin_examples
    from .twisted import TwCategory
    cat_ex = builtin_examples()
    entries, ok = {}, True
    for name, c in sorted(cat_ex["categories"].items()):
        r = check_ainf_relations(c, args.arity)
        entries[name] = {"objects": list(c.objects), "basis": len(c.basis), "relations": r.as_json()}
        ok = ok and r.passed
    for name, cones in sorted(cat_ex["cones"].items()):
        base = cat_ex["categories"][name]
        tw = TwCategory(base, cones)
        r = check_ainf_relations(tw, args.arity)
        entries[f"Tw({name}) cones"] = {"objects": list(tw.objects), "basis": len(tw.basis), "relations": r.as_json()}
        ok = ok and r.passed
    res = {"entries": entries, "sequences": sorted(cat_ex["sequences"]), "diagrams": sorted(cat_ex["diagrams"]),
           "posets": sorted(cat_ex["posets"])}
    lines = [f"{k}: {'pass' if v['relations']['passed'] else 'FAIL'}" for k, v in entries.items()]
    return Outcome(res, "PASS" if ok else "FAIL", ok, lines)


def cmd_canonicalize(args):
    if not os.path.exists(args.path):
        raise UsageError(f"no such file: {args.path}")
    text = canonicalize(args.path)
    same = read_text(args.path) == text
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        lines = [f"wrote {args.output}"]
    elif args.check:
        lines = ["canonical" if same else "not canonical"]
    else:
        lines = [text.rstrip("\n")]
    ok = same or not args.check
    return Outcome({"canonical": same, "text": text}, "CANONICAL" if same else "REWRITTEN", ok, lines, [args.path])


# ---------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="write the structured JSON report here")
    common.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    common.add_argument("--p-max", type=int, default=4, help="bar-complex truncation length (default 4)")
    common.add_argument("--prefix", type=int, default=6, help="wrapping-sequence prefix length (default 6)")
    common.add_argument("--coeff-bound", type=int, default=3, help="coefficient bound for quasi-iso searches")
    common.add_argument("--field", metavar="P", help=f"compute over GF(P) instead of Z (default from ${RING_ENV})")
    common.add_argument("--jobs", type=int, default=1, help="parallelism hint (recorded; computations are serial)")
    common.add_argument("--arity", type=int, default=4, help="relation check arity (default 4)")

    p = argparse.ArgumentParser(prog="ainfcat", description="Exact computations with finite A-infinity categories.")
    p.add_argument("--version", action="version", version=f"ainfcat {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "parse a document and check relations")
    sp.add_argument("path")
    sp = add("hom", cmd_hom, "cohomology of a hom complex")
    sp.add_argument("path")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = add("cone", cmd_cone, "cone of a morphism between objects")
    sp.add_argument("path")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("terms", nargs="+", help="basis names with optional coefficient, e.g. x or -1*y")
    sp = add("zero", cmd_zero, "decide whether an object or a cone is zero")
    sp.add_argument("path")
    sp.add_argument("x")
    sp.add_argument("terms", nargs="*", help="optional: target object then morphism terms")
    sp = add("quotient-hom", cmd_quotient_hom, "hom in the quotient by a set of objects")
    sp.add_argument("path")
    sp.add_argument("x")
    sp.add_argument("z")
    sp.add_argument("--kill", nargs="+", required=True, metavar="OBJ")
    sp = add("localize-colimit", cmd_localize_colimit, "hom colimit along a built-in wrapping sequence")
    sp.add_argument("sequence")
    sp.add_argument("--target", default="O")
    sp.add_argument("--degree", type=int, default=0)
    sp = add("groth", cmd_groth, "Grothendieck construction of a diagram")
    sp.add_argument("path")
    sp = add("hocolim-certify", cmd_hocolim_certify, "certify a diagram's apex as its homotopy colimit")
    sp.add_argument("path")
    sp.add_argument("--apex")
    sp = add("cofinal-check", cmd_cofinal_check, "cofinality or pushout-decomposition check on a poset")
    sp.add_argument("poset", help="a .diag file or sigmaN")
    sp.add_argument("--subset", help="comma-separated subset to test for cofinality")
    sp.add_argument("--labels", help="elem=left|mid|right,... for a decomposition check")
    sp.add_argument("--within", help="restrict the poset to these comma-separated elements first")
    sp = add("surface", cmd_surface, "cover diagram and descent certificate of a ribbon graph")
    sp.add_argument("path", help="a .ribbon file or disk:N")
    add("catalog", cmd_catalog, "list built-in examples and check their relations")
    sp = add("canonicalize", cmd_canonicalize, "print the canonical form of a document")
    sp.add_argument("path")
    sp.add_argument("-o", "--output")
    sp.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical")
    return p


def _params(args):
    skip = {"fn", "report", "figures", "command"}
    out = {k.replace("_", "-"): v for k, v in vars(args).items() if k not in skip}
    for k, v in list(out.items()):
        if isinstance(v, str) and os.path.sep in v and os.path.exists(v):
            out[k] = os.path.basename(v)
    out["default-ring"] = ring_name(parse_ring(os.environ.get(RING_ENV, "Z")))
    return out


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        if args.field is not None:
            parse_ring(args.field)
        parse_ring(os.environ.get(RING_ENV, "Z"))
        out = args.fn(args)
    except (UsageError, ValueError) as e:
        # ParseError and CategoryError derive from ValueError
        print(f"ainfcat: error: {e}", file=sys.stderr)
        return 2
    for line in out.lines:
        print(line)
    if args.report:
        write_report(args.report, build_report(args.command, _params(args), out.inputs, out.result, out.verdict))
    if args.figures and out.figures is not None:
        for path in out.figures():
            print(f"figure: {path}")
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
