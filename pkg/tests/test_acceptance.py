"""Acceptance criteria 1-9.

Each criterion prints one line ``criterion N: PASS|FAIL (seconds) detail``; the
lines are repeated in the pytest terminal summary.  Run this file directly with
``python3 tests/test_acceptance.py`` to get just the nine lines.
"""
import os
import sys
import tempfile
import time

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ainfcat.catalog import (a3_subcategory, builtin_categories, corrupted_associativity, corrupted_degree,
                             kronecker, kronecker_cones, kronecker_wrapping, semiorth_square, twist_object,
                             two_chain)
from ainfcat.category import check_ainf_relations, hom_cohomology, is_directed
from ainfcat.hocolim import (certify_equivalence, check_cofinality, decompose_pushout,
                             hocolim_presentation, local_commute_check, subsets_poset)
from ainfcat.localization import QuotientSpec, localized_hom_colimit, quotient_full_faithfulness_check
from ainfcat.modules import check_yoneda_full_faithfulness
from ainfcat.surface import auto_certify, chain_disk, path_count_matrix, surface_category
from ainfcat.twisted import TwCategory, exact_triangle_check, trivial, tw_hom_cohomology, tw_morphism

RESULTS = {}
LIMITS = {1: 10, 2: 30, 4: 60, 7: 120}


def _run(n, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    limit = LIMITS.get(n)
    if limit is not None and dt >= limit:
        ok, detail = False, f"took {dt:.1f}s, limit {limit}s; {detail}"
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({dt:.2f}s) {detail}"
    RESULTS[n] = line
    print(line)
    return ok, line


def criterion_1():
    cats = builtin_categories()
    bad = [name for name, c in sorted(cats.items()) if not check_ainf_relations(c, 4).passed]
    kr = kronecker()
    tw = check_ainf_relations(TwCategory(kr, list(kronecker_cones(kr))), 4)
    assoc = check_ainf_relations(corrupted_associativity(), 4)
    deg = check_ainf_relations(corrupted_degree(), 4)
    pin_assoc = (not assoc.passed and assoc.failure[0] == "relation"
                 and assoc.failure[1] == ["p1_2", "p2_3", "p3_4"] and assoc.failure[2] == {"p1_4": -1})
    pin_deg = not deg.passed and deg.failure[0] == "degree" and deg.failure[1] == ["x"]
    ok = len(cats) - len(bad) >= 6 and tw.passed and pin_assoc and pin_deg
    return ok, (f"{len(cats) - len(bad)}/{len(cats)} catalog entries, Tw End(D1+D2) {tw.passed}, "
                f"corrupt associativity at {assoc.failure[1] if assoc.failure else None}, "
                f"corrupt degree at {deg.failure[1] if deg.failure else None}")


def criterion_2():
    checked, bad = [], []
    for name, c in sorted(builtin_categories().items()):
        if len(c.objects) > 6 or not is_directed(c):
            continue
        checked.append(name)
        if not check_yoneda_full_faithfulness(c).passed:
            bad.append(name)
    return bool(checked) and not bad, f"Yoneda fully faithful on {len(checked) - len(bad)}/{len(checked)}: " + \
        ", ".join(checked)


def criterion_3():
    kr = kronecker()
    o, o1 = trivial(kr, "O"), trivial(kr, "O1")
    d1, d2 = kronecker_cones(kr)
    h = hom_cohomology(kr, "O", "O1")
    hom_ok = h.as_json() == {"0": {"rank": 2, "torsion": []}}
    tri = [exact_triangle_check(kr, tw_morphism(kr, o, o1, {(0, 0, b): 1}), d).ok for b, d in (("x", d1), ("y", d2))]
    acyc = tw_hom_cohomology(kr, d1, d2).is_zero()
    ends = [tw_hom_cohomology(kr, d, d).as_json() == {"0": {"rank": 1, "torsion": []}, "1": {"rank": 1, "torsion": []}}
            for d in (d1, d2)]
    ok = hom_ok and all(tri) and acyc and all(ends)
    return ok, f"Hom(O,O1)={h.as_json()}, triangles {tri}, Hom(D1,D2) acyclic {acyc}, End(Di)=Z+Z[-1] {ends}"


def criterion_4():
    kr = kronecker()
    seq = kronecker_wrapping(6, kr)
    rep = localized_hom_colimit(QuotientSpec(kr, list(kronecker_cones(kr))), seq, twist_object(kr, 0), 6)
    ranks = [r.rank(0) for r in rep.reports]
    vanish = all(all(v) for v in rep.a_vanishing.values())
    ok = (ranks == [i + 1 for i in range(7)] and all(rep.injective) and vanish
          and rep.verdict == "LEFT-LOCAL-VERIFIED")
    return ok, f"ranks {ranks}, injective {all(rep.injective)}, period vanishing {vanish}, verdict {rep.verdict}"


def criterion_5():
    d, new = semiorth_square()
    good = certify_equivalence(hocolim_presentation(d, "*"), new, {})
    _, auto = auto_certify(d, "*")
    dc, newc = semiorth_square(corrupt=True)
    bad = certify_equivalence(hocolim_presentation(dc, "*"), newc, {})
    _, bad_auto = auto_certify(dc, "*")
    ok = (good.verdict == auto.verdict == "HOCOLIM" and bad.verdict == "FAIL"
          and bad.failing == "c:incomparable-orthogonal" and bad_auto.verdict == "FAIL")
    return ok, f"square {good.verdict}, corrupted {bad.verdict} at {bad.failing} (auto: {bad_auto.failing})"


def criterion_6():
    s3 = subsets_poset(3)
    lab = {"123": "mid", "13": "mid", "23": "mid", "3": "left", "12": "right", "1": "right", "2": "right"}
    dec = decompose_pushout(s3, lab).check
    q = s3.restrict(["123", "12", "13", "23", "1", "2"])
    cof = check_cofinality(q, ["12", "1", "2"])
    failures = {
        "incomparable": decompose_pushout(s3, dict(lab, **{"1": "left"})).check,
        "below-R": decompose_pushout(s3, {s: ("mid" if s in ("12", "13") else "left") for s in s3.elements}).check,
        "unique-minimal": check_cofinality(s3, ["1", "2"]),
        "upward-closed": check_cofinality(q, ["123", "12", "1", "2"]),
    }
    caught = {k: (not v.passed and v.condition == k) for k, v in failures.items()}
    ok = dec.passed and cof.passed and all(caught.values())
    return ok, f"decomposition {dec.passed}, cofinality {cof.passed}, engineered failures caught {caught}"


def criterion_7():
    parts, ok = [], True
    for n in (4, 5, 6):
        res = surface_category(chain_disk(n))
        good = (res.certificate is not None and res.certificate.verdict == "HOCOLIM"
                and res.rank_check["matrix"] == path_count_matrix(n - 1) and res.rank_check["passed"])
        ok = ok and good
        parts.append(f"n={n} {res.certificate.verdict if res.certificate else None} A{n - 1} ranks {good}")
    return ok, "; ".join(parts)


def criterion_8():
    func, A = a3_subcategory()
    ff = quotient_full_faithfulness_check(func, A, 4)
    compared = any(p["compared_degrees"] for p in ff.pairs)
    d, zero = two_chain()
    lc, rows = local_commute_check(d, zero, 4)
    ok = ff.passed and compared and lc
    return ok, f"quotient fully faithful {ff.passed} ({len(ff.pairs)} pairs), local commute {lc} ({len(rows)} homs)"


def criterion_9():
    from conftest import run_corpus
    outs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory(prefix="ainfcat-corpus-") as d:
            run_corpus(d, figures=True)
            files = {}
            for root, _, names in os.walk(d):
                for f in names:
                    p = os.path.join(root, f)
                    with open(p, "rb") as fh:
                        files[os.path.relpath(p, d)] = fh.read()
        outs.append(files)
    same = outs[0] == outs[1]
    diff = sorted(k for k in set(outs[0]) | set(outs[1]) if outs[0].get(k) != outs[1].get(k))
    return same and bool(outs[0]), f"{len(outs[0])} report and figure files, differing: {diff or 'none'}"


def _check(n, fn):
    ok, line = _run(n, fn)
    assert ok, line


def test_criterion_1_relations():
    _check(1, criterion_1)


def test_criterion_2_yoneda():
    _check(2, criterion_2)


def test_criterion_3_kronecker():
    _check(3, criterion_3)


def test_criterion_4_wrapping():
    _check(4, criterion_4)


def test_criterion_5_semiorthogonal_square():
    _check(5, criterion_5)


def test_criterion_6_poset_lemmas():
    _check(6, criterion_6)


def test_criterion_7_surfaces():
    _check(7, criterion_7)


def test_criterion_8_localization_commutes():
    _check(8, criterion_8)


def test_criterion_9_determinism():
    _check(9, criterion_9)


if __name__ == "__main__":
    import contextlib
    import io
    fails = 0
    for k, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9], 1):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            ok, line = _run(k, fn)
        print(line)
        fails += not ok
    sys.exit(1 if fails else 0)
