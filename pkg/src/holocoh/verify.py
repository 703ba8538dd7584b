"""Checking ring presentations and restriction/inflation claims against computed cohomology.

The presentation side (:mod:`holocoh.presentation`) and the group side
(resolutions, cup products, induced maps) are computed independently and
only meet here.
"""

from __future__ import annotations

import time
from typing import Iterable

import numpy as np

from . import gf2
from .cohomology import CohomologyClass, cohomology_ring, inflate, pullback_matrix, restrict
from .generators import NamedGeneratorSet, canonical_generators, cyclic_classes
from .groups import (
    GroupSpec,
    abelianization_homs,
    dihedral_subgroups,
    holomorph_quotient,
    holomorph_subgroups,
    make_group,
    make_morphism,
    metacyclic_subgroups,
)
from .presentation import (
    Monomial,
    RingPresentation,
    dihedral_presentation,
    holomorph_presentation,
    metacyclic_presentation,
)
from .report import CandidateRecord, CheckRecord, VerificationReport

TARGETS = ("theorem_1_5", "prop_2_1_4", "ring_Gz", "remark_3_9")
DEFAULT_DEGREE = {3: 8, 4: 6}


def bits(b: Iterable[int]) -> str:
    return "".join(map(str, b))


def monomial_classes(
    classes: dict[str, CohomologyClass], pres: RingPresentation, max_degree: int
) -> dict[Monomial, CohomologyClass]:
    """Cohomology class of every monomial of degree ``<= max_degree``."""
    gens = [classes[name] for name in pres.names]
    ring = gens[0].ring if gens else None
    if ring is None:
        raise ValueError("presentation without generators")
    out: dict[Monomial, CohomologyClass] = {}
    for n in range(max_degree + 1):
        for mono in pres.monomials(n):
            if n == 0:
                out[mono] = ring.unit()
                continue
            i = next(k for k, e in enumerate(mono) if e)
            rest = mono[:i] + (mono[i] - 1,) + mono[i + 1 :]
            out[mono] = out[rest] * gens[i]
    return out


def evaluate(poly, monos: dict[Monomial, CohomologyClass]) -> CohomologyClass:
    """Class of a nonzero homogeneous polynomial, using precomputed monomial classes."""
    terms = list(poly)
    if not terms:
        raise ValueError("cannot infer the degree of the zero polynomial")
    acc = monos[terms[0]]
    for m in terms[1:]:
        acc = acc + monos[m]
    return acc


def express(cls: CohomologyClass, pres: RingPresentation, classes: dict[str, CohomologyClass]) -> str | None:
    """Write ``cls`` as a sum of standard monomials of ``pres``, or ``None`` if impossible."""
    n = cls.degree
    basis = pres.monomial_basis(n)
    monos = monomial_classes(classes, pres, n)
    if not basis:
        return "0" if cls.is_zero() else None
    mat = gf2.BitMatrix.from_dense(np.array([monos[m].array() for m in basis]).T)
    sol = gf2.solve(mat, gf2.BitVector.from_bits(cls.coords))
    if sol is None:
        return None
    return pres.format_polynomial(frozenset(m for m, b in zip(basis, sol.to_array()) if b))


def _span_rank(classes: list[CohomologyClass], betti: int) -> int:
    if not classes or betti == 0:
        return 0
    return gf2.rank(gf2.BitMatrix.from_dense(np.array([c.array() for c in classes])))


def verify_presentation(
    named: NamedGeneratorSet,
    pres: RingPresentation,
    max_degree: int,
    target: str | None = None,
) -> VerificationReport:
    """Compare ``H*(G)`` with a presentation whose generators are named classes.

    For every candidate choice of the ambiguous generators the report records
    whether each relation holds as a cup-product identity, whether monomials
    in the generators span every ``H^n`` with ``n <= max_degree``, and whether
    the Betti numbers match the presented ring's dimensions.
    """
    t0 = time.perf_counter()
    ring = named.ring
    top = max((pres.relation_degree(r) or 0) for r in pres.relations) if pres.relations else 0
    degree = max(max_degree, top)
    ring.ensure(degree)
    report = VerificationReport(target or pres.name, str(named.group.spec), require_candidate=True)
    report.generators = named.certificates()
    report.betti = [ring.betti(n) for n in range(max_degree + 1)]
    report.hilbert = pres.hilbert(max_degree)
    hilbert_ok = report.betti == report.hilbert
    report.add(
        CheckRecord(
            "hilbert",
            f"Betti numbers equal the dimensions of the presented ring {pres.name}",
            {"max_degree": max_degree},
            str(report.hilbert),
            str(report.betti),
            hilbert_ok,
        )
    )
    report.timing["resolution"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    rel_names = [pres.format_polynomial(r) + " = 0" for r in pres.relations]
    for labels, classes in named.tuples():
        monos = monomial_classes(classes, pres, degree)
        checks = {}
        for name, rel in zip(rel_names, pres.relations):
            checks[name] = evaluate(rel, monos).is_zero()
        surjective = True
        for n in range(max_degree + 1):
            found = [monos[m] for m in pres.monomials(n)]
            surjective &= _span_rank(found, ring.betti(n)) == ring.betti(n)
        checks["generated"] = surjective
        checks["hilbert"] = hilbert_ok
        report.candidates.append(CandidateRecord({k: bits(v) for k, v in labels.items()}, checks))
    report.timing["candidates"] = time.perf_counter() - t1
    return report


def _candidate_classes(named: NamedGeneratorSet, report: VerificationReport):
    """Candidate tuples to evaluate extra claims on: the verified ones, else all."""
    passing = {tuple(sorted(c.labels.items())) for c in report.passing_candidates}
    out = []
    for labels, classes in named.tuples():
        key = tuple(sorted((k, bits(v)) for k, v in labels.items()))
        if not passing or key in passing:
            out.append((labels, classes))
    return out, bool(passing)


def _restriction_check(report, id, reference, morphism, pairs, target, describe) -> CheckRecord:
    """``restrict(morphism, cls) == target`` for the listed candidate classes."""
    seen, ok_any = [], False
    for cls in pairs:
        img = restrict(morphism, cls)
        ok = img == target
        ok_any |= ok
        text = describe(img)
        if text not in seen:
            seen.append(text)
    return report.add(
        CheckRecord(
            id,
            reference,
            {"subgroup": str(morphism.source.spec), "candidates": len(pairs)},
            describe(target),
            " | ".join(seen),
            ok_any,
        )
    )


def subgroup_a_ring(rho: int):
    """Inclusion of ``A = <y^(r/2), z, x>`` with named classes ``w, wz, wx (, cx)`` and a presentation."""
    incl = holomorph_subgroups(rho)["A"]
    a = incl.source
    ring = cohomology_ring(a, 6)
    w, wz, wx = (ring.from_hom(h) for h in abelianization_homs(a))
    classes = {"w": w, "wz": wz, "wx": wx}
    s = a.spec.factors[2].param
    if s == 2:
        pres = RingPresentation.parse("gen w 1\ngen wz 1\ngen wx 1\n", name="A")
    else:
        proj = make_morphism(a, make_group(GroupSpec.cyclic(s)), [(0,), (0,), (1,)], kind="surjection")
        _, cy = cyclic_classes(proj.target, 2)
        classes["cx"] = inflate(proj, cy)
        pres = RingPresentation.parse("gen w 1\ngen wz 1\ngen wx 1\ngen cx 2\nrel wx^2\n", name="A")
    return incl, classes, pres


def _in_image(morphism, target: CohomologyClass) -> bool:
    mat = gf2.BitMatrix.from_dense(pullback_matrix(morphism, target.degree))
    return gf2.solve(mat, gf2.BitVector.from_bits(target.coords)) is not None


def verify_theorem(rho: int, max_degree: int | None = None, cache_dir=None) -> VerificationReport:
    """Holomorph(rho) against its stated presentation, plus restriction claims."""
    max_degree = max_degree or DEFAULT_DEGREE.get(rho, 6)
    t0 = time.perf_counter()
    spec = GroupSpec.holomorph(rho)
    named = canonical_generators(spec, max_degree, cache_dir)
    pres = holomorph_presentation(rho)
    report = verify_presentation(named, pres, max_degree, target="theorem_1_5")
    t1 = time.perf_counter()
    subs = holomorph_subgroups(rho)
    n_incl = subs["N"]
    wy, cy = cyclic_classes(n_incl.source, 4, cache_dir)
    npres = RingPresentation.parse("gen wy 1\ngen cy 2\nrel wy^2\n", name="N")
    ndesc = lambda c: express(c, npres, {"wy": wy, "cy": cy}) or "?"
    tuples, verified = _candidate_classes(named, report)
    scope = "verified candidates" if verified else "all pinned candidates, none verified"
    w3s = [c["w3"] for _, c in tuples]
    c4s = [c["c4"] for _, c in tuples]
    _restriction_check(report, "restrict.N.w1", "w1 restricts to wy on <y>", n_incl, [named["w1"]], wy, ndesc)
    _restriction_check(report, "restrict.N.w3", f"w3 restricts to wy*cy on <y> ({scope})", n_incl, w3s, wy * cy, ndesc)
    _restriction_check(report, "restrict.N.c4", f"c4 restricts to cy^2 on <y> ({scope})", n_incl, c4s, cy * cy, ndesc)

    a_incl, a_classes, a_pres = subgroup_a_ring(rho)
    adesc = lambda c: express(c, a_pres, a_classes) or "?"
    w, wz_a = a_classes["w"], a_classes["wz"]
    for name, expected in (("wz", wz_a), ("wx", a_classes["wx"]), ("w1", wz_a.ring.zero(1))):
        _restriction_check(
            report, f"restrict.A.{name}", f"{name} restricts to {adesc(expected)} on A", a_incl, [named[name]], expected, adesc
        )
    stated = {"w3": wz_a * w * w, "c4": w**4}
    for name, pool in (("w3", w3s), ("c4", c4s)):
        target = stated[name]
        _restriction_check(
            report,
            f"restrict.A.{name}",
            f"{name} restricts to {adesc(target)} on A ({scope})",
            a_incl,
            pool,
            target,
            adesc,
        )
        report.add(
            CheckRecord(
                f"image.A.{name}",
                f"{adesc(target)} lies in the image of restriction to A",
                {"degree": target.degree},
                "in image",
                "in image" if _in_image(a_incl, target) else "not in image",
                _in_image(a_incl, target),
                mandatory=False,
            )
        )

    gx_named = canonical_generators(GroupSpec.metacyclic_gx(rho), 4, cache_dir)
    _restriction_check(
        report,
        "restrict.Gx.w3",
        f"w3 restricts to the pinned w3 of <x, y> ({scope})",
        subs["Gx"],
        w3s,
        gx_named["w3"],
        lambda c: bits(c.coords),
    )

    twisted = holomorph_presentation(rho, twisted=True)
    tw = verify_presentation(named, twisted, max_degree)
    labels = [" ".join(f"{k}={v}" for k, v in c.labels.items()) for c in tw.passing_candidates]
    report.add(
        CheckRecord(
            "supplement.twisted",
            f"presentation with {twisted.format_polynomial(twisted.relations[-1])} = 0 in place of the last relation",
            {"max_degree": max_degree},
            "some candidate passes",
            f"{len(labels)} of {len(tw.candidates)} pass: " + ", ".join(labels),
            bool(labels),
            mandatory=False,
        )
    )
    report.timing["restrictions"] = time.perf_counter() - t1
    report.timing["total"] = time.perf_counter() - t0
    return report


def verify_metacyclic(rho: int = 3, max_degree: int = 8, cache_dir=None) -> VerificationReport:
    named = canonical_generators(GroupSpec.metacyclic_gx(rho), max_degree, cache_dir)
    report = verify_presentation(named, metacyclic_presentation(rho), max_degree, target="prop_2_1_4")
    subs = metacyclic_subgroups(rho)
    wy, cy = cyclic_classes(subs["N"].source, 4, cache_dir)
    desc = lambda c: bits(c.coords)
    _restriction_check(report, "restrict.N.w1", "w1 restricts to wy on <y>", subs["N"], [named["w1"]], wy, desc)
    _restriction_check(report, "restrict.N.w3", "w3 restricts to wy*cy on <y>", subs["N"], [named["w3"]], wy * cy, desc)
    c4s = [c for _, c in named.classes["c4"].candidates()]
    _restriction_check(report, "restrict.N.c4", "c4 restricts to cy^2 on <y>", subs["N"], c4s, cy * cy, desc)
    report.add(
        CheckRecord(
            "unique.w3",
            "vanishing on <x> and restriction to <y> determine w3",
            {},
            "0",
            str(named.classes["w3"].ambiguity_dim),
            named.classes["w3"].ambiguity_dim == 0,
        )
    )
    return report


def verify_dihedral(rho: int = 3, max_degree: int = 8, cache_dir=None) -> VerificationReport:
    named = canonical_generators(GroupSpec.dihedral_gz(rho), max_degree, cache_dir)
    report = verify_presentation(named, dihedral_presentation(), max_degree, target="ring_Gz")
    subs = dihedral_subgroups(rho)
    wy, cy = cyclic_classes(subs["N"].source, 2, cache_dir)
    desc = lambda c: bits(c.coords)
    c2s = [c for _, c in named.classes["c2"].candidates()]
    report.add(
        CheckRecord(
            "restrict.N.c2",
            "every c2 candidate restricts to cy on <y>",
            {"candidates": len(c2s)},
            desc(cy),
            " | ".join(sorted({desc(restrict(subs["N"], c)) for c in c2s})),
            all(restrict(subs["N"], c) == cy for c in c2s),
        )
    )
    _restriction_check(report, "restrict.N.w1", "w1 restricts to wy on <y>", subs["N"], [named["w1"]], wy, desc)
    return report


def verify_inflation(rho: int = 3, cache_dir=None) -> VerificationReport:
    """Inflation along Holomorph(rho + 1) -> Holomorph(rho)."""
    t0 = time.perf_counter()
    quot = holomorph_quotient(rho)
    small = canonical_generators(quot.target.spec, 6, cache_dir)
    big = canonical_generators(quot.source.spec, 4, cache_dir)
    report = VerificationReport("remark_3_9", f"{quot.source.spec} -> {quot.target.spec}", require_candidate=True)
    report.generators = small.certificates()
    desc = lambda c: bits(c.coords)
    for name in ("w1", "wx", "wz"):
        img = inflate(quot, small[name])
        report.add(
            CheckRecord(
                f"inflate.{name}",
                f"{name} inflates to {name}",
                {},
                desc(big[name]),
                desc(img),
                img == big[name],
            )
        )
    img = inflate(quot, small["cx"])
    report.add(CheckRecord("inflate.cx", "cx inflates to zero", {}, "0", desc(img), img.is_zero()))

    stated = holomorph_presentation(rho)
    twisted = holomorph_presentation(rho, twisted=True)
    killed_stated, killed_twisted = [], []
    for labels, classes in small.tuples():
        checks = {
            "w3 inflates to zero": inflate(quot, classes["w3"]).is_zero(),
            "c4 inflates to zero": inflate(quot, classes["c4"]).is_zero(),
        }
        rec = CandidateRecord({k: bits(v) for k, v in labels.items()}, checks)
        report.candidates.append(rec)
        if rec.passed:
            label = " ".join(f"{k}={v}" for k, v in rec.labels.items())
            for pres, sink in ((stated, killed_stated), (twisted, killed_twisted)):
                monos = monomial_classes(classes, pres, 6)
                if all(evaluate(r, monos).is_zero() for r in pres.relations):
                    sink.append(label)
    for id, pres, sink in (
        ("supplement.stated", stated, killed_stated),
        ("supplement.twisted", twisted, killed_twisted),
    ):
        report.add(
            CheckRecord(
                id,
                f"candidates killed by inflation that satisfy every relation of {pres.name}",
                {},
                "at least one",
                f"{len(sink)}: " + ", ".join(sink),
                bool(sink),
                mandatory=False,
            )
        )
    report.timing["total"] = time.perf_counter() - t0
    return report


def run_target(target: str, rho: int | None = None, max_degree: int | None = None, cache_dir=None) -> list[VerificationReport]:
    """Reports for one verification target (``all`` runs every target)."""
    if target == "all":
        out = []
        for t in TARGETS:
            out.extend(run_target(t, rho, max_degree, cache_dir))
        return out
    if target == "theorem_1_5":
        rhos = [rho] if rho else [3, 4]
        return [verify_theorem(r, max_degree, cache_dir) for r in rhos]
    if target == "prop_2_1_4":
        return [verify_metacyclic(rho or 3, max_degree or 8, cache_dir)]
    if target == "ring_Gz":
        return [verify_dihedral(rho or 3, max_degree or 8, cache_dir)]
    if target == "remark_3_9":
        return [verify_inflation(rho or 3, cache_dir)]
    raise ValueError(f"unknown target {target!r}; choose from {', '.join(TARGETS)} or all")
