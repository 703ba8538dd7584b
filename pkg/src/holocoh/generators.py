"""Named multiplicative generators of the supported cohomology rings.

Degree-1 classes come straight from the homomorphisms to Z/2.  Higher
classes that are only determined up to an ambiguity are *pinned*: the set of
classes with prescribed restrictions to some subgroups is an affine space
``base + span(directions)``, and every element of it is a candidate.

Supported families and names:

* holomorph ``<x, y, z>``: ``w1, wx, wz, cx, w3, c4``
* gx ``<x, y>``: ``w1, wx, cx, w3, c4``
* gz ``<y, z>``: ``w1, wz, c2``
* cyclic: ``wy, cy``
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import gf2
from .cohomology import (
    CohomologyClass,
    CohomologyRing,
    ContractError,
    cohomology_ring,
    inflate,
    pullback_matrix,
    restrict,
)
from .groups import (
    Group,
    GroupMorphism,
    GroupSpec,
    abelianization_homs,
    dihedral_subgroups,
    holomorph_subgroups,
    make_group,
    metacyclic_subgroups,
    projection_to_kx,
)

DEGREE_ONE_NAMES = {
    "holomorph": ("w1", "wx", "wz"),
    "gx": ("w1", "wx"),
    "gz": ("w1", "wz"),
    "cyclic": ("wy",),
}


class PinningError(ContractError):
    """No class satisfies the requested restriction constraints."""


@dataclass(frozen=True)
class Constraint:
    """``restrict(morphism, class) == target``."""

    label: str
    morphism: GroupMorphism
    target: CohomologyClass

    def holds(self, cls: CohomologyClass) -> bool:
        return restrict(self.morphism, cls) == self.target


@dataclass(frozen=True)
class PinnedClass:
    """The affine set ``base + span(directions)`` of admissible classes."""

    name: str
    base: CohomologyClass
    directions: tuple[CohomologyClass, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    note: str = ""

    @property
    def degree(self) -> int:
        return self.base.degree

    @property
    def ambiguity_dim(self) -> int:
        return len(self.directions)

    def candidate(self, bits: tuple[int, ...]) -> CohomologyClass:
        cls = self.base
        for b, d in zip(bits, self.directions):
            if b:
                cls = cls + d
        return cls

    def candidates(self) -> Iterator[tuple[tuple[int, ...], CohomologyClass]]:
        for bits in itertools.product((0, 1), repeat=self.ambiguity_dim):
            yield bits, self.candidate(bits)

    def certificate(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "constraints": [c.label for c in self.constraints] or [self.note or "determined outright"],
            "ambiguity_dim": self.ambiguity_dim,
            "base": "".join(map(str, self.base.coords)),
            "directions": ["".join(map(str, d.coords)) for d in self.directions],
        }


@dataclass
class NamedGeneratorSet:
    group: Group
    ring: CohomologyRing
    classes: dict[str, PinnedClass] = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.classes)

    def __getitem__(self, name: str) -> CohomologyClass:
        """The base candidate of ``name``."""
        return self.classes[name].base

    def __contains__(self, name: str) -> bool:
        return name in self.classes

    @property
    def ambiguous(self) -> list[str]:
        return [n for n, p in self.classes.items() if p.ambiguity_dim]

    def tuples(self) -> Iterator[tuple[dict[str, tuple[int, ...]], dict[str, CohomologyClass]]]:
        """Every choice of candidates: ``(labels, classes)`` with labels for ambiguous names."""
        amb = self.ambiguous
        fixed = {n: p.base for n, p in self.classes.items()}
        for choice in itertools.product(*(list(self.classes[n].candidates()) for n in amb)):
            labels = {n: bits for n, (bits, _) in zip(amb, choice)}
            classes = dict(fixed)
            classes.update({n: cls for n, (_, cls) in zip(amb, choice)})
            yield labels, classes

    def certificates(self) -> list[dict]:
        return [p.certificate() for p in self.classes.values()]


def pin(ring: CohomologyRing, name: str, degree: int, constraints: list[Constraint]) -> PinnedClass:
    """All degree-``degree`` classes meeting every constraint, as an affine set."""
    if not constraints:
        raise ValueError("pinning needs at least one constraint")
    mats, rhs = [], []
    for c in constraints:
        if c.morphism.target is not ring.group:
            raise ContractError(f"constraint {c.label!r} restricts from another group")
        mats.append(pullback_matrix(c.morphism, degree, ring.cache_dir))
        rhs.extend(c.target.coords)
    system = gf2.BitMatrix.from_dense(np.concatenate(mats))
    sol = gf2.solve(system, gf2.BitVector.from_bits(rhs))
    if sol is None:
        labels = ", ".join(c.label for c in constraints)
        raise PinningError(f"no class of degree {degree} on {ring.group.spec} satisfies: {labels}")
    base = ring.element(degree, sol.to_array())
    dirs = tuple(ring.element(degree, k.to_array()) for k in gf2.kernel_basis(system))
    return PinnedClass(name, base, dirs, tuple(constraints))


def _fixed(name: str, cls: CohomologyClass, note: str) -> PinnedClass:
    return PinnedClass(name, cls, (), (), note)


def cyclic_classes(group: Group, degree: int = 2, cache_dir=None) -> tuple[CohomologyClass, CohomologyClass]:
    """``(wy, cy)`` for a cyclic 2-group: the nonzero classes of degrees 1 and 2."""
    if group.spec.family != "cyclic":
        raise ContractError(f"{group.spec} is not cyclic")
    ring = cohomology_ring(group, max(degree, 2), cache_dir)
    (hom,) = abelianization_homs(group)
    return ring.from_hom(hom), ring.basis(2)[0]


def _kx_class(spec: GroupSpec, cache_dir) -> CohomologyClass:
    proj = projection_to_kx(spec)
    _, c = cyclic_classes(proj.target, 2, cache_dir)
    return inflate(proj, c)


def canonical_generators(group: Group | GroupSpec, degree: int = 4, cache_dir=None) -> NamedGeneratorSet:
    """Named generators of ``H*(G)`` with their pinning certificates.

    ``w3`` and ``c4`` on the holomorph (and on ``Gx``) are pinned by vanishing
    on a complement of ``N = <y>`` and by their restriction to ``N``; ``cx``
    is inflated from the quotient ``<x>``; ``c2`` on ``Gz`` is pinned by its
    restrictions to ``<y>`` and ``<z>``.
    """
    if isinstance(group, GroupSpec):
        group = make_group(group)
    spec = group.spec
    family = spec.family
    if family not in DEGREE_ONE_NAMES:
        raise ContractError(f"no named generators for {spec}")
    if family != "cyclic" and spec.rho < 3:
        raise ContractError("named generators are defined for rho >= 3")
    ring = cohomology_ring(group, max(degree, 4), cache_dir)
    out = NamedGeneratorSet(group, ring)
    homs = abelianization_homs(group)
    for name, hom in zip(DEGREE_ONE_NAMES[family], homs):
        out.classes[name] = _fixed(name, ring.from_hom(hom), "homomorphism to Z/2")

    if family == "cyclic":
        wy, cy = cyclic_classes(group, degree, cache_dir)
        out.classes["cy"] = _fixed("cy", cy, "unique nonzero degree-2 class")
        return out

    rho = spec.rho
    if family == "gz":
        subs = dihedral_subgroups(rho)
        _, cy = cyclic_classes(subs["N"].source, 2, cache_dir)
        zero = cohomology_ring(subs["Kz"].source, 2, cache_dir).zero(2)
        out.classes["c2"] = pin(
            ring,
            "c2",
            2,
            [Constraint("restricts to cy on <y>", subs["N"], cy), Constraint("vanishes on <z>", subs["Kz"], zero)],
        )
        return out

    out.classes["cx"] = _fixed("cx", _kx_class(spec, cache_dir), "inflated from the quotient <x>")
    if family == "holomorph":
        subs = holomorph_subgroups(rho)
        comp, comp_label = subs["xz"], "<x, z>"
    else:
        subs = metacyclic_subgroups(rho)
        comp, comp_label = subs["Kx"], "<x>"
    wy, cy = cyclic_classes(subs["N"].source, 4, cache_dir)
    comp_ring = cohomology_ring(comp.source, 4, cache_dir)
    out.classes["w3"] = pin(
        ring,
        "w3",
        3,
        [
            Constraint(f"vanishes on {comp_label}", comp, comp_ring.zero(3)),
            Constraint("restricts to wy*cy on <y>", subs["N"], wy * cy),
        ],
    )
    out.classes["c4"] = pin(
        ring,
        "c4",
        4,
        [
            Constraint(f"vanishes on {comp_label}", comp, comp_ring.zero(4)),
            Constraint("restricts to cy^2 on <y>", subs["N"], cy * cy),
        ],
    )
    return out
