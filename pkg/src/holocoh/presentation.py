"""Graded commutative GF(2)-algebras given by generators and relations.

This is the independent side of every Hilbert-series comparison: it knows
nothing about groups or resolutions, only monomials and linear algebra on
one degree slice at a time.

Text format, one item per line (``#`` starts a comment)::

    gen w1 1
    gen c4 4
    rel w1^2 + wz*w1

A relation line lists monomials joined by ``+`` and means that their sum is
zero.  ``lhs = rhs`` is accepted as shorthand for ``lhs + rhs``.  The
monomial ``1`` denotes the unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from . import gf2

Monomial = tuple[int, ...]
Polynomial = frozenset  # of Monomial

MAX_SLICE_MONOMIALS = 200_000
CORPUS = (
    "theorem_1_5_rho3",
    "theorem_1_5_rho4plus",
    "prop_2_1_4",
    "prop_2_1_4_rho4plus",
    "ring_Gz",
    "ring_cyclic2",
    "ring_cyclic2k",
    "holomorph_twisted_rho3",
    "holomorph_twisted_rho4plus",
)


class PresentationError(ValueError):
    """Malformed presentation text or an inhomogeneous relation."""


class ResourceError(RuntimeError):
    """A degree slice would be too large to enumerate."""


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RingPresentation:
    generators: tuple[tuple[str, int], ...]
    relations: tuple[Polynomial, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        for g, d in self.generators:
            if not _NAME.match(g):
                raise PresentationError(f"bad generator name {g!r}")
            if d < 1:
                raise PresentationError(f"generator {g} must have positive degree")
        for rel in self.relations:
            degs = {self.degree_of(m) for m in rel}
            if len(degs) > 1:
                raise PresentationError(f"relation {self.format_polynomial(rel)} is not homogeneous")
            for m in rel:
                if len(m) != len(self.generators):
                    raise PresentationError("monomial length does not match generator count")

    @property
    def names(self) -> list[str]:
        return [g for g, _ in self.generators]

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.generators]

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def relation_degree(self, rel: Polynomial) -> int | None:
        for m in rel:
            return self.degree_of(m)
        return None

    def with_relations(self, extra: Iterable[Polynomial]) -> RingPresentation:
        return RingPresentation(self.generators, self.relations + tuple(extra), self.name)

    # ------------------------------------------------------------------
    # degree slices

    def monomials(self, n: int) -> list[Monomial]:
        """All monomials of degree ``n``, ascending in lexicographic order."""
        return list(_monomials(tuple(self.degrees), n))

    def _ideal_slice(self, n: int, index: dict[Monomial, int]) -> gf2.BitMatrix:
        rows = []
        for rel in self.relations:
            d = self.relation_degree(rel)
            if d is None or d > n:
                continue
            for m in _monomials(tuple(self.degrees), n - d):
                row = np.zeros(len(index), dtype=np.uint8)
                for r in rel:
                    row[index[tuple(a + b for a, b in zip(m, r))]] ^= 1
                rows.append(row)
        if not rows:
            return gf2.BitMatrix(0, len(index))
        return gf2.BitMatrix.from_dense(np.array(rows))

    def dimension(self, n: int) -> int:
        """Dimension of the degree-``n`` part of the quotient ring."""
        monos = self._checked_monomials(n)
        if not monos:
            return 0
        index = {m: i for i, m in enumerate(monos)}
        return len(monos) - gf2.rank(self._ideal_slice(n, index))

    def monomial_basis(self, n: int) -> list[Monomial]:
        """Monomials of degree ``n`` whose residues form a basis.

        Monomials are taken greedily from the lowest in lexicographic order,
        keeping each one that is independent of the ideal slice together with
        the monomials before it.  The result is the set of standard monomials
        for the order in which the first declared generator is largest.
        """
        monos = self._checked_monomials(n)
        if not monos:
            return []
        # monomial k is redundant iff some ideal element has highest term k;
        # those are the pivots of the slice with its columns reversed
        rev = {m: len(monos) - 1 - i for i, m in enumerate(monos)}
        _, piv = gf2.rref(self._ideal_slice(n, rev))
        leading = {len(monos) - 1 - c for c in piv}
        return [m for i, m in enumerate(monos) if i not in leading]

    def hilbert(self, max_degree: int) -> list[int]:
        return [self.dimension(n) for n in range(max_degree + 1)]

    def _checked_monomials(self, n: int) -> list[Monomial]:
        if n < 0:
            return []
        count = _count_monomials(tuple(self.degrees), n)
        if count > MAX_SLICE_MONOMIALS:
            raise ResourceError(f"degree {n} has {count} monomials (limit {MAX_SLICE_MONOMIALS})")
        return self.monomials(n)

    # ------------------------------------------------------------------
    # text form

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def format_polynomial(self, poly: Polynomial) -> str:
        if not poly:
            return "0"
        return " + ".join(self.format_monomial(m) for m in sorted(poly, reverse=True))

    def to_text(self) -> str:
        lines = [f"gen {g} {d}" for g, d in self.generators]
        lines += [f"rel {self.format_polynomial(r)}" for r in self.relations]
        return "\n".join(lines) + "\n"

    def parse_monomial(self, text: str) -> Monomial:
        return _parse_monomial(text, {g: i for i, g in enumerate(self.names)})

    def parse_polynomial(self, text: str) -> Polynomial:
        return _parse_polynomial(text, {g: i for i, g in enumerate(self.names)})

    @classmethod
    def parse(cls, text: str, name: str = "") -> RingPresentation:
        gens: list[tuple[str, int]] = []
        rel_lines: list[tuple[int, str]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "gen":
                parts = rest.split()
                if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                    raise PresentationError(f"line {lineno}: expected 'gen <name> <degree>'")
                gens.append((parts[0], int(parts[1])))
            elif head == "rel":
                rel_lines.append((lineno, rest))
            else:
                raise PresentationError(f"line {lineno}: unknown directive {head!r}")
        index = {g: i for i, (g, _) in enumerate(gens)}
        rels = []
        for lineno, body in rel_lines:
            try:
                rels.append(_parse_polynomial(body, index))
            except PresentationError as exc:
                raise PresentationError(f"line {lineno}: {exc}") from None
        return cls(tuple(gens), tuple(rels), name)

    @classmethod
    def from_file(cls, path: str | Path) -> RingPresentation:
        path = Path(path)
        return cls.parse(path.read_text(), name=path.stem)


def _parse_monomial(text: str, index: dict[str, int]) -> Monomial:
    exps = [0] * len(index)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        factor = factor.strip()
        base, _, power = factor.partition("^")
        base = base.strip()
        if base not in index:
            raise PresentationError(f"unknown generator {base!r}")
        try:
            e = int(power) if power else 1
        except ValueError:
            raise PresentationError(f"bad exponent in {factor!r}") from None
        if e < 0:
            raise PresentationError(f"negative exponent in {factor!r}")
        exps[index[base]] += e
    return tuple(exps)


def _parse_polynomial(text: str, index: dict[str, int]) -> Polynomial:
    terms: set[Monomial] = set()
    for side in text.split("="):
        for piece in side.split("+"):
            piece = piece.strip()
            if not piece:
                raise PresentationError(f"empty term in {text!r}")
            if piece == "0":
                continue
            terms ^= {_parse_monomial(piece, index)}
    return frozenset(terms)


@lru_cache(maxsize=None)
def _monomials(degrees: tuple[int, ...], n: int) -> tuple[Monomial, ...]:
    if n < 0:
        return ()
    if not degrees:
        return ((),) if n == 0 else ()
    # first exponent ascending gives ascending lexicographic order
    out = []
    for e in range(n // degrees[0] + 1):
        for rest in _monomials(degrees[1:], n - e * degrees[0]):
            out.append((e,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _count_monomials(degrees: tuple[int, ...], n: int) -> int:
    if n < 0:
        return 0
    if not degrees:
        return 1 if n == 0 else 0
    return sum(_count_monomials(degrees[1:], n - e * degrees[0]) for e in range(n // degrees[0] + 1))


def load_corpus(name: str) -> RingPresentation:
    """Load one of the shipped presentations by name (see ``CORPUS``)."""
    if name not in CORPUS:
        raise KeyError(f"unknown presentation {name!r}; shipped: {', '.join(CORPUS)}")
    text = resources.files("holocoh").joinpath("data", f"{name}.pres").read_text()
    return RingPresentation.parse(text, name=name)


def holomorph_presentation(rho: int, twisted: bool = False) -> RingPresentation:
    """Presentation of H*(holomorph of Z/2^rho) for rho >= 3.

    The coefficient of the relation ``wx^2 = (s/2) cx`` is ``s/2 mod 2``
    with ``s = 2^(rho-2)``, so it is 1 only for rho = 3.  With ``twisted``
    the last relation gains the term ``wz*w3*cx``; that variant is the one
    the computed rings satisfy (see the README).
    """
    if rho < 3:
        raise ValueError("the holomorph ring is presented for rho >= 3")
    wx2 = "wx^2 + cx" if (2 ** (rho - 3)) % 2 else "wx^2"
    w3sq = "w3^2 + wz*w1*c4 + wz^2*c4" + (" + wz*w3*cx" if twisted else "")
    suffix = "rho3" if rho == 3 else "rho4plus"
    name = f"holomorph_twisted_{suffix}" if twisted else f"theorem_1_5_{suffix}"
    text = f"""
gen w1 1
gen wx 1
gen wz 1
gen cx 2
gen w3 3
gen c4 4
rel w1*w3
rel cx*w1
rel {wx2}
rel w1^2 + wz*w1
rel {w3sq}
"""
    return RingPresentation.parse(text, name=name)


def metacyclic_presentation(rho: int) -> RingPresentation:
    """Presentation of H*(<x, y | y^r, x^s, x y x^-1 = y^5>) for rho >= 3."""
    if rho < 3:
        raise ValueError("the metacyclic ring is presented for rho >= 3")
    wx2 = "wx^2 + cx" if (2 ** (rho - 3)) % 2 else "wx^2"
    text = f"""
gen w1 1
gen wx 1
gen cx 2
gen w3 3
gen c4 4
rel w1*w3
rel cx*w1
rel {wx2}
rel w1^2
rel w3^2
"""
    return RingPresentation.parse(text, name="prop_2_1_4" if rho == 3 else "prop_2_1_4_rho4plus")


def dihedral_presentation() -> RingPresentation:
    return RingPresentation.parse("gen w1 1\ngen wz 1\ngen c2 2\nrel w1^2 + w1*wz\n", name="ring_Gz")


def cyclic_presentation(order: int) -> RingPresentation:
    """H*(Z/order) for a 2-power order: F2[w] when order is 2, else w^2 = 0 beside c."""
    if order < 2 or order & (order - 1):
        raise ValueError("order must be a power of 2, at least 2")
    if order == 2:
        return RingPresentation.parse("gen wy 1\n", name="ring_cyclic2")
    return RingPresentation.parse("gen wy 1\ngen cy 2\nrel wy^2\n", name="ring_cyclic2k")
