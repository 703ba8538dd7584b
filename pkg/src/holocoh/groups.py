"""Finite 2-groups given by the presentations used in this package.

Families
--------
``cyclic(n)``
    ``<y | y^n>``.
``holomorph(rho)``
    ``<x, y, z | y^r, x^s, x y x^-1 = y^5, z y z^-1 = y^-1, [x, z], z^2>``
    with ``r = 2^rho`` and ``s = 2^(rho-2)``: the holomorph of ``Z/r``.
``metacyclic_gx(rho)``
    The subgroup ``<x, y>`` of the holomorph.
``dihedral_gz(rho)``
    The subgroup ``<y, z>`` of the holomorph, dihedral of order ``2r``.
``product(*factors)``
    Direct product; generators are the factors' generators in order.

Elements are tuples of reduced exponents.  For the holomorph family the
tuple ``(a, b, c)`` stands for ``y^a x^b z^c``, and

    (y^a x^b z^c)(y^d x^e z^f) = y^(a + 5^b (-1)^c d) x^(b+e) z^(c+f).

Elements are enumerated in lexicographic order of their exponent tuples;
that order fixes the coordinates of the group algebra everywhere else.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from . import gf2

ELEMENT_ORDER_VERSION = 1
ACTION = 5

Element = tuple
Word = tuple  # of (generator index, exponent) pairs


class GroupSpecError(ValueError):
    """Parameters that do not describe a supported 2-group."""


class MorphismError(ValueError):
    """Generator images that do not define the requested morphism."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class GroupSpec:
    family: str
    param: int = 0
    factors: tuple[GroupSpec, ...] = ()

    FAMILIES = ("cyclic", "holomorph", "gx", "gz", "product")

    @classmethod
    def cyclic(cls, order: int) -> GroupSpec:
        return cls("cyclic", order)

    @classmethod
    def holomorph(cls, rho: int) -> GroupSpec:
        return cls("holomorph", rho)

    @classmethod
    def metacyclic_gx(cls, rho: int) -> GroupSpec:
        return cls("gx", rho)

    @classmethod
    def dihedral_gz(cls, rho: int) -> GroupSpec:
        return cls("gz", rho)

    @classmethod
    def product(cls, *factors: GroupSpec) -> GroupSpec:
        return cls("product", 0, tuple(factors))

    @property
    def rho(self) -> int:
        if self.family in ("holomorph", "gx", "gz"):
            return self.param
        raise AttributeError(f"{self.family} groups have no rho")

    @property
    def r(self) -> int:
        return 2**self.rho

    @property
    def s(self) -> int:
        return 2 ** max(self.rho - 2, 0)

    @property
    def t(self) -> int:
        return ACTION

    @property
    def key(self) -> str:
        """Stable string key, used for caching and reports."""
        if self.family == "product":
            return "product(" + ",".join(f.key for f in self.factors) + ")"
        return f"{self.family}-{self.param}"

    def validate(self) -> None:
        if self.family not in self.FAMILIES:
            raise GroupSpecError(f"unknown family {self.family!r}")
        if self.family == "cyclic":
            if not _is_power_of_two(self.param):
                raise GroupSpecError(f"cyclic order {self.param} is not a power of 2")
        elif self.family == "holomorph":
            if self.param < 2:
                raise GroupSpecError(f"holomorph needs rho >= 2, got {self.param}")
        elif self.family in ("gx", "gz"):
            if self.param < 3:
                raise GroupSpecError(f"{self.family} needs rho >= 3, got {self.param}")
        else:
            if not self.factors:
                raise GroupSpecError("direct product needs at least one factor")
            for f in self.factors:
                f.validate()

    def __str__(self) -> str:
        names = {"cyclic": "Cyclic", "holomorph": "Holomorph", "gx": "MetacyclicGx", "gz": "DihedralGz"}
        if self.family == "product":
            return "DirectProduct(" + ", ".join(str(f) for f in self.factors) + ")"
        return f"{names[self.family]}({self.param})"


class Group:
    """A finite group with a fixed element enumeration and multiplication table."""

    def __init__(
        self,
        spec: GroupSpec,
        moduli: Sequence[int],
        multiply: Callable[[np.ndarray, np.ndarray], np.ndarray],
        generators: Sequence[tuple[str, Element]],
        relations: Sequence[tuple[str, Word]],
    ):
        self.spec = spec
        self.moduli = tuple(moduli)
        self.elements: list[Element] = [tuple(e) for e in itertools.product(*(range(m) for m in moduli))]
        self._index = {g: i for i, g in enumerate(self.elements)}
        self.generator_names = tuple(n for n, _ in generators)
        self.generators = tuple(tuple(g) for _, g in generators)
        self.relations = tuple(relations)

        ex = np.array(self.elements, dtype=np.int64).reshape(len(self.elements), -1)
        n = len(self.elements)
        left = np.repeat(ex, n, axis=0)
        right = np.tile(ex, (n, 1))
        prod = multiply(left, right)
        weights = np.array([int(np.prod(self.moduli[i + 1 :])) for i in range(len(self.moduli))], dtype=np.int64)
        self.table = (prod @ weights).reshape(n, n)
        self.identity_index = 0
        self.inverse_table = np.argmax(self.table == 0, axis=1)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return self.elements[0]

    def __repr__(self) -> str:
        return f"<Group {self.spec} of order {self.order}>"

    def index(self, g: Element) -> int:
        try:
            return self._index[tuple(g)]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of {self.spec}") from None

    def mul(self, g: Element, h: Element) -> Element:
        return self.elements[self.table[self.index(g), self.index(h)]]

    def inverse(self, g: Element) -> Element:
        return self.elements[self.inverse_table[self.index(g)]]

    def power(self, g: Element, k: int) -> Element:
        i = self.index(g)
        if k < 0:
            i, k = int(self.inverse_table[i]), -k
        acc = 0
        while k:
            if k & 1:
                acc = self.table[acc, i]
            i = self.table[i, i]
            k >>= 1
        return self.elements[acc]

    def element_order(self, g: Element) -> int:
        i = self.index(g)
        acc, k = i, 1
        while acc != 0:
            acc = self.table[acc, i]
            k += 1
        return k

    def generator(self, name: str) -> Element:
        return self.generators[self.generator_names.index(name)]

    def word(self, g: Element) -> Word:
        """A word in the generators equal to ``g`` (its normal form)."""
        return tuple((i, e) for i, e in enumerate(self._exponents(g)) if e)

    def _exponents(self, g: Element) -> tuple[int, ...]:
        # every family lists one generator per coordinate, in coordinate order
        return tuple(g)

    def evaluate(self, word: Word, images: Sequence[Element] | None = None, target: Group | None = None) -> Element:
        """Evaluate a word, optionally substituting generator images in ``target``."""
        grp = self if target is None else target
        imgs = self.generators if images is None else images
        acc = grp.identity
        for gi, e in word:
            acc = grp.mul(acc, grp.power(imgs[gi], e))
        return acc

    @cached_property
    def left_shift(self) -> np.ndarray:
        """``left_shift[h, g]`` is the index of ``h^-1 g``."""
        return self.table[self.inverse_table]

    @cached_property
    def right_div(self) -> np.ndarray:
        """``right_div[g, h]`` is the index of ``g h^-1``."""
        return self.table[:, self.inverse_table]

    def check_axioms(self) -> None:
        t = self.table
        n = self.order
        if not (np.sort(t, axis=1) == np.arange(n)).all():
            raise AssertionError("multiplication table rows are not permutations")
        if not (t[0] == np.arange(n)).all() or not (t[:, 0] == np.arange(n)).all():
            raise AssertionError("element 0 is not the identity")
        # (gh)k == g(hk) for all triples
        if not (t[t, :] == t[:, t]).all():
            raise AssertionError("multiplication is not associative")


def _cyclic_group(spec: GroupSpec, order: int) -> Group:
    return Group(spec, (order,), lambda a, b: (a + b) % order, [("y", (1,))], [(f"y^{order}", ((0, order),))])


def _semidirect(spec: GroupSpec, rho: int, use_x: bool, use_z: bool) -> Group:
    r = 2**rho
    s = 2 ** max(rho - 2, 0) if use_x else 1
    zmod = 2 if use_z else 1
    pow5 = np.array([pow(ACTION, b, r) for b in range(s)], dtype=np.int64)
    sign = np.array([1, -1], dtype=np.int64)

    cols = ["y"] + (["x"] if use_x else []) + (["z"] if use_z else [])

    def split(arr):
        a = arr[:, 0]
        b = arr[:, cols.index("x")] if use_x else np.zeros_like(a)
        c = arr[:, cols.index("z")] if use_z else np.zeros_like(a)
        return a, b, c

    def multiply(lhs, rhs):
        a, b, c = split(lhs)
        d, e, f = split(rhs)
        out = [(a + pow5[b] * sign[c] * d) % r]
        if use_x:
            out.append((b + e) % s)
        if use_z:
            out.append((c + f) % 2)
        return np.stack(out, axis=1)

    moduli = [r] + ([s] if use_x else []) + ([zmod] if use_z else [])
    has_x = use_x and s > 1

    def elem(**kw):
        return tuple(kw.get(c, 0) for c in cols)

    # word letters index generators, which skip a trivial x coordinate
    gens = [("y", elem(y=1))]
    iy = 0
    if has_x:
        ix = len(gens)
        gens.append(("x", elem(x=1)))
    if use_z:
        iz = len(gens)
        gens.append(("z", elem(z=1)))
    rels: list[tuple[str, Word]] = [(f"y^{r}", ((iy, r),))]
    if has_x:
        rels.append((f"x^{s}", ((ix, s),)))
        rels.append(("x y x^-1 = y^5", ((ix, 1), (iy, 1), (ix, -1), (iy, -ACTION))))
    if use_z:
        rels.append(("z y z^-1 = y^-1", ((iz, 1), (iy, 1), (iz, -1), (iy, 1))))
        if has_x:
            rels.append(("[x, z] = 1", ((ix, 1), (iz, 1), (ix, -1), (iz, -1))))
        rels.append(("z^2", ((iz, 2),)))
    grp = Group(spec, moduli, multiply, gens, rels)
    if use_x and not has_x:
        # rho = 2: the x coordinate is identically 0, so drop it from words
        xcol = cols.index("x")
        grp._exponents = lambda g: tuple(v for i, v in enumerate(g) if i != xcol)  # type: ignore[method-assign]
    return grp


def _product_group(spec: GroupSpec) -> Group:
    parts = [make_group(f) for f in spec.factors]
    widths = [len(p.moduli) for p in parts]
    offsets = np.cumsum([0] + widths)
    moduli = [m for p in parts for m in p.moduli]

    def multiply(lhs, rhs):
        out = []
        for p, lo, hi in zip(parts, offsets[:-1], offsets[1:]):
            li = _encode(p, lhs[:, lo:hi])
            ri = _encode(p, rhs[:, lo:hi])
            out.append(np.array(p.elements, dtype=np.int64).reshape(p.order, -1)[p.table[li, ri]])
        return np.concatenate(out, axis=1)

    gens = []
    gen_owner = []
    for k, (p, lo) in enumerate(zip(parts, offsets[:-1])):
        for name, g in zip(p.generator_names, p.generators):
            full = [0] * len(moduli)
            full[lo : lo + len(g)] = g
            gens.append((f"{name}{k}", tuple(full)))
            gen_owner.append(k)
    rels: list[tuple[str, Word]] = []
    gstart = np.cumsum([0] + [len(p.generators) for p in parts])
    for k, p in enumerate(parts):
        for name, word in p.relations:
            rels.append((f"{name} [factor {k}]", tuple((gstart[k] + i, e) for i, e in word)))
    names = [n for n, _ in gens]
    for i, j in itertools.combinations(range(len(gens)), 2):
        if gen_owner[i] != gen_owner[j]:
            rels.append((f"[{names[i]}, {names[j]}] = 1", ((i, 1), (j, 1), (i, -1), (j, -1))))
    grp = Group(spec, moduli, multiply, gens, rels)

    def exponents(g):
        out = []
        for p, lo, hi in zip(parts, offsets[:-1], offsets[1:]):
            out.extend(p._exponents(tuple(g[lo:hi])))
        return tuple(out)

    grp._exponents = exponents  # type: ignore[method-assign]
    return grp


def _encode(p: Group, arr: np.ndarray) -> np.ndarray:
    weights = np.array([int(np.prod(p.moduli[i + 1 :])) for i in range(len(p.moduli))], dtype=np.int64)
    return arr @ weights


_GROUPS: dict[GroupSpec, Group] = {}


def make_group(spec: GroupSpec) -> Group:
    """Construct (or fetch the already constructed) group for ``spec``."""
    spec.validate()
    if spec in _GROUPS:
        return _GROUPS[spec]
    if spec.family == "cyclic":
        grp = _cyclic_group(spec, spec.param)
    elif spec.family == "holomorph":
        grp = _semidirect(spec, spec.param, use_x=True, use_z=True)
    elif spec.family == "gx":
        grp = _semidirect(spec, spec.param, use_x=True, use_z=False)
    elif spec.family == "gz":
        grp = _semidirect(spec, spec.param, use_x=False, use_z=True)
    else:
        grp = _product_group(spec)
    if not _is_power_of_two(grp.order):
        raise GroupSpecError(f"{spec} has order {grp.order}, not a power of 2")
    _GROUPS[spec] = grp
    return grp


def mul(group: Group, g: Element, h: Element) -> Element:
    return group.mul(g, h)


class GroupMorphism:
    """A homomorphism determined by the images of the source generators."""

    def __init__(self, source: Group, target: Group, images: Sequence[Element]):
        self.source = source
        self.target = target
        self.images = tuple(tuple(target.elements[target.index(g)]) for g in images)
        self.element_map = np.array(
            [target.index(source.evaluate(source.word(g), self.images, target)) for g in source.elements],
            dtype=np.int64,
        )
        self.is_injective = len(set(self.element_map.tolist())) == source.order
        self.is_surjective = len(set(self.element_map.tolist())) == target.order

    @property
    def kind(self) -> str:
        if self.is_injective and self.is_surjective:
            return "isomorphism"
        if self.is_injective:
            return "inclusion"
        if self.is_surjective:
            return "surjection"
        return "general"

    def __call__(self, g: Element) -> Element:
        return self.target.elements[self.element_map[self.source.index(g)]]

    def image_order(self) -> int:
        return len(set(self.element_map.tolist()))

    def compose(self, first: GroupMorphism) -> GroupMorphism:
        """``self`` after ``first``."""
        if first.target is not self.source:
            raise MorphismError("composition of non-matching morphisms")
        return GroupMorphism(first.source, self.target, [self(g) for g in first.images])

    def __repr__(self) -> str:
        return f"<{self.kind} {self.source.spec} -> {self.target.spec}>"


def make_morphism(
    source: Group,
    target: Group,
    images: Mapping[str, Element] | Sequence[Element],
    kind: str | None = None,
) -> GroupMorphism:
    """Build the morphism sending the source generators to ``images``.

    Every defining relation of the source is evaluated on the images and
    must give the identity.  When ``kind`` is given ("inclusion",
    "surjection" or "isomorphism") the resulting map must also have that
    injectivity/surjectivity.
    """
    if isinstance(images, Mapping):
        unknown = set(images) - set(source.generator_names)
        if unknown:
            raise MorphismError(f"unknown source generators: {sorted(unknown)}")
        missing = [n for n in source.generator_names if n not in images]
        if missing:
            raise MorphismError(f"no image given for generators {missing}")
        imgs = [images[n] for n in source.generator_names]
    else:
        imgs = list(images)
        if len(imgs) != len(source.generators):
            raise MorphismError(f"expected {len(source.generators)} images, got {len(imgs)}")
    try:
        imgs = [target.elements[target.index(g)] for g in imgs]
    except ValueError as exc:
        raise MorphismError(str(exc)) from None
    for name, word in source.relations:
        if source.evaluate(word, imgs, target) != target.identity:
            raise MorphismError(f"relation {name} does not hold for the given images")
    m = GroupMorphism(source, target, imgs)
    if kind is not None:
        need_inj = kind in ("inclusion", "isomorphism")
        need_surj = kind in ("surjection", "isomorphism")
        if kind not in ("inclusion", "surjection", "isomorphism", "general"):
            raise ValueError(f"unknown morphism kind {kind!r}")
        if need_inj and not m.is_injective:
            raise MorphismError(f"map is not injective (image has order {m.image_order()} < {source.order})")
        if need_surj and not m.is_surjective:
            raise MorphismError(f"map is not surjective (image has order {m.image_order()} < {target.order})")
    return m


@dataclass(frozen=True)
class Character:
    """A homomorphism ``G -> Z/2``, stored by its values on the generators."""

    group: Group
    values: tuple[int, ...]

    @cached_property
    def table(self) -> np.ndarray:
        vals = np.array(self.values, dtype=np.int64)
        out = np.zeros(self.group.order, dtype=np.uint8)
        for i, g in enumerate(self.group.elements):
            out[i] = sum(e * int(vals[gi]) for gi, e in self.group.word(g)) & 1
        return out

    def __call__(self, g: Element) -> int:
        return int(self.table[self.group.index(g)])

    def is_homomorphism(self) -> bool:
        t = self.table
        return bool(((t[:, None] ^ t[None, :]) == t[self.group.table]).all())

    def compose(self, m: GroupMorphism) -> Character:
        """The character ``self o m`` on ``m.source``."""
        return Character(m.source, tuple(self(g) for g in m.images))


def abelianization_homs(group: Group) -> list[Character]:
    """Basis of ``Hom(G, Z/2)``.

    The basis is the reduced echelon basis of the solution space of the
    relations mod 2, so a group whose relations impose nothing mod 2 gets
    the dual basis of its generators, in generator order.
    """
    ngen = len(group.generators)
    rows = np.zeros((max(len(group.relations), 1), ngen), dtype=np.uint8)
    for k, (_, word) in enumerate(group.relations):
        for gi, e in word:
            rows[k, gi] ^= e & 1
    basis = gf2.kernel_basis(gf2.BitMatrix.from_dense(rows))
    return [Character(group, tuple(int(b) for b in v)) for v in basis]


# ---------------------------------------------------------------------------
# named subgroups and quotients of the holomorph family


def holomorph_subgroups(rho: int) -> dict[str, GroupMorphism]:
    """Inclusions of the distinguished subgroups into ``Holomorph(rho)``.

    Keys: ``N`` = <y>, ``Kx`` = <x>, ``Kz`` = <z>, ``Gx`` = <x, y>,
    ``Gz`` = <y, z>, ``xz`` = <x, z> (as Cyclic(s) x Cyclic(2)) and ``A`` =
    <y^(r/2), z, x> (as Cyclic(2) x Cyclic(2) x Cyclic(s)).
    """
    g = make_group(GroupSpec.holomorph(rho))
    r, s = g.spec.r, g.spec.s
    y, x, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    yh = (r // 2, 0, 0)
    out = {
        "N": make_morphism(make_group(GroupSpec.cyclic(r)), g, [y], kind="inclusion"),
        "Kx": make_morphism(make_group(GroupSpec.cyclic(s)), g, [x], kind="inclusion"),
        "Kz": make_morphism(make_group(GroupSpec.cyclic(2)), g, [z], kind="inclusion"),
        "Gx": make_morphism(make_group(GroupSpec.metacyclic_gx(rho)), g, {"y": y, "x": x}, kind="inclusion"),
        "Gz": make_morphism(make_group(GroupSpec.dihedral_gz(rho)), g, {"y": y, "z": z}, kind="inclusion"),
        "xz": make_morphism(
            make_group(GroupSpec.product(GroupSpec.cyclic(s), GroupSpec.cyclic(2))), g, [x, z], kind="inclusion"
        ),
        "A": make_morphism(
            make_group(GroupSpec.product(GroupSpec.cyclic(2), GroupSpec.cyclic(2), GroupSpec.cyclic(s))),
            g,
            [yh, z, x],
            kind="inclusion",
        ),
    }
    return out


def metacyclic_subgroups(rho: int) -> dict[str, GroupMorphism]:
    """Inclusions ``N`` = <y> and ``Kx`` = <x> into ``MetacyclicGx(rho)``."""
    g = make_group(GroupSpec.metacyclic_gx(rho))
    r, s = g.spec.r, g.spec.s
    return {
        "N": make_morphism(make_group(GroupSpec.cyclic(r)), g, [(1, 0)], kind="inclusion"),
        "Kx": make_morphism(make_group(GroupSpec.cyclic(s)), g, [(0, 1)], kind="inclusion"),
    }


def dihedral_subgroups(rho: int) -> dict[str, GroupMorphism]:
    """Inclusions ``N`` = <y> and ``Kz`` = <z> into ``DihedralGz(rho)``."""
    g = make_group(GroupSpec.dihedral_gz(rho))
    return {
        "N": make_morphism(make_group(GroupSpec.cyclic(g.spec.r)), g, [(1, 0)], kind="inclusion"),
        "Kz": make_morphism(make_group(GroupSpec.cyclic(2)), g, [(0, 1)], kind="inclusion"),
    }


def projection_to_kx(spec: GroupSpec) -> GroupMorphism:
    """The split quotient ``G -> Kx`` killing y (and z), for the holomorph and Gx."""
    g = make_group(spec)
    kx = make_group(GroupSpec.cyclic(spec.s))
    imgs = {"y": (0,), "x": (1,)}
    if spec.family == "holomorph":
        imgs["z"] = (0,)
    elif spec.family != "gx":
        raise GroupSpecError(f"{spec} has no projection to Kx")
    return make_morphism(g, kx, imgs, kind="surjection")


def holomorph_quotient(rho: int) -> GroupMorphism:
    """The surjection ``Holomorph(rho + 1) -> Holomorph(rho)`` induced by ``Z/2r -> Z/r``."""
    big = make_group(GroupSpec.holomorph(rho + 1))
    small = make_group(GroupSpec.holomorph(rho))
    return make_morphism(big, small, {"y": (1, 0, 0), "x": (0, 1, 0), "z": (0, 0, 1)}, kind="surjection")
