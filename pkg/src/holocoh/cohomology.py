"""Mod-2 cohomology rings computed from minimal resolutions.

Because the resolution is minimal, every cochain ``P_n -> F2`` is a cocycle
and no two are cohomologous, so ``H^n(G)`` is simply ``F2^b_n``: a class is
the list of its values on the free generators of ``P_n``.

Products are Yoneda composites.  A class ``a`` of degree ``n`` is lifted to
a chain map ``phi_k : P_{n+k} -> P_k`` over the cocycle, and ``a * b`` for
``b`` of degree ``m`` is the cocycle ``b o phi_m``.  Lifts are linear in the
class, so the ring lifts the whole basis of ``H^n`` at once and keeps the
resulting structure constants.

Maps induced by a group homomorphism ``f : H -> G`` (restriction,
inflation) come from a chain map ``P(H) -> P(G)`` over the identity of F2,
built the same way with ``P(G)`` regarded as a complex of ``H``-modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .groups import Character, Group, GroupMorphism
from .resolution import MAX_DEGREE, Resolution, ResourceError, act, augment, minimal_resolution


class ContractError(ValueError):
    """An operation was applied to arguments it is not defined for."""


class LiftError(RuntimeError):
    """A commuting-square system had no solution (the resolution is broken)."""


@dataclass(frozen=True)
class ChainMapLift:
    """Chain map ``phi_k : P_{k+shift} -> P_k`` given by generator images.

    ``components[k]`` has shape ``(b_{k+shift}, b_k, |G|)``.
    """

    shift: int
    components: tuple[np.ndarray, ...]

    @property
    def bound(self) -> int:
        return len(self.components) - 1

    def residual(self, res: Resolution, k: int) -> np.ndarray:
        """``d_k phi_k - phi_{k-1} d_{k+shift}`` on generators; zero for a chain map."""
        n = self.shift
        phi = self.components[k]
        dk = gf2.matmul(phi.reshape(phi.shape[0], -1), res.matrix(k))
        rhs = res.apply(k + n, self.components[k - 1][None])[0]
        return dk ^ rhs.reshape(rhs.shape[0], -1)


class CohomologyClass:
    """An element of ``H^degree(G, F2)`` in the dual basis of the resolution."""

    __slots__ = ("ring", "degree", "coords")

    def __init__(self, ring: CohomologyRing, degree: int, coords: Iterable[int]):
        self.ring = ring
        self.degree = int(degree)
        self.coords = tuple(int(c) & 1 for c in coords)
        if len(self.coords) != ring.betti(self.degree):
            raise ContractError(
                f"degree-{degree} class of {ring.group.spec} needs {ring.betti(degree)} coordinates, "
                f"got {len(self.coords)}"
            )

    @property
    def group(self) -> Group:
        return self.ring.group

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.uint8)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check_same(self, other: CohomologyClass) -> None:
        if not isinstance(other, CohomologyClass) or other.ring is not self.ring:
            raise ContractError("classes belong to different groups")

    def __add__(self, other: CohomologyClass) -> CohomologyClass:
        self._check_same(other)
        if other.degree != self.degree:
            raise ContractError("only classes of equal degree can be added")
        return CohomologyClass(self.ring, self.degree, (a ^ b for a, b in zip(self.coords, other.coords)))

    __sub__ = __add__

    def __mul__(self, other: CohomologyClass) -> CohomologyClass:
        return cup(self, other)

    def __pow__(self, k: int) -> CohomologyClass:
        if k < 0:
            raise ValueError("negative power")
        acc = self.ring.unit()
        for _ in range(k):
            acc = cup(acc, self)
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return other.ring is self.ring and other.degree == self.degree and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((id(self.ring), self.degree, self.coords))

    def __repr__(self) -> str:
        bits = "".join(map(str, self.coords))
        return f"H^{self.degree}({self.ring.group.spec})[{bits}]"


class CohomologyRing:
    """``H*(G, F2)`` with products computed on demand."""

    def __init__(self, group: Group, resolution: Resolution, cache_dir=None):
        self.group = group
        self.resolution = resolution
        self.cache_dir = cache_dir
        self._lifts: dict[int, list[np.ndarray]] = {}
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    def ensure(self, degree: int) -> None:
        if degree > MAX_DEGREE:
            raise ResourceError(f"degree {degree} exceeds the bound {MAX_DEGREE}")
        if self.resolution.max_degree < degree:
            minimal_resolution(self.group, degree, self.cache_dir)

    def betti(self, n: int) -> int:
        self.ensure(n)
        return self.resolution.ranks[n]

    def element(self, degree: int, coords: Iterable[int]) -> CohomologyClass:
        return CohomologyClass(self, degree, coords)

    def zero(self, degree: int) -> CohomologyClass:
        return CohomologyClass(self, degree, [0] * self.betti(degree))

    def unit(self) -> CohomologyClass:
        return CohomologyClass(self, 0, [1])

    def basis(self, degree: int) -> list[CohomologyClass]:
        b = self.betti(degree)
        return [CohomologyClass(self, degree, np.eye(b, dtype=np.uint8)[i]) for i in range(b)]

    def span(self, classes: Sequence[CohomologyClass], degree: int) -> gf2.BitMatrix:
        """Reduced echelon basis of the span of ``classes`` (rows)."""
        rows = np.array([c.coords for c in classes], dtype=np.uint8).reshape(len(classes), self.betti(degree))
        return gf2.row_basis(gf2.BitMatrix.from_dense(rows))

    # ------------------------------------------------------------------
    # lifts and products

    def basis_lift(self, n: int, bound: int) -> list[np.ndarray]:
        """Lifts of all basis classes of ``H^n``: ``out[k]`` has shape ``(b_n, b_{n+k}, b_k, |G|)``."""
        self.ensure(n + bound)
        comps = self._lifts.get(n)
        if comps is None:
            comps = _lift_batch(self.resolution, np.eye(self.betti(n), dtype=np.uint8), n, 0)
            self._lifts[n] = comps
        if len(comps) <= bound:
            comps.extend(_lift_batch(self.resolution, None, n, bound, start=comps)[len(comps) :])
        return comps[: bound + 1]

    def product_table(self, n: int, m: int) -> np.ndarray:
        """Structure constants ``T[a, c, i]``: coordinate ``i`` of ``e_a * e_c`` for bases of ``H^n``, ``H^m``."""
        key = (n, m)
        if key not in self._tables:
            if n + m > MAX_DEGREE:
                raise ResourceError(f"product lands in degree {n + m} > {MAX_DEGREE}")
            phi = self.basis_lift(n, m)[m]
            self._tables[key] = augment(phi).transpose(0, 2, 1).copy()
        return self._tables[key]

    def from_hom(self, phi: Character) -> CohomologyClass:
        return class_from_hom(self, phi)


def _lift_batch(
    res: Resolution,
    coeffs: np.ndarray | None,
    n: int,
    bound: int,
    start: list[np.ndarray] | None = None,
) -> list[np.ndarray]:
    """Lift a batch of degree-``n`` cocycles (rows of ``coeffs``) to chain maps.

    Returns components ``0..bound``; ``start`` may hold already computed
    leading components, which are reused.
    """
    g = res.group
    if start:
        comps = list(start)
        batch = comps[0].shape[0]
    else:
        batch = coeffs.shape[0]
        phi0 = np.zeros((batch, res.ranks[n], 1, g.order), dtype=np.uint8)
        phi0[:, :, 0, g.identity_index] = coeffs
        comps = [phi0]
    if n == 0:
        # the lift of a degree-0 class c is c times the identity chain map
        c = comps[0][:, 0, 0, g.identity_index]
        for k in range(len(comps), bound + 1):
            eye = np.zeros((res.ranks[k], res.ranks[k], g.order), dtype=np.uint8)
            eye[np.arange(res.ranks[k]), np.arange(res.ranks[k]), g.identity_index] = 1
            comps.append(c[:, None, None, None] * eye[None])
        return comps
    for k in range(len(comps), bound + 1):
        rhs = res.apply(k + n, comps[k - 1])
        shape = rhs.shape
        try:
            sol = res.solve(k, rhs.reshape(shape[0], shape[1], -1))
        except ValueError as exc:
            raise LiftError(f"no lift in degree {k} for shift {n}: {exc}") from None
        comps.append(sol.reshape(shape[0], shape[1], res.ranks[k], g.order))
    return comps


def lift(res: Resolution, alpha: CohomologyClass, bound: int) -> ChainMapLift:
    """Chain map over ``alpha`` with components ``0..bound``."""
    n = alpha.degree
    if alpha.ring.resolution is not res:
        raise ContractError("class and resolution belong to different groups")
    if bound + n > MAX_DEGREE:
        raise ResourceError(f"lift would need degree {bound + n} > {MAX_DEGREE}")
    alpha.ring.ensure(n + bound)
    comps = _lift_batch(res, alpha.array()[None], n, bound)
    return ChainMapLift(n, tuple(c[0] for c in comps))


def cup(alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """Cup product: ``beta`` evaluated on the lift of ``alpha``."""
    if not isinstance(beta, CohomologyClass) or beta.ring is not alpha.ring:
        raise ContractError("cup product of classes of different groups")
    ring = alpha.ring
    n, m = alpha.degree, beta.degree
    if n + m > MAX_DEGREE:
        raise ResourceError(f"product lands in degree {n + m} > {MAX_DEGREE}")
    table = ring.product_table(n, m)
    coords = np.einsum("a,c,aci->i", alpha.array().astype(np.int64), beta.array().astype(np.int64), table) & 1
    return CohomologyClass(ring, n + m, coords)


def class_from_hom(ring: CohomologyRing, phi: Character) -> CohomologyClass:
    """The degree-1 class of a homomorphism ``G -> Z/2``.

    ``P_1`` has one generator ``b_g`` per group generator with
    ``d_1(b_g) = g - 1``; the cocycle takes the value ``phi(g)`` on it.
    """
    if phi.group is not ring.group:
        raise ContractError("character of a different group")
    if not phi.is_homomorphism():
        raise ContractError(f"{phi.values} does not define a homomorphism to Z/2")
    return CohomologyClass(ring, 1, phi.values)


# ---------------------------------------------------------------------------
# induced maps


_RINGS: dict = {}


def cohomology_ring(group: Group, degree: int = 0, cache_dir=None) -> CohomologyRing:
    """Shared ring object for ``group`` whose resolution reaches ``degree``."""
    res = minimal_resolution(group, degree, cache_dir)
    ring = _RINGS.get(group.spec)
    if ring is None or ring.resolution is not res:
        ring = CohomologyRing(group, res, cache_dir)
        _RINGS[group.spec] = ring
    return ring


def clear_rings() -> None:
    _RINGS.clear()
    _CHAIN_MAPS.clear()


_CHAIN_MAPS: dict = {}


class InducedChainMap:
    """Chain map ``P(source) -> P(target)`` over the identity, along a homomorphism.

    ``components[k]`` has shape ``(b_k(source), b_k(target), |target|)``.
    """

    def __init__(self, morphism: GroupMorphism, cache_dir=None):
        self.morphism = morphism
        self.source = cohomology_ring(morphism.source, 0, cache_dir)
        self.target = cohomology_ring(morphism.target, 0, cache_dir)
        t = morphism.target
        psi0 = np.zeros((1, 1, t.order), dtype=np.uint8)
        psi0[0, 0, t.identity_index] = 1
        self.components = [psi0]
        self._push = np.zeros((morphism.source.order, t.order), dtype=np.uint8)
        self._push[np.arange(morphism.source.order), morphism.element_map] = 1

    def extend(self, degree: int) -> None:
        self.source.ensure(degree)
        self.target.ensure(degree)
        sres, tres = self.source.resolution, self.target.resolution
        t = self.morphism.target
        for k in range(len(self.components), degree + 1):
            coeffs = sres.images(k)
            pushed = gf2.matmul(coeffs.reshape(-1, coeffs.shape[-1]), self._push)
            pushed = pushed.reshape(coeffs.shape[0], coeffs.shape[1], t.order)
            rhs = act(t, pushed, self.components[k - 1][None])[0]
            try:
                sol = tres.solve(k, rhs.reshape(rhs.shape[0], -1))
            except ValueError as exc:
                raise LiftError(f"no chain map lift in degree {k}: {exc}") from None
            self.components.append(sol.reshape(rhs.shape[0], tres.ranks[k], t.order))

    def matrix(self, degree: int) -> np.ndarray:
        """``M`` with ``f^*(a) = M @ a`` on degree-``degree`` coordinates."""
        self.extend(degree)
        return augment(self.components[degree])


def induced_chain_map(morphism: GroupMorphism, cache_dir=None) -> InducedChainMap:
    key = (morphism.source.spec, morphism.target.spec, morphism.images)
    cm = _CHAIN_MAPS.get(key)
    if cm is None or cm.source.resolution is not cohomology_ring(morphism.source).resolution:
        cm = InducedChainMap(morphism, cache_dir)
        _CHAIN_MAPS[key] = cm
    return cm


def pullback(morphism: GroupMorphism, alpha: CohomologyClass) -> CohomologyClass:
    """``f^*(alpha)`` for any homomorphism ``f`` into ``alpha``'s group."""
    if alpha.group is not morphism.target:
        raise ContractError(f"class lives on {alpha.group.spec}, morphism targets {morphism.target.spec}")
    cm = induced_chain_map(morphism, alpha.ring.cache_dir)
    mat = cm.matrix(alpha.degree)
    coords = (mat.astype(np.int64) @ alpha.array().astype(np.int64)) & 1
    return CohomologyClass(cm.source, alpha.degree, coords)


def pullback_matrix(morphism: GroupMorphism, degree: int, cache_dir=None) -> np.ndarray:
    return induced_chain_map(morphism, cache_dir).matrix(degree)


def restrict(morphism: GroupMorphism, alpha: CohomologyClass) -> CohomologyClass:
    """Restriction along a subgroup inclusion."""
    if not morphism.is_injective:
        raise ContractError(f"restriction needs an inclusion, got a {morphism.kind}")
    return pullback(morphism, alpha)


def inflate(morphism: GroupMorphism, alpha: CohomologyClass) -> CohomologyClass:
    """Inflation along a surjection onto ``alpha``'s group."""
    if not morphism.is_surjective:
        raise ContractError(f"inflation needs a surjection, got a {morphism.kind}")
    return pullback(morphism, alpha)
