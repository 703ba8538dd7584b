"""Minimal free resolutions of the trivial module over F2[G] for 2-groups.

A free module ``P_n = F2[G]^b_n`` is stored in ambient coordinates: a vector
of length ``b_n * |G|`` whose block ``i`` holds the group-algebra coefficient
of the ``i``-th free generator, indexed by the group's element order.  The
differential ``d_n`` is stored as the images of the ``b_n`` free generators,
one packed row each.

``P_1`` always has the generators ``b_g`` with ``d_1(b_g) = g - 1`` for the
group's generators ``g`` in order; higher degrees are produced by the usual
minimal-resolution step (kernel, its radical, a complement).
"""

from __future__ import annotations

import logging
import time

import numpy as np

from . import gf2
from .groups import Group

ALGORITHM_VERSION = 1
MAX_DEGREE = 10
MAX_ORDER = 512

log = logging.getLogger(__name__)


class UnsupportedGroupError(ValueError):
    """The group algebra is not local (the group is not a 2-group)."""


class ResourceError(RuntimeError):
    """A request exceeds the configured degree or group-order bound."""


def act(group: Group, coeffs: np.ndarray, images: np.ndarray) -> np.ndarray:
    """Apply group-algebra coefficients to module elements.

    ``coeffs`` has shape ``(I, J, |G|)`` and ``images`` shape
    ``(A, J, L, |G|)``; the result ``out[a, i] = sum_j coeffs[i, j] * images[a, j]``
    has shape ``(A, I, L, |G|)``.
    """
    ni, nj, ng = coeffs.shape
    na, nj2, nl, ng2 = images.shape
    if nj != nj2 or ng != ng2 or ng != group.order:
        raise ValueError("shape mismatch in group-algebra action")
    if min(ni, nj, na, nl) == 0:
        return np.zeros((na, ni, nl, ng), dtype=np.uint8)
    reg = regular_matrix(group, coeffs)
    rhs = images.transpose(1, 3, 0, 2).reshape(nj * ng, na * nl)
    out = gf2.matmul(reg, rhs).reshape(ni, ng, na, nl)
    return out.transpose(2, 0, 3, 1).copy()


def regular_matrix(group: Group, coeffs: np.ndarray) -> np.ndarray:
    """Matrix of ``v -> (sum_j coeffs[i, j] v_j)_i`` on ambient coordinates.

    Entry ``[(i, g'), (j, g)]`` is the coefficient of ``g' g^-1`` in
    ``coeffs[i, j]``.
    """
    ni, nj, ng = coeffs.shape
    return coeffs[:, :, group.right_div].transpose(0, 2, 1, 3).reshape(ni * ng, nj * ng)


def expand(group: Group, images: np.ndarray) -> np.ndarray:
    """F2-matrix of a module map whose row ``(i, h)`` is ``h`` times image ``i``.

    With this layout ``u @ M`` is the image of the module element ``u``.
    """
    ni, nj, ng = images.shape
    return images[:, :, group.left_shift].transpose(0, 2, 1, 3).reshape(ni * ng, nj * ng)


def translate(group: Group, vectors: np.ndarray, g: int) -> np.ndarray:
    """Left-multiply module elements (last axis indexed by elements) by element ``g``."""
    return vectors[..., group.left_shift[g]]


def augment(vectors: np.ndarray) -> np.ndarray:
    """Apply the augmentation blockwise: ``(..., L, |G|) -> (..., L)``."""
    return (vectors.sum(axis=-1) & 1).astype(np.uint8)


class Resolution:
    """A minimal free resolution, extended lazily one degree at a time."""

    def __init__(self, group: Group, ranks: list[int] | None = None, differentials: list | None = None):
        if group.order & (group.order - 1):
            raise UnsupportedGroupError(f"{group.spec} has order {group.order}, not a power of 2")
        if group.order > MAX_ORDER:
            raise ResourceError(f"group order {group.order} exceeds the bound {MAX_ORDER}")
        self.group = group
        if ranks is None:
            ranks, differentials = [1], [None]
        self.ranks: list[int] = list(ranks)
        self.differentials: list[gf2.BitMatrix | None] = list(differentials)
        self._reductions: dict[int, gf2.RowReduction] = {}
        self._regular: dict[int, np.ndarray] = {}
        self.timings: dict[int, float] = {}

    @property
    def max_degree(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n]

    def dim(self, n: int) -> int:
        """F2-dimension of ``P_n``."""
        return self.ranks[n] * self.group.order

    def images(self, n: int) -> np.ndarray:
        """Images of the free generators of ``P_n``, shape ``(b_n, b_{n-1}, |G|)``."""
        if n < 1:
            raise ValueError("d_0 is the augmentation")
        dense = self.differentials[n].to_dense()
        return dense.reshape(self.ranks[n], self.ranks[n - 1], self.group.order)

    def matrix(self, n: int) -> np.ndarray:
        """Dense F2-matrix of ``d_n``; ``u @ matrix(n)`` is ``d_n(u)``."""
        if n == 0:
            return np.ones((self.group.order, 1), dtype=np.uint8)
        return expand(self.group, self.images(n))

    def reduction(self, n: int) -> gf2.RowReduction:
        if n not in self._reductions:
            self._reductions[n] = gf2.RowReduction(gf2.BitMatrix.from_dense(self.matrix(n)))
        return self._reductions[n]

    def regular(self, n: int) -> np.ndarray:
        """Cached :func:`regular_matrix` of ``d_n`` as float32."""
        if n not in self._regular:
            self._regular[n] = regular_matrix(self.group, self.images(n)).astype(np.float32)
        return self._regular[n]

    def apply(self, n: int, images: np.ndarray) -> np.ndarray:
        """``out[a, i] = images[a] applied to d_n(e_i)``.

        ``images`` has shape ``(A, b_{n-1}, L, |G|)`` and lists where a module
        map sends the generators of ``P_{n-1}``; the result, shape
        ``(A, b_n, L, |G|)``, lists where the composite with ``d_n`` sends the
        generators of ``P_n``.
        """
        na, nj, nl, ng = images.shape
        ni = self.ranks[n]
        if min(na, nl, ni) == 0:
            return np.zeros((na, ni, nl, ng), dtype=np.uint8)
        rhs = images.transpose(1, 3, 0, 2).reshape(nj * ng, na * nl).astype(np.float32)
        out = ((self.regular(n) @ rhs).astype(np.int64) & 1).astype(np.uint8)
        return out.reshape(ni, ng, na, nl).transpose(2, 0, 3, 1).copy()

    def kernel_dim(self, n: int) -> int:
        if n == 0:
            return self.group.order - 1
        return self.reduction(n).nullity

    def solve(self, n: int, targets: np.ndarray) -> np.ndarray:
        """Preimages under ``d_n`` of a batch of elements of ``P_{n-1}``.

        ``targets`` has shape ``(..., b_{n-1} * |G|)``; the result has shape
        ``(..., b_n * |G|)``.  Raises ``ValueError`` if some target is not a
        boundary.
        """
        lead = targets.shape[:-1]
        flat = targets.reshape(-1, targets.shape[-1])
        if flat.shape[0] == 0:
            return np.zeros(lead + (self.dim(n),), dtype=np.uint8)
        return self.reduction(n).solve_left(flat).reshape(lead + (self.dim(n),))

    # ------------------------------------------------------------------

    def extend(self, max_degree: int) -> Resolution:
        if max_degree > MAX_DEGREE:
            raise ResourceError(f"degree {max_degree} exceeds the bound {MAX_DEGREE}")
        while self.max_degree < max_degree:
            t0 = time.perf_counter()
            n = self.max_degree + 1
            imgs = self._first_differential() if n == 1 else self._next_differential(n - 1)
            self.ranks.append(imgs.shape[0])
            self.differentials.append(gf2.BitMatrix.from_dense(imgs.reshape(imgs.shape[0], -1)))
            self.timings[n] = time.perf_counter() - t0
            log.debug("%s: b_%d = %d (%.2fs)", self.group.spec, n, self.ranks[n], self.timings[n])
        return self

    def _first_differential(self) -> np.ndarray:
        g = self.group
        imgs = np.zeros((len(g.generators), 1, g.order), dtype=np.uint8)
        for k, gen in enumerate(g.generators):
            imgs[k, 0, g.index(gen)] ^= 1
            imgs[k, 0, g.identity_index] ^= 1
        return imgs

    def _next_differential(self, n: int) -> np.ndarray:
        """Generators of ``ker d_n`` modulo its radical, as images of ``d_{n+1}``."""
        g = self.group
        kernel = self.reduction(n).left_kernel().to_dense()
        q = kernel.shape[0]
        blocks = kernel.reshape(q, self.ranks[n], g.order)
        radical = np.concatenate(
            [(translate(g, blocks, g.index(gen)) ^ blocks).reshape(q, -1) for gen in g.generators]
        )
        rad_basis, rad_piv = gf2.rref(gf2.BitMatrix.from_dense(radical))
        rad_basis = rad_basis.to_dense()[: len(rad_piv)]
        # canonical representatives of the kernel modulo the radical
        reduced = kernel ^ gf2.matmul(kernel[:, rad_piv], rad_basis) if rad_piv else kernel
        _, chosen = gf2.rref(gf2.BitMatrix.from_dense(reduced.T))
        if len(chosen) != q - len(rad_piv):
            raise AssertionError("complement of the radical has the wrong dimension")
        return kernel[chosen].reshape(len(chosen), self.ranks[n], g.order)

    # ------------------------------------------------------------------

    def check(self) -> dict[str, bool]:
        """Evaluate the structural invariants on every computed degree."""
        g = self.group
        out = {"base": self.ranks[0] == 1}
        dd = True
        for n in range(2, self.max_degree + 1):
            prod = gf2.matmul(self.images(n).reshape(self.ranks[n], -1), self.matrix(n - 1))
            dd &= not prod.any()
        if self.max_degree >= 1:
            dd &= not (augment(self.images(1)).any())
        out["d_squared_zero"] = dd
        exact = True
        for n in range(0, self.max_degree):
            exact &= self.kernel_dim(n) == self.reduction(n + 1).rank
        out["exact"] = exact
        minimal = True
        for n in range(1, self.max_degree + 1):
            minimal &= not augment(self.images(n)).any()
        out["minimal"] = minimal
        out["generators_match"] = self.max_degree < 1 or self.ranks[1] == len(g.generators)
        return out

    def same_as(self, other: Resolution) -> bool:
        if self.ranks != other.ranks:
            return False
        return all(a == b for a, b in zip(self.differentials[1:], other.differentials[1:]))


_RESOLUTIONS: dict = {}


def minimal_resolution(group: Group, max_degree: int, cache_dir=None) -> Resolution:
    """The (shared, lazily extended) minimal resolution of ``group``.

    With ``cache_dir`` set, a persisted resolution is loaded first and the
    result is written back when it had to be extended.
    """
    if max_degree > MAX_DEGREE:
        raise ResourceError(f"degree {max_degree} exceeds the bound {MAX_DEGREE}")
    res = _RESOLUTIONS.get(group.spec)
    if res is None and cache_dir is not None:
        from . import cache

        res = cache.load(cache_dir, group)
    if res is None:
        res = Resolution(group)
    _RESOLUTIONS[group.spec] = res
    before = res.max_degree
    res.extend(max_degree)
    if cache_dir is not None and res.max_degree > before:
        from . import cache

        cache.store(cache_dir, res)
    return res


def betti(group: Group, n: int, cache_dir=None) -> int:
    """``dim H^n(G, F2)``, the rank of ``P_n`` in the minimal resolution."""
    return minimal_resolution(group, n, cache_dir).ranks[n]


def clear_registry() -> None:
    _RESOLUTIONS.clear()
