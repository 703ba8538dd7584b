from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocoh import gf2
from holocoh.cohomology import (
    ContractError,
    class_from_hom,
    cohomology_ring,
    inflate,
    lift,
    pullback,
    restrict,
)
from holocoh.groups import (
    Character,
    GroupSpec,
    abelianization_homs,
    holomorph_quotient,
    holomorph_subgroups,
    make_group,
    make_morphism,
    metacyclic_subgroups,
    projection_to_kx,
)

C = GroupSpec.cyclic


def ring_of(spec, degree=6):
    return cohomology_ring(make_group(spec), degree)


def degree_one(ring):
    return [ring.from_hom(h) for h in abelianization_homs(ring.group)]


def test_degree_one_convention():
    r = ring_of(GroupSpec.holomorph(3))
    w1, wx, wz = degree_one(r)
    assert w1.coords == (1, 0, 0) and wx.coords == (0, 1, 0) and wz.coords == (0, 0, 1)


def test_zero_hom_gives_zero_class():
    r = ring_of(GroupSpec.holomorph(3))
    assert class_from_hom(r, Character(r.group, (0, 0, 0))).is_zero()


def test_non_homomorphism_rejected():
    r = ring_of(C(4))
    g = make_group(GroupSpec.product(C(2), C(2)))
    with pytest.raises(ContractError):
        class_from_hom(r, Character(g, (1, 0)))


def test_elementary_abelian_is_polynomial():
    # independent oracle: H*((Z/2)^3) = F2[a, b, c]
    r = ring_of(GroupSpec.product(C(2), C(2), C(2)), 6)
    a, b, c = degree_one(r)
    for n in range(7):
        monos = [a**i * b**j * c ** (n - i - j) for i in range(n + 1) for j in range(n + 1 - i)]
        assert len(monos) == comb(n + 2, 2) == r.betti(n)
        mat = gf2.BitMatrix.from_dense(np.array([m.array() for m in monos]))
        assert gf2.rank(mat) == r.betti(n)


def test_cyclic_four():
    r = ring_of(C(4), 6)
    (wy,) = degree_one(r)
    cy = r.basis(2)[0]
    assert (wy * wy).is_zero()
    for k in range(1, 3):
        assert not (cy**k).is_zero()
        assert not (wy * cy**k).is_zero()


def test_cyclic_eight_square_vanishes():
    r = ring_of(C(8), 4)
    (wy,) = degree_one(r)
    assert (wy * wy).is_zero()


def test_cyclic_two_is_polynomial():
    r = ring_of(C(2), 8)
    (w,) = degree_one(r)
    assert all(not (w**n).is_zero() for n in range(9))


def test_dihedral_relation():
    for spec in (GroupSpec.holomorph(2), GroupSpec.dihedral_gz(3)):
        r = ring_of(spec, 4)
        w1, wz = degree_one(r)[0], degree_one(r)[-1]
        assert w1 * w1 == wz * w1


def test_holomorph_degree_two_relation():
    r = ring_of(GroupSpec.holomorph(4), 4)
    w1, wx, wz = degree_one(r)
    assert w1 * w1 == wz * w1
    assert (wx * wx).is_zero()


def test_unit_lift_is_identity():
    r = ring_of(GroupSpec.metacyclic_gx(3), 4)
    phi = lift(r.resolution, r.unit(), 3)
    for k in range(4):
        comp = phi.components[k]
        b = r.resolution.ranks[k]
        expected = np.zeros((b, b, r.group.order), dtype=np.uint8)
        expected[np.arange(b), np.arange(b), r.group.identity_index] = 1
        assert np.array_equal(comp, expected)


@pytest.mark.parametrize("spec", [GroupSpec.holomorph(3), GroupSpec.dihedral_gz(3)], ids=str)
def test_lift_residuals_vanish(spec):
    r = ring_of(spec, 6)
    for cls in r.basis(2) + r.basis(3):
        phi = lift(r.resolution, cls, 3)
        for k in range(1, 4):
            assert not phi.residual(r.resolution, k).any()


def test_zero_class_lifts_to_zero_augmentation():
    r = ring_of(GroupSpec.holomorph(3), 5)
    phi = lift(r.resolution, r.zero(2), 2)
    assert not phi.components[0].sum(axis=-1).any()


def random_class(ring, data, max_degree):
    n = data.draw(st.integers(0, max_degree))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=ring.betti(n), max_size=ring.betti(n)))
    return ring.element(n, bits)


RING_SPECS = [GroupSpec.holomorph(3), GroupSpec.metacyclic_gx(3), GroupSpec.product(C(2), C(4))]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(RING_SPECS), st.data())
def test_cup_ring_axioms(spec, data):
    r = ring_of(spec, 8)
    a = random_class(r, data, 3)
    b = random_class(r, data, 3)
    c = random_class(r, data, 2)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert r.unit() * a == a
    b2 = r.element(b.degree, data.draw(st.lists(st.integers(0, 1), min_size=r.betti(b.degree), max_size=r.betti(b.degree))))
    assert a * (b + b2) == a * b + a * b2


def test_cup_of_different_groups_rejected():
    a = ring_of(C(4)).basis(1)[0]
    b = ring_of(C(8)).basis(1)[0]
    with pytest.raises(ContractError):
        a * b


def generator_classes(ring, extra_degrees=(2, 3)):
    out = degree_one(ring)
    for n in extra_degrees:
        out += ring.basis(n)
    return out


@pytest.mark.parametrize("key", ["N", "Kx", "Gx", "Gz", "xz", "A"])
def test_restriction_is_ring_hom(key):
    m = holomorph_subgroups(3)[key]
    big = cohomology_ring(m.target, 6)
    cohomology_ring(m.source, 6)
    gens = generator_classes(big)
    for a, b in itertools.combinations_with_replacement(gens, 2):
        assert restrict(m, a * b) == restrict(m, a) * restrict(m, b)
    assert restrict(m, big.unit()) == cohomology_ring(m.source).unit()


def test_inflation_is_ring_hom():
    for m in (holomorph_quotient(3), projection_to_kx(GroupSpec.holomorph(3))):
        small = cohomology_ring(m.target, 4)
        cohomology_ring(m.source, 4)
        gens = generator_classes(small, (2,))
        for a, b in itertools.combinations_with_replacement(gens, 2):
            assert inflate(m, a * b) == inflate(m, a) * inflate(m, b)
        assert inflate(m, small.unit()) == cohomology_ring(m.source).unit()


@pytest.mark.parametrize("key", ["N", "Kx", "Kz", "Gx", "Gz", "xz", "A"])
def test_degree_one_restriction_matches_characters(key):
    m = holomorph_subgroups(3)[key]
    big = cohomology_ring(m.target, 2)
    small = cohomology_ring(m.source, 2)
    for h in abelianization_homs(m.target):
        assert restrict(m, big.from_hom(h)) == small.from_hom(h.compose(m))


def test_degree_one_inflation_matches_characters():
    q = holomorph_quotient(3)
    small = cohomology_ring(q.target, 2)
    big = cohomology_ring(q.source, 2)
    for h in abelianization_homs(q.target):
        assert inflate(q, small.from_hom(h)) == big.from_hom(h.compose(q))


def test_restriction_is_transitive():
    gx_in_g = holomorph_subgroups(3)["Gx"]
    n_in_gx = metacyclic_subgroups(3)["N"]
    n_in_g = gx_in_g.compose(n_in_gx)
    big = cohomology_ring(gx_in_g.target, 5)
    for cls in big.basis(3) + big.basis(4):
        assert restrict(n_in_g, cls) == restrict(n_in_gx, restrict(gx_in_g, cls))


def test_restrict_and_inflate_check_kind():
    q = holomorph_quotient(3)
    sub = holomorph_subgroups(3)["N"]
    with pytest.raises(ContractError):
        restrict(q, cohomology_ring(q.target, 1).basis(1)[0])
    with pytest.raises(ContractError):
        inflate(sub, cohomology_ring(sub.target, 1).basis(1)[0])
    with pytest.raises(ContractError):
        pullback(sub, cohomology_ring(sub.source, 1).basis(1)[0])


def test_restriction_of_zero_is_zero():
    m = holomorph_subgroups(3)["A"]
    assert restrict(m, cohomology_ring(m.target, 4).zero(4)).is_zero()


def test_restriction_to_a_is_invariant_under_normalizer():
    # y^2 normalizes A = <y^4, z, x> in Holomorph(3) and swaps z with y^4 z,
    # so every restricted class is fixed by the induced automorphism of A
    m = holomorph_subgroups(3)["A"]
    a = m.source
    auto = make_morphism(a, a, [(1, 0, 0), (1, 1, 0), (0, 0, 1)], kind="isomorphism")
    g = m.target
    conj = [g.mul(g.mul(g.inverse((2, 0, 0)), m(e)), (2, 0, 0)) for e in a.generators]
    assert conj == [m(e) for e in auto.images]
    big = cohomology_ring(g, 4)
    for cls in big.basis(3) + big.basis(4):
        image = restrict(m, cls)
        assert pullback(auto, image) == image
