from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocoh.groups import (
    GroupSpec,
    GroupSpecError,
    MorphismError,
    abelianization_homs,
    holomorph_quotient,
    holomorph_subgroups,
    make_group,
    make_morphism,
    metacyclic_subgroups,
    dihedral_subgroups,
    projection_to_kx,
)


def normal_form_product(rho, g, h):
    """Product of y^a x^b z^c elements written out with plain integers."""
    r, s = 2**rho, 2 ** (rho - 2)
    a, b, c = g
    d, e, f = h
    return ((a + pow(5, b) * (-1) ** c * d) % r, (b + e) % s, (c + f) % 2)


@pytest.mark.parametrize("rho, order", [(2, 8), (3, 32), (4, 128)])
def test_holomorph_order_and_axioms(rho, order):
    g = make_group(GroupSpec.holomorph(rho))
    assert g.order == order
    g.check_axioms()


@pytest.mark.parametrize(
    "spec, order",
    [
        (GroupSpec.metacyclic_gx(3), 16),
        (GroupSpec.dihedral_gz(3), 16),
        (GroupSpec.cyclic(8), 8),
        (GroupSpec.product(GroupSpec.cyclic(2), GroupSpec.cyclic(4)), 8),
    ],
)
def test_family_orders(spec, order):
    g = make_group(spec)
    assert g.order == order
    g.check_axioms()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 4]), st.data())
def test_multiplication_matches_normal_form(rho, data):
    g = make_group(GroupSpec.holomorph(rho))
    x = data.draw(st.sampled_from(g.elements))
    y = data.draw(st.sampled_from(g.elements))
    assert g.mul(x, y) == normal_form_product(rho, x, y)


def test_defining_relations():
    g = make_group(GroupSpec.holomorph(3))
    y, x, z = g.generator("y"), g.generator("x"), g.generator("z")
    assert g.mul(g.mul(x, y), g.inverse(x)) == g.power(y, 5)
    assert g.mul(g.mul(z, y), g.inverse(z)) == g.inverse(y)
    assert g.mul(x, z) == g.mul(z, x)
    assert g.element_order(y) == 8 and g.element_order(x) == 2 and g.element_order(z) == 2
    for _, word in g.relations:
        assert g.evaluate(word) == g.identity


def test_generator_order_is_y_x_z():
    assert make_group(GroupSpec.holomorph(3)).generator_names == ("y", "x", "z")
    assert make_group(GroupSpec.metacyclic_gx(3)).generator_names == ("y", "x")
    assert make_group(GroupSpec.dihedral_gz(3)).generator_names == ("y", "z")


def test_elements_in_lexicographic_order():
    g = make_group(GroupSpec.holomorph(3))
    assert g.elements == sorted(g.elements)
    assert g.identity == (0, 0, 0)


def test_bad_specs_rejected():
    with pytest.raises(GroupSpecError):
        make_group(GroupSpec.cyclic(6))
    with pytest.raises(GroupSpecError):
        make_group(GroupSpec.holomorph(1))


def test_abelianization_is_three_dimensional():
    g = make_group(GroupSpec.holomorph(3))
    homs = abelianization_homs(g)
    assert [h.values for h in homs] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert all(h.is_homomorphism() for h in homs)
    # every homomorphism to Z/2 is a sum of these: check by brute force
    count = 0
    for values in itertools.product((0, 1), repeat=3):
        table = {e: sum(v * k for v, k in zip(values, e)) % 2 for e in g.elements}
        if all(table[g.mul(a, b)] == (table[a] + table[b]) % 2 for a in g.elements for b in g.elements):
            count += 1
    assert count == 2 ** len(homs)


def test_subgroups_have_expected_orders():
    subs = holomorph_subgroups(3)
    orders = {k: m.source.order for k, m in subs.items()}
    assert orders == {"N": 8, "Kx": 2, "Kz": 2, "Gx": 16, "Gz": 16, "xz": 4, "A": 8}
    assert all(m.kind == "inclusion" for m in subs.values())


def test_subgroup_a_is_abelian_of_order_4s():
    for rho in (3, 4):
        a = holomorph_subgroups(rho)["A"]
        assert a.source.order == 4 * 2 ** (rho - 2)
        img = [a(e) for e in a.source.elements]
        g = a.target
        assert all(g.mul(p, q) == g.mul(q, p) for p in img for q in img)


def test_morphism_rejects_broken_relations():
    g = make_group(GroupSpec.holomorph(3))
    c8 = make_group(GroupSpec.cyclic(8))
    with pytest.raises(MorphismError):
        make_morphism(c8, g, [(0, 1, 0)], kind="inclusion")
    with pytest.raises(MorphismError):
        make_morphism(c8, g, [(2, 0, 0)], kind="inclusion")


def test_quotient_and_projection():
    q = holomorph_quotient(3)
    assert q.kind == "surjection"
    assert q.source.order == 128 and q.target.order == 32
    p = projection_to_kx(GroupSpec.holomorph(3))
    assert p.kind == "surjection" and p.target.order == 2
    assert metacyclic_subgroups(3)["Kx"].source.order == 2
    assert dihedral_subgroups(3)["Kz"].source.order == 2


def test_character_composition_matches_pointwise():
    sub = holomorph_subgroups(3)["A"]
    for h in abelianization_homs(sub.target):
        composed = h.compose(sub)
        assert all(composed(e) == h(sub(e)) for e in sub.source.elements)
