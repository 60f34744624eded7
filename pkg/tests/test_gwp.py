import random
from math import factorial, prod

import pytest
from hypothesis import given, settings

from gwpdesign import Block, BlockStructure, CapExceeded, ComponentGroups, GwpElement, Poset, StructureError
from gwpdesign.gwp import (
    compose,
    count_pair_orbits,
    cyclic_perm,
    enumerate_group,
    generate_group,
    induced_permutations,
    inverse,
    kernel_elements,
    orbit_of_block,
    orbital_classes,
    orbital_of_pair,
    orbital_size,
    orbital_size_alternating,
    orbital_size_product,
    pair_orbits,
    parse_group_text,
    predicted_order,
    verify_partition_invariance,
)

from strategies import structures

fs = frozenset


def test_perm_helpers():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, inverse(p)) == (0, 1, 2)
    assert compose(p, q) == tuple(q[p[x]] for x in range(3))
    assert len(generate_group([cyclic_perm(4)], 4)) == 4
    assert len(generate_group([(1, 0, 2), (1, 2, 0)], 3)) == 6
    assert count_pair_orbits([cyclic_perm(4)], 4) == 3
    assert count_pair_orbits([(1, 0, 2), (1, 2, 0)], 3) == 1


def test_act_identity(n_poset):
    s = BlockStructure(n_poset, (2, 2, 3, 2))
    e = GwpElement.identity(s)
    assert all(e.act(pt) == pt for pt in s.points())


def test_act_chain_swap(chain22):
    f = GwpElement.from_functions(chain22, {2: (1, 0)})
    assert f.act((0, 0)) == (0, 1)
    assert f.act((1, 1)) == (1, 0)


def test_act_twisted_by_ancestor(chain22):
    # f_1 depends on the coordinate at 2
    f = GwpElement.from_functions(chain22, {1: lambda nu: (1, 0) if nu == (1,) else (0, 1)})
    assert f.act((0, 0)) == (0, 0)
    assert f.act((0, 1)) == (1, 1)


def test_act_antichain_componentwise():
    s = BlockStructure(Poset.antichain(2), (2, 3))
    g1, g2 = (1, 0), (2, 0, 1)
    f = GwpElement.from_functions(s, {1: g1, 2: g2})
    for a, b in s.points():
        assert f.act((a, b)) == (g1[a], g2[b])


def test_element_validation(chain22):
    with pytest.raises(StructureError):
        GwpElement(chain22, (((0, 1),), ((0, 1),)))  # f_1 must have two entries
    with pytest.raises(StructureError):
        GwpElement.from_functions(chain22, {2: (0, 0)})


def test_orbital_of_pair_examples(n_poset):
    s = BlockStructure(n_poset, (2, 2, 2, 2))
    z = (0, 0, 0, 0)
    assert orbital_of_pair(s, z, z) == fs(n_poset.elements)
    assert orbital_of_pair(s, z, (1, 0, 0, 0)) == {2, 3, 4}
    assert orbital_of_pair(s, z, (0, 1, 0, 0)) == {1, 3, 4}
    assert orbital_of_pair(s, z, (0, 0, 1, 0)) == {4}


def test_orbital_size_examples(grid_poset, n_poset):
    for p in (2, 3):
        e = (p * p + p + 1, p * p - p + 1, p**4 - p * p + 1)
        s = BlockStructure(grid_poset, e)
        assert orbital_size(s, {2, 3}) // s.v == p * p + p
        e4 = e + (p**8 - p**4 + 1,)
        s = BlockStructure(n_poset, e4)
        assert orbital_size(s, {3}) == s.v * (e4[0] - 1) * (e4[3] - 1) * e4[1]
    chain = BlockStructure(Poset.chain(2), (2, 2))
    assert orbital_size(chain, set()) == 8


def test_enumerate_group_orders(chain22):
    assert len(enumerate_group(chain22)) == 8
    anti = BlockStructure(Poset.antichain(2), (2, 3))
    assert len(enumerate_group(anti)) == 12
    trivial = ComponentGroups(chain22, {1: [(0, 1)], 2: [(0, 1)]})
    assert predicted_order(chain22, trivial) == 1
    assert len(enumerate_group(chain22, trivial)) == 1
    with pytest.raises(CapExceeded):
        enumerate_group(chain22, cap=7)


def test_component_groups(chain22):
    s = BlockStructure(Poset.antichain(1), (4,))
    c4 = ComponentGroups(s, {1: [cyclic_perm(4)]})
    assert c4.order(1) == 4
    assert c4.is_transitive(1) and not c4.two_transitive(1)
    assert not c4.all_two_transitive()
    assert ComponentGroups(s).two_transitive(1)
    assert ComponentGroups(s).order(1) == factorial(4)
    with pytest.raises(StructureError):
        ComponentGroups(s, {1: [(0, 1, 2)]})
    g = parse_group_text(chain22, "# swap\nperm 2: 1 0\n")
    assert g.generators == {2: [(1, 0)]} and g.is_symmetric(1)
    with pytest.raises(StructureError):
        parse_group_text(chain22, "perm 7: 1 0")
    with pytest.raises(StructureError):
        parse_group_text(chain22, "gen 1: 1 0")


def test_orbit_of_block(chain22, chain22_block):
    F = enumerate_group(chain22)
    assert len(orbit_of_block(chain22_block, F)) == 4
    full = Block(chain22, chain22.points())
    assert orbit_of_block(full, F) == {fs(chain22.points())}
    single = Block(chain22, [(1, 1)])
    assert len(orbit_of_block(single, F)) == chain22.v
    with pytest.raises(CapExceeded):
        orbit_of_block(single, F, v_cap=3)


def test_partition_invariance(chain22):
    F = enumerate_group(chain22)
    assert verify_partition_invariance(chain22, [GwpElement.identity(chain22)], {2})
    assert all(verify_partition_invariance(chain22, F, J) for J in chain22.poset.ancestral_subsets())
    # swap (0,0) <-> (0,1) alone: splits the column {(0,0),(1,0)}
    pts = list(chain22.points())
    a, b = chain22.point_index((0, 0)), chain22.point_index((0, 1))
    perm = list(range(4))
    perm[a], perm[b] = b, a
    assert tuple(perm) not in set(induced_permutations(F))
    assert not verify_partition_invariance(chain22, [tuple(perm)], {2})
    assert len(pts) == 4


def _tiny_structures():
    return [
        BlockStructure(Poset.chain(2), (2, 2)),
        BlockStructure(Poset.chain(2), (2, 3)),
        BlockStructure(Poset.chain(2), (3, 2)),
        BlockStructure(Poset.antichain(2), (2, 3)),
        BlockStructure(Poset.chain(3), (2, 2, 2)),
        BlockStructure(Poset.from_relations([1, 2, 3], [(1, 3)]), (2, 2, 2)),
        BlockStructure(Poset.from_relations([1, 2, 3], [(1, 2), (1, 3)]), (2, 2, 2)),
    ]


@pytest.mark.parametrize("s", _tiny_structures(), ids=lambda s: f"v{s.v}-{len(s.poset.strict_order)}rel")
def test_group_closure(s):
    perms = set(induced_permutations(enumerate_group(s)))
    assert len(perms) == predicted_order(s)  # action is faithful
    ident = tuple(range(s.v))
    assert ident in perms
    for p in perms:
        assert inverse(p) in perms
    rng = random.Random(7)
    plist = sorted(perms)
    for _ in range(200):
        p, q = rng.choice(plist), rng.choice(plist)
        assert compose(p, q) in perms


@pytest.mark.parametrize("s", _tiny_structures(), ids=lambda s: f"v{s.v}-{len(s.poset.strict_order)}rel")
def test_pair_orbits_are_orbitals(s):
    orbits = set(pair_orbits(s, enumerate_group(s)))
    assert orbits == set(orbital_classes(s).values())


def test_act_respects_composition(chain22):
    F = enumerate_group(chain22)
    rng = random.Random(3)
    for _ in range(20):
        f, g = rng.choice(F), rng.choice(F)
        pf, pg = f.permutation(), g.permutation()
        for pt in chain22.points():
            x = chain22.point_index(pt)
            assert chain22.point_index(g.act(f.act(pt))) == compose(pf, pg)[x]


def test_kernel_filter():
    s = BlockStructure(Poset.chain(2), (2, 3))
    F = enumerate_group(s)
    K = kernel_elements(F, {2})
    # f_2 trivial; f_1 free on each of the 3 values at 2
    assert len(K) == 2**3
    for f in K:
        for pt in s.points():
            assert f.act(pt)[1] == pt[1]
    assert len(kernel_elements(F, set())) == len(F)
    assert len(kernel_elements(F, {1, 2})) == 1
    assert kernel_elements([], {2}) == []


def test_cyclic_component_splits_an_orbital():
    s = BlockStructure(Poset.antichain(1), (4,))
    F = enumerate_group(s, ComponentGroups(s, {1: [cyclic_perm(4)]}))
    orbits = pair_orbits(s, F)
    classes = orbital_classes(s)
    assert len(orbits) > len(classes)
    assert all(any(o <= c for c in classes.values()) for o in orbits)


@settings(max_examples=150)
@given(structures(max_size=5, max_e=7))
def test_orbital_size_forms_agree(s):
    total = 0
    full = s.poset.full_mask
    for mask in s.poset.ancestral_masks():
        a = orbital_size_product(s, mask)
        assert a == orbital_size_alternating(s, mask)
        total += a
    assert total == s.v**2
    assert orbital_size_product(s, full) == s.v


@settings(max_examples=40)
@given(structures(max_size=4, max_e=3, max_v=40))
def test_orbital_sizes_match_classes(s):
    classes = orbital_classes(s)
    for J in s.poset.ancestral_subsets():
        assert len(classes.get(J, ())) == orbital_size(s, J)


@settings(max_examples=100)
@given(structures(max_size=4, max_e=4, max_v=300))
def test_orbitals_self_paired(s):
    rng = random.Random(s.v)
    pts = list(s.points())
    for _ in range(20):
        a, b = rng.choice(pts), rng.choice(pts)
        assert orbital_of_pair(s, a, b) == orbital_of_pair(s, b, a)


@settings(max_examples=100)
@given(structures(min_size=2, max_size=5, max_e=4))
def test_decomposition_orders(s):
    shape = s.poset.classify_shape()
    if shape.kind not in ("direct", "kronecker"):
        return
    I1, I2 = shape.parts

    def sub(I):
        p = s.poset.restrict(I)
        return BlockStructure(p, tuple(s.e(x) for x in p.elements))

    F1, F2 = predicted_order(sub(I1)), predicted_order(sub(I2))
    if shape.kind == "direct":
        assert predicted_order(s) == F1 * F2
    else:
        assert predicted_order(s) == F1 ** prod(s.e(x) for x in I2) * F2


def test_decomposition_orders_enumerated(grid_poset, v_poset):
    grid = BlockStructure(grid_poset, (2, 2, 2))
    assert len(enumerate_group(grid)) == 8 * 2
    v = BlockStructure(v_poset, (2, 2, 2))
    assert len(enumerate_group(v)) == 2**4 * 4
