import json

import pytest
from hypothesis import given

from gwpdesign import Poset, PosetError
from gwpdesign.poset import format_set, parse_poset_text, poset_from_json

from strategies import posets

fs = frozenset


def test_transitive_closure_and_cycle():
    p = Poset.from_relations([1, 2, 3], [(1, 2), (2, 3)])
    assert p.less(1, 3)
    assert not p.less(3, 1)
    with pytest.raises(PosetError):
        Poset.from_relations([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(PosetError):
        Poset.from_relations([1], [(1, 1)])


def test_direct_construction_requires_closed_order():
    with pytest.raises(PosetError):
        Poset((1, 2, 3), fs({(1, 2), (2, 3)}))
    with pytest.raises(PosetError):
        Poset((1, 2), fs({(1, 5)}))


def test_element_cap():
    with pytest.raises(PosetError):
        Poset.from_relations(range(21), [])
    assert len(Poset.from_relations(range(3), [], max_elements=3)) == 3


def test_up_sets(n_poset):
    assert n_poset.up_set_strict(2) == {3, 4}
    assert n_poset.up_set_closed(2) == {2, 3, 4}
    assert n_poset.up_set_closed(1) == {1, 3}
    assert Poset.antichain(2).up_set_strict(1) == fs()
    assert Poset.chain(3).up_set_strict(3) == fs()
    assert Poset.chain(2).up_set_closed(2) == {2}
    assert Poset.chain(3).up_set_closed(1) == {1, 2, 3}


def test_ancestral_subsets_examples(grid_poset, n_poset):
    assert set(Poset.antichain(2).ancestral_subsets()) == {fs(), fs({1}), fs({2}), fs({1, 2})}
    assert set(grid_poset.ancestral_subsets()) == {
        fs(), fs({2}), fs({3}), fs({1, 3}), fs({2, 3}), fs({1, 2, 3})
    }
    expected = [set(), {3}, {4}, {3, 4}, {1, 3}, {1, 3, 4}, {2, 3, 4}, {1, 2, 3, 4}]
    assert sorted(map(sorted, n_poset.ancestral_subsets())) == sorted(map(sorted, expected))


def test_ancestral_order_is_deterministic(n_poset):
    a = n_poset.ancestral_subsets()
    assert a == n_poset.ancestral_subsets()
    assert a[0] == fs() and a[-1] == fs(n_poset.elements)
    assert [len(x) for x in a] == sorted(len(x) for x in a)


def test_border(n_poset, grid_poset):
    assert n_poset.border({3}) == {1, 4}
    assert grid_poset.border({2}) == {3}
    assert n_poset.border(n_poset.elements) == fs()
    assert n_poset.border(set()) == {3, 4}
    with pytest.raises(PosetError):
        n_poset.border({1})


def test_classify_shape(grid_poset, v_poset, n_poset):
    assert Poset.chain(3).classify_shape().kind == "chain"
    assert Poset.antichain(3).classify_shape().kind == "antichain"
    s = grid_poset.classify_shape()
    assert s.kind == "direct" and s.parts == (fs({1, 3}), fs({2}))
    s = v_poset.classify_shape()
    assert s.kind == "kronecker" and s.parts == (fs({1}), fs({2, 3}))
    assert n_poset.classify_shape().kind == "general"
    with pytest.raises(PosetError):
        Poset.chain(1).classify_shape()


def test_inverted_v_is_kronecker():
    p = Poset.from_relations([1, 2, 3], [(1, 3), (2, 3)])
    s = p.classify_shape()
    assert s.kind == "kronecker" and s.parts == (fs({1, 2}), fs({3}))


def test_parse_text_and_json_roundtrip(n_poset):
    text = "# N\nelements: 1 2 3 4\nrel: 1 < 3\nrel: 2 < 3\nrel: 2 < 4\n"
    assert parse_poset_text(text) == n_poset
    assert poset_from_json(json.dumps(n_poset.to_dict())) == n_poset
    chained = parse_poset_text("elements: a b c\nrel: a < b < c")
    assert chained.less("a", "c")
    with pytest.raises(PosetError):
        parse_poset_text("rel: 1 < 2")
    with pytest.raises(PosetError):
        parse_poset_text("elements: 1 2\nnonsense")
    with pytest.raises(PosetError):
        poset_from_json({"relations": []})


def test_cover_relations(n_poset):
    p = Poset.chain(3)
    assert p.cover_relations() == [(1, 2), (2, 3)]
    assert n_poset.cover_relations() == [(1, 3), (2, 3), (2, 4)]


def test_format_set(n_poset):
    assert format_set(n_poset, {4, 1}) == "{1,4}"
    assert format_set(n_poset, set()) == "{}"


def test_chain_order():
    p = Poset.from_relations([3, 1, 2], [(2, 1), (1, 3)])
    assert p.chain_order() == [2, 1, 3]
    with pytest.raises(PosetError):
        Poset.antichain(2).chain_order()


@given(posets())
def test_union_with_border_subsets_is_ancestral(p):
    for J in p.ancestral_subsets():
        border = sorted(p.border(J), key=p.index)
        for bits in range(1 << len(border)):
            S = {b for t, b in enumerate(border) if bits >> t & 1}
            assert p.is_ancestral(J | S)


@given(posets())
def test_closed_under_union_and_intersection(p):
    A = set(p.ancestral_subsets())
    for J in A:
        for K in A:
            assert J | K in A
            assert J & K in A


@given(posets())
def test_ancestral_is_union_of_closed_up_sets(p):
    for J in p.ancestral_subsets():
        union = set()
        for j in J:
            union |= p.up_set_closed(j)
        assert union == J


@given(posets())
def test_ancestral_enumeration_matches_definition(p):
    els = list(p.elements)
    brute = set()
    for bits in range(1 << len(els)):
        S = {e for t, e in enumerate(els) if bits >> t & 1}
        if all(b in S for a in S for b in els if p.less(a, b)):
            brute.add(fs(S))
    assert set(p.ancestral_subsets()) == brute


@given(posets())
def test_border_is_maximal_of_complement(p):
    for J in p.ancestral_subsets():
        comp = set(p.elements) - J
        maximal = {a for a in comp if not any(p.less(a, b) for b in comp)}
        assert p.border(J) == maximal


def test_chain_and_antichain_counts():
    for s in range(1, 7):
        assert len(Poset.antichain(s).ancestral_subsets()) == 2**s
        assert len(Poset.chain(s).ancestral_subsets()) == s + 1


@given(posets(min_size=2))
def test_decomposition_ancestral_identities(p):
    shape = p.classify_shape()
    if shape.kind not in ("direct", "kronecker"):
        return
    I1, I2 = shape.parts
    A1 = p.restrict(I1).ancestral_subsets()
    A2 = p.restrict(I2).ancestral_subsets()
    A = set(p.ancestral_subsets())
    if shape.kind == "direct":
        assert A == {J1 | J2 for J1 in A1 for J2 in A2}
    else:
        assert A == {J | I2 for J in A1 if J} | set(A2)
        assert len(A) == len(A1) - 1 + len(A2)
