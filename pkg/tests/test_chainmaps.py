from __future__ import annotations

from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellybetti.chainmaps import (
    SimplicialChainMap,
    almost_embedding_violation,
    chain_boundary,
    chain_map_from_json,
    chain_map_to_json,
    compose,
    eml_flip_check,
    eml_triangulation,
    flip,
    identity_chain_map,
    induced_chain_map,
    is_homological_almost_embedding,
    is_nontrivial,
    parse_simplex_key,
    support,
    verify_chain_map,
)
from hellybetti.complexes import boundary_of_simplex, closure, full_simplex, simplex_skeleton
from hellybetti.errors import InputError

from conftest import small_complexes


def path(n: int):
    return closure([(i, i + 1) for i in range(n)])


def test_chain_boundary_and_support():
    tri = {(0, 1), (1, 2), (0, 2)}
    assert chain_boundary(tri) == frozenset()
    assert chain_boundary({(0, 1, 2)}) == frozenset(tri)
    assert chain_boundary({(3,)}) == frozenset()
    assert support({(0, 1)}) == {0, 1}
    assert support(frozenset()) == frozenset()
    assert support(tri) == {0, 1, 2}


def test_identity_is_an_almost_embedding():
    for k in (full_simplex(2), simplex_skeleton(4, 1), boundary_of_simplex(3)):
        gamma = identity_chain_map(k)
        assert verify_chain_map(gamma) == []
        assert is_nontrivial(gamma)
        assert is_homological_almost_embedding(gamma)


def test_nontriviality():
    k = closure([(0,), (1,)])
    t = closure([(5,), (6,), (7,)])
    assert is_nontrivial(SimplicialChainMap(k, t, {(0,): frozenset({(5,)}), (1,): frozenset({(6,)})}))
    assert not is_nontrivial(SimplicialChainMap(k, t, {(0,): frozenset(), (1,): frozenset({(6,)})}))
    three = frozenset({(5,), (6,), (7,)})
    assert is_nontrivial(SimplicialChainMap(k, t, {(0,): three, (1,): three}))


def test_path_into_longer_path():
    gamma = induced_chain_map({0: 2, 1: 3, 2: 4}, path(2), path(6))
    assert verify_chain_map(gamma) == []
    assert is_homological_almost_embedding(gamma)


def test_edge_sent_to_a_path_of_edges():
    k = full_simplex(1)
    t = path(3)
    gamma = SimplicialChainMap(k, t, {
        (0,): frozenset({(0,)}),
        (1,): frozenset({(3,)}),
        (0, 1): frozenset({(0, 1), (1, 2), (2, 3)}),
    })
    assert verify_chain_map(gamma) == []
    broken = SimplicialChainMap(k, t, {**gamma.assignment, (0, 1): frozenset({(0, 1)})})
    assert verify_chain_map(broken) == [(0, 1)]
    with pytest.raises(InputError):
        is_homological_almost_embedding(broken)


def test_overlapping_supports_are_reported():
    k = closure([(0,), (1,)])
    t = closure([(0, 1)])
    gamma = SimplicialChainMap(k, t, {(0,): frozenset({(0,)}), (1,): frozenset({(0,)})})
    assert almost_embedding_violation(gamma) == ((0,), (1,))
    assert not is_homological_almost_embedding(gamma)


def test_induced_map_rejects_degenerate_images():
    with pytest.raises(InputError):
        induced_chain_map({0: 0, 1: 0}, full_simplex(1), full_simplex(1))
    with pytest.raises(InputError):
        induced_chain_map({0: 0, 1: 2}, full_simplex(1), path(2))


def brute_almost_embedding(f, k) -> bool:
    for a, b in combinations(k.faces, 2):
        if not set(a) & set(b) and {f[v] for v in a} & {f[v] for v in b}:
            return False
    return True


@settings(max_examples=60)
@given(small_complexes(max_vertices=5, max_dim=2), st.data())
def test_induced_maps_against_pair_enumeration(k, data):
    target = full_simplex(6)
    images = data.draw(st.permutations(range(7)))
    f = {v: images[v] for v in k.vertices}
    gamma = induced_chain_map(f, k, target)
    assert verify_chain_map(gamma) == []
    assert is_homological_almost_embedding(gamma) == brute_almost_embedding(f, k)


@settings(max_examples=40)
@given(small_complexes(max_vertices=4, max_dim=2), st.data())
def test_composition_of_chain_maps(k, data):
    middle = full_simplex(5)
    f = dict(zip(k.vertices, data.draw(st.permutations(range(6)))))
    g = dict(enumerate(data.draw(st.permutations(range(10, 16)))))
    inner = induced_chain_map(f, k, middle)
    outer = induced_chain_map(g, middle, closure([range(10, 16)]))
    both = compose(outer, inner)
    assert verify_chain_map(both) == []
    assert is_nontrivial(both)


def test_json_roundtrip():
    gamma = induced_chain_map({0: 2, 1: 3, 2: 4}, path(2), path(6))
    back = chain_map_from_json(chain_map_to_json(gamma))
    assert back.source == gamma.source and back.target == gamma.target
    assert dict(back.assignment) == dict(gamma.assignment)
    assert parse_simplex_key("2,0") == (0, 2)
    assert parse_simplex_key("") == ()
    with pytest.raises(InputError):
        parse_simplex_key("a,b")
    with pytest.raises(InputError):
        chain_map_from_json({"source": {}})


@pytest.mark.parametrize("p, q, count", [(1, 1, 2), (2, 1, 3), (3, 0, 1), (2, 2, 6)])
def test_eml_counts(p, q, count):
    assert len(eml_triangulation(p, q)) == count


def test_eml_simplices_are_monotone_paths():
    for p in range(4):
        for q in range(4):
            tri = eml_triangulation(p, q)
            assert len(tri) == comb(p + q, p)
            for s in tri.simplices:
                assert s[0] == (0, 0) and s[-1] == (p, q) and len(s) == p + q + 1
                for a, b in zip(s, s[1:]):
                    assert (b[0] - a[0], b[1] - a[1]) in {(1, 0), (0, 1)}


def test_eml_flip():
    assert flip(((0, 0), (1, 0))) == ((0, 0), (0, 1))
    for p, q in [(1, 1), (2, 2), (3, 1)]:
        assert eml_flip_check(p, q)
    # the single-vertex simplex goes to a single vertex
    assert eml_triangulation(0, 0).simplices == (((0, 0),),)
    with pytest.raises(InputError):
        eml_triangulation(-1, 2)
