from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellybetti.complexes import boundary_of_simplex, closure, full_simplex, simplex_skeleton
from hellybetti.errors import InputError, InvariantViolation
from hellybetti.gf2 import (
    ChainComplex,
    Gf2Matrix,
    HomologyBasis,
    SpanReducer,
    betti,
    betti_numbers,
    bits_from,
    is_boundary,
    is_coboundary,
    iter_bits,
    nullspace,
    rank,
    solve,
)
from hellybetti.oracles import brute_betti

from conftest import gf2_matrices, small_complexes


def brute_rank(m: Gf2Matrix) -> int:
    """log2 of the number of distinct images."""
    images = {m.matvec(x) for x in range(1 << m.ncols)}
    return len(images).bit_length() - 1


def test_bits_roundtrip():
    assert bits_from([1, 0, 1, 1]) == 0b1101
    assert list(iter_bits(0b1101)) == [0, 2, 3]
    assert list(iter_bits(0)) == []


def test_matrix_basics():
    m = Gf2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert m.to_dense() == [[1, 1, 0], [0, 1, 1]]
    assert m.transpose().transpose() == m
    assert m.matvec(0b111) == 0b00
    assert m.matvec(0b001) == 0b01
    assert (Gf2Matrix.identity(2) @ m) == m
    assert Gf2Matrix.zeros(2, 3).is_zero()
    assert Gf2Matrix.from_columns(m.columns(), 2) == m
    with pytest.raises(InputError):
        Gf2Matrix([0b100], 2)
    with pytest.raises(InputError):
        m @ m


def test_rank_examples():
    assert rank(Gf2Matrix.zeros(3, 4)) == 0
    assert rank(Gf2Matrix.identity(5)) == 5
    assert rank(Gf2Matrix.from_dense([[1, 1], [1, 1]])) == 1
    # the boundary of a triangle has rank 2 over GF(2)
    assert rank(Gf2Matrix.from_dense([[1, 1, 0], [1, 0, 1], [0, 1, 1]])) == 2


@given(gf2_matrices())
def test_rank_matches_brute_force(m):
    assert rank(m) == brute_rank(m)


@given(gf2_matrices(), st.data())
def test_solve_and_nullspace(m, data):
    x = data.draw(st.integers(0, (1 << m.ncols) - 1))
    b = m.matvec(x)
    sol = solve(m, b)
    assert sol is not None and m.matvec(sol) == b
    basis = nullspace(m)
    assert len(basis) == m.ncols - rank(m)
    assert all(m.matvec(z) == 0 for z in basis)
    reachable = {m.matvec(y) for y in range(1 << m.ncols)}
    target = data.draw(st.integers(0, (1 << m.nrows) - 1))
    assert (solve(m, target) is not None) == (target in reachable)


def test_solve_is_deterministic_and_checks_length():
    m = Gf2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert solve(m, [1, 1]) == solve(m, 0b11)
    with pytest.raises(InputError):
        solve(m, [1])
    with pytest.raises(InputError):
        solve(m, 0b100)


def test_span_reducer_tags():
    r = SpanReducer()
    assert r.insert(0b011, 0b01)
    assert r.insert(0b110, 0b10)
    assert not r.insert(0b101, 0)
    residual, tag = r.reduce(0b101)
    assert residual == 0 and tag == 0b11
    assert r.reduce(0b1000) == (0b1000, 0)
    assert len(r) == 2


def test_chain_complex_checks_squares():
    cells = {0: ["a", "b"], 1: ["e"], 2: ["f"]}
    d1 = Gf2Matrix.from_columns([0b11], 2)
    bad = Gf2Matrix.from_columns([0b1], 1)
    with pytest.raises(InvariantViolation):
        ChainComplex(cells, {1: d1, 2: bad})
    with pytest.raises(InputError):
        ChainComplex({0: ["a", "a"]}, {})
    with pytest.raises(InputError):
        ChainComplex(cells, {1: Gf2Matrix.zeros(1, 1)})


def test_betti_examples():
    assert betti_numbers(boundary_of_simplex(2)) == [1, 1]
    assert betti_numbers(boundary_of_simplex(3)) == [1, 0, 1]
    assert betti_numbers(full_simplex(3), reduced=True) == [0, 0, 0, 0]
    assert betti(simplex_skeleton(4, 1), 1) == 6
    assert betti(closure([(0,), (1,), (2,)]), 0, reduced=True) == 2
    empty = closure([])
    assert betti(empty, 0) == 0 and betti(empty, 0, reduced=True) == 0
    with pytest.raises(InputError):
        betti(full_simplex(1), -1)


@settings(max_examples=60)
@given(small_complexes(max_vertices=5, max_dim=2, max_tops=4))
def test_betti_matches_brute_force(k):
    if max(k.f_vector) > 12:
        return
    assert betti_numbers(k) == brute_betti(k)
    assert betti_numbers(k, reduced=True) == brute_betti(k, reduced=True)


@given(small_complexes())
def test_euler_characteristic(k):
    chi = sum((-1) ** i * f for i, f in enumerate(k.f_vector))
    assert sum((-1) ** i * b for i, b in enumerate(betti_numbers(k))) == chi


def test_is_boundary():
    tri = full_simplex(2)
    z = frozenset({(0, 1), (1, 2), (0, 2)})
    assert is_boundary(z, tri) == frozenset({(0, 1, 2)})
    assert is_boundary(z, boundary_of_simplex(2)) is None
    assert is_boundary(frozenset(), tri) == frozenset()
    assert is_boundary(frozenset({(0,), (2,)}), tri) is not None
    with pytest.raises(InputError):
        is_boundary(frozenset({(0, 1)}), tri)


@given(small_complexes(max_vertices=5, max_dim=2))
def test_is_boundary_witness_is_exact(k):
    c = k.chain_complex()
    for i in range(1, k.dimension + 1):
        for s in k.simplices(i):
            z = c.boundary_of([s], i)
            w = is_boundary(z, k, i - 1)
            assert w is not None and c.boundary_of(w, i) == z


def test_homology_basis_coordinates():
    k = simplex_skeleton(3, 1)  # K4 graph: H1 of rank 3
    basis = HomologyBasis(k, 1)
    assert len(basis) == 3
    assert basis.coordinates(frozenset()) == (0, 0, 0)
    for i, rep in enumerate(basis.representatives):
        assert basis.coordinates(rep) == tuple(int(j == i) for j in range(3))
    # a sum of two representatives has both coordinates set
    both = basis.representatives[0] ^ basis.representatives[1]
    assert basis.coordinates(both) == (1, 1, 0)
    filled = HomologyBasis(full_simplex(3), 1)
    assert len(filled) == 0
    h0 = HomologyBasis(closure([(0,), (1,)]), 0)
    assert len(h0) == 2
    assert h0.coordinates(frozenset({(0,), (1,)})) == (1, 1)


def test_is_coboundary():
    tri = boundary_of_simplex(2)
    c = tri.chain_complex()
    # the cochain dual to one edge is not a coboundary on a circle
    assert is_coboundary({(0, 1)}, c, 1) is None
    nu = is_coboundary({(0, 1), (0, 2)}, c, 1)
    assert nu == frozenset({(0,)})
    assert is_coboundary(set(), c, 1) == frozenset()
    with pytest.raises(InputError):
        is_coboundary({(0, 1)}, full_simplex(2), 1)
