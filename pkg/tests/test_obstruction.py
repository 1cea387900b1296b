from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellybetti.complexes import ProductCell, boundary_of_simplex, closure, cone, full_simplex, simplex_skeleton
from hellybetti.errors import DegenerateConfiguration, InputError
from hellybetti.obstruction import (
    GenericPointConfig,
    cochain_as_json,
    cone_obstruction_check,
    det,
    intersection_parity,
    moment_curve,
    obstruction_cocycle,
    obstruction_nonzero,
    obstruction_with_config,
    primes,
    radon_coefficients,
    sphere_check_deleted_boundary,
)


def interleaves(sigma, tau, params) -> int:
    """Gale's criterion on the moment curve: the Radon partition alternates."""
    order = sorted(list(sigma) + list(tau), key=lambda v: params[v])
    sides = [v in sigma for v in order]
    return int(all(a != b for a, b in zip(sides, sides[1:])))


def orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def planar_parity(sigma, tau, pts) -> int:
    """Open segment/segment or open point/triangle incidence in the plane."""
    if len(sigma) == 1 or len(tau) == 1:
        p, tri = (sigma, tau) if len(sigma) == 1 else (tau, sigma)
        q = pts[p[0]]
        a, b, c = (pts[v] for v in tri)
        signs = {orient(a, b, q), orient(b, c, q), orient(c, a, q)}
        return int(len(signs) == 1 and 0 not in signs)
    a, b = (pts[v] for v in sigma)
    c, d = (pts[v] for v in tau)
    return int(orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0)


def test_primes_and_det():
    assert primes(6) == [2, 3, 5, 7, 11, 13]
    assert det([]) == 1
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert det([[1, 2], [2, 4]]) == 0


def test_moment_curve_points_are_exact():
    cfg = moment_curve([4, 2, 9], 3)
    assert cfg.points[2] == (1, 1, 1) and cfg.points[9] == (3, 9, 27)
    assert cfg.params == {2: 1, 4: 2, 9: 3}
    assert cfg.verify_general_position()
    with pytest.raises(InputError):
        moment_curve([0, 1], 2, [1, 1])
    with pytest.raises(InputError):
        moment_curve([0, 1, 2], 2, [1, 2])


def test_homogeneous_coordinates_clear_denominators():
    cfg = GenericPointConfig(2, {0: (Fraction(1, 2), Fraction(1, 3))})
    assert cfg.homogeneous(0) == (3, 2, 6)
    with pytest.raises(InputError):
        GenericPointConfig(2, {0: (1,)})
    with pytest.raises(InputError):
        GenericPointConfig(2, {0: (0, 0), 1: (0, 0)})


def test_parity_examples():
    cfg = moment_curve(range(4), 2)
    assert intersection_parity((0, 2), (1, 3), cfg) == 1
    assert intersection_parity((0, 1), (2, 3), cfg) == 0
    assert intersection_parity((0,), (1, 2, 3), cfg) == 0
    with pytest.raises(InputError):
        intersection_parity((0, 1), (1, 2), cfg)
    with pytest.raises(InputError):
        intersection_parity((0,), (1, 2), cfg)


@settings(max_examples=200)
@given(st.integers(1, 4), st.data())
def test_parity_matches_gale_interleaving(d, data):
    params = data.draw(st.lists(st.integers(-6, 9), min_size=d + 2, max_size=d + 2, unique=True))
    cfg = moment_curve(range(d + 2), d, sorted(params))
    # any split of d+2 points into two nonempty parts
    size = data.draw(st.integers(1, d + 1))
    sigma = tuple(sorted(data.draw(st.permutations(range(d + 2)))[:size]))
    tau = tuple(v for v in range(d + 2) if v not in sigma)
    assert intersection_parity(sigma, tau, cfg) == interleaves(sigma, tau, cfg.params)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=4, max_size=4, unique=True), st.data())
def test_parity_matches_planar_geometry(points, data):
    pts = dict(enumerate(points))
    cfg = GenericPointConfig(2, pts)
    size = data.draw(st.integers(1, 3))
    sigma = tuple(sorted(data.draw(st.permutations(range(4)))[:size]))
    tau = tuple(v for v in range(4) if v not in sigma)
    if any(c == 0 for c in radon_coefficients(list(sigma) + list(tau), cfg)):
        with pytest.raises(DegenerateConfiguration):
            intersection_parity(sigma, tau, cfg)
        return
    assert intersection_parity(sigma, tau, cfg) == planar_parity(sigma, tau, pts)


def test_radon_coefficients_are_an_affine_dependence():
    cfg = moment_curve(range(5), 3, [1, 2, 4, 7, 11])
    vs = list(range(5))
    coeffs = radon_coefficients(vs, cfg)
    for axis in range(4):
        assert sum(c * cfg.homogeneous(v)[axis] for c, v in zip(coeffs, vs)) == 0


def test_cocycle_is_equivariant():
    cfg = moment_curve(range(5), 2)
    cells = [ProductCell(a, b) for a in combinations(range(5), 2) for b in combinations(range(5), 2) if not set(a) & set(b)]
    support = obstruction_cocycle(cells, cfg)
    assert support and all(c.swapped() in support for c in support)


@pytest.mark.parametrize("k, d, expected", [
    (simplex_skeleton(4, 1), 2, True),
    (boundary_of_simplex(2), 1, True),
    (boundary_of_simplex(3), 2, True),
    (boundary_of_simplex(4), 3, True),
    (simplex_skeleton(5, 2), 3, True),
    (full_simplex(1), 1, False),
    (full_simplex(2), 2, False),
    (simplex_skeleton(3, 1), 2, False),  # K4 is planar
    (closure([(0, 1), (1, 2), (2, 3)]), 1, False),
])
def test_obstruction_verdicts(k, d, expected):
    res = obstruction_nonzero(k, d)
    assert res.nonzero is expected
    if expected:
        assert res.certificate and res.witness is None
    else:
        assert res.witness is not None and res.certificate is None


def test_certificate_pairs_oddly_with_the_cocycle():
    res = obstruction_nonzero(simplex_skeleton(4, 1), 2)
    assert len(res.certificate & res.cocycle) % 2 == 1


def test_cone_over_the_circle_embeds_in_the_plane():
    # Γ2 = cone(∂Δ2) is a disk; an explicit planar embedding gives a zero cocycle
    k = cone(boundary_of_simplex(2))
    assert obstruction_nonzero(k, 2).nonzero is False
    cfg = GenericPointConfig(2, {0: (0, 0), 1: (6, 0), 2: (0, 6), 3: (2, 2)})
    assert obstruction_with_config(k, cfg).cocycle == frozenset()


def test_cone_check():
    assert cone_obstruction_check(simplex_skeleton(4, 1), 2) == (True, True)
    assert cone_obstruction_check(boundary_of_simplex(2), 1) == (True, False)


def test_sphere_check():
    assert sphere_check_deleted_boundary(1) == [1, 1]
    assert sphere_check_deleted_boundary(3) == [1, 0, 0, 1]
    with pytest.raises(InputError):
        sphere_check_deleted_boundary(4)


def test_verdict_does_not_depend_on_parameters():
    k = simplex_skeleton(4, 1)
    for params in ([1, 2, 3, 4, 5], [-3, 0, 2, 10, 11], [2, 3, 5, 7, 11]):
        assert obstruction_nonzero(k, 2, params=params, cross_check=False).nonzero


def test_degenerate_configuration_is_retried_or_reported():
    # collinear points in the plane are never in general position
    k = simplex_skeleton(3, 1)
    cfg = GenericPointConfig(2, {0: (0, 0), 1: (1, 1), 2: (2, 2), 3: (3, 3)})
    with pytest.raises(DegenerateConfiguration):
        obstruction_with_config(k, cfg)


def test_cochain_json():
    res = obstruction_nonzero(boundary_of_simplex(2), 1)
    out = cochain_as_json(res.cocycle)
    assert out == sorted(out) and all(len(pair) == 2 for pair in out)
