"""Z2 van Kampen obstruction via a generic linear map on the moment curve.

Vertices are sent to exact integer points (t, t², ..., t^d).  For every d-cell
σ×τ of the deleted product the cocycle records whether the images of the open
simplices σ and τ cross; the class vanishes iff that cocycle is a coboundary
on the quotient by the swap action.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm

from .complexes import (
    ProductCell,
    SimplicialComplex,
    Simplex,
    boundary_of_simplex,
    cone,
    deleted_product,
    quotient_by_involution,
)
from .config import Budget
from .errors import DegenerateConfiguration, InputError, InvariantViolation
from .gf2 import betti_numbers, is_coboundary, nullspace

MAX_RETRIES = 5


def primes(n: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < n:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class GenericPointConfig:
    """Vertex -> exact point in Q^d.

    Build moment-curve configurations with :func:`moment_curve`; arbitrary
    rational points are accepted too (used to certify known embeddings).
    """

    d: int
    points: dict[int, tuple[Fraction, ...]]
    params: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1:
            raise InputError("ambient dimension must be at least 1")
        pts = {}
        for v, p in self.points.items():
            if len(p) != self.d:
                raise InputError(f"point of vertex {v} is not in R^{self.d}")
            pts[v] = tuple(Fraction(x) for x in p)
        if len(set(pts.values())) != len(pts):
            raise InputError("points must be distinct")
        object.__setattr__(self, "points", pts)

    def homogeneous(self, v: int) -> tuple[int, ...]:
        """Integer homogeneous coordinates, scaled by a positive factor."""
        p = self.points[v]
        scale = lcm(*(x.denominator for x in p))
        return tuple(int(x * scale) for x in p) + (scale,)

    def verify_general_position(self) -> bool:
        """Every d+1 of the points are affinely independent."""
        vs = sorted(self.points)
        size = min(len(vs), self.d + 1)
        for group in combinations(vs, size):
            rows = [list(r) for r in zip(*(self.homogeneous(v) for v in group))]
            if not any(det([rows[i] for i in pick]) for pick in combinations(range(self.d + 1), size)):
                return False
        return True


def moment_curve(vertices: Iterable[int], d: int, params: Sequence[int] | None = None) -> GenericPointConfig:
    """Put the i-th smallest vertex at (t, t², ..., t^d) with t = ``params[i]``.

    Parameters default to 1, 2, 3, ...
    """
    vs = sorted(set(vertices))
    if params is None:
        params = range(1, len(vs) + 1)
    params = list(params)
    if len(params) < len(vs):
        raise InputError("not enough moment-curve parameters")
    if len(set(params[: len(vs)])) != len(vs):
        raise InputError("moment-curve parameters must be distinct")
    ts = {v: params[i] for i, v in enumerate(vs)}
    return GenericPointConfig(d, {v: tuple(t**e for e in range(1, d + 1)) for v, t in ts.items()}, ts)


def radon_coefficients(vertices: Sequence[int], cfg: GenericPointConfig) -> list[int]:
    """The affine dependence of d+2 points, up to a positive scalar."""
    cols = [cfg.homogeneous(v) for v in vertices]
    rows = [list(r) for r in zip(*cols)]
    out = []
    for i in range(len(vertices)):
        minor = [r[:i] + r[i + 1:] for r in rows]
        out.append((-1) ** i * det(minor))
    return out


def intersection_parity(sigma: Simplex, tau: Simplex, cfg: GenericPointConfig) -> int:
    """1 iff the open images of σ and τ meet (they meet at most once)."""
    if set(sigma) & set(tau):
        raise InputError("simplices must be vertex-disjoint")
    if len(sigma) + len(tau) != cfg.d + 2 or not sigma or not tau:
        raise InputError(f"dimensions must sum to {cfg.d}")
    coeffs = radon_coefficients(list(sigma) + list(tau), cfg)
    if any(c == 0 for c in coeffs):
        raise DegenerateConfiguration(f"points of {sigma} ∪ {tau} are not in general position")
    left = {c > 0 for c in coeffs[: len(sigma)]}
    right = {c > 0 for c in coeffs[len(sigma):]}
    return int(len(left) == 1 and len(right) == 1 and left != right)


def obstruction_cocycle(cells: Sequence[ProductCell], cfg: GenericPointConfig) -> frozenset[ProductCell]:
    """Support of the intersection cocycle on the given d-cells."""
    return frozenset(c for c in cells if intersection_parity(c.left, c.right, cfg))


@dataclass
class ObstructionResult:
    nonzero: bool
    d: int
    params: dict[int, int]
    cocycle: frozenset  # support, as quotient orbits
    witness: frozenset | None = None  # (d-1)-cochain ν with δν = cocycle
    certificate: frozenset | None = None  # quotient d-cycle pairing oddly with the cocycle


def _evaluate(k: SimplicialComplex, d: int, cfg: GenericPointConfig, cx, inv, quotient) -> ObstructionResult:
    dcells = cx.cells.get(d, ())
    support = obstruction_cocycle(dcells, cfg)
    for c in support:
        if c.swapped() not in support:
            raise InvariantViolation(f"cocycle is not equivariant at {c}")
    if d + 1 <= cx.dimension:
        if cx.boundary[d + 1].transpose().matvec(cx.to_bits(support, d)):
            raise InvariantViolation("intersection cochain is not a cocycle")
    orbits = frozenset(q for q in quotient.cells.get(d, ()) if q.rep in support)
    witness = is_coboundary(orbits, quotient, d) if d <= quotient.dimension else frozenset()
    certificate = None
    if witness is None:
        bits = quotient.to_bits(orbits, d)
        for z in nullspace(quotient.boundary_matrix(d)):
            if (z & bits).bit_count() & 1:
                certificate = quotient.from_bits(z, d)
                break
        if certificate is None:
            raise InvariantViolation("no cycle detects a non-coboundary cocycle")
    return ObstructionResult(witness is None, d, dict(cfg.params), orbits, witness, certificate)


def obstruction_nonzero(
    k: SimplicialComplex,
    d: int,
    params: Sequence[int] | None = None,
    cross_check: bool = True,
    budget: Budget | None = None,
) -> ObstructionResult:
    """Decide whether the Z2 van Kampen class of ``k`` in R^d is nonzero.

    With ``cross_check`` the computation is repeated with prime parameters
    and the two verdicts must agree.
    """
    if d < 1:
        raise InputError("ambient dimension must be at least 1")
    cx, inv = deleted_product(k, budget)
    quotient = quotient_by_involution(cx, inv)
    n = len(k.vertices)
    base = list(params) if params is not None else list(range(1, n + 1))
    result = _with_retries(k, d, base, cx, inv, quotient)
    if cross_check:
        other = _with_retries(k, d, primes(n), cx, inv, quotient)
        if other.nonzero != result.nonzero:
            raise InvariantViolation("obstruction verdict depends on the generic map")
    return result


def obstruction_with_config(k: SimplicialComplex, cfg: GenericPointConfig, budget: Budget | None = None) -> ObstructionResult:
    """Same test, but for a caller-supplied generic position map."""
    cx, inv = deleted_product(k, budget)
    return _evaluate(k, cfg.d, cfg, cx, inv, quotient_by_involution(cx, inv))


def _with_retries(k, d, params, cx, inv, quotient) -> ObstructionResult:
    shifts = [0] + primes(MAX_RETRIES)
    last: DegenerateConfiguration | None = None
    for shift in shifts:
        cfg = moment_curve(k.vertices, d, [t + shift for t in params])
        try:
            return _evaluate(k, d, cfg, cx, inv, quotient)
        except DegenerateConfiguration as exc:
            last = exc
    raise DegenerateConfiguration(f"still degenerate after {MAX_RETRIES} retries: {last}")


def cone_obstruction_check(k: SimplicialComplex, d: int, budget: Budget | None = None) -> tuple[bool, bool]:
    """(ϑ^d(K) ≠ 0, ϑ^{d+1}(CK) ≠ 0)."""
    first = obstruction_nonzero(k, d, budget=budget).nonzero
    second = obstruction_nonzero(cone(k), d + 1, budget=budget).nonzero
    return first, second


def sphere_check_deleted_boundary(d: int, budget: Budget | None = None) -> list[int]:
    """Betti numbers of the deleted product of ∂Δ_{d+1}."""
    if d > 3:
        raise InputError("only d <= 3 is supported")
    cx, _ = deleted_product(boundary_of_simplex(d + 1), budget)
    return betti_numbers(cx)


def cochain_as_json(cochain: Iterable) -> list[list[list[int]]]:
    return sorted([list(o.rep.left), list(o.rep.right)] for o in cochain)
