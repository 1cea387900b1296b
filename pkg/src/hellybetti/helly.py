"""Families of subcomplexes: intersections, Helly numbers, Betti audits.

Member indices are 0-based.  ``u_set(I)`` is the intersection of the members
whose index is *not* in ``I``; ``u_set(range(n))`` is the ambient complex.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from math import ceil

from .complexes import (
    SimplicialComplex,
    boundary_of_simplex,
    closure,
    complex_from_json,
    cone,
    induced_subcomplex,
    simplex_skeleton,
)
from .config import Budget, default_budget
from .errors import BudgetExceeded, InputError
from .gf2 import betti


def _mask(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


class SetFamily:
    """Ambient complex plus an ordered list of subcomplexes."""

    def __init__(self, ambient: SimplicialComplex, members: Sequence[SimplicialComplex]):
        self.ambient = ambient
        self.members = tuple(members)
        for i, m in enumerate(self.members):
            if not m.issubcomplex(ambient):
                raise InputError(f"member {i} is not a subcomplex of the ambient complex")
        self._cache: dict[int, SimplicialComplex] = {}

    @property
    def n(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.n

    @cached_property
    def _groups(self) -> dict[int, list]:
        # faces bucketed by the set of members that miss them
        groups: dict[int, list] = {}
        for face in self.ambient.faces:
            miss = 0
            for i, m in enumerate(self.members):
                if face not in m.faces:
                    miss |= 1 << i
            groups.setdefault(miss, []).append(face)
        return groups

    def _check(self, indices: Iterable[int]) -> int:
        mask = 0
        for i in indices:
            if not 0 <= i < self.n:
                raise InputError(f"member index {i} out of range for {self.n} members")
            mask |= 1 << i
        return mask

    def u_set(self, indices: Iterable[int]) -> SimplicialComplex:
        """Intersection of the members outside ``indices``."""
        return self._u_mask(self._check(indices))

    def _u_mask(self, mask: int) -> SimplicialComplex:
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        groups = self._groups
        faces: list = []
        if 1 << mask.bit_count() < len(groups):
            sub = mask
            while True:
                faces.extend(groups.get(sub, ()))
                if sub == 0:
                    break
                sub = (sub - 1) & mask
        else:
            for miss, fs in groups.items():
                if miss & ~mask == 0:
                    faces.extend(fs)
        out = SimplicialComplex(faces)
        self._cache[mask] = out
        return out

    def intersection(self, indices: Iterable[int]) -> SimplicialComplex:
        """∩ of the members listed (the ambient complex for none)."""
        mask = self._check(indices)
        return self._u_mask(((1 << self.n) - 1) & ~mask)

    @cached_property
    def vertex_masks(self) -> tuple[int, ...]:
        pos = {v: j for j, v in enumerate(self.ambient.vertices)}
        return tuple(_mask(pos[v] for v in m.vertices) for m in self.members)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient.to_json(),
            "members": [m.to_json() for m in self.members],
        }


def family_from_json(data: Mapping) -> SetFamily:
    try:
        ambient = complex_from_json(data["ambient"])
        members = [closure(m["maximal_simplices"]) for m in data["members"]]
    except (KeyError, TypeError):
        raise InputError("family JSON needs 'ambient' and 'members' with 'maximal_simplices'") from None
    return SetFamily(ambient, members)


def u_set(family: SetFamily, indices: Iterable[int]) -> SimplicialComplex:
    return family.u_set(indices)


# --- Helly numbers -----------------------------------------------------------

def _check_budget(family: SetFamily, budget: Budget | None) -> None:
    budget = budget or default_budget()
    if family.n > budget.family:
        raise BudgetExceeded(f"{family.n} members exceeds the family budget {budget.family}")


def minimal_empty_subfamilies(family: SetFamily, budget: Budget | None = None) -> list[tuple[int, ...]]:
    """Subfamilies with empty intersection all of whose proper parts intersect.

    Smallest first; within one size, in increasing index order.
    """
    _check_budget(family, budget)
    masks = family.vertex_masks
    everything = (1 << len(family.ambient.vertices)) - 1
    if not everything:
        return [()]
    level: dict[int, int] = {0: everything}  # nonempty subfamilies of the current size
    found: list[tuple[int, ...]] = []
    while level:
        nxt: dict[int, int] = {}
        for g, common in level.items():
            for j in range(g.bit_length(), family.n):
                h = g | (1 << j)
                if any((h & ~(1 << i)) not in level for i in _indices(g)):
                    continue
                meet = common & masks[j]
                if meet:
                    nxt[h] = meet
                else:
                    found.append(_indices(h))
        level = nxt
    return found


def helly_number(family: SetFamily, budget: Budget | None = None) -> int:
    """1 if all members share a point, else the largest minimal empty subfamily."""
    witnesses = minimal_empty_subfamilies(family, budget)
    if not witnesses:
        return 1
    return max(len(w) for w in witnesses)


# --- hypothesis audit --------------------------------------------------------

@dataclass
class HypothesisReport:
    d: int
    degrees: tuple[int, ...]
    table: dict[tuple[tuple[int, ...], int], int] = field(repr=False)
    helly_number: int

    @property
    def max_betti(self) -> int:
        return max(self.table.values(), default=0)

    def max_in_degree(self, i: int) -> int:
        return max((v for (_, j), v in self.table.items() if j == i), default=0)

    def holds(self, b: int) -> bool:
        """Whether every audited reduced Betti number is at most ``b``."""
        return self.max_betti <= b

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "degrees": list(self.degrees),
            "max_betti": self.max_betti,
            "max_by_degree": {str(i): self.max_in_degree(i) for i in self.degrees},
            "helly": self.helly_number,
            "subfamilies": len({g for g, _ in self.table}),
        }


def audit_degrees(d: int) -> tuple[int, ...]:
    """0, 1, ..., ⌈d/2⌉ - 1."""
    return tuple(range(ceil(d / 2)))


def hypothesis_audit(
    family: SetFamily,
    d: int,
    max_degree: int | None = None,
    budget: Budget | None = None,
) -> HypothesisReport:
    """Reduced Betti numbers of ∩G for every proper subfamily G.

    Degrees default to 0..⌈d/2⌉-1; ``max_degree`` widens or narrows that.
    """
    _check_budget(family, budget)
    degrees = audit_degrees(d) if max_degree is None else tuple(range(max_degree + 1))
    full = (1 << family.n) - 1
    cache: dict[SimplicialComplex, tuple[int, ...]] = {}
    table = {}
    for g in range(full):
        inter = family._u_mask(full & ~g)
        values = cache.get(inter)
        if values is None:
            values = tuple(betti(inter, i, reduced=True) for i in degrees)
            cache[inter] = values
        key = _indices(g)
        for i, v in zip(degrees, values):
            table[(key, i)] = v
    return HypothesisReport(d, degrees, table, helly_number(family, budget))


# --- example families ----------------------------------------------------------

def vertex_deletion_family(ambient: SimplicialComplex) -> SetFamily:
    """Member j is the induced subcomplex on all vertices but the j-th one."""
    vs = ambient.vertices
    return SetFamily(ambient, [induced_subcomplex(ambient, vs[:j] + vs[j + 1:]) for j in range(len(vs))])


def gamma_complex(d: int, copies: int = 1) -> SimplicialComplex:
    """``copies`` disjoint cones over ∂Δ_d; copy c uses vertices c(d+2)..c(d+2)+d+1.

    In each copy the apex is the last vertex.
    """
    if d < 2:
        raise InputError("d must be at least 2")
    base = cone(boundary_of_simplex(d))
    size = d + 2
    faces = set()
    for c in range(copies):
        faces.update(tuple(v + c * size for v in s) for s in base.faces)
    return SimplicialComplex(faces)


def gamma_family(b: int, d: int) -> SetFamily:
    """b(d+2) members U_v, one per vertex v of b disjoint copies of Γ_d.

    U_v (also written F_v) is the induced subcomplex avoiding v.
    """
    if b < 1:
        raise InputError("b must be at least 1")
    return vertex_deletion_family(gamma_complex(d, b))


GAMMA3_PRIME_TETRAHEDRA = ("1245", "1235", "3416", "3426", "5613", "5614", "5623", "5624")


def gamma3_prime() -> SimplicialComplex:
    """Six-vertex subdivision of a tetrahedron; label ``i`` is vertex ``i - 1``."""
    return closure([int(ch) - 1 for ch in label] for label in GAMMA3_PRIME_TETRAHEDRA)


def skeleton_family(n: int, k: int) -> SetFamily:
    """Vertex-deletion family of the k-skeleton of Δ_{n-1}."""
    if not 1 <= k + 1 <= n:
        raise InputError(f"need 1 <= k+1 <= n, got n={n}, k={k}")
    return vertex_deletion_family(simplex_skeleton(n - 1, k))


def interval_family(n: int) -> SetFamily:
    """Complements of the open intervals (i - 1.1, i + 0.1) in [0, n], scaled by 10.

    The ambient is the path on 0..10n; member i (1-based) keeps the grid points
    v <= 10i - 11 and v >= 10i + 1.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    top = 10 * n
    ambient = closure([(v, v + 1) for v in range(top)])
    members = []
    for i in range(1, n + 1):
        keep = [v for v in range(top + 1) if v <= 10 * i - 11 or v >= 10 * i + 1]
        members.append(induced_subcomplex(ambient, keep))
    return SetFamily(ambient, members)


def tight_family(d: int, k: int, n: int) -> SetFamily:
    """Vertex-deletion family of Δ_{n-1}^{(k)} for the embeddable cases.

    Only (k, n) = (d, d+1) and (d-1, d+2) are accepted.
    """
    if (k, n) not in {(d, d + 1), (d - 1, d + 2)}:
        raise InputError(f"(k, n) = ({k}, {n}) is not a supported case for d = {d}")
    return vertex_deletion_family(simplex_skeleton(n - 1, k))
