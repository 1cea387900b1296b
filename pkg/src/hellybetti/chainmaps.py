"""Simplicial chain maps, homological almost-embeddings, staircase triangulations.

Targets are simplicial complexes, so the support of a chain is a vertex set
and two closed supports are disjoint iff their vertex sets are.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .complexes import SimplicialComplex, Simplex, closure, complex_from_json, facets_of
from .errors import InputError

Chain = frozenset  # frozenset[Simplex]


def chain_boundary(chain: Iterable[Simplex]) -> frozenset[Simplex]:
    """Simplicial boundary over Z2 (vertices have empty boundary)."""
    out: set[Simplex] = set()
    for s in chain:
        for f in facets_of(s):
            out ^= {f}
    return frozenset(out)


def support(chain: Iterable[Simplex]) -> frozenset[int]:
    """Vertex set of the closed subcomplex carried by ``chain``."""
    return frozenset(v for s in chain for v in s)


@dataclass(frozen=True)
class SimplicialChainMap:
    source: SimplicialComplex
    target: SimplicialComplex
    assignment: Mapping[Simplex, frozenset[Simplex]]

    def __call__(self, chain: Iterable[Simplex]) -> frozenset[Simplex]:
        out: set[Simplex] = set()
        for s in chain:
            out ^= self.assignment.get(tuple(s), frozenset())
        return frozenset(out)

    def image(self, s: Simplex) -> frozenset[Simplex]:
        return self.assignment.get(tuple(s), frozenset())

    def image_complex(self) -> SimplicialComplex:
        """Smallest subcomplex of the target containing every image chain."""
        return closure(t for c in self.assignment.values() for t in c)


def verify_chain_map(gamma: SimplicialChainMap) -> list[Simplex]:
    """Simplices of the source where ∂γ ≠ γ∂ or the image is malformed."""
    bad = []
    for s in gamma.source.simplices():
        img = gamma.image(s)
        ok = all(t in gamma.target and len(t) == len(s) for t in img)
        if ok and chain_boundary(img) != gamma(facets_of(s)):
            ok = False
        if not ok:
            bad.append(s)
    extra = set(gamma.assignment) - gamma.source.faces
    bad.extend(sorted(extra))
    return bad


def is_nontrivial(gamma: SimplicialChainMap) -> bool:
    return all(len(gamma.image((v,))) % 2 == 1 for v in gamma.source.vertices)


def almost_embedding_violation(gamma: SimplicialChainMap) -> tuple[Simplex, Simplex] | None:
    """First vertex-disjoint pair whose images have overlapping supports."""
    simplices = gamma.source.simplices()
    supports = {s: support(gamma.image(s)) for s in simplices}
    for a, b in combinations(simplices, 2):
        if not set(a) & set(b) and supports[a] & supports[b]:
            return a, b
    return None


def is_homological_almost_embedding(gamma: SimplicialChainMap) -> bool:
    bad = verify_chain_map(gamma)
    if bad:
        raise InputError(f"not a chain map at {bad[:3]}")
    return is_nontrivial(gamma) and almost_embedding_violation(gamma) is None


def identity_chain_map(k: SimplicialComplex) -> SimplicialChainMap:
    return SimplicialChainMap(k, k, {s: frozenset([s]) for s in k.faces})


def induced_chain_map(
    f: Mapping[int, int], source: SimplicialComplex, target: SimplicialComplex
) -> SimplicialChainMap:
    """σ ↦ f(σ) for a simplicial vertex map that is injective on simplices."""
    assignment = {}
    for s in source.faces:
        img = tuple(sorted(f[v] for v in s))
        if len(set(img)) != len(img):
            raise InputError(f"vertex map collapses simplex {s}")
        if img not in target:
            raise InputError(f"image {img} of {s} is not a simplex of the target")
        assignment[s] = frozenset([img])
    return SimplicialChainMap(source, target, assignment)


def compose(outer: SimplicialChainMap, inner: SimplicialChainMap) -> SimplicialChainMap:
    """outer ∘ inner."""
    return SimplicialChainMap(
        inner.source,
        outer.target,
        {s: outer(inner.image(s)) for s in inner.source.faces},
    )


def chain_map_to_json(gamma: SimplicialChainMap) -> dict:
    return {
        "source": gamma.source.to_json(),
        "target": gamma.target.to_json(),
        "assignment": {
            ",".join(map(str, s)): sorted(list(t) for t in gamma.image(s))
            for s in gamma.source.simplices()
        },
    }


def parse_simplex_key(key: str) -> Simplex:
    try:
        return tuple(sorted(int(x) for x in key.split(","))) if key else ()
    except ValueError:
        raise InputError(f"bad simplex key {key!r}") from None


def chain_map_from_json(data: Mapping) -> SimplicialChainMap:
    try:
        source = complex_from_json(data["source"])
        target = complex_from_json(data["target"])
        raw = data["assignment"]
    except (KeyError, TypeError):
        raise InputError("chain map JSON needs 'source', 'target' and 'assignment'") from None
    assignment = {}
    for key, chain in raw.items():
        acc: set[Simplex] = set()
        for t in chain:
            acc ^= {tuple(sorted(t))}
        assignment[parse_simplex_key(key)] = frozenset(acc)
    return SimplicialChainMap(source, target, assignment)


# --- Eilenberg-MacLane staircase triangulation of Δ_p × Δ_q ------------------

GridPoint = tuple[int, int]


@dataclass(frozen=True)
class StaircaseTriangulation:
    p: int
    q: int
    simplices: tuple[tuple[GridPoint, ...], ...]

    def __len__(self) -> int:
        return len(self.simplices)


def eml_triangulation(p: int, q: int) -> StaircaseTriangulation:
    """All monotone lattice paths from (0, 0) to (p, q), each a (p+q)-simplex."""
    if p < 0 or q < 0:
        raise InputError("p and q must be non-negative")
    paths = []
    for right_steps in combinations(range(p + q), p):
        i = j = 0
        path = [(0, 0)]
        steps = set(right_steps)
        for step in range(p + q):
            if step in steps:
                i += 1
            else:
                j += 1
            path.append((i, j))
        paths.append(tuple(path))
    tri = StaircaseTriangulation(p, q, tuple(sorted(paths)))
    assert len(tri) == comb(p + q, p)
    return tri


def flip(simplex_: tuple[GridPoint, ...]) -> tuple[GridPoint, ...]:
    return tuple((j, i) for i, j in simplex_)


def eml_flip_check(p: int, q: int) -> bool:
    """Swapping coordinates maps the (p, q) staircases onto the (q, p) ones."""
    flipped = {flip(s) for s in eml_triangulation(p, q).simplices}
    return flipped == set(eml_triangulation(q, p).simplices)
