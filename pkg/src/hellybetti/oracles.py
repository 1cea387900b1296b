"""Deliberately naive reference computations used to cross-check the fast paths.

Nothing here shares code with the elimination routines: Betti numbers come
from counting cycle and boundary vectors one by one, Helly numbers from
looking at every subfamily.
"""

from __future__ import annotations

from itertools import combinations

from .complexes import SimplicialComplex, facets_of
from .helly import SetFamily


def _span_size(columns: list[int]) -> int:
    seen = {0}
    for c in columns:
        seen |= {x ^ c for x in seen}
    return len(seen)


def brute_betti(k: SimplicialComplex, reduced: bool = False) -> list[int]:
    """Betti numbers by enumerating every chain (small complexes only)."""
    by_dim = [sorted(s for s in k.faces if len(s) == i + 1) for i in range(k.dimension + 1)]
    if not by_dim:
        return [0]
    cols: list[list[int]] = []
    for i, cells in enumerate(by_dim):
        if i == 0:
            cols.append([0] * len(cells))
            continue
        pos = {s: j for j, s in enumerate(by_dim[i - 1])}
        cols.append([sum(1 << pos[f] for f in facets_of(s)) for s in cells])
    out = []
    for i, cells in enumerate(by_dim):
        cycles = 0
        for x in range(1 << len(cells)):
            acc = 0
            for j in range(len(cells)):
                if x >> j & 1:
                    acc ^= cols[i][j]
            if acc == 0:
                cycles += 1
        boundaries = _span_size(cols[i + 1]) if i + 1 < len(by_dim) else 1
        out.append(cycles.bit_length() - boundaries.bit_length())
    if reduced:
        out[0] -= 1
    return out


def brute_helly(family: SetFamily) -> int:
    """Largest subfamily with empty intersection whose proper parts all intersect."""
    sets = [m.vertex_set for m in family.members]
    ambient = family.ambient.vertex_set
    n = len(sets)
    if not ambient:
        return 0  # the empty subfamily already has empty intersection

    def meet(group) -> frozenset:
        out = ambient
        for i in group:
            out = out & sets[i]
        return out

    best = 0
    for size in range(n + 1):
        for group in combinations(range(n), size):
            if meet(group):
                continue
            if all(meet(group[:i] + group[i + 1:]) for i in range(size)):
                best = max(best, size)
    return best if best else 1
