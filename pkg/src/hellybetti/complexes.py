"""Abstract simplicial complexes, deleted products and their Z2 quotients.

A simplex is a strictly increasing tuple of non-negative vertex ids; ``()``
is the empty simplex.  Complexes never store the empty simplex.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .config import Budget, default_budget
from .errors import BudgetExceeded, InputError
from .gf2 import ChainComplex, Gf2Matrix

Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical form of a vertex collection; rejects repeats and negatives."""
    vs = list(vertices)
    out = tuple(sorted(vs))
    if len(set(out)) != len(vs):
        raise InputError(f"repeated vertex in simplex {vs}")
    if any((not isinstance(v, int)) or isinstance(v, bool) or v < 0 for v in out):
        raise InputError(f"vertex ids must be non-negative ints: {vs}")
    return out


def faces_of(s: Simplex, include_self: bool = True) -> Iterable[Simplex]:
    """All nonempty faces of ``s``."""
    top = len(s) if include_self else len(s) - 1
    for k in range(1, top + 1):
        yield from combinations(s, k)


def facets_of(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; the empty list for vertices."""
    if len(s) <= 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


class SimplicialComplex:
    """Finite abstract simplicial complex, immutable.

    Build through :func:`closure` or the generators below; the constructor
    trusts that ``faces`` is downward closed.
    """

    def __init__(self, faces: Iterable[Simplex]):
        self.faces: frozenset[Simplex] = frozenset(faces)

    # --- basic structure ---------------------------------------------------
    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self.faces if len(s) == 1))

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def dimension(self) -> int:
        return max((len(s) for s in self.faces), default=0) - 1

    @cached_property
    def _by_dim(self) -> dict[int, tuple[Simplex, ...]]:
        out: dict[int, list[Simplex]] = {}
        for s in self.faces:
            out.setdefault(len(s) - 1, []).append(s)
        return {i: tuple(sorted(out.get(i, []))) for i in range(self.dimension + 1)}

    def simplices(self, dim: int | None = None) -> tuple[Simplex, ...]:
        """Simplices of one dimension (sorted), or all of them by (dim, lex)."""
        if dim is None:
            return tuple(s for i in range(self.dimension + 1) for s in self._by_dim[i])
        return self._by_dim.get(dim, ())

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim[i]) for i in range(self.dimension + 1))

    @cached_property
    def maximal_simplices(self) -> tuple[Simplex, ...]:
        covered: set[Simplex] = set()
        for s in self.faces:
            covered.update(facets_of(s))
        return tuple(sorted(s for s in self.faces if s not in covered))

    def __contains__(self, s) -> bool:
        return tuple(s) in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.faces == other.faces

    def __hash__(self) -> int:
        return hash(self.faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={list(self.f_vector)}, maximal={list(map(list, self.maximal_simplices))})"

    def is_empty(self) -> bool:
        return not self.faces

    def __and__(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.faces & other.faces)

    def __or__(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.faces | other.faces)

    def issubcomplex(self, other: SimplicialComplex) -> bool:
        return self.faces <= other.faces

    # --- chains ------------------------------------------------------------
    def chain_complex(self) -> ChainComplex:
        return self._chain_complex

    @cached_property
    def _chain_complex(self) -> ChainComplex:
        cells = {i: self.simplices(i) for i in range(self.dimension + 1)}
        boundary = {}
        for i in range(1, self.dimension + 1):
            row_of = {s: j for j, s in enumerate(cells[i - 1])}
            cols = []
            for s in cells[i]:
                col = 0
                for f in facets_of(s):
                    col |= 1 << row_of[f]
                cols.append(col)
            boundary[i] = Gf2Matrix.from_columns(cols, len(cells[i - 1]))
        # ∂∂ = 0 holds by construction for simplicial boundaries
        return ChainComplex(cells, boundary, check=False)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "maximal_simplices": [list(s) for s in self.maximal_simplices],
        }


def closure(maximal: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of a list of simplices."""
    faces: set[Simplex] = set()
    for raw in maximal:
        s = simplex(raw)
        if s and s not in faces:
            faces.update(faces_of(s))
    return SimplicialComplex(faces)


def complex_from_json(data: Mapping) -> SimplicialComplex:
    try:
        maximal = data["maximal_simplices"]
    except (KeyError, TypeError):
        raise InputError("complex JSON needs a 'maximal_simplices' list") from None
    k = closure(maximal)
    if "vertices" in data and set(data["vertices"]) != set(k.vertices):
        raise InputError("'vertices' does not match the vertices of 'maximal_simplices'")
    return k


# --- generators ------------------------------------------------------------

def full_simplex(n: int) -> SimplicialComplex:
    """Δ_n on vertices 0..n."""
    if n < 0:
        return SimplicialComplex(())
    return closure([range(n + 1)])


def simplex_skeleton(n: int, k: int) -> SimplicialComplex:
    """k-skeleton of Δ_n on vertices 0..n."""
    if not 0 <= k <= n:
        raise InputError(f"need 0 <= k <= n, got n={n}, k={k}")
    return closure(combinations(range(n + 1), k + 1))


def boundary_of_simplex(n: int) -> SimplicialComplex:
    """∂Δ_n, i.e. the (n-1)-skeleton of Δ_n."""
    if n < 1:
        raise InputError("∂Δ_n needs n >= 1")
    return simplex_skeleton(n, n - 1)


def skeleton(k: SimplicialComplex, dim: int) -> SimplicialComplex:
    return SimplicialComplex(s for s in k.faces if len(s) <= dim + 1)


def cone(k: SimplicialComplex, apex: int | None = None) -> SimplicialComplex:
    """Join with a new vertex (default: one more than the largest id)."""
    if apex is None:
        apex = max(k.vertices, default=-1) + 1
    if apex in k.vertex_set:
        raise InputError(f"apex {apex} already used")
    faces = set(k.faces)
    faces.add((apex,))
    faces.update(tuple(sorted(s + (apex,))) for s in k.faces)
    return SimplicialComplex(faces)


def induced_subcomplex(k: SimplicialComplex, vertices: Iterable[int]) -> SimplicialComplex:
    w = frozenset(vertices)
    return SimplicialComplex(s for s in k.faces if w.issuperset(s))


def relabel(k: SimplicialComplex, mapping: Mapping[int, int]) -> SimplicialComplex:
    """Image under an injective vertex relabelling."""
    if len(set(mapping[v] for v in k.vertices)) != len(k.vertices):
        raise InputError("relabelling must be injective")
    return SimplicialComplex(tuple(sorted(mapping[v] for v in s)) for s in k.faces)


def barycentric_subdivision(k: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """sd K together with the map from new vertex ids to faces of K.

    New ids follow the (dimension, lexicographic) order of the faces.
    """
    if k.is_empty():
        raise InputError("subdivision of the empty complex")
    labels = dict(enumerate(k.simplices()))
    ids = {s: v for v, s in labels.items()}
    faces: set[Simplex] = set()
    for top in k.maximal_simplices:
        for chain in flags(top):
            ch = tuple(sorted(ids[s] for s in chain))
            faces.update(faces_of(ch))
    return SimplicialComplex(faces), labels


def flags(top: Simplex) -> Iterable[tuple[Simplex, ...]]:
    """Maximal chains of nonempty faces of ``top`` (one per vertex ordering)."""
    if len(top) == 1:
        yield (top,)
        return
    for i in range(len(top)):
        smaller = top[:i] + top[i + 1:]
        for chain in flags(smaller):
            yield chain + (top,)


# --- deleted products --------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProductCell:
    """The cell left × right of a deleted product."""

    left: Simplex
    right: Simplex

    def __post_init__(self):
        if not self.left or not self.right:
            raise InputError("product cells need nonempty factors")
        if set(self.left) & set(self.right):
            raise InputError(f"factors {self.left} and {self.right} share a vertex")

    @property
    def dimension(self) -> int:
        return len(self.left) + len(self.right) - 2

    def swapped(self) -> ProductCell:
        return ProductCell(self.right, self.left)

    def __str__(self) -> str:
        return f"{list(self.left)}x{list(self.right)}"


@dataclass(frozen=True, order=True)
class Orbit:
    """A cell of a quotient complex: the pair {c, ι(c)} named by ``rep``."""

    rep: ProductCell

    def __str__(self) -> str:
        return "{" + str(self.rep) + "}"


class CellComplex(ChainComplex):
    """Chain complex whose cells carry ProductCell or Orbit labels."""


@dataclass(frozen=True)
class Involution:
    """Cell permutation per dimension, given as index lists."""

    perm: dict[int, tuple[int, ...]]

    def check(self, c: ChainComplex, free: bool = True) -> None:
        for i, p in self.perm.items():
            if sorted(p) != list(range(c.n_cells(i))):
                raise InputError(f"not a permutation in dimension {i}")
            if any(p[p[j]] != j for j in range(len(p))):
                raise InputError(f"involution does not square to identity in dimension {i}")
            if free and any(p[j] == j for j in range(len(p))):
                raise InputError(f"involution fixes a cell in dimension {i}")
        for i in range(1, c.dimension + 1):
            # ∂ P_i = P_{i-1} ∂ as permutations of rows and columns
            cols = c.boundary[i].columns()
            p_lo, p_hi = self.perm[i - 1], self.perm[i]
            for j, col in enumerate(cols):
                moved = 0
                for r in range(c.n_cells(i - 1)):
                    if (col >> r) & 1:
                        moved |= 1 << p_lo[r]
                if moved != cols[p_hi[j]]:
                    raise InputError(f"involution is not cellular in dimension {i}")


def count_disjoint_pairs(k: SimplicialComplex) -> int:
    masks = [sum(1 << v for v in s) for s in k.faces]
    return sum(1 for a in masks for b in masks if not a & b)


def deleted_product(k: SimplicialComplex, budget: Budget | None = None) -> tuple[CellComplex, Involution]:
    """Cells σ×τ over ordered vertex-disjoint pairs, with the swap action."""
    budget = budget or default_budget()
    total = count_disjoint_pairs(k)
    if total > budget.cells:
        raise BudgetExceeded(f"deleted product has {total} cells, budget is {budget.cells}")
    by_dim: dict[int, list[ProductCell]] = {}
    simplices = k.simplices()
    for a in simplices:
        sa = set(a)
        for b in simplices:
            if sa.isdisjoint(b):
                cell = ProductCell(a, b)
                by_dim.setdefault(cell.dimension, []).append(cell)
    top = max(by_dim, default=-1)
    cells = {i: sorted(by_dim.get(i, [])) for i in range(top + 1)}
    index = {i: {c: j for j, c in enumerate(cs)} for i, cs in cells.items()}
    boundary = {}
    for i in range(1, top + 1):
        row_of = index[i - 1]
        cols = []
        for cell in cells[i]:
            col = 0
            for f in facets_of(cell.left):
                col ^= 1 << row_of[ProductCell(f, cell.right)]
            for f in facets_of(cell.right):
                col ^= 1 << row_of[ProductCell(cell.left, f)]
            cols.append(col)
        boundary[i] = Gf2Matrix.from_columns(cols, len(cells[i - 1]))
    cx = CellComplex(cells, boundary)
    perm = {i: tuple(index[i][c.swapped()] for c in cs) for i, cs in cells.items()}
    return cx, Involution(perm)


def quotient_by_involution(c: ChainComplex, inv: Involution) -> CellComplex:
    """One cell per orbit; the representative is the smaller label."""
    inv.check(c, free=True)
    reps: dict[int, list[int]] = {}
    orbit_of: dict[int, dict[int, int]] = {}
    for i in range(c.dimension + 1):
        p = inv.perm[i]
        chosen = [j for j in range(c.n_cells(i)) if j < p[j]]
        reps[i] = chosen
        where = {}
        for o, j in enumerate(chosen):
            where[j] = o
            where[p[j]] = o
        orbit_of[i] = where
    cells = {i: [_orbit_label(c.cells[i][j]) for j in js] for i, js in reps.items()}
    boundary = {}
    for i in range(1, c.dimension + 1):
        cols_full = c.boundary[i].columns()
        cols = []
        for j in reps[i]:
            col = 0
            x = cols_full[j]
            while x:
                low = x & -x
                col ^= 1 << orbit_of[i - 1][low.bit_length() - 1]
                x ^= low
            cols.append(col)
        boundary[i] = Gf2Matrix.from_columns(cols, len(reps[i - 1]))
    return CellComplex(cells, boundary)


def _orbit_label(label):
    return Orbit(label) if isinstance(label, ProductCell) else ("orbit", label)
