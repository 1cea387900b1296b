"""Constrained chain maps and the inductive construction that produces them.

A bundle (K, γ, Φ, F) pairs a chain map γ: K → ambient(F) with a label map Φ
from simplices of K to member-index sets, such that γ(σ) lives in
``F.u_set(Φ(σ))``.  The builders below realize the dimension-by-dimension
construction; every Ramsey-type threshold is replaced by a direct search of
the actual family, so a builder either returns a verified bundle or raises
:class:`InsufficientFamily`.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import NamedTuple

from .chainmaps import (
    SimplicialChainMap,
    chain_map_from_json,
    chain_map_to_json,
    is_homological_almost_embedding,
    parse_simplex_key,
    verify_chain_map,
)
from .complexes import (
    SimplicialComplex,
    Simplex,
    barycentric_subdivision,
    complex_from_json,
    facets_of,
    faces_of,
    flags,
    simplex_skeleton,
    skeleton,
)
from .config import Budget, default_budget
from .errors import BudgetExceeded, InputError, InsufficientFamily, InvariantViolation
from .gf2 import HomologyBasis, is_boundary
from .helly import SetFamily, family_from_json

IndexSet = frozenset  # frozenset[int] of 0-based member indices


# --- bundles and their verifier --------------------------------------------------

@dataclass
class ConstrainedChainMap:
    """γ: K → F.ambient together with the constraint labels Φ."""

    complex: SimplicialComplex
    family: SetFamily
    chain_map: SimplicialChainMap
    phi: dict[Simplex, IndexSet]
    notes: dict = field(default_factory=dict)

    def label(self, s: Simplex) -> IndexSet:
        return self.phi[tuple(s)]

    def to_json(self) -> dict:
        return {
            "complex": self.complex.to_json(),
            "family": self.family.to_json(),
            "chain_map": chain_map_to_json(self.chain_map),
            "phi": {",".join(map(str, s)): sorted(v) for s, v in sorted(self.phi.items(), key=lambda kv: (len(kv[0]), kv[0]))},
            "notes": self.notes,
        }


def bundle_from_json(data: Mapping) -> ConstrainedChainMap:
    try:
        k = complex_from_json(data["complex"])
        fam = family_from_json(data["family"])
        gamma = chain_map_from_json(data["chain_map"])
        phi = {parse_simplex_key(key): frozenset(v) for key, v in data["phi"].items()}
    except (KeyError, TypeError, AttributeError):
        raise InputError("bundle JSON needs 'complex', 'family', 'chain_map' and 'phi'") from None
    if gamma.source != k or gamma.target != fam.ambient:
        raise InputError("chain map must go from 'complex' to the ambient complex of 'family'")
    return ConstrainedChainMap(k, fam, gamma, phi, dict(data.get("notes", {})))


class Violation(NamedTuple):
    kind: str  # "phi-empty", "phi-missing", "phi-range", "phi-intersection", "support", "chain-map", "nontrivial"
    where: tuple


def verify_constrained(c: ConstrainedChainMap) -> list[Violation]:
    """Every way in which ``c`` fails to be a constrained chain map (empty if none)."""
    out: list[Violation] = []
    phi = c.phi
    if phi.get((), frozenset()) != frozenset():
        out.append(Violation("phi-empty", ()))
    simplices = c.complex.simplices()
    missing = [s for s in simplices if s not in phi]
    out.extend(Violation("phi-missing", (s,)) for s in missing)
    for s in simplices:
        if s in phi and any(not 0 <= i < c.family.n for i in phi[s]):
            out.append(Violation("phi-range", (s,)))
    present = [s for s in simplices if s in phi]
    for a, b in combinations(present, 2):
        meet = tuple(sorted(set(a) & set(b)))
        if phi.get(meet, frozenset() if not meet else None) != phi[a] & phi[b]:
            out.append(Violation("phi-intersection", (a, b)))
    out.extend(Violation("chain-map", (s,)) for s in verify_chain_map(c.chain_map))
    for v in c.complex.vertices:
        if len(c.chain_map.image((v,))) % 2 == 0:
            out.append(Violation("nontrivial", ((v,),)))
    for s in present:
        region = c.family.u_set(phi[s])
        if not all(t in region for t in c.chain_map.image(s)):
            out.append(Violation("support", (s,)))
    return out


def almost_embedding_verdict(c: ConstrainedChainMap) -> bool:
    """Whether γ is a homological almost-embedding.

    When the family has empty intersection the answer must be yes; a no is
    reported as an invariant violation.
    """
    bad = verify_constrained(c)
    if bad:
        raise InputError(f"bundle is not a constrained chain map: {bad[:3]}")
    verdict = is_homological_almost_embedding(c.chain_map)
    if c.family.intersection(range(c.family.n)).is_empty() and not verdict:
        raise InvariantViolation("constrained chain map over an empty-intersection family is not an almost-embedding")
    return verdict


# --- selections and rescaling ----------------------------------------------------

@dataclass(frozen=True)
class SelectionPattern:
    """Positions ``Q`` (1-based) inside windows of size ``w``."""

    positions: tuple[int, ...]
    w: int

    def __post_init__(self):
        pos = tuple(sorted(set(self.positions)))
        if len(pos) != len(self.positions) or any(not 1 <= p <= self.w for p in pos):
            raise InputError(f"positions {self.positions} are not distinct elements of 1..{self.w}")
        object.__setattr__(self, "positions", pos)

    @property
    def q(self) -> int:
        return len(self.positions)


def selected_subset(pattern: SelectionPattern, window: Iterable) -> tuple:
    """Elements of ``window`` (sorted) at the positions of ``pattern``."""
    ordered = sorted(window)
    if len(ordered) != pattern.w:
        raise InputError(f"window has {len(ordered)} elements, pattern expects {pattern.w}")
    return tuple(ordered[p - 1] for p in pattern.positions)


def selects(pattern: SelectionPattern, subset: Iterable, window: Iterable) -> bool:
    return selected_subset(pattern, window) == tuple(sorted(subset))


@dataclass
class RescaleResult:
    pi: dict  # Y -> Z, strictly increasing
    windows: list[tuple]  # W_i, sorted
    dummies: list[tuple[Fraction, ...]]  # D_i before re-embedding into Z


def rescale(pattern: SelectionPattern, Y: Iterable, Z: Iterable, A: Sequence[Iterable]) -> RescaleResult:
    """Injection π: Y → Z and windows W_i with Q selecting π(A_i) in W_i.

    Windows of different sets meet only in π(A_i ∩ A_j).  Dummy points are
    rationals a + 1 - 2^-g placed just after an integer a, g counting up
    globally, so all dummy sets are disjoint.
    """
    ys = sorted(Y)
    zs = sorted(Z)
    q, w = pattern.q, pattern.w
    sets = [tuple(sorted(a)) for a in A]
    if len(set(ys)) != len(ys) or len(set(zs)) != len(zs):
        raise InputError("Y and Z must not contain repeats")
    rank = {y: i + 1 for i, y in enumerate(ys)}
    for a in sets:
        if len(a) != q or len(set(a)) != q or any(x not in rank for x in a):
            raise InputError(f"{a} is not a {q}-subset of Y")
    need = len(ys) + len(sets) * (w - q)
    if len(zs) < need:
        raise InputError(f"|Z| = {len(zs)} is below |Y| + r(w - q) = {need}")

    g = 0
    dummies = []
    for a in sets:
        anchors = [rank[x] for x in a]
        # gap j holds the positions strictly between the j-th and (j+1)-th selected ones
        gaps = [p - prev - 1 for prev, p in zip((0,) + pattern.positions, pattern.positions)]
        gaps.append(w - pattern.positions[-1] if q else w)
        d = []
        for j, count in enumerate(gaps):
            base = (anchors[0] - 1 if anchors else 0) if j == 0 else anchors[j - 1]
            for _ in range(count):
                g += 1
                d.append(base + 1 - Fraction(1, 2**g))
        dummies.append(tuple(d))

    points = sorted([Fraction(i) for i in range(1, len(ys) + 1)] + [x for d in dummies for x in d])
    nu = {p: zs[i] for i, p in enumerate(points)}
    pi = {y: nu[Fraction(rank[y])] for y in ys}
    windows = [tuple(sorted([nu[x] for x in d] + [pi[x] for x in a])) for a, d in zip(sets, dummies)]
    return RescaleResult(pi, windows, dummies)


def rescale_violations(pattern: SelectionPattern, Y, A: Sequence[Iterable], result: RescaleResult) -> list[str]:
    """Audit the three rescaling postconditions."""
    out = []
    ys = sorted(Y)
    images = [result.pi[y] for y in ys]
    if any(a >= b for a, b in zip(images, images[1:])):
        out.append("pi is not strictly increasing")
    sets = [frozenset(a) for a in A]
    for i, (a, win) in enumerate(zip(sets, result.windows)):
        if len(win) != pattern.w or not selects(pattern, (result.pi[x] for x in a), win):
            out.append(f"pattern does not select pi(A_{i}) in W_{i}")
    for i, j in combinations(range(len(sets)), 2):
        if set(result.windows[i]) & set(result.windows[j]) != {result.pi[x] for x in sets[i] & sets[j]}:
            out.append(f"W_{i} and W_{j} meet outside pi(A_{i} ∩ A_{j})")
    return out


# --- Ramsey search -----------------------------------------------------------------

_FAIL = object()
_UNSET = object()


def ramsey_find(
    x: int,
    coloring: Callable[[tuple], Hashable | None],
    z: int,
    vertices: Iterable,
    budget: Budget | None = None,
) -> tuple | None:
    """First z-subset (lexicographic) whose x-subsets all get the same color.

    ``coloring`` receives sorted x-tuples; the color ``None`` never counts as
    monochromatic.  Returns ``None`` if no such subset exists.
    """
    vs = sorted(vertices)
    if x < 1 or z < 0:
        raise InputError("need x >= 1 and z >= 0")
    if z > len(vs):
        return None
    if z < x:
        return tuple(vs[:z])
    limit = (budget or default_budget()).search
    memo: dict[tuple, Hashable | None] = {}
    nodes = 0
    chosen: list = []

    def color(key: tuple):
        if key not in memo:
            memo[key] = coloring(key)
        return memo[key]

    def extend(start: int, current):
        nonlocal nodes
        if len(chosen) == z:
            return current
        for idx in range(start, len(vs) - (z - len(chosen)) + 1):
            nodes += 1
            if nodes > limit:
                raise BudgetExceeded(f"Ramsey search exceeded {limit} nodes")
            v = vs[idx]
            new = current
            ok = True
            if len(chosen) >= x - 1:
                for rest in combinations(chosen, x - 1):
                    c = color(rest + (v,))
                    if c is None or (new is not _UNSET and c != new):
                        ok = False
                        break
                    new = c
            if ok:
                chosen.append(v)
                if extend(idx + 1, new) is not _FAIL:
                    return True
                chosen.pop()
        return _FAIL

    return tuple(chosen) if extend(0, _UNSET) is not _FAIL else None


# --- label-map extension -------------------------------------------------------------

def check_monotone(psi: Mapping[Simplex, IndexSet]) -> None:
    for s, labels in psi.items():
        for f in facets_of(s):
            if f in psi and not psi[f] <= labels:
                raise InputError(f"label map is not monotone at {f} ⊂ {s}")


def psi_extend(psi: Mapping[Simplex, IndexSet], A: Iterable[int], check: bool = True) -> IndexSet:
    """Union of Ψ(τ) over the simplices τ ⊆ A of its domain."""
    if check:
        check_monotone(psi)
    a = tuple(sorted(set(A)))
    top = min(max((len(s) for s in psi), default=0), len(a))
    out: set[int] = set()
    if len(psi) <= sum(comb(len(a), i) for i in range(1, top + 1)):
        sa = set(a)
        for s, labels in psi.items():
            if s and sa.issuperset(s):
                out |= labels
    else:
        for size in range(1, top + 1):
            for s in combinations(a, size):
                out |= psi.get(s, frozenset())
    return frozenset(out)


class ExtendedLabels:
    """Ψ extended to arbitrary vertex sets, with memoization."""

    def __init__(self, psi: Mapping[Simplex, IndexSet]):
        check_monotone(psi)
        self.psi = psi
        self._memo: dict[tuple, IndexSet] = {}

    def __call__(self, A: Iterable[int]) -> IndexSet:
        key = tuple(sorted(set(A)))
        hit = self._memo.get(key)
        if hit is None:
            hit = psi_extend(self.psi, key, check=False)
            self._memo[key] = hit
        return hit


# --- barycentric map α ---------------------------------------------------------------

def top_flags(s: Simplex, ids: Mapping[Simplex, int]) -> list[Simplex]:
    """Top simplices of sd(s), as sorted tuples of subdivision vertex ids."""
    return [tuple(sorted(ids[f] for f in chain)) for chain in flags(s)]


def alpha_map(k: SimplicialComplex, dim: int) -> SimplicialChainMap:
    """σ ↦ sum of the top simplices of sd σ, on the (dim - 1)-skeleton of ``k``.

    The target is ``barycentric_subdivision(k)[0]``.
    """
    sd, labels = barycentric_subdivision(k)
    ids = {face: i for i, face in labels.items()}
    source = skeleton(k, dim - 1)
    assignment = {s: frozenset(top_flags(s, ids)) for s in source.faces}
    return SimplicialChainMap(source, sd, assignment)


def alpha_boundary_identity(k: SimplicialComplex, s: Simplex) -> bool:
    """α(∂σ) equals the sum of ∂τ over the top simplices τ of sd σ."""
    _, labels = barycentric_subdivision(k)
    ids = {face: i for i, face in labels.items()}
    lhs: set[Simplex] = set()
    for f in facets_of(s):
        lhs ^= set(top_flags(f, ids))
    rhs: set[Simplex] = set()
    for tau in top_flags(s, ids):
        rhs ^= set(facets_of(tau))
    return lhs == rhs


# --- builders ------------------------------------------------------------------------

Builder = Callable[..., ConstrainedChainMap]


def _chain_sum(chains: Iterable[Iterable[Simplex]]) -> frozenset[Simplex]:
    out: set[Simplex] = set()
    for c in chains:
        out ^= set(c)
    return frozenset(out)


def _finish(c: ConstrainedChainMap) -> ConstrainedChainMap:
    bad = verify_constrained(c)
    if bad:
        raise InvariantViolation(f"builder produced an unconstrained bundle: {bad[:3]}")
    return c


def build_dim0(k: SimplicialComplex, family: SetFamily, b: int | None = None) -> ConstrainedChainMap:
    """The j-th vertex gets label {j} and goes to the least vertex of u_set({j})."""
    if k.dimension > 0:
        raise InputError("build_dim0 needs a complex of dimension at most 0")
    vs = k.vertices
    if len(vs) > family.n:
        raise InsufficientFamily(f"{len(vs)} vertices but only {family.n} members")
    assignment = {}
    phi: dict[Simplex, IndexSet] = {(): frozenset()}
    for j, v in enumerate(vs):
        region = family.u_set([j])
        if region.is_empty():
            raise InsufficientFamily(f"the intersection of all members but {j} is empty")
        assignment[(v,)] = frozenset([(region.vertices[0],)])
        phi[(v,)] = frozenset([j])
    gamma = SimplicialChainMap(k, family.ambient, assignment)
    return _finish(ConstrainedChainMap(k, family, gamma, phi, {"builder": "dim0"}))


def build_dim1(
    k: SimplicialComplex, family: SetFamily, b: int, budget: Budget | None = None
) -> ConstrainedChainMap:
    """Graphs: choose a uniform 2-in-(2^b + 1) selection, then fill edges."""
    if k.dimension > 1:
        raise InputError("build_dim1 needs a complex of dimension at most 1")
    if b < 0:
        raise InputError("b must be non-negative")
    edges = k.simplices(1)
    if not edges:
        return build_dim0(k, family)
    w = 2**b + 1
    t = len(edges) * (w - 2) + len(k.vertices)
    if t > family.n:
        raise InsufficientFamily(f"need at least {t} members, have {family.n}")
    base = build_dim0(simplex_skeleton(family.n - 1, 0), family)
    g0 = base.chain_map

    # Step 1: colour each w-set of member indices by the first pair whose
    # point images can be joined inside u_set(S)
    pairs = list(combinations(range(w), 2))

    def colour(S: tuple) -> tuple[int, int] | None:
        region = family.u_set(S)
        for p, r in pairs:
            z = g0.image((S[p],)) ^ g0.image((S[r],))
            if is_boundary(z, region, 0) is not None:
                return (p + 1, r + 1)
        return None

    # Step 2: a t-set all of whose w-subsets share the colour
    T = ramsey_find(w, colour, t, range(family.n), budget)
    if T is None:
        raise InsufficientFamily(f"no {t} members with a uniform 2-in-{w} selection")
    pattern = SelectionPattern(colour(T[:w]), w)

    # Step 3: spread the edges over disjoint windows
    res = rescale(pattern, k.vertices, T, edges)

    # Step 4: assemble
    assignment: dict[Simplex, frozenset] = {}
    phi: dict[Simplex, IndexSet] = {(): frozenset()}
    for v in k.vertices:
        assignment[(v,)] = g0.image((res.pi[v],))
        phi[(v,)] = frozenset([res.pi[v]])
    for e, win in zip(edges, res.windows):
        region = family.u_set(win)
        z = assignment[(e[0],)] ^ assignment[(e[1],)]
        fill = is_boundary(z, region, 0)
        if fill is None:
            raise InvariantViolation(f"edge {e}: endpoints not joined in its window {win}")
        assignment[e] = fill
        phi[e] = frozenset(win)
    gamma = SimplicialChainMap(k, family.ambient, assignment)
    notes = {"builder": "dim1", "T": list(T), "Q": list(pattern.positions), "w": w}
    return _finish(ConstrainedChainMap(k, family, gamma, phi, notes))


def build_step(
    k: SimplicialComplex,
    family: SetFamily,
    b: int,
    recurse: Builder,
    m: int | None = None,
    budget: Budget | None = None,
) -> ConstrainedChainMap:
    """Lift a builder for dimension dim K - 1 to a builder for dim K.

    ``recurse(L, family, b)`` must return a bundle on L = Δ_s^{(dim K - 1)}.
    """
    dim = k.dimension
    if dim < 1:
        raise InputError("build_step needs a complex of dimension at least 1")
    sd, labels = barycentric_subdivision(k)
    ids = {face: i for i, face in labels.items()}
    Y = sd.vertices
    tops = k.simplices(dim)
    A = [tuple(sorted(ids[f] for f in faces_of(s))) for s in tops]
    ell = 2 ** (dim + 1) - 1
    m = ell if m is None else m
    if m < ell:
        raise InputError(f"m must be at least {ell}")
    t = len(Y) + len(tops) * (m - ell)

    last_reason = f"need at least {t} members, have {family.n}"
    for size in range(t, family.n + 1):
        try:
            inner = recurse(simplex_skeleton(size - 1, dim - 1), family, b)
        except InsufficientFamily as exc:
            last_reason = f"recursion on {size} vertices failed: {exc}"
            break
        found = _uniform_selection(inner, dim, ell, m, t, budget)
        if found is not None:
            T, pattern, colours = found
            return _assemble(k, family, inner, sd, ids, tops, A, T, pattern, colours)
        last_reason = f"no uniform selection among {size} vertices"
    raise InsufficientFamily(last_reason)


def _uniform_selection(inner: ConstrainedChainMap, dim: int, ell: int, m: int, t: int, budget):
    """Search T ⊆ V(Δ_s) of size t on which every m-subset uses one pattern."""
    psi = ExtendedLabels(inner.phi)
    g1 = inner.chain_map
    family = inner.family
    bases: dict[IndexSet, HomologyBasis] = {}
    colours_seen: set[int] = {0}

    def pattern_of(M: tuple):
        labels = psi(M)
        region = family.u_set(labels)
        basis = bases.get(labels)
        if basis is None:
            basis = bases[labels] = HomologyBasis(region, dim - 1)

        def colour(sigma: tuple):
            z = g1(facets_of(sigma))
            if not all(c in region for c in z):
                raise InvariantViolation(f"inner image of ∂{sigma} leaves u_set(Ψ(M))")
            return basis.coordinates(z)

        L = ramsey_find(dim + 1, colour, ell, M, budget)
        if L is None:
            return None
        seen = {colour(s) for s in combinations(M, dim + 1)}
        colours_seen.add(len(seen))
        return tuple(M.index(x) + 1 for x in L)

    T = ramsey_find(m, pattern_of, t, inner.complex.vertices, budget)
    if T is None:
        return None
    return T, SelectionPattern(pattern_of(T[:m]), m), max(colours_seen)


def _assemble(k, family, inner, sd, ids, tops, A, T, pattern, colours) -> ConstrainedChainMap:
    dim = k.dimension
    psi = ExtendedLabels(inner.phi)
    g1 = inner.chain_map
    res = rescale(pattern, sd.vertices, T, A)
    beta, kappa = res.pi, dict(zip(tops, res.windows))

    # P1-P3
    problems = []
    images = set(beta.values())
    for s, win in kappa.items():
        if set(win) & images != {beta[ids[f]] for f in faces_of(s)}:
            problems.append(f"P1 fails at {s}")
    for a, b_ in combinations(tops, 2):
        meet = tuple(sorted(set(a) & set(b_)))
        expect = {beta[ids[f]] for f in faces_of(meet)} if meet else set()
        if set(kappa[a]) & set(kappa[b_]) != expect:
            problems.append(f"P2 fails at {a}, {b_}")

    def beta_sharp(tau: Simplex) -> Simplex:
        return tuple(sorted(beta[x] for x in tau))

    assignment: dict[Simplex, frozenset] = {}
    phi: dict[Simplex, IndexSet] = {(): frozenset()}
    for s in k.simplices():
        if len(s) <= dim:
            assignment[s] = _chain_sum(g1.image(beta_sharp(tau)) for tau in top_flags(s, ids))
            phi[s] = psi(beta[ids[f]] for f in faces_of(s))

    summands = set()
    for s in tops:
        labels = psi(kappa[s])
        region = family.u_set(labels)
        basis = HomologyBasis(region, dim - 1)
        flags_ = top_flags(s, ids)
        classes = {basis.coordinates(g1(facets_of(beta_sharp(tau)))) for tau in flags_}
        if len(classes) != 1:
            problems.append(f"P3 fails at {s}")
        summands.add(len(flags_))
        if len(flags_) % 2:
            raise InvariantViolation(f"odd number {len(flags_)} of summands at {s}")
        z = _chain_sum(assignment[f] for f in facets_of(s))
        via_alpha = _chain_sum(g1(facets_of(beta_sharp(tau))) for tau in flags_)
        if z != via_alpha:
            raise InvariantViolation(f"boundary identity for α fails at {s}")
        fill = is_boundary(z, region, dim - 1)
        if fill is None:
            raise InvariantViolation(f"parity fill failed at {s}")
        assignment[s] = fill
        phi[s] = labels
    if problems:
        raise InvariantViolation("; ".join(problems[:3]))

    gamma = SimplicialChainMap(k, family.ambient, assignment)
    notes = {
        "builder": f"step{dim}",
        "T": list(T),
        "Q": list(pattern.positions),
        "w": pattern.w,
        "summands": sorted(summands),
        "max_colours": colours,
        "inner": inner.notes,
    }
    return _finish(ConstrainedChainMap(k, family, gamma, phi, notes))


def build_ccm(
    k: SimplicialComplex, family: SetFamily, b: int, budget: Budget | None = None
) -> ConstrainedChainMap:
    """Dispatch on dimension: dim0, dim1, then repeated lifting steps."""
    if k.dimension <= 0:
        return build_dim0(k, family)
    if k.dimension == 1:
        return build_dim1(k, family, b, budget)
    return build_step(k, family, b, lambda L, F, bb: build_ccm(L, F, bb, budget), budget=budget)


__all__ = [
    "ConstrainedChainMap",
    "RescaleResult",
    "SelectionPattern",
    "Violation",
    "alpha_boundary_identity",
    "alpha_map",
    "almost_embedding_verdict",
    "build_ccm",
    "build_dim0",
    "build_dim1",
    "build_step",
    "bundle_from_json",
    "check_monotone",
    "psi_extend",
    "ramsey_find",
    "rescale",
    "rescale_violations",
    "selected_subset",
    "selects",
    "verify_constrained",
]
