"""The acceptance corpus, runnable without pytest.

Each check returns a :class:`CheckResult`; the report is deterministic (no
timings, seeded randomness) so two runs produce identical output.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .chainmaps import eml_flip_check, eml_triangulation, is_homological_almost_embedding, verify_chain_map
from .complexes import (
    SimplicialComplex,
    boundary_of_simplex,
    closure,
    cone,
    full_simplex,
    induced_subcomplex,
    simplex_skeleton,
)
from .construction import (
    ConstrainedChainMap,
    SelectionPattern,
    alpha_boundary_identity,
    alpha_map,
    build_dim0,
    build_dim1,
    build_step,
    rescale,
    rescale_violations,
    verify_constrained,
)
from .gf2 import betti, betti_numbers
from .helly import (
    SetFamily,
    gamma3_prime,
    gamma_family,
    helly_number,
    hypothesis_audit,
    interval_family,
    skeleton_family,
    tight_family,
    vertex_deletion_family,
)
from .obstruction import obstruction_nonzero, sphere_check_deleted_boundary
from .oracles import brute_betti, brute_helly

SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}


def _result(number: int, title: str, failures: list[str], ok_detail: str) -> CheckResult:
    if failures:
        shown = "; ".join(failures[:4]) + (f" (+{len(failures) - 4} more)" if len(failures) > 4 else "")
        return CheckResult(number, title, False, shown)
    return CheckResult(number, title, True, ok_detail)


# --- 1 ----------------------------------------------------------------------------

def check_betti_formula() -> CheckResult:
    failures = []
    count = 0
    for m in range(2, 9):
        for k in range(4):
            if k + 1 > m:
                continue
            got = betti(simplex_skeleton(m - 1, k), k, reduced=True)
            count += 1
            if got != comb(m - 1, k + 1):
                failures.append(f"m={m} k={k}: {got} != {comb(m - 1, k + 1)}")
    return _result(1, "skeleton Betti formula", failures, f"{count} cases exact")


# --- 2 ----------------------------------------------------------------------------

def helly_cases() -> list[tuple[str, Callable[[], SetFamily], int]]:
    cases = [(f"gamma({b},{d})", lambda b=b, d=d: gamma_family(b, d), b * (d + 2)) for b, d in [(1, 2), (2, 2), (1, 3)]]
    cases += [
        (f"skeleton({n},{k})", lambda n=n, k=k: skeleton_family(n, k), n)
        for n in range(1, 8)
        for k in range(3)
        if k + 1 <= n
    ]
    cases += [(f"interval({n})", lambda n=n: interval_family(n), n) for n in range(1, 7)]
    cases += [("tight(2,2,3)", lambda: tight_family(2, 2, 3), 3), ("tight(3,2,5)", lambda: tight_family(3, 2, 5), 5)]
    return cases


def check_helly_numbers() -> CheckResult:
    failures = []
    cases = helly_cases()
    for name, make, expected in cases:
        got = helly_number(make())
        if got != expected:
            failures.append(f"{name}: {got} != {expected}")
    return _result(2, "Helly numbers of the example families", failures, f"{len(cases)} families exact")


# --- 3 ----------------------------------------------------------------------------

def check_audits() -> CheckResult:
    failures = []
    for b in (1, 2):
        for d in (2, 3, 4):
            rep = hypothesis_audit(gamma_family(b, d), d)
            if not rep.holds(b):
                failures.append(f"gamma({b},{d}) max β̃ {rep.max_betti} > {b}")
    for d, k, n in [(2, 2, 3), (3, 2, 5)]:
        rep = hypothesis_audit(tight_family(d, k, n), d)
        if rep.max_betti != 0:
            failures.append(f"tight({d},{k},{n}) has nonzero β̃ {rep.max_betti}")
    for n in range(1, 7):
        fam = interval_family(n)
        for size in range(1, n + 1):
            for group in combinations(range(n), size):
                value = betti(fam.intersection(group), 0, reduced=True)
                if value > size:
                    failures.append(f"interval({n}) {group}: β̃0 = {value}")
    return _result(3, "hypothesis audits", failures, "gamma b<=2 d<=4, tight, interval n<=6 all within bounds")


# --- 4 ----------------------------------------------------------------------------

def gamma3_prime_report() -> list[tuple[tuple[int, ...], list[int]]]:
    """(1-based vertex labels, reduced Betti vector) for every induced subcomplex."""
    k = gamma3_prime()
    out = []
    for size in range(1, 7):
        for vs in combinations(k.vertices, size):
            sub = induced_subcomplex(k, vs)
            out.append((tuple(v + 1 for v in vs), [betti(sub, i, reduced=True) for i in range(4)]))
    return out


def check_gamma3_prime() -> CheckResult:
    failures = []
    report = gamma3_prime_report()
    for labels, values in report:
        if values[0] != 0 or values[1] != 0 or values[3] != 0 or values[2] > 1:
            failures.append(f"{{{','.join(map(str, labels))}}} has β̃ = {values}")
    ok = f"all {len(report)} induced subcomplexes connected, with β̃ only in degree 2 and at most 1"
    return _result(4, "Γ'3 induced subcomplexes", failures, ok)


# --- 5 ----------------------------------------------------------------------------

def obstruction_cases() -> list[tuple[str, SimplicialComplex, int, bool]]:
    cases = [("Δ4^(1) in R^2", simplex_skeleton(4, 1), 2, True)]
    cases += [(f"∂Δ{d + 1} in R^{d}", boundary_of_simplex(d + 1), d, True) for d in (1, 2, 3)]
    cases += [("cone(∂Δ2) in R^2", cone(boundary_of_simplex(2)), 2, True)]
    cases += [(f"Δ{d} in R^{d}", full_simplex(d), d, False) for d in (1, 2)]
    return cases


def check_obstruction() -> CheckResult:
    failures = []
    for name, k, d, expected in obstruction_cases():
        got = obstruction_nonzero(k, d).nonzero
        if got != expected:
            failures.append(f"{name}: nonzero={got}, expected {expected}")
    for d in (1, 2, 3):
        got = sphere_check_deleted_boundary(d)
        sphere = [1] + [0] * (d - 1) + [1]
        if got != sphere:
            failures.append(f"deleted ∂Δ{d + 1}: Betti {got} != {sphere}")
    return _result(5, "van Kampen obstruction", failures, "all verdicts and sphere Betti vectors as expected")


# --- 6 ----------------------------------------------------------------------------

def grid_chains(p: int, q: int) -> list[tuple[tuple[int, int], ...]]:
    """Maximal chains of [0..p] x [0..q] by brute force over covering relations."""
    out = []

    def walk(path):
        i, j = path[-1]
        if (i, j) == (p, q):
            out.append(tuple(path))
            return
        if i < p:
            walk(path + [(i + 1, j)])
        if j < q:
            walk(path + [(i, j + 1)])

    walk([(0, 0)])
    return out


def check_eml() -> CheckResult:
    failures = []
    for p in range(5):
        for q in range(5):
            tri = eml_triangulation(p, q)
            if len(tri) != comb(p + q, p):
                failures.append(f"({p},{q}) count {len(tri)}")
            if not eml_flip_check(p, q):
                failures.append(f"({p},{q}) flip")
            chains = grid_chains(p, q)
            if len(set(tri.simplices)) != len(tri.simplices) or set(tri.simplices) != set(chains):
                failures.append(f"({p},{q}) not a partition of the maximal chains")
    return _result(6, "staircase triangulations", failures, "25 grids: counts, flips and chain partitions exact")


# --- 7 ----------------------------------------------------------------------------

def random_rescale_instance(rng: random.Random):
    w = rng.randint(1, 5)
    q = rng.randint(0, w)
    r = rng.randint(1, 5)
    pattern = SelectionPattern(tuple(sorted(rng.sample(range(1, w + 1), q))), w)
    y = rng.randint(max(q, 1), max(q, 1) + 5)
    Y = sorted(rng.sample(range(100), y))
    A = [rng.sample(Y, q) for _ in range(r)]
    need = y + r * (w - q)
    Z = sorted(rng.sample(range(1000), need + rng.randint(0, 5)))
    return pattern, Y, Z, A


def check_rescale(instances: int = 1000, seed: int = SEED) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    for n in range(instances):
        pattern, Y, Z, A = random_rescale_instance(rng)
        res = rescale(pattern, Y, Z, A)
        bad = rescale_violations(pattern, Y, A, res)
        if bad or not set(res.pi.values()) <= set(Z) or any(not set(win) <= set(Z) for win in res.windows):
            failures.append(f"instance {n}: {bad or 'values outside Z'}")
    return _result(7, "rescaling", failures, f"{instances} random instances satisfy all postconditions")


# --- 8 ----------------------------------------------------------------------------

def nested_path_family(n: int = 12) -> SetFamily:
    """n nested sub-paths [0, n + i] of the path on 0..2n; all contain vertex 0."""
    ambient = closure([(v, v + 1) for v in range(2 * n)])
    members = [induced_subcomplex(ambient, range(n + i + 1)) for i in range(n)]
    return SetFamily(ambient, members)


def pipeline_corpus() -> list[tuple[str, Callable[[], ConstrainedChainMap]]]:
    path = closure([(0, 1), (1, 2)])
    k5 = simplex_skeleton(4, 1)
    return [
        ("dim0: 3 points / interval(4)", lambda: build_dim0(closure([[0], [1], [2]]), interval_family(4))),
        ("dim0: 1 point / skeleton(4,1)", lambda: build_dim0(closure([[0]]), skeleton_family(4, 1))),
        ("dim0: 4 points / gamma(1,2)", lambda: build_dim0(closure([[0], [1], [2], [3]]), gamma_family(1, 2))),
        ("dim1: path / nested paths", lambda: build_dim1(path, nested_path_family(), 1)),
        ("dim1: path / skeleton(5,1)", lambda: build_dim1(path, skeleton_family(5, 1), 1)),
        ("dim1: K5 / skeleton(15,1)", lambda: build_dim1(k5, skeleton_family(15, 1), 1)),
        ("step k=1: K5 / skeleton(15,1)", lambda: build_step(k5, skeleton_family(15, 1), 1, recurse=build_dim0)),
        ("step k=1: path / skeleton(7,1)", lambda: build_step(path, skeleton_family(7, 1), 1, recurse=build_dim0)),
        ("step k=2: Δ2 / skeleton(28,2)", lambda: build_step(full_simplex(2), skeleton_family(28, 2), 1, recurse=build_dim1)),
    ]


def check_pipeline() -> CheckResult:
    failures = []
    parity = set()
    for name, make in pipeline_corpus():
        c = make()
        bad = verify_constrained(c)
        if bad:
            failures.append(f"{name}: {bad[:2]}")
            continue
        if c.family.intersection(range(c.family.n)).is_empty() and not is_homological_almost_embedding(c.chain_map):
            failures.append(f"{name}: not an almost-embedding")
        for count in c.notes.get("summands", []):
            parity.add(count)
            if count % 2:
                failures.append(f"{name}: odd summand count {count}")
    for k in (full_simplex(1), full_simplex(2), full_simplex(3), simplex_skeleton(4, 1), gamma3_prime()):
        for s in k.simplices():
            if len(s) >= 2 and not alpha_boundary_identity(k, s):
                failures.append(f"α identity fails at {s}")
        for dim in range(1, k.dimension + 2):
            if verify_chain_map(alpha_map(k, dim)):
                failures.append(f"α on the {dim - 1}-skeleton is not a chain map")
    return _result(
        8, "construction pipeline", failures,
        f"{len(pipeline_corpus())} bundles verified; summand counts {sorted(parity)} even",
    )


# --- 9 ----------------------------------------------------------------------------

def random_complex(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    tops = [rng.sample(range(n), rng.randint(1, min(4, n))) for _ in range(rng.randint(1, 6))]
    return closure(tops)


def oracle_complexes(count: int = 150, seed: int = SEED) -> list[SimplicialComplex]:
    rng = random.Random(seed)
    named = [
        full_simplex(2), full_simplex(3), boundary_of_simplex(3), simplex_skeleton(4, 1),
        gamma3_prime(), cone(boundary_of_simplex(2)), closure([(0, 1), (2, 3), (4,)]),
    ]
    out = [k for k in named if max(k.f_vector) <= 14]
    while len(out) < count + len(named):
        k = random_complex(rng)
        if max(k.f_vector) <= 14:
            out.append(k)
    return out


def oracle_families(count: int = 60, seed: int = SEED) -> list[SetFamily]:
    rng = random.Random(seed + 1)
    out = [gamma_family(1, 2), interval_family(5), skeleton_family(6, 1), tight_family(3, 2, 5)]
    while len(out) < count:
        ambient = random_complex(rng, 8)
        n = rng.randint(1, 10)
        if rng.random() < 0.3 and len(ambient.vertices) <= 10:
            out.append(vertex_deletion_family(ambient))
            continue
        members = [induced_subcomplex(ambient, [v for v in ambient.vertices if rng.random() < 0.7]) for _ in range(n)]
        out.append(SetFamily(ambient, members))
    return out


def check_oracles() -> CheckResult:
    failures = []
    complexes = oracle_complexes()
    for k in complexes:
        for reduced in (False, True):
            if betti_numbers(k, reduced) != brute_betti(k, reduced):
                failures.append(f"betti mismatch on {k!r}")
    families = oracle_families()
    for f in families:
        if helly_number(f) != brute_helly(f):
            failures.append(f"helly mismatch: {helly_number(f)} vs {brute_helly(f)}")
    return _result(
        9, "oracle equivalence", failures,
        f"{len(complexes)} complexes and {len(families)} families agree with brute force",
    )


CHECKS: list[Callable[[], CheckResult]] = [
    check_betti_formula,
    check_helly_numbers,
    check_audits,
    check_gamma3_prime,
    check_obstruction,
    check_eml,
    check_rescale,
    check_pipeline,
    check_oracles,
]


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
