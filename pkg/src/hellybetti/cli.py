"""``hellybetti`` command line.

Every subcommand reads JSON from a file flag (or standard input) and writes
one JSON document to standard output.  Exit codes: 0 ok, 1 a checked
property is false, 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .chainmaps import eml_flip_check, eml_triangulation
from .complexes import barycentric_subdivision, complex_from_json, deleted_product, quotient_by_involution, skeleton
from .config import ENV_VAR, Budget, default_budget, parse_budget
from .construction import almost_embedding_verdict, build_ccm, bundle_from_json, verify_constrained
from .errors import BudgetExceeded, HellyBettiError, InputError, InsufficientFamily, InvariantViolation
from .gf2 import betti_numbers
from .helly import (
    family_from_json,
    gamma3_prime,
    gamma_family,
    helly_number,
    hypothesis_audit,
    interval_family,
    minimal_empty_subfamilies,
    skeleton_family,
    tight_family,
)
from .obstruction import cochain_as_json, obstruction_nonzero

OK, FALSIFIED, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2 anyway; keep the message format ours
        raise InputError(message)


def _load(path: str | None, stdin) -> dict:
    try:
        if path is None or path == "-":
            text = stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _complex_payload(data: dict) -> dict:
    # a family document passed where a complex is expected means its ambient complex
    return data["ambient"] if "maximal_simplices" not in data and "ambient" in data else data


def _budget(args) -> Budget:
    return parse_budget(args.budget, default_budget()) if args.budget else default_budget()


# --- subcommands ---------------------------------------------------------------------

def cmd_betti(args, stdin):
    k = complex_from_json(_complex_payload(_load(args.complex, stdin)))
    return OK, {"betti": betti_numbers(k, reduced=args.reduced)}


def cmd_helly(args, stdin):
    fam = family_from_json(_load(args.family, stdin))
    payload = {"helly": helly_number(fam, _budget(args))}
    if args.witnesses:
        payload["minimal_empty"] = [list(g) for g in minimal_empty_subfamilies(fam, _budget(args))]
    return OK, payload


def cmd_audit(args, stdin):
    fam = family_from_json(_load(args.family, stdin))
    report = hypothesis_audit(fam, args.dim, args.max_degree, _budget(args))
    payload = report.to_json()
    if args.b is None:
        return OK, payload
    payload["b"] = args.b
    payload["holds"] = report.holds(args.b)
    return (OK if payload["holds"] else FALSIFIED), payload


def cmd_obstruction(args, stdin):
    k = complex_from_json(_complex_payload(_load(args.complex, stdin)))
    res = obstruction_nonzero(k, args.dim, budget=_budget(args))
    payload = {"nonzero": res.nonzero}
    if args.details:
        payload.update(
            d=res.d,
            params={str(v): t for v, t in sorted(res.params.items())},
            cocycle=cochain_as_json(res.cocycle),
            witness=None if res.witness is None else cochain_as_json(res.witness),
            certificate=None if res.certificate is None else cochain_as_json(res.certificate),
        )
    return OK, payload


def cmd_deleted_product(args, stdin):
    k = complex_from_json(_complex_payload(_load(args.complex, stdin)))
    cx, inv = deleted_product(k, _budget(args))
    payload = {
        "cells": [cx.n_cells(i) for i in range(cx.dimension + 1)],
        "betti": betti_numbers(cx) if not cx.is_empty() else [],
    }
    if args.quotient:
        q = quotient_by_involution(cx, inv)
        payload["quotient_cells"] = [q.n_cells(i) for i in range(q.dimension + 1)]
        payload["quotient_betti"] = betti_numbers(q) if not q.is_empty() else []
    return OK, payload


def cmd_subdivide(args, stdin):
    k = complex_from_json(_complex_payload(_load(args.complex, stdin)))
    sd, labels = barycentric_subdivision(k)
    return OK, {"complex": sd.to_json(), "labels": {str(i): list(f) for i, f in sorted(labels.items())}}


def cmd_eml(args, stdin):
    tri = eml_triangulation(args.p, args.q)
    return OK, {
        "count": len(tri),
        "flip_equivariant": eml_flip_check(args.p, args.q),
        "simplices": [[list(pt) for pt in s] for s in tri.simplices],
    }


def cmd_examples(args, stdin):
    kind = args.kind
    if kind == "gamma3prime":
        return OK, gamma3_prime().to_json()
    need = {"gamma": ("b", "d"), "skeleton": ("n", "k"), "interval": ("n",), "tight": ("d", "k", "n")}[kind]
    missing = [f"--{p}" for p in need if getattr(args, p) is None]
    if missing:
        raise InputError(f"examples gen {kind} needs {' '.join(missing)}")
    if kind == "gamma":
        fam = gamma_family(args.b, args.d)
    elif kind == "skeleton":
        fam = skeleton_family(args.n, args.k)
    elif kind == "interval":
        fam = interval_family(args.n)
    else:
        fam = tight_family(args.d, args.k, args.n)
    return OK, fam.to_json()


def cmd_build_ccm(args, stdin):
    if args.complex is None and args.family is None:
        raise InputError("build-ccm needs --complex and --family (at most one from standard input)")
    k = complex_from_json(_load(args.complex, stdin))
    fam = family_from_json(_load(args.family, stdin))
    if args.dim_cap is not None:
        k = skeleton(k, args.dim_cap)
    try:
        bundle = build_ccm(k, fam, args.b, _budget(args))
    except InsufficientFamily as exc:
        return FALSIFIED, {"ok": False, "reason": str(exc)}
    report = _verification(bundle)
    return (OK if report["ok"] else FALSIFIED), {"bundle": bundle.to_json(), "verification": report}


def _verification(bundle) -> dict:
    bad = verify_constrained(bundle)
    report = {"ok": not bad, "violations": [[v.kind, [list(s) for s in v.where]] for v in bad]}
    report["empty_intersection"] = bundle.family.intersection(range(bundle.family.n)).is_empty()
    report["almost_embedding"] = almost_embedding_verdict(bundle) if not bad else None
    return report


def cmd_verify(args, stdin):
    data = _load(args.bundle, stdin)
    if not isinstance(data, dict):
        raise InputError("bundle JSON must be an object")
    bundle = bundle_from_json(data.get("bundle", data))
    report = _verification(bundle)
    return (OK if report["ok"] else FALSIFIED), report


def cmd_selftest(args, stdin):
    from .selftest import run_all

    results = run_all()
    return (OK if all(r.passed for r in results) else FALSIFIED), {
        "passed": sum(r.passed for r in results),
        "total": len(results),
        "results": [r.to_json() for r in results],
    }


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hellybetti", description=__doc__.splitlines()[0])
    p.add_argument("--budget", help=f"enumeration budget, e.g. 'cells=200000,family=16' (also ${ENV_VAR})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("betti", help="Betti numbers of a complex")
    s.add_argument("--complex")
    s.add_argument("--reduced", action="store_true")
    s.set_defaults(run=cmd_betti)

    s = sub.add_parser("helly", help="Helly number of a family")
    s.add_argument("--family")
    s.add_argument("--witnesses", action="store_true", help="also list the minimal empty subfamilies")
    s.set_defaults(run=cmd_helly)

    s = sub.add_parser("audit", help="reduced Betti numbers of all proper subfamily intersections")
    s.add_argument("--family")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--b", type=int, help="exit 1 unless every audited value is at most b")
    s.set_defaults(run=cmd_audit)

    s = sub.add_parser("obstruction", help="is the Z2 van Kampen class nonzero")
    s.add_argument("--complex")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--details", action="store_true")
    s.set_defaults(run=cmd_obstruction)

    s = sub.add_parser("deleted-product", help="cell counts and Betti numbers of the deleted product")
    s.add_argument("--complex")
    s.add_argument("--quotient", action="store_true")
    s.set_defaults(run=cmd_deleted_product)

    s = sub.add_parser("subdivide", help="barycentric subdivision")
    s.add_argument("--complex")
    s.set_defaults(run=cmd_subdivide)

    s = sub.add_parser("eml", help="staircase triangulation of a product of simplices")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(run=cmd_eml)

    s = sub.add_parser("examples", help="generate example complexes and families")
    gen = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    g = gen.add_parser("gen")
    g.add_argument("kind", choices=["gamma", "gamma3prime", "skeleton", "interval", "tight"])
    for name in ("b", "d", "n", "k"):
        g.add_argument(f"--{name}", type=int)
    g.set_defaults(run=cmd_examples)

    s = sub.add_parser("build-ccm", help="build and verify a constrained chain map")
    s.add_argument("--complex")
    s.add_argument("--family")
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--dim-cap", type=int, help="use only this skeleton of the complex")
    s.set_defaults(run=cmd_build_ccm)

    s = sub.add_parser("verify", help="audit a stored object")
    what = s.add_subparsers(dest="what", required=True, parser_class=_Parser)
    v = what.add_parser("constrained")
    v.add_argument("--bundle")
    v.set_defaults(run=cmd_verify)

    s = sub.add_parser("selftest", help="run the acceptance corpus")
    s.set_defaults(run=cmd_selftest)
    return p


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _budget(args)  # reject a malformed budget up front
        code, payload = args.run(args, stdin)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return OVER_BUDGET
    except InputError as exc:
        print(f"input error: {exc}", file=stderr)
        return BAD_INPUT
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=stderr)
        return FALSIFIED
    except HellyBettiError as exc:
        print(f"error: {exc}", file=stderr)
        return FALSIFIED
    json.dump(payload, stdout, sort_keys=False, ensure_ascii=False)
    stdout.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
