"""Command-line front end: ``selfclose <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import oracle
from .abelian import hom_group, is_hom_trivial, parse_group
from .blocks import DEFAULT_BUDGET, Outcome, ReducibilityVerdict, decide_k_reducibility
from .closeness import (
    NscResult,
    nsc,
    nsc_bounds,
    nsc_product,
    nsc_smash_bounds,
    nsc_suspension,
)
from .errors import AlgebraError, InfiniteSolutionSet, SuiteRefused
from .rings import (
    enumerate_degree_d_invertible_endos,
    is_ring_automorphism,
    resolve_ring,
)
from .spaces import SpaceModel, connectivity, homology_dimension, resolve_space, wedge_all

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INVALID = 2
EXIT_UNKNOWN = 3


class Reply:
    """Payload plus exit status; rendered as text or JSON by :func:`main`."""

    def __init__(self, payload: dict, text: str, status: int = EXIT_OK, undecided: bool = False):
        self.payload = payload
        self.text = text
        self.status = status
        self.undecided = undecided


# ---------------------------------------------------------------------------
# Serialisation helpers
# ---------------------------------------------------------------------------

def _space_doc(X: SpaceModel) -> dict:
    return {
        "name": X.name,
        "dimension": X.dimension,
        "cutoff": X.cutoff,
        "homology": {str(d): str(g) for d, g in X.homology},
    }


def _nsc_doc(r: NscResult) -> dict:
    return {
        "lower": r.lower,
        "upper": r.upper,
        "exact": r.exact,
        "equality_rule": r.equality_rule,
        "evidence": [e.as_dict() for e in r.evidence],
    }


def _nsc_text(label: str, r: NscResult) -> str:
    if r.exact is not None and r.equality_rule is not None:
        head = f"N({label}) = {r.exact}"
    elif r.exact is not None:
        head = f"N({label}) in [{r.lower}, {r.upper}] (bounds meet; no equality rule applies)"
    else:
        head = f"N({label}) in [{r.lower}, {'unbounded' if r.upper is None else r.upper}]"
    lines = [head]
    for e in r.evidence:
        lines.append(f"  [{e.rule}] {e.citation}; {e.inputs}")
    return "\n".join(lines)


def _verdict_doc(v: ReducibilityVerdict) -> dict:
    doc: dict[str, Any] = {
        "outcome": v.outcome.value,
        "k": v.k,
        "criteria": [
            {"rule": c.criterion, "degrees": list(c.degrees), "citation": c.citation} for c in v.criteria_fired
        ],
        "undecided_degrees": list(v.undecided_degrees),
        "note": v.note,
    }
    if v.witness is not None:
        doc["witness"] = {
            "degree": v.witness_degree,
            "blocks": v.witness.at(v.witness_degree).as_lists(),
        }
    return doc


def _verdict_text(X, Y, v: ReducibilityVerdict) -> str:
    lines = [f"{X} v {Y}, k = {v.k}: {v.outcome.value}"]
    for c in v.criteria_fired:
        lines.append(f"  [{c.criterion}] degrees {list(c.degrees)}: {c.citation}")
    if v.witness is not None:
        b = v.witness.at(v.witness_degree).as_lists()
        lines.append(f"  witness in degree {v.witness_degree}: " + ", ".join(f"{k}={b[k]}" for k in sorted(b)))
    if v.undecided_degrees:
        lines.append(f"  undecided degrees: {list(v.undecided_degrees)}")
    if v.note:
        lines.append(f"  note: {v.note}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_space(args) -> Reply:
    X = resolve_space(args.space)
    doc = _space_doc(X)
    doc["connectivity"] = connectivity(X)
    doc["homology_dimension"] = homology_dimension(X) if X.cutoff is None else None
    doc["nsc_bounds"] = _nsc_doc(nsc_bounds(X)) if len(X.homology) or X.cutoff is not None else None
    doc["atomic"] = (
        None if X.atomic is None else {"level": X.atomic.level, "provenance": X.atomic.provenance}
    )
    lines = [f"{X.name}: dimension {X.dimension}, table through {X.cutoff or 'all degrees'}"]
    lines += [f"  H_{d} = {g}" for d, g in X.homology]
    lines.append(f"  connectivity {doc['connectivity']}, homology dimension {doc['homology_dimension']}")
    if doc["nsc_bounds"]:
        b = doc["nsc_bounds"]
        lines.append(f"  closeness bounds [{b['lower']}, {b['upper']}]")
    if X.atomic is not None:
        lines.append(f"  atomic through {X.atomic.level or 'all degrees'} ({X.atomic.provenance})")
    return Reply(doc, "\n".join(lines))


def cmd_hom(args) -> Reply:
    if args.degree is not None:
        G = resolve_space(args.G).group(args.degree)
        H = resolve_space(args.H).group(args.degree)
    else:
        G, H = parse_group(args.G), parse_group(args.H)
    hg = hom_group(G, H)
    triv = is_hom_trivial(G, H)
    doc = {"source": str(G), "target": str(H), "hom": str(hg), "trivial": triv}
    return Reply(doc, f"Hom({G}, {H}) = {hg}" + (" (trivial)" if triv else ""))


def cmd_reducible(args) -> Reply:
    X, Y = resolve_space(args.X), resolve_space(args.Y)
    v = decide_k_reducibility(X, Y, args.k, args.budget)
    status = {Outcome.REDUCIBLE: EXIT_OK, Outcome.ALGEBRAIC_COUNTEREXAMPLE: EXIT_REFUTED}.get(v.outcome, EXIT_OK)
    return Reply(_verdict_doc(v), _verdict_text(X, Y, v), status, v.outcome is Outcome.UNKNOWN)


def cmd_nsc(args) -> Reply:
    spaces = [resolve_space(s) for s in args.spaces]
    mode = "wedge" if args.wedge else "product" if args.product else "smash" if args.smash else None
    if args.suspend is not None:
        mode = "suspend"
    if mode in ("product", "smash") and len(spaces) != 2:
        raise SystemExit(_usage_error(f"--{mode} takes exactly two spaces"))
    if mode is None and len(spaces) != 1:
        raise SystemExit(_usage_error("give one space, or a combination flag"))
    if mode == "wedge":
        W = wedge_all(spaces)
        label, r = W.name, nsc(W)
    elif mode == "product":
        label, r = f"{spaces[0]} x {spaces[1]}", nsc_product(*spaces)
    elif mode == "smash":
        r = nsc_smash_bounds(*spaces)
        label = f"{spaces[0]} ^ {spaces[1]}"
        if r is None:
            doc = {"space": label, "claim": None, "reason": "pair-connectivity hypothesis fails"}
            return Reply(doc, f"N({label}): no claim, the pair-connectivity hypothesis fails", undecided=True)
    elif mode == "suspend":
        if len(spaces) != 1:
            raise SystemExit(_usage_error("--suspend takes one space"))
        label, r = f"S^{args.suspend} {spaces[0]}", nsc_suspension(spaces[0], args.suspend)
    else:
        label, r = spaces[0].name, nsc(spaces[0])
    doc = {"space": label, **_nsc_doc(r)}
    return Reply(doc, _nsc_text(label, r), undecided=r.exact is None)


def cmd_ring_endos(args) -> Reply:
    model = resolve_ring(args.ring)
    names = tuple(s.gen for s in model.summands)
    try:
        sols = enumerate_degree_d_invertible_endos(model)
    except InfiniteSolutionSet as exc:
        doc = {"ring": args.ring, "solutions": None, "infinite": True, "reason": str(exc)}
        return Reply(doc, f"infinite solution set: {exc}", undecided=True)
    autos = [is_ring_automorphism(model, s) for s in sols]
    doc = {
        "ring": args.ring,
        "relation": model.relation,
        "solutions": [[list(r) for r in s.images] for s in sols],
        "count": len(sols),
        "all_ring_automorphisms": all(autos),
    }
    lines = [f"{len(sols)} degree-preserving invertible solutions:"]
    lines += [f"  {s.render(names)}" for s in sols]
    lines.append("all are ring automorphisms" if all(autos) else "some solutions are not ring automorphisms")
    return Reply(doc, "\n".join(lines), EXIT_OK if all(autos) else EXIT_REFUTED)


def cmd_verify(args) -> Reply:
    name, extra = args.suite, args.args
    try:
        if name in oracle.SUITES:
            if args.bound is None:
                raise SystemExit(_usage_error(f"suite {name} needs --bound"))
            rep = oracle.SUITES[name](args.bound)
        elif name == "hom-vanishing":
            if len(extra) != 2 or args.k is None:
                raise SystemExit(_usage_error("hom-vanishing takes two spaces and --k"))
            rep = oracle.verify_hom_vanishing(resolve_space(extra[0]), resolve_space(extra[1]), args.k)
        elif name in ("no-common-factor", "coprime-nilpotent", "schur"):
            if len(extra) != 2:
                raise SystemExit(_usage_error(f"{name} takes two groups"))
            fn = {
                "no-common-factor": oracle.verify_no_common_factor,
                "coprime-nilpotent": oracle.verify_coprime_nilpotent,
                "schur": oracle.verify_schur,
            }[name]
            rep = fn(*extra)
        else:
            raise SystemExit(_usage_error(f"unknown suite {name}"))
    except SuiteRefused as exc:
        doc = {"suite": name, "outcome": "REFUSED", "reason": str(exc)}
        return Reply(doc, f"{name}: refused ({exc})", EXIT_INVALID)
    doc = rep.as_dict()
    text = f"{rep.suite}: {rep.outcome} over {rep.instances} instances"
    if rep.details:
        text += "\n  " + json.dumps(rep.details, sort_keys=True)
    if rep.witness is not None:
        text += "\n  witness: " + json.dumps(rep.witness, sort_keys=True)
    return Reply(doc, text, EXIT_OK if rep.passed else EXIT_REFUTED)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _usage_error(msg: str) -> int:
    print(f"selfclose: error: {msg}", file=sys.stderr)
    return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="stable machine-readable output")
    common.add_argument("--strict", action="store_true", help="exit 3 when the answer is undecided")

    p = argparse.ArgumentParser(prog="selfclose", description="Self-maps of wedges at the homology level.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("space", parents=[common], help="homology table, bounds and certificates")
    s.add_argument("space")
    s.set_defaults(func=cmd_space)

    s = sub.add_parser("hom", parents=[common], help="Hom group of two groups (or of H_d of two spaces)")
    s.add_argument("G")
    s.add_argument("H")
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("reducible", parents=[common], help="k-reducibility of self-maps of X v Y")
    s.add_argument("X")
    s.add_argument("Y")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_reducible)

    s = sub.add_parser("nsc", parents=[common], help="homology self-closeness number with evidence")
    s.add_argument("spaces", nargs="+")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--wedge", action="store_true")
    g.add_argument("--product", action="store_true")
    g.add_argument("--smash", action="store_true")
    g.add_argument("--suspend", type=int, metavar="N")
    s.set_defaults(func=cmd_nsc)

    s = sub.add_parser("ring-endos", parents=[common], help="invertible ring endomorphisms of a ring model")
    s.add_argument("ring")
    s.set_defaults(func=cmd_ring_endos)

    s = sub.add_parser("verify", parents=[common], help="run a brute-force verification suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--bound", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("args", nargs="*")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        reply = args.func(args)
    except SystemExit as exc:
        return int(exc.code)
    except (AlgebraError, OSError, json.JSONDecodeError) as exc:
        if args.json:
            print(json.dumps({"schema_version": SCHEMA_VERSION, "error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        else:
            print(f"selfclose: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command, **reply.payload}, sort_keys=True))
    else:
        print(reply.text)
    if reply.status == EXIT_OK and reply.undecided and args.strict:
        return EXIT_UNKNOWN
    return reply.status


if __name__ == "__main__":
    sys.exit(main())
