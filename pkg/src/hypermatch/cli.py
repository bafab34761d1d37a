"""Command-line interface.

Exit status: 0 on success, 1 when a verifier finds counterexamples, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .absorber import (
    AbsorberError,
    AbsorptionFailure,
    build_absorbing_family,
    enumerate_absorbing_sets,
    absorb,
)
from .core import GraphFormatError, ThreeGraph, parse, serialize
from .degree_model import DegreeProfile, InvalidProfile, ProfileKind, VertexClass, parse_rational, satisfies_profile
from .forge import BadInstance, InstanceSpec, RetriesExhausted, looks_like_spec
from .oracle import DEFAULT_LIMIT, Decision, OracleLimitExceeded, certify_no_pm, has_perfect_matching, max_matching
from .pipeline import SCHEMA_VERSION, PipelineOptions, find_perfect_matching, run_almost
from .verifier import VERIFIERS, verify_counting_arithmetic


class UsageError(Exception):
    pass


# Template graph: t = (0, 1, 2) is absorbed by {3..8}.
TEMPLATE_EDGES = [(3, 5, 6), (4, 7, 8), (0, 3, 4), (1, 5, 6), (2, 7, 8)]


def load_graph(src: str) -> ThreeGraph:
    if src == "-":
        return parse(sys.stdin.read())
    if looks_like_spec(src):
        return InstanceSpec.parse(src).build()
    try:
        with open(src, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {src!r}: {exc.strerror}") from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True))
    else:
        print(text)


def _triples(ts) -> str:
    return "\n".join(" ".join(map(str, t)) for t in ts)


# -- subcommands ------------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = InstanceSpec.parse(args.spec)
    if spec.family.value == "planted" and args.seed is not None and "seed=" not in args.spec:
        spec = InstanceSpec(spec.family, spec.n, spec.gamma, spec.t, args.seed)
    g = spec.build()
    if args.format == "json":
        _emit(args, {"spec": str(spec), "n": g.n, "edges": [list(e) for e in g.edges]}, "")
    else:
        sys.stdout.write(serialize(g))
    return 0


def _profile(args, kind: ProfileKind) -> DegreeProfile:
    if args.profile:
        return DegreeProfile.parse(args.profile)
    return DegreeProfile(parse_rational(args.gamma), args.t, kind)


def cmd_check(args) -> int:
    g = load_graph(args.graph)
    p = _profile(args, ProfileKind(args.kind))
    res = satisfies_profile(g, p)
    payload = {
        "profile": str(p),
        "satisfied": res.satisfied,
        "violating_rank": res.violating_rank,
        "degree": res.degree,
        "required": None if res.required is None else str(res.required),
    }
    if res:
        text = f"{p}: satisfied"
    else:
        text = f"{p}: violated at rank {res.violating_rank} (degree {res.degree} < {res.required})"
    _emit(args, payload, text)
    return 0


def cmd_match(args) -> int:
    g = load_graph(args.graph)
    opts = PipelineOptions(
        seed=args.seed or 0,
        force=args.force,
        oracle_limit=args.oracle_limit,
        node_budget=args.node_budget,
        time_budget=args.time_budget,
        absorbing_budget=args.absorbing_budget,
        gamma2=None if args.gamma2 is None else parse_rational(args.gamma2),
        strict_typing=not args.loose_typing,
    )
    out = find_perfect_matching(g, parse_rational(args.gamma), args.t, opts)
    lines = [f"stage: {out.stage.value}", f"success: {out.success}", f"message: {out.message}"]
    if out.overrides:
        lines.append("overrides: " + ", ".join(f"{k}={v}" for k, v in sorted(out.overrides.items())))
    if out.obstruction:
        lines.append(f"obstruction: {out.obstruction}")
    if out.matching is not None:
        lines.append(_triples(out.matching.tuples))
    _emit(args, out.as_dict(), "\n".join(lines))
    return 0


def cmd_almost(args) -> int:
    g = load_graph(args.graph)
    gamma = parse_rational(args.gamma)
    p = DegreeProfile(gamma, args.t, ProfileKind.ALMOST)
    check = satisfies_profile(g, p)
    if not check and not args.force:
        raise UsageError(f"{p} fails at rank {check.violating_rank}; pass --force to run anyway")
    res = run_almost(g, gamma, args.t, oracle_limit=0)
    payload = {"profile": str(p), "profile_satisfied": check.satisfied, **res.as_dict()}
    text = "\n".join([
        f"size: {len(res.matching)} (target {res.size_target}, met: {res.size_target_met})",
        f"leave: {res.leave_size} vertices, {res.leave_big} Big (two-thirds met: {res.leave_target_met})",
        f"swaps: {0 if res.trace is None else len(res.trace.events)}",
        _triples(res.matching.tuples),
    ])
    _emit(args, payload, text)
    return 0


def cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    res = has_perfect_matching(
        g, limit=args.oracle_limit, node_budget=args.node_budget, time_budget=args.time_budget
    )
    payload: dict[str, Any] = {
        "decision": res.decision.value,
        "witness": None if res.witness is None else [list(t) for t in res.witness.tuples],
        "nodes_explored": res.nodes_explored,
    }
    lines = []
    if res.decision is Decision.EXISTS:
        lines.append("perfect matching exists")
        lines.append(_triples(res.witness.tuples))
    elif res.decision is Decision.NONE:
        lines.append("no perfect matching")
        obs = certify_no_pm(g)
        payload["obstruction"] = None if obs is None else {
            "kind": obs.kind, "set": list(obs.witness_set), "reason": obs.reason,
        }
        lines.append(f"obstruction: {obs}" if obs else "obstruction: none found")
    else:
        lines.append("timeout")
    if args.max:
        mm = max_matching(g, limit=args.oracle_limit, node_budget=args.node_budget, time_budget=args.time_budget)
        payload["max_matching"] = mm.max_size
        lines.append(f"maximum matching: {mm.max_size if mm.decision is not Decision.TIMEOUT else 'timeout'}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    names = list(VERIFIERS) if args.claim == "all" else [args.claim]
    reports = []
    for name in names:
        if name == "counting-arithmetic":
            reports.append(verify_counting_arithmetic(args.max_m))
        else:
            reports.append(VERIFIERS[name]())
    ok = all(r.ok for r in reports)
    if args.format == "json":
        _emit(args, {"ok": ok, "reports": [r.to_dict() for r in reports]}, "")
    else:
        print("\n\n".join(r.render() for r in reports))
    return 0 if ok else 1


def cmd_absorb_demo(args) -> int:
    if args.graph:
        g = load_graph(args.graph)
        triple = tuple(int(x) for x in args.triple.split(","))
    else:
        g = ThreeGraph.from_edges(9, TEMPLATE_EDGES)
        triple = (0, 1, 2)
    sets = enumerate_absorbing_sets(g, triple, args.limit)
    fam = build_absorbing_family(
        g, DegreeProfile(Fraction(1), 0, ProfileKind.ABSORBING),
        budget=1, seed=args.seed or 0, force=True, triples=[triple],
    )
    payload: dict[str, Any] = {
        "triple": list(triple),
        "absorbing_sets": [list(s) for s in sets],
        "family": fam.dumps().splitlines(),
    }
    lines = [f"triple: {list(triple)}", f"absorbing sets found: {len(sets)}"]
    lines += [" ".join(map(str, s)) for s in sets[:10]]
    lines.append("family:")
    lines.append(fam.dumps().rstrip() or "(empty)")
    # every vertex counts as Big here; the demo is about the set, not the classes
    classes = {v: VertexClass.BIG for v in range(g.n)}
    try:
        m = absorb(g, fam, triple, classes)
        payload["absorbed"] = [list(t) for t in m.tuples]
        lines.append("absorbed matching:")
        lines.append(_triples(m.tuples))
    except (AbsorptionFailure, AbsorberError) as exc:
        payload["absorbed"] = None
        lines.append(f"absorption failed: {exc}")
    _emit(args, payload, "\n".join(lines))
    return 0


# -- parser ---------------------------------------------------------------------

def _common(sup: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if sup else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=d(None), help="random seed")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--oracle-limit", type=int, default=d(DEFAULT_LIMIT), help="largest n for exact search")
    p.add_argument("--force", action="store_true", default=d(False), help="run past failed preconditions")
    p.add_argument("--time-budget", type=float, default=d(None), help="seconds for exact search")
    p.add_argument("--node-budget", type=int, default=d(None), help="search nodes for exact search")
    return p


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="hypermatch", parents=[_common(False)],
                                  description="Perfect matchings in 3-graphs")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("spec", help='e.g. "space:n=12" or "planted:n=15,gamma=1/20,t=2,seed=1"')
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="check a degree profile")
    p.add_argument("graph")
    p.add_argument("--profile", help='e.g. "main:gamma=1/100,t=3"')
    p.add_argument("--gamma", default="1/100")
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--kind", choices=[k.value for k in ProfileKind], default="main")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("match", parents=[common], help="run the perfect matching pipeline")
    p.add_argument("graph")
    p.add_argument("--gamma", default="1/100")
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--absorbing-budget", type=int, default=None)
    p.add_argument("--gamma2", default=None, help="override the almost-matching constant")
    p.add_argument("--loose-typing", action="store_true", help="allow swaps with mismatched pair types")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("almost", parents=[common], help="almost perfect matching with a Big-heavy leave")
    p.add_argument("graph")
    p.add_argument("--gamma", default="1/100")
    p.add_argument("--t", type=int, default=0)
    p.set_defaults(fn=cmd_almost)

    p = sub.add_parser("oracle", parents=[common], help="exact perfect matching decision")
    p.add_argument("graph")
    p.add_argument("--max", action="store_true", help="also compute the maximum matching size")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="exhaustive lemma checks")
    p.add_argument("claim", choices=[*VERIFIERS, "all"])
    p.add_argument("--max-m", type=int, default=12, help="largest matching size for the lattice check")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("absorb-demo", parents=[common], help="absorbing sets on a small example")
    p.add_argument("graph", nargs="?")
    p.add_argument("--triple", default="0,1,2")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(fn=cmd_absorb_demo)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, GraphFormatError, InvalidProfile, BadInstance, OracleLimitExceeded,
            AbsorberError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RetriesExhausted as exc:
        print(f"error: {exc} (closest deficit {exc.deficit})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
