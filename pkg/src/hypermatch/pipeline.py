"""End-to-end perfect matching search with an exact fallback.

Stages, in order: profile check, absorbing family, correction, almost
perfect matching on the rest, absorption of its leave. Every stage can fall
short at small ``n``; the outcome records where, and the exact oracle
finishes the job when ``n`` is within its limit. A matching is only ever
reported after :func:`hypermatch.validate.validate` accepts it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .absorber import (
    AbsorberError,
    AbsorbingFamily,
    AbsorptionFailure,
    absorb,
    build_absorbing_family,
    family_budget,
)
from .core import ThreeGraph, TupleSystem, canon, leave
from .degree_model import (
    DegreeProfile,
    InvalidProfile,
    ProfileKind,
    VertexClass,
    classify,
    relaxed_classes,
    satisfies_profile,
)
from .oracle import DEFAULT_LIMIT, Decision, certify_no_pm, has_perfect_matching
from .swap import SwapTrace, extend_with_move, improve_leave, make_phantom, phantom_size
from .validate import Validation, validate

SCHEMA_VERSION = 1


class Stage(enum.Enum):
    PROFILE_CHECK = "ProfileCheck"
    ABSORB_BUILD = "AbsorbBuild"
    CORRECTION = "CorrectionStage"
    ALMOST = "AlmostPM"
    ABSORPTION = "Absorption"
    DONE = "Done"
    ORACLE_FALLBACK = "OracleFallback"


@dataclass(frozen=True)
class PipelineOptions:
    seed: int = 0
    force: bool = False
    oracle_limit: int = DEFAULT_LIMIT
    oracle_fallback: bool = True
    node_budget: int | None = None
    time_budget: float | None = None
    absorbing_budget: int | None = None
    min_absorbing_sets: int = 1
    gamma2: Fraction | None = None
    strict_typing: bool = True


@dataclass
class PipelineOutcome:
    stage: Stage
    success: bool
    matching: TupleSystem | None = None
    stats: dict[str, dict[str, Any]] = field(default_factory=dict)
    traces: list[SwapTrace] = field(default_factory=list)
    overrides: dict[str, str] = field(default_factory=dict)
    validation: Validation | None = None
    no_pm: bool = False
    obstruction: str | None = None
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "stage": self.stage.value,
            "success": self.success,
            "matching": None if self.matching is None else [list(t) for t in self.matching.tuples],
            "stats": self.stats,
            "traces": [t.as_dict() for t in self.traces],
            "overrides": self.overrides,
            "validation": None if self.validation is None else self.validation.as_dict(),
            "no_perfect_matching": self.no_pm,
            "obstruction": self.obstruction,
            "message": self.message,
        }


# -- almost perfect matching ----------------------------------------------------

@dataclass
class AlmostResult:
    matching: TupleSystem
    size_target: int
    size_target_met: bool
    leave_target_met: bool
    leave_size: int
    leave_big: int
    rounds: int
    trace: SwapTrace | None = None
    moves: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "matching": [list(t) for t in self.matching.tuples],
            "size": len(self.matching),
            "size_target": self.size_target,
            "size_target_met": self.size_target_met,
            "leave_target_met": self.leave_target_met,
            "leave_size": self.leave_size,
            "leave_big": self.leave_big,
            "rounds": self.rounds,
            "moves": self.moves,
            "trace": None if self.trace is None else self.trace.as_dict(),
        }


def run_almost(
    g: ThreeGraph,
    gamma: Fraction,
    t: int = 0,
    *,
    strict_typing: bool = True,
    oracle_limit: int = 0,
) -> AlmostResult:
    """Matching of size ``floor((n - gamma n)/3)`` whose leave is two-thirds Big.

    Alternates local augmentation with theorem-mode leave improvement on the
    padded phantom system until both targets hold or a round makes no
    progress. Shortfalls are reported in the flags, never raised.
    """
    gamma = Fraction(gamma)
    classes = classify(g, gamma)
    k = phantom_size(g.n, gamma)
    profile = DegreeProfile(gamma, t, ProfileKind.ALMOST)
    m = TupleSystem(())
    moves: dict[str, int] = {}
    trace: SwapTrace | None = None
    rounds = 0
    while True:
        rounds += 1
        while len(m) < k:
            got = extend_with_move(g, m, oracle_limit=oracle_limit)
            if got is None:
                break
            m, move = got
            moves[move] = moves.get(move, 0) + 1
        phantom = make_phantom(g, m, gamma, classes)
        phantom, step = improve_leave(
            g, phantom, profile, mode="theorem", classes=classes, strict_typing=strict_typing
        )
        if trace is None:
            trace = step
        else:
            trace.events.extend(step.events)
            trace.stop_reason, trace.target_met = step.stop_reason, step.target_met
        real = phantom.real_edges(g)
        if len(real) >= k or len(real) <= len(m) or not step.events:
            m = real if len(real) >= len(m) else m
            break
        m = real
    lv = leave(g, m)
    big = sum(1 for v in lv if classes[v] is VertexClass.BIG)
    return AlmostResult(
        m, k, len(m) >= k, 3 * big >= 2 * len(lv), len(lv), big, rounds, trace, moves
    )


# -- full pipeline ------------------------------------------------------------

def _finish(outcome: PipelineOutcome, g: ThreeGraph, opts: PipelineOptions) -> PipelineOutcome:
    """Run the exact fallback after a shortfall, when allowed."""
    if not opts.oracle_fallback or g.n > opts.oracle_limit:
        return outcome
    res = has_perfect_matching(
        g, limit=opts.oracle_limit, node_budget=opts.node_budget, time_budget=opts.time_budget
    )
    outcome.stats["OracleFallback"] = {
        "decision": res.decision.value,
        "nodes_explored": res.nodes_explored,
        "failed_stage": outcome.stage.value,
    }
    outcome.stage = Stage.ORACLE_FALLBACK
    if res.decision is Decision.EXISTS:
        assert res.witness is not None
        val = validate(g.n, g.edges, res.witness.tuples)
        outcome.validation = val
        if val.perfect:
            outcome.matching = res.witness
            outcome.success = True
            outcome.message = "perfect matching found by exact search"
        else:
            outcome.message = "exact search produced a matching that failed validation"
    elif res.decision is Decision.NONE:
        outcome.no_pm = True
        obs = certify_no_pm(g)
        outcome.obstruction = None if obs is None else str(obs)
        outcome.message = "no perfect matching exists"
    else:
        outcome.message = "exact search ran out of budget"
    return outcome


def _correction(
    g: ThreeGraph, used: set[int], gamma1: Fraction
) -> tuple[list[tuple[int, int, int]], bool]:
    """Move edges holding a Medium vertex and at most one Big out of the rest.

    Classes are recomputed on the shrinking remaining graph with ``gamma1/2``.
    Returns the moved edges and whether two thirds of the rest ended Big.
    """
    moved: list[tuple[int, int, int]] = []
    while True:
        rest = [v for v in range(g.n) if v not in used]
        if not rest:
            return moved, True
        sub, keep = g.induced_with_map(rest)
        cls = classify(sub, gamma1 / 2) if sub.n >= 3 else {v: VertexClass.SMALL for v in range(sub.n)}
        bigs = sum(1 for c in cls.values() if c is VertexClass.BIG)
        if 3 * bigs >= 2 * sub.n:
            return moved, True
        pick = None
        for v in range(sub.n):
            if cls[v] is not VertexClass.MEDIUM:
                continue
            for e in sub.incidence[v]:
                if sum(cls[w] is VertexClass.BIG for w in e) <= 1:
                    pick = e
                    break
            if pick is not None:
                break
        if pick is None:
            return moved, False
        edge = canon(keep[w] for w in pick)
        moved.append(edge)
        used.update(edge)


def find_perfect_matching(
    g: ThreeGraph,
    gamma: Fraction | str,
    t: int,
    options: PipelineOptions | None = None,
) -> PipelineOutcome:
    opts = options or PipelineOptions()
    gamma = Fraction(gamma)
    out = PipelineOutcome(Stage.PROFILE_CHECK, False)

    # profile check
    if g.n % 3:
        out.message = f"n={g.n} is not divisible by 3"
        out.no_pm = True
        return out
    profile = DegreeProfile(gamma, t, ProfileKind.MAIN)
    try:
        check = satisfies_profile(g, profile)
    except InvalidProfile as exc:
        out.message = str(exc)
        return out
    out.stats["ProfileCheck"] = {
        "satisfied": check.satisfied,
        "violating_rank": check.violating_rank,
        "degree": check.degree,
        "required": None if check.required is None else str(check.required),
    }
    if not check and not opts.force:
        out.message = f"degree profile fails at rank {check.violating_rank}"
        return out
    if not check:
        out.overrides["profile"] = "forced past a failed profile check"

    # absorbing family
    out.stage = Stage.ABSORB_BUILD
    budget = family_budget(gamma, g.n)
    if opts.absorbing_budget is not None:
        effective = opts.absorbing_budget
    else:
        effective = max(budget, opts.min_absorbing_sets)
    if effective != budget:
        out.overrides["absorbing_budget"] = f"{budget} -> {effective}"
    fam: AbsorbingFamily = build_absorbing_family(
        g, DegreeProfile(gamma, t, ProfileKind.ABSORBING), budget=effective, seed=opts.seed, force=True
    )
    out.stats["AbsorbBuild"] = {
        "budget": budget,
        "effective_budget": effective,
        "sets": len(fam),
        "uncovered_triples": len(fam.shortfall),
        "requested_triples": len(fam.coverage),
    }
    used = set(fam.vertices)

    # correction
    out.stage = Stage.CORRECTION
    gamma1 = gamma / 2
    moved, corrected = _correction(g, used, gamma1)
    out.stats["CorrectionStage"] = {
        "gamma1": str(gamma1),
        "moved_edges": len(moved),
        "two_thirds_big": corrected,
        "remaining": g.n - len(used),
    }
    if not corrected:
        out.message = "correction stage found no movable edge"
        return _finish(out, g, opts)

    # almost perfect matching on the rest
    out.stage = Stage.ALMOST
    gamma2 = gamma1 ** 8
    if opts.gamma2 is not None:
        out.overrides["gamma2"] = f"{gamma2} -> {opts.gamma2}"
        gamma2 = Fraction(opts.gamma2)
    rest = [v for v in range(g.n) if v not in used]
    sub, keep = g.induced_with_map(rest)
    almost = run_almost(sub, gamma2, 0, strict_typing=opts.strict_typing)
    m2 = [canon(keep[w] for w in e) for e in almost.matching.tuples]
    out.stats["AlmostPM"] = {
        "n2": sub.n,
        "gamma2": str(gamma2),
        "size": len(m2),
        "size_target": almost.size_target,
        "size_target_met": almost.size_target_met,
        "leave_target_met": almost.leave_target_met,
        "leave_size": almost.leave_size,
        "leave_big": almost.leave_big,
        "swaps": 0 if almost.trace is None else len(almost.trace.events),
        "moves": almost.moves,
    }
    if almost.trace is not None:
        out.traces.append(almost.trace)
    if not almost.leave_target_met:
        out.message = "leave of the almost perfect matching is not two-thirds Big"
        return _finish(out, g, opts)
    used.update(v for e in m2 for v in e)

    # absorption
    out.stage = Stage.ABSORPTION
    w = sorted(set(rest) - {v for e in m2 for v in e})
    try:
        m3 = absorb(g, fam, w, relaxed_classes(g, gamma))
    except (AbsorptionFailure, AbsorberError) as exc:
        out.stats["Absorption"] = {"leftover": len(w), "error": str(exc)}
        out.message = f"absorption failed: {exc}"
        return _finish(out, g, opts)
    out.stats["Absorption"] = {"leftover": len(w), "absorbed": True}

    final = TupleSystem(tuple(sorted(list(moved) + m2 + list(m3.tuples))))
    val = validate(g.n, g.edges, final.tuples)
    out.validation = val
    if val.perfect:
        out.stage = Stage.DONE
        out.success = True
        out.matching = final
        out.message = "perfect matching assembled from all stages"
        return out
    out.message = "assembled matching failed validation: " + "; ".join(val.problems or ("incomplete coverage",))
    return _finish(out, g, opts)
