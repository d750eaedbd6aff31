"""Annotation algorithms and the satisfiability orchestrator."""

from __future__ import annotations

import enum
import itertools
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .closure import merge_closure
from .rules import BgpContext, GroundChecker, check, refine
from .structure import has_cycle, has_unsupported_join
from .terms import (
    CANONICAL_ORDER,
    GROUND,
    SUBTERMS,
    Annotation,
    Bgp,
    FxPredicate,
    PatternNode,
    is_rdf_type,
    tops,
)

P = FxPredicate
DEFAULT_TIMEOUT = 5.0


class Verdict(enum.Enum):
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"
    TIMEOUT = "timeout"


class Algorithm(enum.Enum):
    TOP_DOWN = "topdown"
    BOTTOM_UP = "bottomup"


class Mode(enum.Enum):
    FIRST = "first"
    ALL = "all"


@dataclass
class SatReport:
    verdict: Verdict
    solutions: list[Annotation] = field(default_factory=list)
    tested: int = 0
    elapsed: float = 0.0
    algorithm: Algorithm = Algorithm.BOTTOM_UP
    mode: Mode = Mode.FIRST
    reason: str = ""

    def __post_init__(self) -> None:
        if self.verdict is Verdict.SATISFIABLE and not self.solutions:
            raise ValueError("a satisfiable report needs at least one solution")
        if self.mode is Mode.FIRST and len(self.solutions) > 1:
            raise ValueError("first-solution mode returns at most one solution")

    @property
    def satisfiable(self) -> bool | None:
        if self.verdict is Verdict.TIMEOUT:
            return None
        return self.verdict is Verdict.SATISFIABLE

    @property
    def found(self) -> int:
        return len(self.solutions)


class _Deadline(Exception):
    pass


class _Clock:
    def __init__(self, timeout: float | None) -> None:
        self.start = time.monotonic()
        self.deadline = None if timeout is None else self.start + timeout

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def elapsed(self) -> float:
        return time.monotonic() - self.start


# ---------------------------------------------------------------------------
# Top-down search


def initial_annotation(bgp: Bgp) -> Annotation:
    """Every node mapped to the top predicate of its last position."""
    start: dict[PatternNode, FxPredicate] = {}
    for t in bgp:
        start[t.subject] = P.SUBJECT
        start[t.predicate] = P.PROPERTY
        start[t.object] = P.OBJECT
    return Annotation((n, start[n]) for n in bgp.nodes())


def annotate_topdown(
    bgp: Bgp, complete: bool = False, timeout: float | None = DEFAULT_TIMEOUT
) -> SatReport:
    """Search by specialising one node at a time, checking after every step.

    Every node and every specialisation is tried at every level, so one
    ground annotation is usually reached along many orders; solutions are
    kept once, in the order they are first met.
    """
    mode = Mode.ALL if complete else Mode.FIRST
    clock = _Clock(timeout)
    ctx = BgpContext(bgp)
    nodes = ctx.nodes
    found: dict[Annotation, None] = {}
    tested = 0

    def search(current: Annotation) -> bool:
        nonlocal tested
        for node in nodes:
            for sub in SUBTERMS[current[node]]:
                if clock.expired():
                    raise _Deadline
                candidate = current.with_entry(node, sub)
                tested += 1
                if not check(candidate, bgp, ctx):
                    continue
                if candidate.is_ground:
                    found.setdefault(candidate, None)
                    if not complete:
                        return True
                elif search(candidate):
                    return True
        return False

    start = initial_annotation(bgp)
    try:
        if start.is_ground:
            # only reachable for the empty BGP
            tested += 1
            if check(start, bgp, ctx):
                found[start] = None
        else:
            search(start)
    except _Deadline:
        return SatReport(
            Verdict.TIMEOUT, [], tested, clock.elapsed(), Algorithm.TOP_DOWN, mode, "timeout"
        )
    solutions = list(found)
    verdict = Verdict.SATISFIABLE if solutions else Verdict.UNSATISFIABLE
    return SatReport(verdict, solutions, tested, clock.elapsed(), Algorithm.TOP_DOWN, mode)


# ---------------------------------------------------------------------------
# Bottom-up enumeration

_BY_TOP = {
    top: tuple(g for g in CANONICAL_ORDER if top in tops(g))
    for top in (P.SUBJECT, P.PROPERTY, P.OBJECT)
}


def candidate_sets(bgp: Bgp) -> list[tuple[PatternNode, tuple[FxPredicate, ...]]]:
    """Per-node ground candidates after the triple-level pruning.

    Positions contribute the ground predicates under their top term; the
    pruning then narrows subjects to Container, fixes rdf:type to
    TypeProperty, and strips the object roles that the property already
    rules out.  Every step is a set operation, so triple order is irrelevant.
    """
    nodes = bgp.nodes()
    cands: dict[PatternNode, set[FxPredicate]] = {n: set() for n in nodes}
    for t in bgp:
        cands[t.subject].update(_BY_TOP[P.SUBJECT])
        cands[t.predicate].update(_BY_TOP[P.PROPERTY])
        cands[t.object].update(_BY_TOP[P.OBJECT])
    for t in bgp:
        cands[t.subject] &= {P.CONTAINER}
    for t in bgp:
        if t.predicate.is_iri:
            if is_rdf_type(t.predicate):
                cands[t.predicate] &= {P.TYPE_PROPERTY}
                cands[t.object] -= {P.CONTAINER, P.VALUE}
            else:
                cands[t.object] -= {P.TYPE, P.FX_ROOT}
    return [(n, tuple(g for g in CANONICAL_ORDER if g in cands[n])) for n in nodes]


def hypothesis_count(bgp: Bgp) -> int:
    total = 1
    for _, options in candidate_sets(bgp):
        total *= len(options)
    return total


def generate_bottomup(
    bgp: Bgp, complete: bool = False, timeout: float | None = DEFAULT_TIMEOUT
) -> SatReport:
    """Checks every combination of per-node candidates, in a fixed order."""
    mode = Mode.ALL if complete else Mode.FIRST
    clock = _Clock(timeout)
    cands = candidate_sets(bgp)
    nodes = [n for n, _ in cands]
    checker = GroundChecker(bgp)
    checker.restrict_to([options for _, options in cands])
    check_row = checker.check_row
    solutions: list[Annotation] = []
    tested = 0
    for combo in itertools.product(*(options for _, options in cands)):
        tested += 1
        if not tested & 1023 and clock.expired():
            return SatReport(
                Verdict.TIMEOUT, [], tested, clock.elapsed(), Algorithm.BOTTOM_UP, mode, "timeout"
            )
        if check_row(combo):
            solutions.append(Annotation(zip(nodes, combo)))
            if not complete:
                break
    verdict = Verdict.SATISFIABLE if solutions else Verdict.UNSATISFIABLE
    return SatReport(verdict, solutions, tested, clock.elapsed(), Algorithm.BOTTOM_UP, mode)


# ---------------------------------------------------------------------------
# Orchestration


def _occurrence_roles(bgp: Bgp, node: PatternNode) -> list[tuple[str, frozenset[FxPredicate]]]:
    """The ground roles each occurrence of ``node`` admits on its own."""
    out = []
    for t in bgp:
        if t.subject == node:
            out.append(("a subject", frozenset({P.CONTAINER})))
        if t.object == node:
            allowed = set(_BY_TOP[P.OBJECT])
            if t.predicate.is_iri:
                if is_rdf_type(t.predicate):
                    allowed -= {P.CONTAINER, P.VALUE}
                    where = f"the object of {t.predicate}"
                else:
                    allowed -= {P.TYPE, P.FX_ROOT}
                    where = "the object of a slot"
                out.append((where, frozenset(allowed)))
    return out


def _role_clash(bgp: Bgp) -> str | None:
    for node, options in candidate_sets(bgp):
        if options:
            continue
        parts = []
        for where, roles in dict.fromkeys(_occurrence_roles(bgp, node)):
            names = " or ".join(g.value for g in CANONICAL_ORDER if g in roles)
            parts.append(f"as {where} it must be {names}")
        return f"{node} has no admissible role: " + "; ".join(parts)
    return None


def explain_unsatisfiable(bgp: Bgp) -> str:
    """A short reason for an unsatisfiable BGP, for reports and the CLI."""
    if has_unsupported_join(bgp):
        return "unsupported join: a node is used both as property and as subject/object"
    if has_cycle(bgp):
        return "cycle: subject/object joins form a directed cycle"
    clash = _role_clash(bgp)
    if clash is not None:
        return clash
    outcome, _ = refine(initial_annotation(bgp), bgp)
    if not outcome:
        return outcome.message
    return "no ground annotation passes the rules"


def is_satisfiable(
    bgp: Bgp,
    algorithm: Algorithm = Algorithm.BOTTOM_UP,
    mode: Mode = Mode.FIRST,
    timeout: float | None = DEFAULT_TIMEOUT,
    closure: bool = True,
) -> SatReport:
    """Gates, then the chosen algorithm, then the merge closure.

    The closure only touches the verdict: a satisfiable report whose
    solutions all fail :func:`merge_closure` becomes unsatisfiable.  In
    complete mode the solution list is left as the rules produced it.
    """
    start = time.monotonic()
    if not bgp.triples:
        return SatReport(
            Verdict.SATISFIABLE, [Annotation()], 0, time.monotonic() - start, algorithm, mode,
            "empty pattern",
        )
    for gate, reason in (
        (has_unsupported_join, "unsupported join"),
        (has_cycle, "cycle"),
    ):
        if gate(bgp):
            return SatReport(
                Verdict.UNSATISFIABLE, [], 0, time.monotonic() - start, algorithm, mode, reason
            )
    run = annotate_topdown if algorithm is Algorithm.TOP_DOWN else generate_bottomup
    report = run(bgp, mode is Mode.ALL, timeout)
    if closure and report.verdict is Verdict.SATISFIABLE:
        report = _apply_closure(bgp, report, run, timeout, start)
    report.elapsed = time.monotonic() - start
    if report.verdict is Verdict.UNSATISFIABLE and not report.reason:
        report.reason = explain_unsatisfiable(bgp)
    return report


_Runner = Callable[[Bgp, bool, "float | None"], SatReport]


def _apply_closure(
    bgp: Bgp, report: SatReport, run: _Runner, timeout: float | None, start: float
) -> SatReport:
    if any(merge_closure(bgp, s) for s in report.solutions):
        return report
    full = report
    if report.mode is Mode.FIRST:
        # the first solution is not realisable; look at all of them
        remaining = None if timeout is None else max(0.0, timeout - (time.monotonic() - start))
        full = run(bgp, True, remaining)
        if full.verdict is Verdict.TIMEOUT:
            full.mode = Mode.FIRST
            return full
        realisable = [s for s in full.solutions if merge_closure(bgp, s)]
        if realisable:
            return SatReport(
                Verdict.SATISFIABLE, realisable[:1], full.tested, 0.0, report.algorithm, Mode.FIRST
            )
    outcome = merge_closure(bgp, full.solutions[0])
    return SatReport(
        Verdict.UNSATISFIABLE, [], full.tested, 0.0, report.algorithm, report.mode,
        f"{outcome.rule}: {outcome.message}",
    )


def solution_set(solutions: Sequence[Annotation]) -> frozenset[Annotation]:
    return frozenset(solutions)


def is_ground_solution(annotation: Annotation, bgp: Bgp) -> bool:
    return all(p in GROUND for p in annotation.values()) and bool(check(annotation, bgp))
