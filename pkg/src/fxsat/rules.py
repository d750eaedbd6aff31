"""Inference rules R1-R19 and the ``check`` consistency function.

Each rule looks at one focus node and the current annotation and may imply a
predicate for some node (the focus itself, or the property of a triple the
focus is object of) or signal that no solution exists.  ``check`` refines
the annotation with implied predicates until nothing changes, so a fact
derived by one rule feeds the bodies of the others.

:class:`GroundChecker` is a precompiled equivalent of ``check`` restricted to
ground annotations; the bottom-up enumeration relies on it for speed and the
test-suite holds it to the same verdicts as the rule-by-rule route.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .structure import nodes_path, satisfies_unique_path_to_root, walk_backwards
from .terms import (
    Bgp,
    FxPredicate,
    PatternNode,
    TriplePattern,
    conflicts,
    is_a,
    is_fx_root,
    is_membership,
    is_rdf_type,
    match_nodes,
)

P = FxPredicate


class _NoSolution:
    _instance: _NoSolution | None = None

    def __new__(cls) -> _NoSolution:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NS"


NS = _NoSolution()

Head = FxPredicate | _NoSolution
Finding = tuple[PatternNode, Head]


class MissingEntryError(KeyError):
    """Raised when an annotation lacks an entry for some BGP node."""


@dataclass(frozen=True, slots=True)
class CheckOutcome:
    consistent: bool
    rule: str | None = None
    node: PatternNode | None = None
    message: str = ""

    def __post_init__(self) -> None:
        if self.consistent == (self.rule is not None):
            raise ValueError("a rule id is present exactly when the outcome is inconsistent")

    def __bool__(self) -> bool:
        return self.consistent


OK = CheckOutcome(True)


class BgpContext:
    """Positional indexes over a BGP, computed once and shared by all rules."""

    def __init__(self, bgp: Bgp) -> None:
        self.bgp = bgp
        self.nodes = bgp.nodes()
        self.subjects = {t.subject for t in bgp}
        self.predicates = {t.predicate for t in bgp}
        self.objects = {t.object for t in bgp}
        self.as_object: dict[PatternNode, list[TriplePattern]] = {}
        self.as_subject: dict[PatternNode, list[TriplePattern]] = {}
        for t in bgp:
            self.as_object.setdefault(t.object, []).append(t)
            self.as_subject.setdefault(t.subject, []).append(t)

    @cached_property
    def distinct_incoming(self) -> dict[PatternNode, int]:
        return {
            node: len({(t.subject, t.predicate) for t in triples})
            for node, triples in self.as_object.items()
        }


@dataclass(frozen=True)
class Rule:
    id: str
    text: str
    fire: Callable[[BgpContext, PatternNode, Mapping[PatternNode, FxPredicate]], Iterable[Finding]]


def _holds(m: Mapping[PatternNode, FxPredicate], node: PatternNode, pred: FxPredicate) -> bool:
    current = m.get(node)
    return current is not None and is_a(current, pred)


def _r1(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n in ctx.subjects:
        yield n, P.CONTAINER


def _r2(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if is_fx_root(n):
        yield n, P.FX_ROOT


def _r3(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if is_rdf_type(n):
        yield n, P.TYPE_PROPERTY


def _r4(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n in ctx.predicates and not n.is_var and not is_rdf_type(n):
        yield n, P.SLOT


def _r5(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n.is_var or is_fx_root(n):
        return
    if any(is_rdf_type(t.predicate) for t in ctx.as_object.get(n, ())):
        yield n, P.TYPE


def _r6(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if _holds(m, n, P.FX_ROOT):
        for t in ctx.as_object.get(n, ()):
            yield t.predicate, P.TYPE_PROPERTY


def _r7(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if _holds(m, n, P.TYPE):
        for t in ctx.as_object.get(n, ()):
            yield t.predicate, P.TYPE_PROPERTY


def _r8(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n in ctx.predicates and is_membership(n):
        yield n, P.SLOT_NUMBER


def _r9(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n in ctx.predicates and n.is_iri and not is_rdf_type(n) and not is_membership(n):
        yield n, P.SLOT_STRING


def _r10(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n.is_literal:
        yield n, P.VALUE


def _r11(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n.is_iri and any(_holds(m, t.predicate, P.SLOT) for t in ctx.as_object.get(n, ())):
        yield n, P.CONTAINER


def _r12(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if _holds(m, n, P.VALUE):
        for t in ctx.as_object.get(n, ()):
            yield t.predicate, P.SLOT


def _r13(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n.is_iri and not is_fx_root(n) and n in ctx.objects and _holds(m, n, P.FX_ROOT):
        yield n, NS


def _r14(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if is_fx_root(n) and _holds(m, n, P.TYPE):
        yield n, NS


def _r15(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if n.is_iri and n in ctx.objects and _holds(m, n, P.VALUE):
        yield n, NS


def _r16(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if _holds(m, n, P.CONTAINER):
        for t in ctx.as_object.get(n, ()):
            yield t.predicate, P.SLOT


def _r17(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    triples = ctx.as_subject.get(n, ())
    for i, a in enumerate(triples):
        if not _holds(m, a.predicate, P.SLOT):
            continue
        for b in triples[i + 1 :]:
            if b.predicate == a.predicate and not match_nodes(a.object, b.object):
                yield n, NS
                return


def _r18(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if _holds(m, n, P.FX_ROOT):
        if any(t.subject in ctx.objects for t in ctx.as_object.get(n, ())):
            yield n, NS


def _r19(ctx: BgpContext, n: PatternNode, m: Mapping) -> Iterator[Finding]:
    if ctx.distinct_incoming.get(n, 0) < 2:
        return
    if _holds(m, n, P.CONTAINER) or _holds(m, n, P.FX_ROOT):
        if not satisfies_unique_path_to_root(ctx.bgp, m, n):
            yield n, NS


RULES: tuple[Rule, ...] = (
    Rule("R1", "a subject is a Container", _r1),
    Rule("R2", "the IRI fx:root is FXRoot", _r2),
    Rule("R3", "the IRI rdf:type is TypeProperty", _r3),
    Rule("R4", "a constant property other than rdf:type is a Slot", _r4),
    Rule("R5", "a constant object of rdf:type other than fx:root is a Type", _r5),
    Rule("R6", "the property of an FXRoot object is TypeProperty", _r6),
    Rule("R7", "the property of a Type object is TypeProperty", _r7),
    Rule("R8", "a container membership property is SlotNumber", _r8),
    Rule("R9", "any other constant property is SlotString", _r9),
    Rule("R10", "a literal is a Value", _r10),
    Rule("R11", "an IRI object of a Slot is a Container", _r11),
    Rule("R12", "the property of a Value object is a Slot", _r12),
    Rule("R13", "only fx:root may be FXRoot", _r13),
    Rule("R14", "fx:root cannot be a Type", _r14),
    Rule("R15", "an IRI cannot be a Value", _r15),
    Rule("R16", "the property of a Container object is a Slot", _r16),
    Rule("R17", "one subject and one Slot property need matching objects", _r17),
    Rule("R18", "an FXRoot object cannot sit on a subject/object join", _r18),
    Rule("R19", "paths into a Container or FXRoot node must coincide", _r19),
)

RULES_BY_ID = {r.id: r for r in RULES}

_POSITION_TOPS = (P.SUBJECT, P.PROPERTY, P.OBJECT)


def _position_violation(
    ctx: BgpContext, m: Mapping[PatternNode, FxPredicate]
) -> CheckOutcome | None:
    """Guards against annotations that contradict a node's syntactic position.

    Annotations produced by either algorithm never trip this; it keeps
    ``check`` meaningful for hand-written maps.
    """
    for node in ctx.nodes:
        current = m[node]
        for top, members in zip(_POSITION_TOPS, (ctx.subjects, ctx.predicates, ctx.objects)):
            if node in members and conflicts(current, top):
                return CheckOutcome(
                    False, "POS", node, f"{node} is annotated {current} but occurs as {top}"
                )
    return None


def _apply(
    ctx: BgpContext, node: PatternNode, m: dict[PatternNode, FxPredicate]
) -> tuple[CheckOutcome | None, bool]:
    """Runs every rule on ``node``; refines ``m`` in place.

    Returns the first inconsistency (or None) and whether ``m`` changed.
    """
    changed = False
    for rule in RULES:
        for target, head in rule.fire(ctx, node, m):
            if head is NS:
                return CheckOutcome(False, rule.id, target, f"{rule.id}: {rule.text} ({target})"), changed
            assert isinstance(head, FxPredicate)
            current = m.get(target)
            if current is None:
                raise MissingEntryError(target)
            if conflicts(current, head):
                return (
                    CheckOutcome(
                        False,
                        rule.id,
                        target,
                        f"{rule.id}: {rule.text}; {target} is {current}, implied {head}",
                    ),
                    changed,
                )
            if head is not current and is_a(head, current):
                m[target] = head
                changed = True
    return None, changed


def _require_complete(ctx: BgpContext, annotation: Mapping[PatternNode, FxPredicate]) -> None:
    for node in ctx.nodes:
        if node not in annotation:
            raise MissingEntryError(node)


def apply_rules_to_node(
    bgp: Bgp,
    node: PatternNode,
    annotation: Mapping[PatternNode, FxPredicate],
    context: BgpContext | None = None,
) -> CheckOutcome:
    """Evaluates all rules with ``node`` as focus, to a fixpoint."""
    ctx = context or BgpContext(bgp)
    if node not in annotation:
        raise MissingEntryError(node)
    m = dict(annotation)
    while True:
        outcome, changed = _apply(ctx, node, m)
        if outcome is not None:
            return outcome
        if not changed:
            return OK


def refine(
    annotation: Mapping[PatternNode, FxPredicate], bgp: Bgp, context: BgpContext | None = None
) -> tuple[CheckOutcome, dict[PatternNode, FxPredicate]]:
    """Runs ``check`` and also returns the refined annotation."""
    ctx = context or BgpContext(bgp)
    _require_complete(ctx, annotation)
    m = dict(annotation)
    bad = _position_violation(ctx, m)
    if bad is not None:
        return bad, m
    while True:
        any_change = False
        for node in ctx.nodes:
            outcome, changed = _apply(ctx, node, m)
            if outcome is not None:
                return outcome, m
            any_change |= changed
        if not any_change:
            return OK, m


def check(
    annotation: Mapping[PatternNode, FxPredicate], bgp: Bgp, context: BgpContext | None = None
) -> CheckOutcome:
    return refine(annotation, bgp, context)[0]


_SLOTS = frozenset({P.SLOT_NUMBER, P.SLOT_STRING})
_GROUND_ORDER = (
    P.CONTAINER,
    P.TYPE_PROPERTY,
    P.SLOT_STRING,
    P.SLOT_NUMBER,
    P.TYPE,
    P.VALUE,
    P.FX_ROOT,
)


class GroundChecker:
    """``check`` specialised to one BGP and to ground annotations.

    Rules whose bodies only look at syntax are folded into a per-node set of
    admissible predicates; the remaining rules become short loops over
    precomputed triples.  ``explain`` defers to the rule-by-rule route for a
    diagnostic.
    """

    def __init__(self, bgp: Bgp, context: BgpContext | None = None) -> None:
        ctx = context or BgpContext(bgp)
        self.ctx = ctx
        self.bgp = bgp
        self.allowed: dict[PatternNode, frozenset[FxPredicate]] = {}
        for node in ctx.nodes:
            ok = set()
            for g in _GROUND_ORDER:
                single = {n: g for n in ctx.nodes}
                if _position_violation_single(ctx, node, g):
                    continue
                if _static_ok(ctx, node, g, single):
                    ok.add(g)
            self.allowed[node] = frozenset(ok)
        # (predicate, object, object-is-iri) per triple
        self.triples = [(t.predicate, t.object, t.object.is_iri) for t in bgp]
        self.r17 = [
            a.predicate
            for s, triples in ctx.as_subject.items()
            for i, a in enumerate(triples)
            for b in triples[i + 1 :]
            if a.predicate == b.predicate and not match_nodes(a.object, b.object)
        ]
        self.r18 = [
            n for n, triples in ctx.as_object.items() if any(t.subject in ctx.objects for t in triples)
        ]
        self.r19: list[tuple[PatternNode, bool, list[PatternNode]]] = []
        for n, count in ctx.distinct_incoming.items():
            if count >= 2:
                static_fail, probes = _path_plan(bgp, ctx, n)
                self.r19.append((n, static_fail, probes))
        index = {n: i for i, n in enumerate(ctx.nodes)}
        self._allowed_idx = [(index[n], a) for n, a in self.allowed.items()]
        self._triples_idx = [(index[p], index[o], o_iri) for p, o, o_iri in self.triples]
        self._r17_idx = [index[p] for p in self.r17]
        self._r18_idx = [index[o] for o in self.r18]
        self._r19_idx = [
            (index[n], static_fail, [index[r] for r in probes])
            for n, static_fail, probes in self.r19
        ]

    def __call__(self, m: Mapping[PatternNode, FxPredicate]) -> bool:
        for node, pred in m.items():
            if pred not in self.allowed[node]:
                return False
        return self.check_row(tuple(m[n] for n in self.ctx.nodes), check_allowed=False)

    def check_row(self, row: Sequence[FxPredicate], check_allowed: bool = True) -> bool:
        """Verdict for predicates listed in BGP node order."""
        if check_allowed:
            for i, allowed in self._allowed_idx:
                if row[i] not in allowed:
                    return False
        TP = P.TYPE_PROPERTY
        for pi, oi, o_iri in self._triples_idx:
            op = row[oi]
            pp = row[pi]
            if op is P.FX_ROOT or op is P.TYPE:
                if pp is not TP:
                    return False
            elif pp not in _SLOTS:
                # Value and Container objects need a Slot property
                return False
            elif o_iri and op is not P.CONTAINER:
                return False
        for pi in self._r17_idx:
            if row[pi] in _SLOTS:
                return False
        for oi in self._r18_idx:
            if row[oi] is P.FX_ROOT:
                return False
        for ni, static_fail, probes in self._r19_idx:
            if row[ni] is P.CONTAINER or row[ni] is P.FX_ROOT:
                if static_fail:
                    return False
                for ri in probes:
                    if row[ri] is P.FX_ROOT:
                        return False
        return True

    def restrict_to(self, candidates: Sequence[Iterable[FxPredicate]]) -> None:
        """Skips the admissibility test for nodes whose candidates all pass it."""
        self._allowed_idx = [
            (i, self.allowed[n])
            for i, (n, options) in enumerate(zip(self.ctx.nodes, candidates))
            if not set(options) <= self.allowed[n]
        ]

    def explain(self, m: Mapping[PatternNode, FxPredicate]) -> CheckOutcome:
        return check(m, self.bgp, self.ctx)


def _position_violation_single(ctx: BgpContext, node: PatternNode, g: FxPredicate) -> bool:
    for top, members in zip(_POSITION_TOPS, (ctx.subjects, ctx.predicates, ctx.objects)):
        if node in members and conflicts(g, top):
            return True
    return False


_STATIC_RULES = ("R1", "R2", "R3", "R4", "R5", "R8", "R9", "R10", "R13", "R14", "R15")


def _static_ok(
    ctx: BgpContext, node: PatternNode, g: FxPredicate, m: Mapping[PatternNode, FxPredicate]
) -> bool:
    """True when no syntax-only rule rejects predicate ``g`` on ``node``.

    These rules read the annotation of the focus node alone, so a map with
    every node set to ``g`` is enough to evaluate them.
    """
    for rule_id in _STATIC_RULES:
        for target, head in RULES_BY_ID[rule_id].fire(ctx, node, m):
            if head is NS:
                return False
            assert target == node and isinstance(head, FxPredicate)
            if conflicts(g, head):
                return False
    return True


def _path_plan(bgp: Bgp, ctx: BgpContext, node: PatternNode) -> tuple[bool, list[PatternNode]]:
    """Splits the unique-path test for ``node`` into its annotation-free part
    and the list of nodes whose FXRoot annotation would fail it."""
    incoming = ctx.as_object[node]
    static_fail = False
    probes: list[PatternNode] = []
    for i, left in enumerate(incoming):
        for right in incoming[i + 1 :]:
            if left.subject == right.subject and left.predicate == right.predicate:
                continue
            lpath = nodes_path(walk_backwards([left], bgp))
            rpath = nodes_path(walk_backwards([right], bgp))
            if len(lpath) == len(rpath):
                if not all(match_nodes(a, b) for a, b in zip(lpath, rpath)):
                    static_fail = True
            else:
                end = (lpath if len(lpath) < len(rpath) else rpath)[-1]
                probes.extend(t.object for t in ctx.as_subject.get(end, ()))
    return static_fail, probes
