"""Merge closure: an extra verdict stage on top of the rules.

A ground annotation can pass every rule and still describe no Façade-X
graph, because the model forces some distinct BGP nodes to denote the same
term and the rules only compare nodes pairwise.  Two facts drive the
merging:

* a slot is identified by its container and key and holds one thing, so
  two slot triples with the same subject and property have the same object;
* a container has a single incoming slot, so two slot triples pointing at
  the same container share subject and property.

After the merges reach a fixpoint, each group must agree on its role,
contain at most one constant, the root group must not be held, and the
grouped containment edges must stay acyclic.
"""

from __future__ import annotations

from collections.abc import Mapping

from .rules import CheckOutcome, OK
from .terms import Bgp, FxPredicate, PatternNode

P = FxPredicate
RULE_ID = "MERGE"
_SLOT = {P.SLOT_STRING, P.SLOT_NUMBER}
_SAME_TERM = {P.FX_ROOT: "fx:root", P.TYPE_PROPERTY: "rdf:type"}


def _fail(node: PatternNode, message: str) -> CheckOutcome:
    return CheckOutcome(False, RULE_ID, node, message)


def merge_closure(bgp: Bgp, annotation: Mapping[PatternNode, FxPredicate]) -> CheckOutcome:
    label: dict[PatternNode, int] = {n: i for i, n in enumerate(bgp.nodes())}

    def merge(a: PatternNode, b: PatternNode) -> bool:
        la, lb = label[a], label[b]
        if la == lb:
            return False
        keep, drop = min(la, lb), max(la, lb)
        for n, lab in label.items():
            if lab == drop:
                label[n] = keep
        return True

    # every fx:root object is one IRI, every rdf:type property another, and
    # every subject typed as root is the one root container
    for role in _SAME_TERM:
        same = [n for n in label if annotation[n] is role]
        for n in same[1:]:
            merge(same[0], n)
    roots = [t.subject for t in bgp if annotation[t.object] is P.FX_ROOT]
    for n in roots[1:]:
        merge(roots[0], n)

    slots = [t for t in bgp if annotation[t.predicate] in _SLOT]
    changed = True
    while changed:
        changed = False
        for a in slots:
            for b in slots:
                if a is b:
                    continue
                if label[a.subject] == label[b.subject] and label[a.predicate] == label[b.predicate]:
                    changed |= merge(a.object, b.object)
                if label[a.object] == label[b.object] and annotation[a.object] is P.CONTAINER:
                    changed |= merge(a.subject, b.subject)
                    changed |= merge(a.predicate, b.predicate)

    groups: dict[int, list[PatternNode]] = {}
    for n, lab in label.items():
        groups.setdefault(lab, []).append(n)
    for members in groups.values():
        roles = {annotation[n] for n in members}
        if len(roles) > 1:
            names = "/".join(sorted(r.value for r in roles))
            return _fail(members[0], f"{members[0]} is forced to coincide with nodes of role {names}")
        constants = {n for n in members if not n.is_var}
        if len(constants) > 1:
            return _fail(members[0], f"distinct constants forced to coincide: {sorted(map(str, constants))}")

    if roots:
        root_label = label[roots[0]]
        for t in slots:
            if label[t.object] == root_label:
                return _fail(t.object, f"the root container {t.object} is held by a slot")

    parent: dict[int, int] = {}
    for t in slots:
        if annotation[t.object] is P.CONTAINER:
            parent[label[t.object]] = label[t.subject]
    for start in parent:
        seen = {start}
        cur = start
        while cur in parent:
            cur = parent[cur]
            if cur in seen:
                node = next(n for n, lab in label.items() if lab == cur)
                return _fail(node, f"forced merges close a containment cycle through {node}")
            seen.add(cur)
    return OK
